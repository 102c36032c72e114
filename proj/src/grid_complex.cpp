#include "deepho/grid_complex.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <numeric>

#include <json.hpp>

#include "deepho/errors.hpp"

namespace deepho {

int supNorm(const Point& p) { return std::max({std::abs(p[0]), std::abs(p[1]), std::abs(p[2])}); }

namespace {

bool tupleLess(std::span<const int> a, std::span<const int> b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

std::shared_ptr<const SimplicialComplex> SimplicialComplex::build(int ambientDim, std::vector<Point> points,
                                                                  std::vector<std::vector<int>> simplices,
                                                                  bool addFaces) {
  require(ambientDim >= 1 && ambientDim <= 3, "ambient dimension must be 1, 2 or 3");
  auto X = std::make_shared<SimplicialComplex>();
  X->ambientDim_ = ambientDim;

  const int nv = static_cast<int>(points.size());
  std::vector<int> order(nv);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return points[a] < points[b]; });
  std::vector<int> newId(nv);
  X->points_.resize(nv);
  for (int k = 0; k < nv; ++k) {
    newId[order[k]] = k;
    X->points_[k] = points[order[k]];
    require(k == 0 || X->points_[k - 1] != X->points_[k], "duplicate vertex coordinates");
    for (int c = ambientDim; c < 3; ++c) require(X->points_[k][c] == 0, "coordinate beyond ambient dimension");
  }

  int top = nv > 0 ? 0 : -1;
  for (auto& s : simplices) {
    require(!s.empty(), "empty simplex");
    for (auto& v : s) {
      require(v >= 0 && v < nv, "simplex vertex out of range");
      v = newId[v];
    }
    std::sort(s.begin(), s.end());
    require(std::adjacent_find(s.begin(), s.end()) == s.end(), "simplex with repeated vertex");
    top = std::max(top, static_cast<int>(s.size()) - 1);
  }
  require(top <= ambientDim, "simplex dimension exceeds ambient dimension");

  std::vector<std::vector<int>> raw(top + 1);
  for (int v = 0; v < nv; ++v) raw[0].push_back(v);
  for (const auto& s : simplices) {
    const int k = static_cast<int>(s.size());
    if (!addFaces) {
      if (k > 1) raw[k - 1].insert(raw[k - 1].end(), s.begin(), s.end());
      continue;
    }
    for (unsigned mask = 1; mask < (1u << k); ++mask) {
      int d = std::popcount(mask) - 1;
      if (d == 0) continue;
      for (int i = 0; i < k; ++i)
        if (mask & (1u << i)) raw[d].push_back(s[i]);
    }
  }

  X->verts_.resize(top + 1);
  for (int d = 0; d <= top; ++d) {
    const int w = d + 1;
    const std::size_t cnt = raw[d].size() / w;
    std::vector<int> idx(cnt);
    std::iota(idx.begin(), idx.end(), 0);
    const auto& r = raw[d];
    auto at = [&](int i) { return std::span<const int>(r.data() + static_cast<std::size_t>(i) * w, w); };
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return tupleLess(at(a), at(b)); });
    auto& out = X->verts_[d];
    out.reserve(r.size());
    for (std::size_t k = 0; k < cnt; ++k) {
      auto t = at(idx[k]);
      if (k > 0 && std::equal(t.begin(), t.end(), at(idx[k - 1]).begin())) continue;
      out.insert(out.end(), t.begin(), t.end());
    }
    raw[d].clear();
    raw[d].shrink_to_fit();
  }

  X->facets_.resize(top + 1);
  X->cofaces_.resize(top + 1);
  X->cofaceOffsets_.resize(top + 1);
  std::vector<int> tmp;
  for (int d = 1; d <= top; ++d) {
    const int cnt = X->count(d);
    auto& f = X->facets_[d];
    f.resize(static_cast<std::size_t>(cnt) * (d + 1));
    for (int id = 0; id < cnt; ++id) {
      auto vs = X->vertices(d, id);
      for (int i = 0; i <= d; ++i) {
        tmp.clear();
        for (int j = 0; j <= d; ++j)
          if (j != i) tmp.push_back(vs[j]);
        int fid = X->find(d - 1, tmp);
        require(fid >= 0, "simplex list is not closed under faces");
        f[static_cast<std::size_t>(id) * (d + 1) + i] = fid;
      }
    }
  }
  for (int d = 0; d <= top; ++d) {
    auto& off = X->cofaceOffsets_[d];
    off.assign(X->count(d) + 1, 0);
    if (d == top) continue;
    const auto& f = X->facets_[d + 1];
    for (int x : f) ++off[x + 1];
    for (std::size_t i = 1; i < off.size(); ++i) off[i] += off[i - 1];
    auto& co = X->cofaces_[d];
    co.resize(f.size());
    std::vector<int> pos(off.begin(), off.end() - 1);
    const int w = d + 2;
    for (std::size_t k = 0; k < f.size(); ++k) co[pos[f[k]]++] = static_cast<int>(k / w);
  }
  return X;
}

int SimplicialComplex::count(int d) const {
  if (d < 0 || d > dim()) return 0;
  return static_cast<int>(verts_[d].size() / (d + 1));
}

std::size_t SimplicialComplex::totalSimplices() const {
  std::size_t n = 0;
  for (int d = 0; d <= dim(); ++d) n += count(d);
  return n;
}

int SimplicialComplex::find(int d, std::span<const int> s) const {
  if (d < 0 || d > dim() || static_cast<int>(s.size()) != d + 1) return -1;
  int lo = 0, hi = count(d);
  while (lo < hi) {
    int mid = (lo + hi) / 2;
    if (tupleLess(vertices(d, mid), s)) lo = mid + 1; else hi = mid;
  }
  if (lo < count(d)) {
    auto t = vertices(d, lo);
    if (std::equal(t.begin(), t.end(), s.begin())) return lo;
  }
  return -1;
}

int SimplicialComplex::findVertex(const Point& p) const {
  auto it = std::lower_bound(points_.begin(), points_.end(), p);
  if (it != points_.end() && *it == p) return static_cast<int>(it - points_.begin());
  return -1;
}

std::string SimplicialComplex::toJson(int windowRadius) const {
  nlohmann::json j;
  j["n"] = ambientDim_;
  if (windowRadius >= 0) j["S"] = windowRadius;
  auto& vs = j["vertices"] = nlohmann::json::array();
  for (const auto& p : points_) vs.push_back(std::vector<int>(p.begin(), p.begin() + ambientDim_));
  auto& sx = j["simplices"] = nlohmann::json::object();
  for (int d = 0; d <= dim(); ++d) {
    auto arr = nlohmann::json::array();
    for (int id = 0; id < count(d); ++id) {
      auto t = vertices(d, id);
      arr.push_back(std::vector<int>(t.begin(), t.end()));
    }
    sx[std::to_string(d)] = std::move(arr);
  }
  return j.dump();
}

std::shared_ptr<const SimplicialComplex> SimplicialComplex::fromJson(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw ContractViolation(std::string("complex JSON does not parse: ") + e.what());
  }
  require(j.contains("n") && j.contains("vertices") && j.contains("simplices"), "complex JSON misses a field");
  int n = j["n"].get<int>();
  std::vector<Point> pts;
  for (const auto& v : j["vertices"]) {
    Point p{0, 0, 0};
    require(static_cast<int>(v.size()) == n, "vertex has wrong number of coordinates");
    for (int c = 0; c < n; ++c) p[c] = v[c].get<int>();
    pts.push_back(p);
  }
  std::vector<std::vector<int>> sims;
  for (auto it = j["simplices"].begin(); it != j["simplices"].end(); ++it)
    for (const auto& s : it.value()) sims.push_back(s.get<std::vector<int>>());
  return build(n, std::move(pts), std::move(sims), true);
}

// ---------------------------------------------------------------------------
// Subcomplex

Subcomplex::Subcomplex(ComplexPtr parent, bool full) : parent_(std::move(parent)) {
  require(parent_ != nullptr, "subcomplex needs a parent complex");
  mask_.resize(parent_->dim() + 1);
  for (int d = 0; d <= parent_->dim(); ++d) mask_[d].assign(parent_->count(d), full ? 1 : 0);
}

Subcomplex Subcomplex::closureOf(ComplexPtr parent, const std::vector<std::pair<int, int>>& simplices) {
  Subcomplex s(std::move(parent));
  for (auto [d, id] : simplices) {
    require(d >= 0 && d <= s.parent_->dim() && id >= 0 && id < s.parent_->count(d), "simplex out of range");
    s.mask_[d][id] = 1;
  }
  s.close();
  return s;
}

Subcomplex Subcomplex::spannedBy(ComplexPtr parent, const std::vector<char>& vertexMask) {
  Subcomplex s(std::move(parent));
  const auto& X = *s.parent_;
  require(static_cast<int>(vertexMask.size()) == X.count(0), "vertex mask has wrong size");
  for (int d = 0; d <= X.dim(); ++d)
    for (int id = 0; id < X.count(d); ++id) {
      bool all = true;
      for (int v : X.vertices(d, id)) all = all && vertexMask[v];
      s.mask_[d][id] = all;
    }
  return s;
}

void Subcomplex::close() {
  const auto& X = *parent_;
  for (int d = X.dim(); d >= 1; --d)
    for (int id = 0; id < X.count(d); ++id)
      if (mask_[d][id])
        for (int f : X.facets(d, id)) mask_[d - 1][f] = 1;
}

bool Subcomplex::isClosed() const {
  const auto& X = *parent_;
  for (int d = X.dim(); d >= 1; --d)
    for (int id = 0; id < X.count(d); ++id)
      if (mask_[d][id])
        for (int f : X.facets(d, id))
          if (!mask_[d - 1][f]) return false;
  return true;
}

int Subcomplex::count(int d) const {
  if (d < 0 || d >= static_cast<int>(mask_.size())) return 0;
  return static_cast<int>(std::count(mask_[d].begin(), mask_[d].end(), 1));
}

std::size_t Subcomplex::size() const {
  std::size_t n = 0;
  for (std::size_t d = 0; d < mask_.size(); ++d) n += count(static_cast<int>(d));
  return n;
}

int Subcomplex::dim() const {
  for (int d = static_cast<int>(mask_.size()) - 1; d >= 0; --d)
    if (count(d) > 0) return d;
  return -1;
}

std::vector<int> Subcomplex::simplices(int d) const {
  std::vector<int> out;
  if (d < 0 || d >= static_cast<int>(mask_.size())) return out;
  for (int id = 0; id < static_cast<int>(mask_[d].size()); ++id)
    if (mask_[d][id]) out.push_back(id);
  return out;
}

Subcomplex Subcomplex::unite(const Subcomplex& o) const {
  require(parent_ == o.parent_, "subcomplexes of different complexes");
  Subcomplex s = *this;
  for (std::size_t d = 0; d < mask_.size(); ++d)
    for (std::size_t i = 0; i < mask_[d].size(); ++i) s.mask_[d][i] = mask_[d][i] | o.mask_[d][i];
  return s;
}

Subcomplex Subcomplex::intersect(const Subcomplex& o) const {
  require(parent_ == o.parent_, "subcomplexes of different complexes");
  Subcomplex s = *this;
  for (std::size_t d = 0; d < mask_.size(); ++d)
    for (std::size_t i = 0; i < mask_[d].size(); ++i) s.mask_[d][i] = mask_[d][i] & o.mask_[d][i];
  return s;
}

bool Subcomplex::includedIn(const Subcomplex& o) const {
  require(parent_ == o.parent_, "subcomplexes of different complexes");
  for (std::size_t d = 0; d < mask_.size(); ++d)
    for (std::size_t i = 0; i < mask_[d].size(); ++i)
      if (mask_[d][i] && !o.mask_[d][i]) return false;
  return true;
}

bool Subcomplex::operator==(const Subcomplex& o) const { return parent_ == o.parent_ && mask_ == o.mask_; }

std::string Subcomplex::toJson() const {
  const auto& X = *parent_;
  std::vector<int> local(X.count(0), -1);
  nlohmann::json j;
  j["n"] = X.ambientDim();
  auto& vs = j["vertices"] = nlohmann::json::array();
  int next = 0;
  for (int v : vertexIds()) {
    local[v] = next++;
    const auto& p = X.point(v);
    vs.push_back(std::vector<int>(p.begin(), p.begin() + X.ambientDim()));
  }
  auto& sx = j["simplices"] = nlohmann::json::object();
  for (int d = 0; d < static_cast<int>(mask_.size()); ++d) {
    auto arr = nlohmann::json::array();
    for (int id : simplices(d)) {
      std::vector<int> t;
      for (int v : X.vertices(d, id)) t.push_back(local[v]);
      arr.push_back(t);
    }
    sx[std::to_string(d)] = std::move(arr);
  }
  return j.dump();
}

// ---------------------------------------------------------------------------
// Neighborhoods and complements

Subcomplex starNeighborhood(const Subcomplex& A, const Subcomplex& K, int R) {
  require(R >= 0, "neighborhood radius must be non-negative");
  require(K.includedIn(A), "star neighborhood of a set outside the ambient subcomplex");
  const auto& X = K.complex();
  Subcomplex cur = K;
  for (int r = 0; r < R; ++r) {
    const auto& vmask = cur.mask(0);
    Subcomplex next(K.parent());
    for (int d = 0; d <= X.dim(); ++d)
      for (int id = 0; id < X.count(d); ++id) {
        if (!A.contains(d, id)) continue;
        for (int v : X.vertices(d, id))
          if (vmask[v]) {
            next.insert(d, id);
            break;
          }
      }
    next.close();
    cur = std::move(next);
  }
  return cur;
}

Subcomplex starNeighborhood(const Subcomplex& K, int R) {
  return starNeighborhood(Subcomplex(K.parent(), true), K, R);
}

Subcomplex complementClosure(const Subcomplex& A, const Subcomplex& L) {
  require(A.parent() == L.parent(), "subcomplexes of different complexes");
  const auto& X = A.complex();
  Subcomplex out(A.parent());
  for (int d = 0; d <= X.dim(); ++d)
    for (int id = 0; id < X.count(d); ++id)
      if (A.contains(d, id) && !L.contains(d, id)) out.insert(d, id);
  out.close();
  return out;
}

Subcomplex complementClosure(const Subcomplex& L) { return complementClosure(Subcomplex(L.parent(), true), L); }

Subcomplex frontier(const Subcomplex& L) { return L.intersect(complementClosure(L)); }

Components connectedComponents(const Subcomplex& K) {
  const auto& X = K.complex();
  const int nv = X.count(0);
  std::vector<int> parent(nv);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> root = [&](int v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  };
  for (int e = 0; e < X.count(1); ++e) {
    if (!K.contains(1, e)) continue;
    auto vs = X.vertices(1, e);
    int a = root(vs[0]), b = root(vs[1]);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  Components c;
  c.label.assign(nv, -1);
  std::vector<int> rootLabel(nv, -1);
  for (int v = 0; v < nv; ++v) {
    if (!K.contains(0, v)) continue;
    int r = root(v);
    if (rootLabel[r] < 0) rootLabel[r] = c.count++;
    c.label[v] = rootLabel[r];
  }
  return c;
}

// ---------------------------------------------------------------------------
// Windows

namespace {

// Strictly increasing chains of non-empty coordinate subsets, grouped by length.
std::vector<std::vector<std::vector<unsigned>>> subsetChains(int n) {
  std::vector<std::vector<std::vector<unsigned>>> byLen(n + 1);
  std::vector<unsigned> cur;
  std::function<void(unsigned)> rec = [&](unsigned last) {
    byLen[cur.size()].push_back(cur);
    for (unsigned m = 1; m < (1u << n); ++m)
      if ((m & last) == last && m != last) {
        cur.push_back(m);
        rec(m);
        cur.pop_back();
      }
  };
  rec(0);
  return byLen;
}

}  // namespace

std::size_t windowSimplexEstimate(int n, int S) {
  auto chains = subsetChains(n);
  std::size_t total = 0;
  for (const auto& group : chains)
    for (const auto& ch : group) {
      int topSize = ch.empty() ? 0 : std::popcount(ch.back());
      std::size_t bases = 1;
      for (int i = 0; i < n; ++i) bases *= (i < topSize ? 2 * S : 2 * S + 1);
      total += bases;
    }
  return total;
}

int Window::vertexId(const Point& p) const {
  require(contains(p), "point outside the window");
  int id = 0;
  for (int i = 0; i < n; ++i) id = id * (2 * S + 1) + (p[i] + S);
  return id;
}

bool Window::contains(const Point& p) const {
  for (int i = 0; i < 3; ++i) {
    if (i < n && (p[i] < -S || p[i] > S)) return false;
    if (i >= n && p[i] != 0) return false;
  }
  return true;
}

Window buildWindow(int n, int S, std::size_t budget) {
  require(n >= 1 && n <= 3, "window dimension must be 1, 2 or 3");
  require(S >= 1, "window radius must be positive");
  std::size_t est = windowSimplexEstimate(n, S);
  if (est > budget)
    throw ResourceError("window of radius " + std::to_string(S) + " needs " + std::to_string(est) +
                        " simplices, budget is " + std::to_string(budget));
  const int side = 2 * S + 1;
  std::size_t nv = 1;
  for (int i = 0; i < n; ++i) nv *= side;
  std::vector<Point> pts;
  pts.reserve(nv);
  for (std::size_t k = 0; k < nv; ++k) {
    Point p{0, 0, 0};
    std::size_t r = k;
    for (int i = n - 1; i >= 0; --i) {
      p[i] = static_cast<int>(r % side) - S;
      r /= side;
    }
    pts.push_back(p);
  }
  Window W;
  W.n = n;
  W.S = S;
  auto idOf = [&](const Point& p) {
    int id = 0;
    for (int i = 0; i < n; ++i) id = id * side + (p[i] + S);
    return id;
  };
  auto chains = subsetChains(n);
  std::vector<std::vector<int>> sims;
  sims.reserve(est);
  for (std::size_t len = 1; len < chains.size(); ++len)
    for (const auto& ch : chains[len])
      for (std::size_t k = 0; k < nv; ++k) {
        const Point& base = pts[k];
        bool ok = true;
        for (int i = 0; i < n; ++i)
          if ((ch.back() >> i & 1u) && base[i] >= S) ok = false;
        if (!ok) continue;
        std::vector<int> s{static_cast<int>(k)};
        for (unsigned m : ch) {
          Point q = base;
          for (int i = 0; i < n; ++i)
            if (m >> i & 1u) ++q[i];
          s.push_back(idOf(q));
        }
        sims.push_back(std::move(s));
      }
  W.complex = SimplicialComplex::build(n, std::move(pts), std::move(sims), false);
  const auto& X = *W.complex;
  W.boundary = Subcomplex(W.complex);
  for (int d = 0; d <= X.dim(); ++d)
    for (int id = 0; id < X.count(d); ++id) {
      unsigned faces = ~0u;
      for (int v : X.vertices(d, id)) {
        unsigned f = 0;
        const Point& p = X.point(v);
        for (int i = 0; i < n; ++i) {
          if (p[i] == S) f |= 1u << (2 * i);
          if (p[i] == -S) f |= 1u << (2 * i + 1);
        }
        faces &= f;
      }
      if (faces != 0) W.boundary.insert(d, id);
    }
  return W;
}

int topSimplexOrientation(const SimplicialComplex& X, int id) {
  const int n = X.ambientDim();
  require(X.dim() == n, "orientation needs a top-dimensional simplex");
  auto vs = X.vertices(n, id);
  long long m[3][3] = {};
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) m[r][c] = X.point(vs[r + 1])[c] - X.point(vs[0])[c];
  long long det = 0;
  if (n == 1) det = m[0][0];
  if (n == 2) det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  if (n == 3)
    det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
          m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  require(det != 0, "degenerate top simplex");
  return det > 0 ? 1 : -1;
}

}  // namespace deepho
