#include "deepho/homology.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <queue>
#include <unordered_map>

#include <json.hpp>

#include "deepho/errors.hpp"

namespace deepho {

// ---------------------------------------------------------------------------
// Chains

Integer Chain::coefficient(int id) const {
  auto it = std::lower_bound(terms.begin(), terms.end(), id, [](const auto& t, int k) { return t.first < k; });
  return (it != terms.end() && it->first == id) ? it->second : Integer(0);
}

Chain makeChain(int dim, std::vector<std::pair<int, Integer>> terms) {
  std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  Chain c;
  c.dim = dim;
  for (auto& [id, v] : terms) {
    if (!c.terms.empty() && c.terms.back().first == id) {
      c.terms.back().second += v;
    } else {
      c.terms.emplace_back(id, std::move(v));
    }
  }
  std::erase_if(c.terms, [](const auto& t) { return t.second == 0; });
  return c;
}

Chain operator+(const Chain& a, const Chain& b) {
  require(a.empty() || b.empty() || a.dim == b.dim, "adding chains of different dimensions");
  auto t = a.terms;
  t.insert(t.end(), b.terms.begin(), b.terms.end());
  return makeChain(a.empty() ? b.dim : a.dim, std::move(t));
}

Chain operator*(const Integer& c, const Chain& a) {
  Chain r = a;
  for (auto& t : r.terms) t.second *= c;
  if (c == 0) r.terms.clear();
  return r;
}

Chain operator-(const Chain& a, const Chain& b) { return a + Integer(-1) * b; }

Chain boundary(const SimplicialComplex& X, const Chain& c) {
  std::vector<std::pair<int, Integer>> t;
  if (c.dim == 0) return makeChain(-1, {});
  for (const auto& [id, v] : c.terms) {
    auto f = X.facets(c.dim, id);
    for (int i = 0; i <= c.dim; ++i) t.emplace_back(f[i], i % 2 ? Integer(-v) : v);
  }
  return makeChain(c.dim - 1, std::move(t));
}

Chain coboundary(const Subcomplex& ambient, const Chain& c) {
  const auto& X = ambient.complex();
  std::vector<std::pair<int, Integer>> t;
  if (c.dim >= X.dim()) return makeChain(c.dim + 1, {});
  for (const auto& [id, v] : c.terms)
    for (int tau : X.cofaces(c.dim, id)) {
      if (!ambient.contains(c.dim + 1, tau)) continue;
      auto f = X.facets(c.dim + 1, tau);
      for (int i = 0; i <= c.dim + 1; ++i)
        if (f[i] == id) t.emplace_back(tau, i % 2 ? Integer(-v) : v);
    }
  return makeChain(c.dim + 1, std::move(t));
}

Chain restrictTo(const Chain& c, const Subcomplex& K) {
  Chain r;
  r.dim = c.dim;
  for (const auto& t : c.terms)
    if (K.contains(c.dim, t.first)) r.terms.push_back(t);
  return r;
}

Chain restrictOutside(const Chain& c, const Subcomplex& K) {
  Chain r;
  r.dim = c.dim;
  for (const auto& t : c.terms)
    if (!K.contains(c.dim, t.first)) r.terms.push_back(t);
  return r;
}

Integer augmentation(const Chain& c) {
  require(c.dim == 0 || c.empty(), "augmentation of a chain of positive dimension");
  Integer s = 0;
  for (const auto& t : c.terms) s += t.second;
  return s;
}

// ---------------------------------------------------------------------------
// ChainComplexZ

SparseIntMatrix ChainComplexZ::boundaryMatrix(int g) const {
  std::vector<Triplet> t;
  for (int j = 0; j < size(g); ++j)
    for (const auto& e : boundary(g, j)) t.push_back({e.idx, j, e.coeff});
  return SparseIntMatrix::fromTriplets(size(g - 1), size(g), t);
}

int ChainComplexZ::localIndex(int g, int label) const {
  if (g < 0 || g > top()) return -1;
  const auto& l = labels_[g];
  auto it = std::lower_bound(l.begin(), l.end(), label);
  return (it != l.end() && *it == label) ? static_cast<int>(it - l.begin()) : -1;
}

ChainComplexZ ChainComplexZ::fromMatrices(const std::vector<int>& sizes, const std::vector<SparseIntMatrix>& bd) {
  ChainComplexZ C;
  const int top = static_cast<int>(sizes.size()) - 1;
  C.labels_.resize(top + 1);
  C.offsets_.resize(top + 1);
  C.terms_.resize(top + 1);
  for (int g = 0; g <= top; ++g) {
    C.labels_[g].resize(sizes[g]);
    for (int j = 0; j < sizes[g]; ++j) C.labels_[g][j] = j;
    C.offsets_[g].assign(sizes[g] + 1, 0);
    if (g == 0) continue;
    require(static_cast<int>(bd.size()) > g, "missing boundary matrix");
    const auto& B = bd[g];
    require(B.rows() == sizes[g - 1] && B.cols() == sizes[g], "boundary matrix has wrong shape");
    for (int j = 0; j < sizes[g]; ++j) {
      for (const auto& e : B.column(j)) {
        require(boost::multiprecision::abs(e.value) < (1 << 30), "abstract complex entry too large");
        C.terms_[g].push_back({e.row, static_cast<int>(e.value)});
      }
      C.offsets_[g][j + 1] = static_cast<int>(C.terms_[g].size());
    }
  }
  for (int g = 2; g <= top; ++g)
    require((bd[g - 1] * bd[g]).isZero(), "boundary matrices do not compose to zero");
  return C;
}

ChainComplexZ chainComplexOf(std::shared_ptr<const Subcomplex> K, std::shared_ptr<const Subcomplex> L) {
  require(K != nullptr, "chain complex of a null subcomplex");
  if (L) {
    require(L->parent() == K->parent(), "pair of subcomplexes of different complexes");
    require(L->includedIn(*K), "divisor is not contained in the subcomplex");
  }
  const auto& X = K->complex();
  ChainComplexZ C;
  const int top = X.dim();
  C.labels_.resize(top + 1);
  C.offsets_.resize(top + 1);
  C.terms_.resize(top + 1);
  std::vector<int> prevLocal;
  for (int d = 0; d <= top; ++d) {
    std::vector<int> local(X.count(d), -1);
    auto& lab = C.labels_[d];
    for (int id = 0; id < X.count(d); ++id)
      if (K->contains(d, id) && !(L && L->contains(d, id))) {
        local[id] = static_cast<int>(lab.size());
        lab.push_back(id);
      }
    auto& off = C.offsets_[d];
    off.assign(lab.size() + 1, 0);
    if (d > 0) {
      auto& terms = C.terms_[d];
      terms.reserve(lab.size() * (d + 1));
      for (std::size_t j = 0; j < lab.size(); ++j) {
        auto f = X.facets(d, lab[j]);
        for (int i = 0; i <= d; ++i)
          if (prevLocal[f[i]] >= 0) terms.push_back({prevLocal[f[i]], i % 2 ? -1 : 1});
        off[j + 1] = static_cast<int>(terms.size());
      }
    }
    prevLocal = std::move(local);
  }
  C.ambient_ = std::move(K);
  C.divisor_ = std::move(L);
  return C;
}

ChainComplexZ cochainComplexOf(std::shared_ptr<const Subcomplex> K, std::shared_ptr<const Subcomplex> L) {
  require(K != nullptr, "cochain complex of a null subcomplex");
  if (L) {
    require(L->parent() == K->parent(), "pair of subcomplexes of different complexes");
    require(L->includedIn(*K), "divisor is not contained in the subcomplex");
  }
  const auto& X = K->complex();
  const int top = X.dim();
  ChainComplexZ C;
  C.cochain_ = true;
  C.shift_ = top;
  C.labels_.resize(top + 1);
  C.offsets_.resize(top + 1);
  C.terms_.resize(top + 1);
  std::vector<std::vector<int>> local(top + 1);
  for (int d = 0; d <= top; ++d) {
    local[d].assign(X.count(d), -1);
    auto& lab = C.labels_[top - d];
    for (int id = 0; id < X.count(d); ++id)
      if (K->contains(d, id) && !(L && L->contains(d, id))) {
        local[d][id] = static_cast<int>(lab.size());
        lab.push_back(id);
      }
  }
  for (int d = 0; d <= top; ++d) {
    const int g = top - d;
    const auto& lab = C.labels_[g];
    auto& off = C.offsets_[g];
    off.assign(lab.size() + 1, 0);
    auto& terms = C.terms_[g];
    for (std::size_t j = 0; j < lab.size(); ++j) {
      if (d < top) {
        for (int tau : X.cofaces(d, lab[j])) {
          if (local[d + 1][tau] < 0) continue;
          auto f = X.facets(d + 1, tau);
          for (int i = 0; i <= d + 1; ++i)
            if (f[i] == lab[j]) terms.push_back({local[d + 1][tau], i % 2 ? -1 : 1});
        }
        std::sort(terms.begin() + off[j], terms.end(), [](const auto& a, const auto& b) { return a.idx < b.idx; });
      }
      off[j + 1] = static_cast<int>(terms.size());
    }
  }
  C.ambient_ = std::move(K);
  C.divisor_ = std::move(L);
  return C;
}

// ---------------------------------------------------------------------------
// Reduction engine

namespace detail {

struct Reduction {
  using Term = ChainComplexZ::Term;
  struct Step {
    int a, b, lambda;
    int begin, end;  // slice of the boundary of b at reduction time (collapses)
  };
  struct LiftStep {
    int a, b, lambda;
    int begin, end;  // slice of alive cofaces of a with incidence
  };
  int top = -1;
  std::vector<int> originalSize;
  std::vector<std::vector<int>> survivors;
  std::vector<std::vector<Step>> steps;        // by degree of a, in reduction order
  std::vector<std::vector<int>> stepOf;        // cell -> index in steps[g] (a cells), -1 otherwise
  std::vector<std::vector<Term>> stepArena;
  std::vector<std::vector<LiftStep>> lifts;    // by degree of b, coreductions only
  std::vector<std::vector<Term>> liftArena;
  std::vector<SparseIntMatrix> remainder;
  std::size_t count = 0;

  int survivorPos(int g, int idx) const {
    const auto& s = survivors[g];
    auto it = std::lower_bound(s.begin(), s.end(), idx);
    return (it != s.end() && *it == idx) ? static_cast<int>(it - s.begin()) : -1;
  }

  IntVector project(int g, const std::vector<std::pair<int, Integer>>& chain) const {
    IntVector out(survivors[g].size());
    if (g < 0 || g > top) return out;
    std::unordered_map<int, Integer> x;
    std::priority_queue<int, std::vector<int>, std::greater<int>> heap;
    for (const auto& [i, v] : chain) {
      if (v == 0) continue;
      auto [it, fresh] = x.try_emplace(i, 0);
      it->second += v;
      if (fresh && stepOf[g][i] >= 0) heap.push(stepOf[g][i]);
    }
    int last = -1;
    while (!heap.empty()) {
      int s = heap.top();
      heap.pop();
      if (s == last) continue;
      last = s;
      const Step& st = steps[g][s];
      auto it = x.find(st.a);
      if (it == x.end() || it->second == 0) continue;
      Integer c = it->second * st.lambda;  // divide by a unit
      if (st.begin == st.end) {
        x.erase(it);
        continue;
      }
      for (int k = st.begin; k < st.end; ++k) {
        const Term& t = stepArena[g][k];
        auto [jt, fresh] = x.try_emplace(t.idx, 0);
        jt->second -= c * t.coeff;
        if (fresh && stepOf[g][t.idx] > s) heap.push(stepOf[g][t.idx]);
      }
    }
    for (const auto& [i, v] : x) {
      if (v == 0) continue;
      int p = survivorPos(g, i);
      if (p >= 0) out[p] = v;
    }
    return out;
  }

  std::vector<std::pair<int, Integer>> lift(int g, const IntVector& y) const {
    std::unordered_map<int, Integer> z;
    for (std::size_t p = 0; p < y.size(); ++p)
      if (y[p] != 0) z[survivors[g][p]] = y[p];
    if (g >= 0 && g <= top) {
      const auto& ls = lifts[g];
      for (auto it = ls.rbegin(); it != ls.rend(); ++it) {
        Integer s = 0;
        for (int k = it->begin; k < it->end; ++k) {
          const Term& t = liftArena[g][k];
          auto jt = z.find(t.idx);
          if (jt != z.end()) s += jt->second * t.coeff;
        }
        if (s != 0) z[it->b] -= s * it->lambda;
      }
    }
    std::vector<std::pair<int, Integer>> out;
    for (auto& [i, v] : z)
      if (v != 0) out.emplace_back(i, v);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
  }
};

struct DegreeReader {
  std::shared_ptr<const Reduction> red;
  std::shared_ptr<const std::vector<int>> labels;
  std::shared_ptr<const Subcomplex> ambient, divisor;
  bool cochain = false;
  bool reduced = false;
  int g = 0;
  int dim = 0;
  FgAbGroup group;
  SparseIntMatrix coordMap;  // generators x survivors
  SparseIntMatrix bd;        // remainder boundary out of degree g
};

}  // namespace detail

std::shared_ptr<ReducedComplex> collapsePreprocess(const ChainComplexZ& C) {
  using Term = ChainComplexZ::Term;
  auto R = std::make_shared<detail::Reduction>();
  const int top = C.top();
  R->top = top;
  R->originalSize.resize(top + 1);
  R->steps.resize(top + 1);
  R->stepOf.resize(top + 1);
  R->stepArena.resize(top + 1);
  R->lifts.resize(top + 1);
  R->liftArena.resize(top + 1);
  R->survivors.resize(top + 1);
  R->remainder.resize(top + 1);

  // coface lists
  std::vector<std::vector<int>> coOff(top + 1);
  std::vector<std::vector<Term>> co(top + 1);
  for (int g = 0; g <= top; ++g) {
    R->originalSize[g] = C.size(g);
    R->stepOf[g].assign(C.size(g), -1);
    coOff[g].assign(C.size(g) + 1, 0);
    if (g == top) continue;
    for (int j = 0; j < C.size(g + 1); ++j)
      for (const auto& t : C.boundary(g + 1, j)) ++coOff[g][t.idx + 1];
    for (std::size_t i = 1; i < coOff[g].size(); ++i) coOff[g][i] += coOff[g][i - 1];
    co[g].resize(coOff[g].back());
    std::vector<int> pos(coOff[g].begin(), coOff[g].end() - 1);
    for (int j = 0; j < C.size(g + 1); ++j)
      for (const auto& t : C.boundary(g + 1, j)) co[g][pos[t.idx]++] = Term{j, t.coeff};
  }
  auto cofaces = [&](int g, int j) -> std::span<const Term> {
    if (g >= top) return {};
    return {co[g].data() + coOff[g][j], static_cast<std::size_t>(coOff[g][j + 1] - coOff[g][j])};
  };
  auto faces = [&](int g, int j) -> std::span<const Term> {
    if (g <= 0) return {};
    return C.boundary(g, j);
  };

  std::vector<std::vector<char>> alive(top + 1);
  std::vector<std::vector<int>> faceCnt(top + 1), cofCnt(top + 1);
  struct Cand {
    int g, j;
    bool coreduction;
  };
  std::deque<Cand> queue;
  for (int g = 0; g <= top; ++g) {
    alive[g].assign(C.size(g), 1);
    faceCnt[g].assign(C.size(g), 0);
    cofCnt[g].assign(C.size(g), 0);
    for (int j = 0; j < C.size(g); ++j) {
      faceCnt[g][j] = static_cast<int>(faces(g, j).size());
      cofCnt[g][j] = static_cast<int>(cofaces(g, j).size());
    }
  }
  for (int g = top; g >= 0; --g)
    for (int j = 0; j < C.size(g); ++j) {
      if (cofCnt[g][j] == 1) queue.push_back({g, j, false});
      if (faceCnt[g][j] == 1) queue.push_back({g, j, true});
    }

  auto reduce = [&](int g, int a, int b, int lambda, bool coreduction) {
    // g is the degree of a
    detail::Reduction::Step st{a, b, lambda, 0, 0};
    auto& arena = R->stepArena[g];
    st.begin = static_cast<int>(arena.size());
    if (!coreduction)
      for (const auto& t : faces(g + 1, b))
        if (alive[g][t.idx]) arena.push_back(t);
    st.end = static_cast<int>(arena.size());
    R->stepOf[g][a] = static_cast<int>(R->steps[g].size());
    R->steps[g].push_back(st);
    if (coreduction) {
      detail::Reduction::LiftStep ls{a, b, lambda, 0, 0};
      auto& la = R->liftArena[g + 1];
      ls.begin = static_cast<int>(la.size());
      for (const auto& t : cofaces(g, a))
        if (alive[g + 1][t.idx] && t.idx != b) la.push_back(t);
      ls.end = static_cast<int>(la.size());
      R->lifts[g + 1].push_back(ls);
    }
    ++R->count;
    alive[g][a] = 0;
    alive[g + 1][b] = 0;
    for (const auto& t : faces(g + 1, b))
      if (alive[g][t.idx] && --cofCnt[g][t.idx] == 1) queue.push_back({g, t.idx, false});
    for (const auto& t : cofaces(g + 1, b))
      if (alive[g + 2][t.idx] && --faceCnt[g + 2][t.idx] == 1) queue.push_back({g + 2, t.idx, true});
    for (const auto& t : faces(g, a))
      if (alive[g - 1][t.idx] && --cofCnt[g - 1][t.idx] == 1) queue.push_back({g - 1, t.idx, false});
    for (const auto& t : cofaces(g, a))
      if (alive[g + 1][t.idx] && --faceCnt[g + 1][t.idx] == 1) queue.push_back({g + 1, t.idx, true});
  };

  while (!queue.empty()) {
    Cand c = queue.front();
    queue.pop_front();
    if (!alive[c.g][c.j]) continue;
    if (!c.coreduction) {
      if (cofCnt[c.g][c.j] != 1) continue;
      for (const auto& t : cofaces(c.g, c.j))
        if (alive[c.g + 1][t.idx]) {
          if (t.coeff == 1 || t.coeff == -1) reduce(c.g, c.j, t.idx, t.coeff, false);
          break;
        }
    } else {
      if (faceCnt[c.g][c.j] != 1) continue;
      for (const auto& t : faces(c.g, c.j))
        if (alive[c.g - 1][t.idx]) {
          if (t.coeff == 1 || t.coeff == -1) reduce(c.g - 1, t.idx, c.j, t.coeff, true);
          break;
        }
    }
  }

  for (int g = 0; g <= top; ++g)
    for (int j = 0; j < C.size(g); ++j)
      if (alive[g][j]) R->survivors[g].push_back(j);
  for (int g = 1; g <= top; ++g) {
    std::vector<Triplet> t;
    const auto& sv = R->survivors[g];
    for (std::size_t p = 0; p < sv.size(); ++p)
      for (const auto& e : faces(g, sv[p]))
        if (alive[g - 1][e.idx]) t.push_back({R->survivorPos(g - 1, e.idx), static_cast<int>(p), e.coeff});
    R->remainder[g] = SparseIntMatrix::fromTriplets(static_cast<int>(R->survivors[g - 1].size()),
                                                    static_cast<int>(sv.size()), t);
  }
  R->remainder[0] = SparseIntMatrix(0, static_cast<int>(R->survivors.empty() ? 0 : R->survivors[0].size()));

  auto out = std::make_shared<ReducedComplex>();
  out->impl_ = R;
  return out;
}

int ReducedComplex::originalSize(int g) const {
  return g < 0 || g > impl_->top ? 0 : impl_->originalSize[g];
}
int ReducedComplex::size(int g) const {
  return g < 0 || g > impl_->top ? 0 : static_cast<int>(impl_->survivors[g].size());
}
const std::vector<int>& ReducedComplex::survivors(int g) const { return impl_->survivors.at(g); }
SparseIntMatrix ReducedComplex::boundaryMatrix(int g) const { return impl_->remainder.at(g); }
std::size_t ReducedComplex::reductionCount() const { return impl_->count; }
IntVector ReducedComplex::project(int g, const std::vector<std::pair<int, Integer>>& c) const {
  return impl_->project(g, c);
}
std::vector<std::pair<int, Integer>> ReducedComplex::lift(int g, const IntVector& y) const {
  return impl_->lift(g, y);
}

// ---------------------------------------------------------------------------
// Homology groups

IntVector HomologyGroup::coordinates(const Chain& cycle) const {
  if (!reader_) {
    require(cycle.empty(), "non-zero chain in a degree without cells");
    return {};
  }
  const auto& rd = *reader_;
  require(cycle.empty() || cycle.dim == rd.dim, "chain has the wrong dimension");
  std::vector<std::pair<int, Integer>> local;
  local.reserve(cycle.terms.size());
  for (const auto& [label, v] : cycle.terms) {
    auto it = std::lower_bound(rd.labels->begin(), rd.labels->end(), label);
    if (it != rd.labels->end() && *it == label) {
      local.emplace_back(static_cast<int>(it - rd.labels->begin()), v);
      continue;
    }
    if (!rd.ambient) throw ContractViolation("chain term outside the complex");
    if (rd.divisor && rd.divisor->contains(rd.dim, label)) {
      if (rd.cochain) throw ContractViolation("cochain does not vanish on the divisor");
      continue;
    }
    throw ContractViolation("chain term outside the complex");
  }
  IntVector x = rd.red->project(rd.g, local);
  IntVector b = rd.bd.apply(x);
  for (const auto& v : b)
    if (v != 0) throw ContractViolation(rd.cochain ? "cochain is not a cocycle" : "chain is not a cycle");
  return rd.group.normalize(rd.coordMap.apply(x));
}

namespace detail {

struct GroupFactory {
  static HomologyGroup make(const std::shared_ptr<const Reduction>& red, const ReducedComplex& rc,
                            const std::shared_ptr<const std::vector<int>>& labels, const ChainComplexZ& C, int g,
                            bool reduced, const HomologyOptions& opt) {
    const int mg = static_cast<int>(red->survivors[g].size());
    const int mnext = g + 1 <= red->top ? static_cast<int>(red->survivors[g + 1].size()) : 0;
    const int mprev = g >= 1 ? static_cast<int>(red->survivors[g - 1].size()) : 0;
    if (static_cast<std::size_t>(mg + mnext + mprev) > opt.maxRemainderCells)
      throw ResourceError("reduced complex too large for Smith normal form: " + std::to_string(mg + mnext + mprev) +
                          " cells");
    SparseIntMatrix Bg;
    if (g >= 1) {
      Bg = red->remainder[g];
    } else if (reduced) {
      std::vector<Triplet> t;
      for (int j = 0; j < mg; ++j) t.push_back({0, j, 1});
      Bg = SparseIntMatrix::fromTriplets(1, mg, t);
    } else {
      Bg = SparseIntMatrix(0, mg);
    }
    auto kb = integerKernel(Bg);
    SparseIntMatrix Bnext = g + 1 <= red->top ? red->remainder[g + 1] : SparseIntMatrix(mg, 0);
    FgAbGroup G = cokernelPresentation(kb.leftInverse * Bnext);

    auto rd = std::make_shared<DegreeReader>();
    rd->red = red;
    rd->labels = labels;
    rd->ambient = C.ambient();
    rd->divisor = C.divisor();
    rd->cochain = C.isCochain();
    rd->reduced = reduced;
    rd->g = g;
    rd->dim = C.externalDegree(g);
    rd->group = FgAbGroup(G.freeRank(), G.torsion());
    rd->coordMap = G.coordinateMap() * kb.leftInverse;
    rd->bd = Bg;

    HomologyGroup H;
    H.degree_ = rd->dim;
    H.reduced_ = reduced;
    H.cohomology_ = C.isCochain();
    H.group_ = rd->group;
    SparseIntMatrix gens = kb.basis * G.ambientGenerators();
    for (int k = 0; k < gens.cols(); ++k) {
      auto local = rc.lift(g, gens.denseColumn(k));
      std::vector<std::pair<int, Integer>> t;
      t.reserve(local.size());
      for (auto& [i, v] : local) t.emplace_back((*labels)[i], v);
      H.reps_.push_back(makeChain(rd->dim, std::move(t)));
    }
    H.reader_ = rd;
    return H;
  }

  static std::shared_ptr<const HomologyModel> model(const ChainComplexZ& C, const HomologyOptions& opt) {
    auto M = std::make_shared<HomologyModel>();
    auto rc = collapsePreprocess(C);
    const auto& red = rc->impl_;
    const int top = C.top();
    M->cohomology_ = C.isCochain();
    M->top_ = top;
    M->ambient_ = C.ambient();
    M->divisor_ = C.divisor();
    for (int g = 0; g <= top; ++g) {
      M->originalCells_ += C.size(g);
      M->remainderCells_ += rc->size(g);
    }
    M->groups_.resize(top + 1);
    for (int g = 0; g <= top; ++g) {
      auto labels = std::make_shared<const std::vector<int>>(C.labels(g));
      M->groups_[C.externalDegree(g)] = make(red, *rc, labels, C, g, false, opt);
      if (g == 0 && !C.isCochain() && !C.divisor() && C.size(0) > 0) {
        M->reducedZero_ = make(red, *rc, labels, C, 0, true, opt);
        M->hasReducedZero_ = true;
      }
    }
    M->empty_.group_ = FgAbGroup::trivial();
    M->empty_.cohomology_ = C.isCochain();
    return M;
  }
};

}  // namespace detail

std::shared_ptr<const HomologyModel> HomologyModel::ofComplex(const ChainComplexZ& C, const HomologyOptions& opt) {
  return detail::GroupFactory::model(C, opt);
}

std::shared_ptr<const HomologyModel> HomologyModel::ofPair(std::shared_ptr<const Subcomplex> K,
                                                           std::shared_ptr<const Subcomplex> L,
                                                           const HomologyOptions& opt) {
  return ofComplex(chainComplexOf(std::move(K), std::move(L)), opt);
}

std::shared_ptr<const HomologyModel> HomologyModel::cohomologyOfPair(std::shared_ptr<const Subcomplex> K,
                                                                     std::shared_ptr<const Subcomplex> L,
                                                                     const HomologyOptions& opt) {
  return ofComplex(cochainComplexOf(std::move(K), std::move(L)), opt);
}

const HomologyGroup& HomologyModel::group(int degree, bool reduced) const {
  if (degree < 0 || degree > top_) return empty_;
  if (degree == 0 && reduced && hasReducedZero_) return reducedZero_;
  return groups_[degree];
}

HomologyGroup homology(std::shared_ptr<const Subcomplex> K, std::shared_ptr<const Subcomplex> L, int degree,
                       bool reduced) {
  auto M = HomologyModel::ofPair(std::move(K), std::move(L));
  return M->group(degree, reduced);
}

AbHom inducedMapOnHomology(const HomologyGroup& source, const HomologyGroup& target, const ChainMapFn& f) {
  std::vector<IntVector> cols;
  for (const auto& rep : source.representatives()) cols.push_back(target.coordinates(f ? f(rep) : rep));
  return homFromMatrix(source.group(), target.group(),
                       SparseIntMatrix::fromColumnVectors(target.group().generatorCount(), cols));
}

AbHom connectingHomomorphism(const HomologyGroup& relative, const HomologyGroup& target) {
  require(!relative.isCohomology() && !target.isCohomology(), "homological connecting map needs homology groups");
  std::vector<IntVector> cols;
  for (const auto& rep : relative.representatives()) {
    const auto& K = relative.ambient();
    require(K != nullptr, "connecting map needs a simplicial pair");
    cols.push_back(target.coordinates(boundary(K->complex(), rep)));
  }
  return homFromMatrix(relative.group(), target.group(),
                       SparseIntMatrix::fromColumnVectors(target.group().generatorCount(), cols));
}

AbHom coboundaryConnecting(const HomologyGroup& source, const HomologyGroup& target, const Subcomplex& ambient) {
  require(source.isCohomology() && target.isCohomology(), "coboundary connecting map needs cohomology groups");
  std::vector<IntVector> cols;
  for (const auto& rep : source.representatives()) cols.push_back(target.coordinates(coboundary(ambient, rep)));
  return homFromMatrix(source.group(), target.group(),
                       SparseIntMatrix::fromColumnVectors(target.group().generatorCount(), cols));
}

HomologyGroup compactSupportCohomology(std::shared_ptr<const Subcomplex> Z, std::shared_ptr<const Subcomplex> frontierZ,
                                       int k) {
  auto M = HomologyModel::cohomologyOfPair(std::move(Z), std::move(frontierZ));
  return M->group(k);
}

std::shared_ptr<const Subcomplex> HomologyGroup::ambient() const {
  return reader_ ? reader_->ambient : nullptr;
}

std::shared_ptr<const Subcomplex> HomologyGroup::divisor() const {
  return reader_ ? reader_->divisor : nullptr;
}

std::string HomologyGroup::toJson() const {
  nlohmann::json j;
  j["degree"] = degree_;
  j["reduced"] = reduced_;
  j["cohomology"] = cohomology_;
  j["freeRank"] = group_.freeRank();
  j["torsion"] = nlohmann::json::array();
  for (const auto& t : group_.torsion()) j["torsion"].push_back(t.str());
  auto K = ambient();
  j["representatives"] = nlohmann::json::array();
  for (const auto& r : reps_) {
    auto terms = nlohmann::json::array();
    for (const auto& [id, c] : r.terms) {
      nlohmann::json t;
      if (K) {
        for (int v : K->complex().vertices(r.dim, id)) {
          const auto& p = K->complex().point(v);
          t["simplex"].push_back(std::vector<int>(p.begin(), p.begin() + K->complex().ambientDim()));
        }
      } else {
        t["id"] = id;
      }
      t["c"] = c.str();
      terms.push_back(t);
    }
    j["representatives"].push_back(terms);
  }
  return j.dump();
}

}  // namespace deepho
