#include "deepho/book_scenes.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "deepho/errors.hpp"
#include "parallel.hpp"

namespace deepho {

using nlohmann::json;

PageSet allPages(int k) {
  PageSet P(k);
  std::iota(P.begin(), P.end(), 1);
  return P;
}

PageSet withoutPage(const PageSet& P, int page) {
  PageSet Q;
  for (int p : P)
    if (p != page) Q.push_back(p);
  return Q;
}

std::vector<Point> staircasePath(PageDirection d, int extent) {
  require(d.a != 0 || d.b != 0, "page direction must be non-zero");
  require(std::gcd(d.a, d.b) == 1, "page direction must be primitive");
  const int sa = (d.a > 0) - (d.a < 0), sb = (d.b > 0) - (d.b < 0);
  const int A = std::abs(d.a), B = std::abs(d.b);
  // one period of steps: s1 used n1 times, s2 used n2 times
  std::array<int, 2> s1{}, s2{};
  int n1 = 0, n2 = 0;
  if (sa != 0 && sb != 0 && sa == sb) {
    s1 = {sa, sb};
    n1 = std::min(A, B);
    s2 = A > B ? std::array<int, 2>{sa, 0} : std::array<int, 2>{0, sb};
    n2 = std::abs(A - B);
  } else {
    s1 = {sa, 0};
    n1 = A;
    s2 = {0, sb};
    n2 = B;
  }
  const int m = n1 + n2;
  std::vector<Point> path{{0, 0, 0}};
  Point p{0, 0, 0};
  for (int t = 1;; ++t) {
    const int i = (t - 1) % m + 1;
    const bool first = (i * n1) / m > ((i - 1) * n1) / m;
    const auto& s = first ? s1 : s2;
    p = {p[0] + s[0], p[1] + s[1], 0};
    if (std::max(std::abs(p[0]), std::abs(p[1])) > extent) break;
    path.push_back(p);
  }
  return path;
}

std::vector<PageDirection> defaultDirections(int k) {
  require(k >= 1, "a book needs at least one page");
  std::vector<PageDirection> base;
  if (k == 3)
    base = {{1, 0}, {0, 1}, {-1, -1}};
  else if (k == 2)
    base = {{1, 0}, {-1, 0}};
  else
    base = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}, {1, 1}, {-1, -1}, {1, -1}, {-1, 1}};
  require(k <= static_cast<int>(base.size()), "no default directions for this many pages");
  base.resize(k);
  return base;
}

namespace {

std::vector<char> vertexMask(const SimplicialComplex& Z, const std::function<bool(const Point&)>& pred) {
  std::vector<char> mask(Z.count(0), 0);
  for (int v = 0; v < Z.count(0); ++v) mask[v] = pred(Z.point(v));
  return mask;
}

bool onSpine(const Point& p) { return p[0] == 0 && p[1] == 0; }

}  // namespace

BookComplex buildBook(int k, const std::vector<PageDirection>& directions, int T) {
  require(k >= 1, "a book needs at least one page");
  require(T >= 1, "book extent must be positive");
  require(static_cast<int>(directions.size()) == k, "one direction per page");
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      if (directions[i] == directions[j])
        throw ContractViolation("pages " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                                " have the same direction");

  std::vector<Point> points;
  std::map<Point, int> id;
  auto vertex = [&](const Point& p) {
    auto [it, fresh] = id.emplace(p, static_cast<int>(points.size()));
    if (fresh) points.push_back(p);
    return it->second;
  };
  std::map<std::array<int, 2>, int> owner;  // planar path point -> page, spine excluded
  std::vector<std::vector<int>> triangles;
  std::vector<std::vector<Point>> pagePoints(k);
  for (int z = -T; z <= T; ++z) vertex({0, 0, z});
  for (int i = 0; i < k; ++i) {
    auto path = staircasePath(directions[i], T);
    for (std::size_t t = 1; t < path.size(); ++t) {
      std::array<int, 2> q{path[t][0], path[t][1]};
      auto [it, fresh] = owner.emplace(q, i);
      if (!fresh)
        throw ContractViolation("pages " + std::to_string(it->second + 1) + " and " + std::to_string(i + 1) +
                                " meet at (" + std::to_string(q[0]) + "," + std::to_string(q[1]) + ") outside the spine");
    }
    for (std::size_t t = 0; t + 1 < path.size(); ++t) {
      Point p = path[t], q = path[t + 1];
      Point s{q[0] - p[0], q[1] - p[1], 0};
      Point b = p;
      if (s[0] < 0 || s[1] < 0) {
        b = q;
        s = {-s[0], -s[1], 0};
      }
      for (int z = -T; z < T; ++z) {
        Point v0{b[0], b[1], z}, v1{b[0] + s[0], b[1] + s[1], z}, v2{b[0] + s[0], b[1] + s[1], z + 1},
            v3{b[0], b[1], z + 1};
        triangles.push_back({vertex(v0), vertex(v1), vertex(v2)});
        triangles.push_back({vertex(v0), vertex(v3), vertex(v2)});
      }
    }
  }
  for (auto& t : triangles) std::sort(t.begin(), t.end());

  BookComplex W;
  W.k = k;
  W.T = T;
  W.directions = directions;
  W.complex = SimplicialComplex::build(3, points, triangles);
  const auto& Z = *W.complex;
  W.spine = std::make_shared<const Subcomplex>(Subcomplex::spannedBy(W.complex, vertexMask(Z, onSpine)));
  for (int i = 0; i < k; ++i) {
    auto mask = vertexMask(Z, [&](const Point& p) {
      if (onSpine(p)) return true;
      auto it = owner.find({p[0], p[1]});
      return it != owner.end() && it->second == i;
    });
    W.pages.push_back(std::make_shared<const Subcomplex>(Subcomplex::spannedBy(W.complex, mask)));
  }
  W.frontier = std::make_shared<const Subcomplex>(
      Subcomplex::spannedBy(W.complex, vertexMask(Z, [T](const Point& p) { return supNorm(p) == T; })));
  return W;
}

SubcomplexPtr BookComplex::part(const PageSet& P) const {
  Subcomplex out = *spine;
  for (int p : P) {
    require(p >= 1 && p <= k, "page index out of range");
    out = out.unite(*pages[p - 1]);
  }
  return std::make_shared<const Subcomplex>(std::move(out));
}

long BookComplex::eulerCharacteristic() const {
  long chi = 0;
  for (int d = 0; d <= complex->dim(); ++d) chi += (d % 2 == 0 ? 1 : -1) * static_cast<long>(complex->count(d));
  return chi;
}

std::string BookComplex::toJson() const {
  json j;
  j["k"] = k;
  j["T"] = T;
  for (const auto& d : directions) j["directions"].push_back({d.a, d.b});
  j["counts"] = json::array();
  for (int d = 0; d <= complex->dim(); ++d) j["counts"].push_back(complex->count(d));
  j["euler"] = eulerCharacteristic();
  j["frontierVertices"] = frontier->count(0);
  return j.dump();
}

SubcomplexPtr BookScene::domainPart(const PageSet& P) const { return domain.part(P); }

SubcomplexPtr BookScene::image(const PageSet& P) const {
  auto Z = domainPart(P);
  Subcomplex K(window->complex);
  const auto& M = fsharp.map.components;
  for (int d = 0; d < static_cast<int>(M.size()); ++d)
    for (int s : Z->simplices(d))
      for (const auto& e : M[d].column(s)) K.insert(d, e.row);
  K.close();
  return std::make_shared<const Subcomplex>(std::move(K));
}

BookScene embedBookInWindow(const BookComplex& book, int S, std::size_t budget) {
  if (S < book.T + kSceneMargin)
    throw ContractViolation("window radius " + std::to_string(S) + " is below T + " + std::to_string(kSceneMargin));
  BookScene sc;
  sc.book = book;
  sc.domain = buildBook(book.k, book.directions, S);
  sc.window = std::make_shared<const Window>(buildWindow(3, S, budget));
  sc.f = identitySample(sc.domain.complex, "book", "window");
  sc.fsharp = approximateChainMap(sc.f, *sc.window);
  // the book sits in the lattice, so f_# has to be the inclusion
  for (int d = 0; d < static_cast<int>(sc.fsharp.map.components.size()); ++d)
    for (int s = 0; s < sc.domain.complex->count(d); ++s) {
      const auto& col = sc.fsharp.map.components[d].column(s);
      if (col.size() != 1 || col[0].value != 1)
        throw ContractViolation("control audit: simplex " + std::to_string(s) + " of degree " + std::to_string(d) +
                                " is not carried to a single simplex");
    }
  sc.controls = estimateControls(sc.f);
  if (sc.controls.properFailure) throw ContractViolation("control audit: " + sc.controls.diagnostic);
  return sc;
}

SceneAnalysis::SceneAnalysis(std::shared_ptr<const BookScene> scene, SceneOptions opt)
    : scene_(std::move(scene)), opt_(opt) {
  require(scene_ != nullptr, "scene analysis needs a scene");
  X_ = std::make_shared<const Subcomplex>(scene_->window->full());
}

const EndFiltration& SceneAnalysis::filtration(const PageSet& P) {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = filtrations_.find(P);
    if (it != filtrations_.end()) return it->second;
  }
  auto F = complementFiltration(X_, scene_->image(P), opt_.Rmin, opt_.Rmax);
  std::lock_guard<std::mutex> lock(mutex_);
  return filtrations_.emplace(P, std::move(F)).first->second;
}

const RelativeEnds& SceneAnalysis::ends(const PageSet& P) {
  auto it = ends_.find(P);
  if (it != ends_.end()) return it->second;
  return ends_.emplace(P, deepComponents(filtration(P), kDeepShellMargin, opt_.deep.window)).first->second;
}

const StageHomology& SceneAnalysis::models(const PageSet& P, const std::optional<PageSet>& Q) {
  std::pair<PageSet, PageSet> key{P, Q.value_or(PageSet{})};
  if (!Q) key.second = {-1};
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = models_.find(key);
    if (it != models_.end()) return it->second;
  }
  const auto& F = filtration(P);
  const EndFiltration* inner = Q ? &filtration(*Q) : nullptr;
  auto H = stageHomology(F, inner, opt_.deep);
  std::lock_guard<std::mutex> lock(mutex_);
  return models_.emplace(key, std::move(H)).first->second;
}

const DeepHomologyResult& SceneAnalysis::deep(const PageSet& P, int degree, bool reduced) {
  auto key = std::make_tuple(P, PageSet{-1}, degree, reduced);
  auto it = deep_.find(key);
  if (it != deep_.end()) return it->second;
  auto r = deepHomology(models(P, std::nullopt), degree, reduced, opt_.deep.window);
  return deep_.emplace(key, std::move(r)).first->second;
}

const DeepHomologyResult& SceneAnalysis::deepRelative(const PageSet& P, const PageSet& Q, int degree) {
  require(std::includes(Q.begin(), Q.end(), P.begin(), P.end()), "relative deep homology needs P inside Q");
  auto key = std::make_tuple(P, Q, degree, false);
  auto it = deep_.find(key);
  if (it != deep_.end()) return it->second;
  auto r = deepHomology(models(P, Q), degree, false, opt_.deep.window);
  return deep_.emplace(key, std::move(r)).first->second;
}

const DualitySetup& SceneAnalysis::duality(int orientation) {
  auto it = duality_.find(orientation);
  if (it != duality_.end()) return it->second;
  return duality_.emplace(orientation, makeDualitySetup(scene_->window, scene_->fsharp.map, orientation))
      .first->second;
}

void SceneAnalysis::prefetch(const std::vector<std::pair<PageSet, std::optional<PageSet>>>& requests) {
  std::set<PageSet> parts;
  for (const auto& [P, Q] : requests) {
    parts.insert(P);
    if (Q) parts.insert(*Q);
  }
  std::vector<PageSet> todo(parts.begin(), parts.end());
  const int jobs = opt_.deep.jobs;
  detail::parallelFor(static_cast<int>(todo.size()), jobs, [&](int i) { filtration(todo[i]); });
  // stage models run one per thread; the caches are filled under the mutex
  SceneOptions saved = opt_;
  opt_.deep.jobs = 1;
  try {
    detail::parallelFor(static_cast<int>(requests.size()), jobs,
                        [&](int i) { models(requests[i].first, requests[i].second); });
  } catch (...) {
    opt_ = saved;
    throw;
  }
  opt_ = saved;
}

int SceneAnalysis::endRepresentative(const PageSet& P, int e, int R) {
  const auto& E = ends(P);
  require(R >= E.R0 && R <= opt_.Rmax, "stage outside the stable range of the ends");
  const int j = R - opt_.Rmin;
  require(e >= 0 && e < E.endCount, "end index out of range");
  const int c = E.perStage[j][e];
  const auto& lab = E.components[j].label;
  for (int v = 0; v < static_cast<int>(lab.size()); ++v)
    if (lab[v] == c) return v;
  throw Error("deep component without vertices");
}

std::vector<int> SceneAnalysis::endInclusion(const PageSet& P, const PageSet& Q, int R) {
  require(std::includes(P.begin(), P.end(), Q.begin(), Q.end()), "end inclusion needs Q inside P");
  const auto& EP = ends(P);
  const auto& EQ = ends(Q);
  require(R >= EQ.R0, "stage below the stable range of the target ends");
  const int j = R - opt_.Rmin;
  std::vector<int> out(EP.endCount, -1);
  for (int e = 0; e < EP.endCount; ++e) {
    const int c = EQ.components[j].label[endRepresentative(P, e, R)];
    for (int f = 0; f < EQ.endCount; ++f)
      if (EQ.perStage[j][f] == c) out[e] = f;
  }
  return out;
}

}  // namespace deepho
