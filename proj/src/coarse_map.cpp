#include "deepho/coarse_map.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <random>
#include <set>
#include <unordered_map>

#include <json.hpp>

#include "deepho/errors.hpp"

namespace deepho {

using nlohmann::json;

std::string CoarseMapSample::toJson() const {
  json j;
  j["domainRef"] = domainRef;
  j["codomainRef"] = codomainRef;
  json img = json::array();
  for (const auto& p : vertexImage) img.push_back({p[0], p[1], p[2]});
  j["vertexImage"] = img;
  return j.dump();
}

CoarseMapSample CoarseMapSample::fromJson(const std::string& text, ComplexPtr domain) {
  auto j = json::parse(text);
  CoarseMapSample f;
  f.domain = std::move(domain);
  f.domainRef = j.value("domainRef", "");
  f.codomainRef = j.value("codomainRef", "");
  for (const auto& p : j.at("vertexImage")) f.vertexImage.push_back({p.at(0).get<int>(), p.at(1).get<int>(), p.at(2).get<int>()});
  require(f.domain && static_cast<int>(f.vertexImage.size()) == f.domain->count(0),
          "vertex image does not match the domain");
  return f;
}

std::string ControlEstimate::toJson() const {
  json j;
  j["rhoMinus"] = rhoMinus;
  j["rhoPlus"] = rhoPlus;
  j["pairs"] = pairs;
  j["properFailure"] = properFailure;
  if (!diagnostic.empty()) j["diagnostic"] = diagnostic;
  return j.dump();
}

namespace {

int otherEnd(const SimplicialComplex& X, int edge, int v) {
  auto ev = X.vertices(1, edge);
  return ev[0] == v ? ev[1] : ev[0];
}

std::vector<int> bfsFrom(const SimplicialComplex& X, const std::vector<char>* member, const std::vector<int>& sources,
                         int maxDist = -1) {
  std::vector<int> dist(X.count(0), -1);
  std::deque<int> q;
  for (int s : sources)
    if (dist[s] < 0) {
      dist[s] = 0;
      q.push_back(s);
    }
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    if (maxDist >= 0 && dist[v] >= maxDist) continue;
    for (int e : X.cofaces(0, v)) {
      if (member && !(*member)[e]) continue;
      int w = otherEnd(X, e, v);
      if (dist[w] < 0) {
        dist[w] = dist[v] + 1;
        q.push_back(w);
      }
    }
  }
  return dist;
}

int hausdorff(const SimplicialComplex& X, const std::vector<int>& a, const std::vector<Point>& b) {
  if (a.empty() || b.empty()) return 0;
  int worst = 0;
  for (int v : a) {
    int best = -1;
    for (const auto& p : b) {
      int d = latticeDistance(X.point(v), p);
      if (best < 0 || d < best) best = d;
    }
    worst = std::max(worst, best);
  }
  for (const auto& p : b) {
    int best = -1;
    for (int v : a) {
      int d = latticeDistance(X.point(v), p);
      if (best < 0 || d < best) best = d;
    }
    worst = std::max(worst, best);
  }
  return worst;
}

std::vector<int> supportVertices(const SimplicialComplex& X, const Chain& c) {
  std::set<int> vs;
  for (const auto& t : c.terms)
    for (int v : X.vertices(c.dim, t.first)) vs.insert(v);
  return {vs.begin(), vs.end()};
}

// Simplices of degree d spanned by the vertex set `inBall`, reached from `seeds`.
std::vector<int> spannedSimplices(const SimplicialComplex& X, const std::vector<char>& inBall,
                                  const std::vector<int>& ballVertices, int d) {
  std::set<int> cur(ballVertices.begin(), ballVertices.end());
  for (int k = 0; k < d; ++k) {
    std::set<int> next;
    for (int s : cur)
      for (int t : X.cofaces(k, s)) {
        auto tv = X.vertices(k + 1, t);
        if (std::all_of(tv.begin(), tv.end(), [&](int v) { return inBall[v] != 0; })) next.insert(t);
      }
    cur.swap(next);
  }
  return {cur.begin(), cur.end()};
}

// Chain c of degree d with boundary b, supported in a ball around `seeds`.
std::optional<Chain> fillLocally(const SimplicialComplex& X, const Chain& b, const std::vector<int>& seeds, int d,
                                 int maxRadius) {
  if (d > X.dim()) return std::nullopt;
  for (int r = 0; r <= maxRadius; ++r) {
    auto dist = bfsFrom(X, nullptr, seeds, r);
    std::vector<char> inBall(X.count(0), 0);
    std::vector<int> ball;
    for (int v = 0; v < X.count(0); ++v)
      if (dist[v] >= 0) {
        inBall[v] = 1;
        ball.push_back(v);
      }
    auto cols = spannedSimplices(X, inBall, ball, d);
    if (cols.empty()) continue;
    std::unordered_map<int, int> rowOf;
    std::vector<Triplet> trip;
    for (int j = 0; j < static_cast<int>(cols.size()); ++j) {
      auto f = X.facets(d, cols[j]);
      for (int i = 0; i <= d; ++i) {
        auto [it, fresh] = rowOf.emplace(f[i], static_cast<int>(rowOf.size()));
        trip.push_back({it->second, j, Integer(i % 2 ? -1 : 1)});
      }
    }
    bool inside = true;
    for (const auto& t : b.terms) inside = inside && rowOf.count(t.first);
    if (!inside) continue;
    IntVector rhs(rowOf.size());
    for (const auto& t : b.terms) rhs[rowOf[t.first]] = t.second;
    auto A = SparseIntMatrix::fromTriplets(static_cast<int>(rowOf.size()), static_cast<int>(cols.size()), trip);
    auto x = solveIntegerLinear(A, rhs);
    if (!x) continue;
    std::vector<std::pair<int, Integer>> terms;
    for (int j = 0; j < static_cast<int>(cols.size()); ++j)
      if ((*x)[j] != 0) terms.emplace_back(cols[j], (*x)[j]);
    return makeChain(d, std::move(terms));
  }
  return std::nullopt;
}

// Image under `comps` of the boundary of simplex s of degree d of Z.
Chain imageOfBoundary(const SimplicialComplex& Z, const std::vector<SparseIntMatrix>& comps, int d, int s, int targetDim) {
  std::vector<std::pair<int, Integer>> t;
  auto f = Z.facets(d, s);
  for (int i = 0; i <= d; ++i)
    for (const auto& e : comps[d - 1].column(f[i])) t.emplace_back(e.row, i % 2 ? Integer(-e.value) : e.value);
  return makeChain(targetDim, std::move(t));
}

Chain columnChain(const SparseIntMatrix& M, int col, int dim) {
  std::vector<std::pair<int, Integer>> t;
  for (const auto& e : M.column(col)) t.emplace_back(e.row, e.value);
  return makeChain(dim, std::move(t));
}

SparseIntMatrix matrixOfChains(int rows, const std::vector<Chain>& cols) {
  std::vector<SparseIntMatrix::Column> c(cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (const auto& t : cols[j].terms) c[j].push_back({t.first, t.second});
  return SparseIntMatrix::fromColumns(rows, std::move(c));
}

std::string describe(const SimplicialComplex& Z, int d, int s) {
  std::string out = "[";
  for (int v : Z.vertices(d, s)) {
    const auto& p = Z.point(v);
    if (out.size() > 1) out += " ";
    out += "(" + std::to_string(p[0]) + "," + std::to_string(p[1]) + "," + std::to_string(p[2]) + ")";
  }
  return out + "]";
}

std::vector<Point> unitSteps(int n) {
  std::vector<Point> out;
  for (int mask = 1; mask < (1 << n); ++mask) {
    Point p{0, 0, 0}, q{0, 0, 0};
    for (int i = 0; i < n; ++i)
      if (mask & (1 << i)) {
        p[i] = 1;
        q[i] = -1;
      }
    out.push_back(p);
    out.push_back(q);
  }
  return out;
}

}  // namespace

ExtractedComplex extractComplex(const Subcomplex& K) {
  const auto& P = K.complex();
  ExtractedComplex out;
  auto verts = K.vertexIds();
  std::vector<int> local(P.count(0), -1);
  std::vector<Point> pts;
  for (int v : verts) {
    local[v] = static_cast<int>(pts.size());
    pts.push_back(P.point(v));
  }
  std::vector<std::vector<int>> sims;
  for (int d = 1; d <= K.dim(); ++d)
    for (int s : K.simplices(d)) {
      std::vector<int> vs;
      for (int v : P.vertices(d, s)) vs.push_back(local[v]);
      sims.push_back(std::move(vs));
    }
  out.complex = SimplicialComplex::build(P.ambientDim(), std::move(pts), std::move(sims), false);
  // vertex order and simplex order are both inherited from the parent
  for (int d = 0; d <= out.complex->dim(); ++d) out.parentId.push_back(K.simplices(d));
  return out;
}

CoarseMapSample identitySample(ComplexPtr domain, std::string domainRef, std::string codomainRef) {
  CoarseMapSample f;
  f.vertexImage = domain->points();
  f.domain = std::move(domain);
  f.domainRef = std::move(domainRef);
  f.codomainRef = std::move(codomainRef);
  return f;
}

std::vector<int> graphDistances(const Subcomplex& K, const std::vector<int>& sources) {
  auto d = bfsFrom(K.complex(), &K.mask(1), sources);
  for (int v = 0; v < K.complex().count(0); ++v)
    if (!K.contains(0, v)) d[v] = -1;
  return d;
}

ControlEstimate estimateControls(const CoarseMapSample& f, std::size_t pairBudget, std::uint64_t seed) {
  const auto& Z = *f.domain;
  require(static_cast<int>(f.vertexImage.size()) == Z.count(0), "vertex image does not match the domain");
  std::vector<int> order(Z.count(0));
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<int> minAt, maxAt;
  ControlEstimate est;
  for (int s : order) {
    if (est.pairs >= pairBudget) break;
    auto dist = bfsFrom(Z, nullptr, {s});
    for (int v = 0; v < Z.count(0); ++v) {
      if (v == s || dist[v] < 0) continue;
      const int dd = dist[v];
      const int cd = latticeDistance(f.vertexImage[s], f.vertexImage[v]);
      if (dd >= static_cast<int>(minAt.size())) {
        minAt.resize(dd + 1, -1);
        maxAt.resize(dd + 1, -1);
      }
      if (minAt[dd] < 0 || cd < minAt[dd]) minAt[dd] = cd;
      maxAt[dd] = std::max(maxAt[dd], cd);
      ++est.pairs;
    }
  }
  const int top = static_cast<int>(minAt.size()) - 1;
  if (top < 1) {
    est.diagnostic = "domain has no pairs of distinct connected vertices";
    return est;
  }
  est.rhoMinus.assign(top + 1, 0);
  est.rhoPlus.assign(top + 1, 0);
  int run = -1;
  for (int d = top; d >= 0; --d) {
    if (minAt[d] >= 0) run = run < 0 ? minAt[d] : std::min(run, minAt[d]);
    est.rhoMinus[d] = std::max(run, 0);
  }
  run = 0;
  for (int d = 0; d <= top; ++d) {
    run = std::max(run, maxAt[d]);
    est.rhoPlus[d] = run;
  }
  const int half = std::max(2, top / 2);
  if (top >= 2 && est.rhoMinus[std::min(half, top)] <= est.rhoMinus[1]) {
    est.properFailure = true;
    est.diagnostic = "rho_minus does not grow: pairs at domain distance " + std::to_string(std::min(half, top)) +
                     " map within " + std::to_string(est.rhoMinus[std::min(half, top)]);
  }
  return est;
}

ChainApproximation approximateChainMap(const CoarseMapSample& f, const Window& W, const ApproximationOptions& opt) {
  const auto& Z = *f.domain;
  const auto& X = *W.complex;
  require(static_cast<int>(f.vertexImage.size()) == Z.count(0), "vertex image does not match the domain");
  Point shift{0, 0, 0};
  if (opt.seed != 0) {
    auto steps = unitSteps(W.n);
    std::mt19937_64 rng(opt.seed);
    shift = steps[std::uniform_int_distribution<std::size_t>(0, steps.size() - 1)(rng)];
  }
  ChainApproximation A;
  A.map.source = f.domain;
  A.map.target = W.complex;
  A.vertexTarget.resize(Z.count(0));
  std::vector<Point> targetPoint(Z.count(0));
  for (int v = 0; v < Z.count(0); ++v) {
    Point p{0, 0, 0};
    for (int i = 0; i < W.n; ++i) p[i] = std::clamp(f.vertexImage[v][i] + shift[i], -W.S, W.S);
    A.vertexTarget[v] = W.vertexId(p);
    targetPoint[v] = p;
  }
  {
    std::vector<Triplet> t;
    for (int v = 0; v < Z.count(0); ++v) t.push_back({A.vertexTarget[v], v, Integer(1)});
    A.map.components.push_back(SparseIntMatrix::fromTriplets(X.count(0), Z.count(0), t));
  }
  for (int d = 1; d <= Z.dim(); ++d) {
    std::vector<Chain> cols(Z.count(d));
    for (int s = 0; s < Z.count(d); ++s) {
      auto target = imageOfBoundary(Z, A.map.components, d, s, d - 1);
      std::vector<int> img;
      for (int v : Z.vertices(d, s)) img.push_back(A.vertexTarget[v]);
      std::vector<int> sorted = img;
      std::sort(sorted.begin(), sorted.end());
      std::optional<Chain> choice;
      if (d <= X.dim() && std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end()) {
        int tau = X.find(d, sorted);
        if (tau >= 0) {
          int inversions = 0;
          for (int i = 0; i <= d; ++i)
            for (int j = i + 1; j <= d; ++j) inversions += img[i] > img[j];
          auto c = makeChain(d, {{tau, Integer(inversions % 2 ? -1 : 1)}});
          if (boundary(X, c) == target) choice = c;
        }
      }
      if (!choice && target.empty()) choice = makeChain(d, {});
      if (!choice) {
        auto seeds = supportVertices(X, target);
        seeds.insert(seeds.end(), img.begin(), img.end());
        choice = fillLocally(X, target, seeds, d, opt.maxFillRadius);
        if (!choice)
          throw WindowTooSmall("no chain of degree " + std::to_string(d) + " fills the image of simplex " +
                               describe(Z, d, s) + " within radius " + std::to_string(opt.maxFillRadius));
        ++A.localFills;
      }
      std::vector<Point> imgPts;
      for (int v : Z.vertices(d, s)) imgPts.push_back(targetPoint[v]);
      A.M = std::max(A.M, hausdorff(X, supportVertices(X, *choice), imgPts));
      cols[s] = std::move(*choice);
    }
    A.map.components.push_back(matrixOfChains(X.count(d), cols));
  }
  A.map.declaredDisplacement = A.M;
  return A;
}

ControlledHomotopy controlledHomotopy(const ChainApproximation& f, const ChainApproximation& g, const Window& W,
                                      int maxFillRadius) {
  const auto& Z = *f.map.source;
  const auto& X = *W.complex;
  require(f.map.source == g.map.source, "homotopy needs approximations on one domain");
  ControlledHomotopy H;
  for (int d = 0; d <= Z.dim(); ++d) {
    std::vector<Chain> cols(Z.count(d));
    for (int s = 0; s < Z.count(d); ++s) {
      auto z = columnChain(f.map.components[d], s, d) - columnChain(g.map.components[d], s, d);
      if (d > 0) z = z - imageOfBoundary(Z, H.F, d, s, d);
      if (z.empty()) {
        cols[s] = makeChain(d + 1, {});
        continue;
      }
      std::vector<int> seeds = supportVertices(X, z);
      for (int v : Z.vertices(d, s)) {
        seeds.push_back(f.vertexTarget[v]);
        seeds.push_back(g.vertexTarget[v]);
      }
      auto c = fillLocally(X, z, seeds, d + 1, maxFillRadius);
      if (!c)
        throw WindowTooSmall("no homotopy chain of degree " + std::to_string(d + 1) + " for simplex " +
                             describe(Z, d, s) + " within radius " + std::to_string(maxFillRadius));
      ++H.localFills;
      std::vector<Point> imgPts;
      for (int v : Z.vertices(d, s)) imgPts.push_back(X.point(f.vertexTarget[v]));
      H.D = std::max(H.D, hausdorff(X, supportVertices(X, *c), imgPts));
      cols[s] = std::move(*c);
    }
    H.F.push_back(matrixOfChains(d + 1 <= X.dim() ? X.count(d + 1) : 0, cols));
  }
  return H;
}

bool verifyHomotopyIdentity(const ControlledHomotopy& H, const ChainApproximation& f, const ChainApproximation& g,
                            const Window& W) {
  const auto& Z = *f.map.source;
  const auto& X = *W.complex;
  for (int d = 0; d <= Z.dim(); ++d) {
    auto rhs = f.map.components[d] - g.map.components[d];
    SparseIntMatrix lhs(X.count(d), Z.count(d));
    if (d + 1 <= X.dim()) lhs = boundaryMatrixOf(X, d + 1) * H.F[d];
    if (d > 0) lhs = lhs + H.F[d - 1] * boundaryMatrixOf(Z, d);
    if (!(lhs == rhs)) return false;
  }
  return true;
}

InducedDeepMap inducedDeepMap(const GradedChainMap& fsharp, const EndFiltration& domainF, const EndFiltration& targetF,
                              int degree, bool reduced, const DeepOptions& opt) {
  InducedDeepMap out;
  out.domainSide = deepHomology(domainF, degree, reduced, nullptr, opt);
  out.targetSide = deepHomology(targetF, degree, reduced, nullptr, opt);
  if (!out.domainSide.limit || !out.targetSide.limit)
    throw Error("induced deep map needs stable deep homology on both sides (domain " +
                toString(out.domainSide.stability.verdict) + ", target " + toString(out.targetSide.stability.verdict) +
                ")");
  out.targetIndex = out.targetSide.limit->index;
  const auto& Ytarget = *targetF.stage(out.targetIndex).Y;
  int M = -1;
  for (int m = domainF.Rmin; m <= domainF.Rmax && M < 0; ++m) {
    const auto& Yd = *domainF.stage(m).Y;
    bool inside = true;
    for (int d = 0; d < static_cast<int>(fsharp.components.size()) && inside; ++d)
      for (int s : Yd.simplices(d)) {
        for (const auto& e : fsharp.components[d].column(s))
          if (!Ytarget.contains(d, e.row)) {
            inside = false;
            break;
          }
        if (!inside) break;
      }
    if (inside) M = m;
  }
  if (M < 0) throw WindowTooSmall("no domain stage maps into target stage " + std::to_string(out.targetIndex));
  M = std::max(M, out.domainSide.limit->index);
  if (M >= out.domainSide.sequence.last())
    throw WindowTooSmall("domain stage " + std::to_string(M) + " needed for the induced map is not inside the stable range");
  out.domainIndex = M;
  const auto& src = out.domainSide.limit->group;
  const auto& tgt = out.targetSide.limit->group;
  std::vector<IntVector> cols;
  for (int i = 0; i < src.generatorCount(); ++i) {
    IntVector e(src.generatorCount());
    e[i] = 1;
    auto c = fsharp.apply(out.domainSide.limitRepresentative(e, M));
    auto x = out.targetSide.limitCoordinates(out.targetIndex, c);
    if (!x) throw Error("image of a deep class leaves the eventual image of the target");
    cols.push_back(*x);
  }
  out.map = homFromMatrix(src, tgt, SparseIntMatrix::fromColumnVectors(tgt.generatorCount(), cols));
  return out;
}

}  // namespace deepho
