#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "deepho/book_scenes.hpp"
#include "deepho/errors.hpp"

namespace deepho {

using nlohmann::json;

namespace {

json intsJson(const std::vector<Integer>& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(x.str());
  return a;
}

std::string pagesStr(const PageSet& P) {
  std::string s = "{";
  for (std::size_t i = 0; i < P.size(); ++i) s += (i ? "," : "") + std::to_string(P[i]);
  return s + "}";
}

bool isInfiniteCyclic(const DeepHomologyResult& r) {
  return r.limit && r.limit->group.isFree() && r.limit->group.freeRank() == 1;
}

IntVector unit(int n, int i, int sign = 1) {
  IntVector v(n);
  v[i] = sign;
  return v;
}

std::optional<IntVector> boundaryEnds(SceneAnalysis& A, const RelativeEnds& E, int R, const Chain& c) {
  return E.endCoordinates(R, boundary(*A.scene().window->complex, c));
}

int signOf(const Integer& x) { return x > 0 ? 1 : x < 0 ? -1 : 0; }

IntVector scaled(const IntVector& v, int s) {
  IntVector out(v);
  for (auto& x : out) x *= s;
  return out;
}

}  // namespace

// ---------------------------------------------------------------- adjacency graph

AdjacencyGraph adjacencyGraph(SceneAnalysis& A) { return adjacencyGraph(A, allPages(A.scene().k())); }

AdjacencyGraph adjacencyGraph(SceneAnalysis& A, const PageSet& P) {
  AdjacencyGraph G;
  G.pages = P;
  const auto& EP = A.ends(P);
  G.vertexCount = EP.endCount;
  G.stage = EP.R0;
  const int Rmax = A.options().Rmax;
  std::ostringstream diag;
  if (EP.verdict != Verdict::StableEmpirically) diag << "ends of W_" << pagesStr(P) << ": " << EP.diagnostic << "; ";
  for (int p : P) {
    const PageSet Q = withoutPage(P, p);
    const int R1 = std::max(EP.R0, A.ends(Q).R0);
    if (R1 > Rmax) {
      G.valid = false;
      diag << "page " << p << ": ends not stable before the last stage; ";
      continue;
    }
    auto phi = A.endInclusion(P, Q, R1);
    std::map<int, std::vector<int>> fibers;
    bool shallow = false;
    for (int e = 0; e < static_cast<int>(phi.size()); ++e) {
      if (phi[e] < 0) shallow = true;
      fibers[phi[e]].push_back(e);
    }
    if (shallow) {
      G.valid = false;
      diag << "page " << p << ": an end lands in a shallow component; ";
      continue;
    }
    std::vector<std::vector<int>> merged;
    for (auto& [img, fib] : fibers)
      if (fib.size() > 1) merged.push_back(fib);
    if (merged.empty()) {
      diag << "page " << p << " merges no ends; ";
      continue;
    }
    if (merged.size() > 1 || merged[0].size() != 2) {
      G.valid = false;
      diag << "page " << p << ": merged ends are not a unique pair; ";
      continue;
    }
    AdjacencyEdge e;
    e.page = p;
    e.from = merged[0][0];
    e.to = merged[0][1];
    const auto& rel = A.deepRelative(Q, P, 1);
    if (!isInfiniteCyclic(rel)) {
      diag << "page " << p << ": certificate group is not Z; ";
      G.valid = false;
      G.edges.push_back(e);
      continue;
    }
    const int R = std::max(R1, rel.limit->index);
    G.stage = std::max(G.stage, R);
    auto b = boundaryEnds(A, EP, R, rel.limitRepresentative(IntVector{1}, R));
    if (!b) {
      diag << "page " << p << ": certificate boundary meets a shallow component; ";
      G.valid = false;
      G.edges.push_back(e);
      continue;
    }
    e.certificateSign = (*b)[e.from] < 0 ? -1 : 1;
    e.certificateBoundary = scaled(*b, e.certificateSign);
    e.certified = e.certificateBoundary == [&] {
      IntVector w(G.vertexCount);
      w[e.from] = 1;
      w[e.to] = -1;
      return w;
    }();
    if (!e.certified) {
      G.valid = false;
      diag << "page " << p << ": certificate boundary does not join the merged pair; ";
    }
    G.edges.push_back(e);
  }
  G.diagnostic = diag.str();
  return G;
}

AdjacencyGraph graphFromEdges(int vertexCount, const std::vector<std::pair<int, int>>& edges) {
  AdjacencyGraph G;
  G.vertexCount = vertexCount;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    require(edges[i].first >= 0 && edges[i].first < vertexCount && edges[i].second >= 0 &&
                edges[i].second < vertexCount,
            "edge endpoint out of range");
    AdjacencyEdge e;
    e.page = static_cast<int>(i) + 1;
    e.from = std::min(edges[i].first, edges[i].second);
    e.to = std::max(edges[i].first, edges[i].second);
    e.certificateBoundary.assign(vertexCount, 0);
    e.certificateBoundary[e.from] += 1;
    e.certificateBoundary[e.to] -= 1;
    e.certified = true;
    G.pages.push_back(e.page);
    G.edges.push_back(e);
  }
  return G;
}

std::string AdjacencyGraph::toDot() const {
  std::ostringstream o;
  o << "graph adjacency {\n";
  for (int v = 0; v < vertexCount; ++v) o << "  v" << v << ";\n";
  for (const auto& e : edges)
    o << "  v" << e.from << " -- v" << e.to << " [label=\"" << e.page << "\"" << (e.certified ? "" : ", style=dashed")
      << "];\n";
  o << "}\n";
  return o.str();
}

std::string AdjacencyGraph::toJson() const {
  json j;
  j["pages"] = pages;
  j["vertices"] = vertexCount;
  j["stage"] = stage;
  j["edges"] = json::array();
  for (const auto& e : edges)
    j["edges"].push_back({{"page", e.page},
                          {"from", e.from},
                          {"to", e.to},
                          {"certificateBoundary", intsJson(e.certificateBoundary)},
                          {"certified", e.certified}});
  j["valid"] = valid;
  j["diagnostic"] = diagnostic;
  return j.dump();
}

CircuitVerdict verifyCircuit(const AdjacencyGraph& G) {
  CircuitVerdict out;
  const int n = G.vertexCount;
  const int m = static_cast<int>(G.edges.size());
  if (!G.valid) {
    out.witness = "graph is not valid: " + G.diagnostic;
    return out;
  }
  if (n == 0) {
    out.witness = "no vertices";
    return out;
  }
  if (m != n) {
    out.witness = std::to_string(m) + " edges on " + std::to_string(n) + " vertices";
    return out;
  }
  std::vector<std::vector<int>> inc(n);
  for (int e = 0; e < m; ++e) {
    inc[G.edges[e].from].push_back(e);
    inc[G.edges[e].to].push_back(e);
  }
  for (int v = 0; v < n; ++v)
    if (inc[v].size() != 2) {
      out.witness = "vertex " + std::to_string(v) + " has degree " + std::to_string(inc[v].size());
      return out;
    }
  std::vector<char> seen(n, 0);
  int cur = 0, prev = -1;
  for (int step = 0; step < n; ++step) {
    if (seen[cur]) {
      out.witness = "vertex " + std::to_string(cur) + " closes a cycle of length " + std::to_string(step);
      return out;
    }
    seen[cur] = 1;
    out.vertexOrder.push_back(cur);
    int e = inc[cur][0] != prev ? inc[cur][0] : inc[cur][1];
    out.edgeOrder.push_back(e);
    cur = G.edges[e].from == cur ? G.edges[e].to : G.edges[e].from;
    prev = e;
  }
  if (cur != 0) {
    out.witness = "walk of length " + std::to_string(n) + " does not return to vertex 0";
    return out;
  }
  out.isCircuit = true;
  return out;
}

// ---------------------------------------------------------------- chain complex

namespace {

// Boundary of deep H_1(Y(W_0), Y(W_P)) in end coordinates of Y(W_P), one column per basis vector.
std::optional<SparseIntMatrix> relativeBoundaryMatrix(SceneAnalysis& A, const DeepHomologyResult& C1,
                                                      const RelativeEnds& E, const std::vector<IntVector>& basis,
                                                      int R) {
  std::vector<IntVector> cols;
  for (const auto& b : basis) {
    auto c = boundaryEnds(A, E, R, C1.limitRepresentative(b, R));
    if (!c) return std::nullopt;
    cols.push_back(*c);
  }
  return SparseIntMatrix::fromColumnVectors(E.endCount, cols);
}

}  // namespace

AdjacencyChainComplex adjacencyChainComplex(SceneAnalysis& A, const AdjacencyGraph& G) {
  AdjacencyChainComplex out;
  out.pages = G.pages;
  const PageSet& P = G.pages;
  const int k = static_cast<int>(P.size());
  std::ostringstream diag;
  if (!G.valid || static_cast<int>(G.edges.size()) != k) {
    out.diagnostic = "needs one certified edge per page";
    return out;
  }
  const auto& E = A.ends(P);
  const auto& C1 = A.deepRelative({}, P, 1);
  if (!C1.limit || !C1.limit->group.isomorphic(FgAbGroup::free(k))) {
    out.diagnostic = "deep H_1(Y(W_0), Y(W_P)) is not free of rank k";
    return out;
  }
  std::vector<std::vector<Integer>> rows;
  std::vector<IntVector> excImage;
  int R = std::max({C1.limit->index, E.R0, G.stage});
  for (int i = 0; i < k; ++i) {
    const int p = P[i];
    const auto& rel0i = A.deepRelative({}, {p}, 1);
    const auto& relKi = A.deepRelative(withoutPage(P, p), P, 1);
    if (!isInfiniteCyclic(rel0i) || !isInfiniteCyclic(relKi)) {
      out.diagnostic = "page " + std::to_string(p) + ": factor group is not Z";
      return out;
    }
    auto iota = deepInducedMap(C1, rel0i);
    rows.push_back(iota.matrix().toDense()[0]);
    auto exc = deepInducedMap(relKi, rel0i);
    out.excisionIso.push_back(isIsomorphism(exc));
    excImage.push_back(exc.apply(IntVector{G.edges[i].certificateSign}));
    R = std::max(R, rel0i.limit->index);
  }
  out.stage = R;
  auto I = homFromMatrix(C1.limit->group, FgAbGroup::free(k), SparseIntMatrix::fromDense(rows, k));
  out.splittingIso = isIsomorphism(I);
  std::vector<IntVector> incidenceCols;
  for (const auto& e : G.edges) incidenceCols.push_back(e.certificateBoundary);
  out.incidence = SparseIntMatrix::fromColumnVectors(G.vertexCount, incidenceCols);
  if (!out.splittingIso || R > A.options().Rmax ||
      !std::all_of(out.excisionIso.begin(), out.excisionIso.end(), [](bool b) { return b; })) {
    out.diagnostic = "splitting or excision map is not an isomorphism";
    return out;
  }
  auto Iinv = inverse(I);
  std::vector<IntVector> basis;
  for (int i = 0; i < k; ++i) {
    IntVector t(k);
    t[i] = excImage[i][0];
    basis.push_back(Iinv.apply(t));
  }
  auto B = relativeBoundaryMatrix(A, C1, E, basis, R);
  if (!B) {
    out.diagnostic = "boundary meets a shallow component";
    return out;
  }
  out.boundary = *B;
  out.matchesIncidence = true;
  for (int i = 0; i < k; ++i) {
    auto col = out.boundary.denseColumn(i);
    auto inc = out.incidence.denseColumn(i);
    int s = col == inc ? 1 : col == scaled(inc, -1) ? -1 : 0;
    out.columnSigns.push_back(s);
    if (s == 0) out.matchesIncidence = false;
  }
  out.rankBoundary = smithNormalForm(out.boundary).rank();
  out.H1 = FgAbGroup::free(k - out.rankBoundary);
  out.H0 = cokernelPresentation(out.boundary);
  out.diagnostic = diag.str();
  return out;
}

std::string AdjacencyChainComplex::toJson() const {
  json j;
  j["pages"] = pages;
  j["stage"] = stage;
  j["boundary"] = boundary.rows() ? boundary.dump() : "";
  j["incidence"] = incidence.rows() ? incidence.dump() : "";
  j["columnSigns"] = columnSigns;
  j["matchesIncidence"] = matchesIncidence;
  j["splittingIso"] = splittingIso;
  j["excisionIso"] = excisionIso;
  j["rankBoundary"] = rankBoundary;
  j["H0"] = H0.str();
  j["H1"] = H1.str();
  j["diagnostic"] = diagnostic;
  return j.dump();
}

// ---------------------------------------------------------------- Jordan cycle

JordanCycle jordanCycle(SceneAnalysis& A, int orientation) {
  JordanCycle out;
  out.orientation = orientation;
  const auto& sc = A.scene();
  const PageSet P = allPages(sc.k());
  const int k = sc.k();
  const auto& D0 = A.deep({}, 1);
  if (!isInfiniteCyclic(D0)) {
    out.diagnostic = "deep H_1 of the spine complement is not Z";
    return out;
  }
  const auto& C1 = A.deepRelative({}, P, 1);
  int R = std::max(D0.limit->index, C1.limit ? C1.limit->index : A.options().Rmax + 1);
  for (int p : P) {
    const auto& rel = A.deepRelative({}, {p}, 1);
    out.factorIso.push_back(rel.limit.has_value() && isIsomorphism(deepInducedMap(D0, rel)));
    if (rel.limit) R = std::max(R, rel.limit->index);
  }
  if (R > A.options().Rmax) {
    out.diagnostic = "no common stable stage";
    return out;
  }
  out.stage = R;
  out.generatorCycle = D0.limitRepresentative(IntVector{1}, R);

  // u: dual of the upward spine edge at the origin
  const auto& S = A.duality(orientation);
  const auto& Z = *sc.domain.complex;
  int a = Z.findVertex({0, 0, 0}), b = Z.findVertex({0, 0, 1});
  std::array<int, 2> ab{std::min(a, b), std::max(a, b)};
  const int edge = Z.find(1, ab);
  require(edge >= 0, "spine edge missing from the domain");
  Chain u = makeChain(1, {{edge, a < b ? Integer(1) : Integer(-1)}});
  auto Zs = sc.domainPart({});
  auto Hs = HomologyModel::cohomologyOfPair(Zs, domainFrontier(S, *Zs));
  const auto& H1s = Hs->group(1);
  const IntVector uc = H1s.coordinates(u);

  std::ostringstream diag;
  for (int p : P) {
    auto Zp = sc.domainPart({p});
    auto bottomModel =
        HomologyModel::cohomologyOfPair(Zp, std::make_shared<const Subcomplex>(Zs->unite(*domainFrontier(S, *Zp))));
    const auto& bottom = bottomModel->group(2);
    auto du = coboundaryConnecting(H1s, bottom, *Zp).apply(uc);
    if (!bottom.group().isomorphic(FgAbGroup::free(1)) || du.size() != 1 || abs(du[0]) != 1) {
      diag << "page " << p << ": delta u does not generate H^2; ";
      out.coordinates.push_back(0);
      continue;
    }
    const auto& top = A.deepRelative({}, {p}, 1).stage(R);
    auto V = relativeDualityStageMap(S, A.filtration({p}).stage(R), A.filtration({}).stage(R), top, bottom);
    auto x = top.coordinates(out.generatorCycle);
    out.coordinates.push_back(V.apply(x)[0] * du[0]);
  }
  out.normalizationSign = out.coordinates.empty() ? 0 : signOf(out.coordinates[0]);
  for (const auto& c : out.coordinates) out.normalized.push_back(c * out.normalizationSign);

  // the image of the generator in deep H_1(Y(W_0), Y(W_P)) spans the cycles of the adjacency complex
  if (C1.limit && C1.limit->group.isomorphic(FgAbGroup::free(k))) {
    const auto& E = A.ends(P);
    std::vector<IntVector> basis;
    for (int i = 0; i < C1.limit->group.generatorCount(); ++i) basis.push_back(unit(k, i));
    auto B = E.R0 <= R ? relativeBoundaryMatrix(A, C1, E, basis, R) : std::nullopt;
    if (B) {
      auto y = deepInducedMap(D0, C1).apply(IntVector{1});
      auto By = B->apply(y);
      out.inKernel = std::all_of(By.begin(), By.end(), [](const Integer& v) { return v == 0; });
      Integer g = 0;
      for (const auto& v : y) g = boost::multiprecision::gcd(g, v);
      out.generatesH1 = out.inKernel && g == 1 && k - smithNormalForm(*B).rank() == 1;
    } else {
      diag << "boundary of the relative classes not readable at stage " << R << "; ";
    }
  }
  out.diagnostic = diag.str();
  return out;
}

std::string JordanCycle::toJson() const {
  json j;
  j["orientation"] = orientation;
  j["stage"] = stage;
  j["coordinates"] = intsJson(coordinates);
  json gen = json::array();
  for (const auto& [id, c] : generatorCycle.terms) gen.push_back({{"edge", id}, {"coefficient", c.str()}});
  j["generatorCycle"] = gen;
  j["normalization"] = {{"factorGenerators", "duality image of delta u, u dual to the upward spine edge"},
                        {"sign", normalizationSign},
                        {"normalized", intsJson(normalized)}};
  j["factorIso"] = factorIso;
  j["inKernel"] = inKernel;
  j["generatesH1"] = generatesH1;
  j["diagnostic"] = diagnostic;
  return j.dump();
}

// ---------------------------------------------------------------- collapse maps

CollapseMap collapseMap(SceneAnalysis& A, int page) { return collapseMap(A, allPages(A.scene().k()), page); }

CollapseMap collapseMap(SceneAnalysis& A, const PageSet& P, int page) {
  require(std::find(P.begin(), P.end(), page) != P.end(), "collapsed page is not in the book");
  CollapseMap out;
  out.source = P;
  out.collapsed = page;
  const PageSet Q = withoutPage(P, page);
  out.from = adjacencyGraph(A, P);
  out.to = adjacencyGraph(A, Q);
  std::ostringstream diag;
  const int R = std::max(A.ends(P).R0, A.ends(Q).R0);
  if (R > A.options().Rmax) {
    out.diagnostic = "ends not stable before the last stage";
    return out;
  }
  out.vertexMap = A.endInclusion(P, Q, R);
  bool ok = out.from.valid && out.to.valid;
  std::vector<char> hitVertex(out.to.vertexCount, 0), hitEdge(out.to.edges.size(), 0);
  for (int v : out.vertexMap) {
    if (v < 0) {
      ok = false;
      diag << "a vertex maps to a shallow component; ";
    } else {
      hitVertex[v] = 1;
    }
  }
  for (const auto& e : out.from.edges) {
    const int a = out.vertexMap[e.from], b = out.vertexMap[e.to];
    int target = -1;
    for (std::size_t f = 0; f < out.to.edges.size(); ++f)
      if (out.to.edges[f].page == e.page) target = static_cast<int>(f);
    if (e.page == page || target < 0) {
      out.edgeTarget.push_back(-1);
      out.edgeVertex.push_back(a == b ? a : -1);
      if (a != b) {
        ok = false;
        diag << "edge " << e.page << " has no target and its ends do not merge; ";
      }
      if (e.page != page) {
        out.degenerate = true;
        diag << "edge " << e.page << " goes to a vertex of a degenerate target; ";
      }
      continue;
    }
    out.edgeTarget.push_back(target);
    out.edgeVertex.push_back(-1);
    hitEdge[target] = 1;
    const auto& f = out.to.edges[target];
    if (std::minmax(a, b) != std::minmax(f.from, f.to)) {
      ok = false;
      diag << "edge " << e.page << " endpoints do not match; ";
    }
    // excision square: the certificate goes to +-certificate and boundaries correspond
    const auto& src = A.deepRelative(withoutPage(P, e.page), P, 1);
    const auto& tgt = A.deepRelative(withoutPage(Q, e.page), Q, 1);
    bool square = false;
    if (src.limit && tgt.limit && a >= 0 && b >= 0) {
      auto exc = deepInducedMap(src, tgt);
      if (isIsomorphism(exc)) {
        const int eps = static_cast<int>(exc.apply(IntVector{1})[0]) * e.certificateSign * f.certificateSign;
        IntVector pushed(out.to.vertexCount);
        for (int v = 0; v < out.from.vertexCount; ++v) pushed[out.vertexMap[v]] += e.certificateBoundary[v];
        square = pushed == scaled(f.certificateBoundary, eps);
      }
    }
    out.excisionSquares.push_back(square);
    ok = ok && square;
  }
  for (char h : hitVertex) ok = ok && h;
  for (char h : hitEdge) ok = ok && h;
  out.collapsesExactly = ok && !out.degenerate;
  out.diagnostic = diag.str();
  return out;
}

std::string CollapseMap::toJson() const {
  json j;
  j["source"] = source;
  j["collapsed"] = collapsed;
  j["from"] = json::parse(from.toJson());
  j["to"] = json::parse(to.toJson());
  j["vertexMap"] = vertexMap;
  j["edgeTarget"] = edgeTarget;
  j["edgeVertex"] = edgeVertex;
  j["excisionSquares"] = excisionSquares;
  j["collapsesExactly"] = collapsesExactly;
  j["degenerate"] = degenerate;
  j["diagnostic"] = diagnostic;
  return j.dump();
}

// ---------------------------------------------------------------- deep containment

DeepContainment deepContainmentCheck(SceneAnalysis& A, const PageSet& kept) {
  const auto& sc = A.scene();
  DeepContainment out;
  out.kept = kept;
  const auto& E = A.ends(kept);
  out.R0 = E.R0;
  out.holds = E.R0 <= A.options().Rmax;
  if (!out.holds) return out;
  const int j = E.R0 - A.options().Rmin;
  const auto& lab = E.components[j].label;
  std::vector<int> labelEnd(E.components[j].count, -1);
  for (int e = 0; e < E.endCount; ++e) labelEnd[E.perStage[j][e]] = e;

  Subcomplex whole(sc.domain.complex, true);
  auto dist = graphDistances(whole, sc.domainPart(kept)->vertexIds());
  const auto& spine = *sc.domain.spine;
  for (int p : allPages(sc.k())) {
    if (std::find(kept.begin(), kept.end(), p) != kept.end()) continue;
    std::vector<int> verts;
    int far = 0;
    for (int v : sc.domain.pages[p - 1]->vertexIds())
      if (!spine.contains(0, v)) {
        verts.push_back(v);
        far = std::max(far, dist[v]);
      }
    int found = -1, end = -1;
    for (int M = 0; M < far && found < 0; ++M) {
      int label = -2;
      bool single = true;
      for (int v : verts) {
        if (dist[v] <= M) continue;
        const int l = lab[sc.fsharp.vertexTarget[v]];
        if (label == -2) label = l;
        single = single && l == label && l >= 0;
      }
      if (single && label >= 0 && labelEnd[label] >= 0) {
        found = M;
        end = labelEnd[label];
      }
    }
    out.pages.push_back(p);
    out.M.push_back(found);
    out.end.push_back(end);
    out.holds = out.holds && found >= 0;
  }
  return out;
}

std::string DeepContainment::toJson() const {
  json j;
  j["kept"] = kept;
  j["R0"] = R0;
  j["pages"] = pages;
  j["M"] = M;
  j["end"] = end;
  j["holds"] = holds;
  return j.dump();
}

// ---------------------------------------------------------------- symmetry

namespace {

Point act(const LatticeIsometry& g, const Point& p) {
  Point q{};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) q[r] += g[r][c] * p[c];
  return q;
}

}  // namespace

SymmetryAction sceneSymmetryAction(SceneAnalysis& A, const LatticeIsometry& g) {
  SymmetryAction out;
  out.g = g;
  int positive = 0, negative = 0;
  for (int r = 0; r < 3; ++r) {
    int rowNonZero = 0, colNonZero = 0;
    for (int c = 0; c < 3; ++c) {
      require(std::abs(g[r][c]) <= 1, "isometry entries must be 0 or +-1");
      rowNonZero += g[r][c] != 0;
      colNonZero += g[c][r] != 0;
      positive += g[r][c] > 0;
      negative += g[r][c] < 0;
    }
    require(rowNonZero == 1 && colNonZero == 1, "isometry must be a signed permutation");
  }
  out.simplicial = positive == 3 || negative == 3;

  const auto& sc = A.scene();
  const int k = sc.k();
  const auto& Z = *sc.domain.complex;
  const auto& spine = *sc.domain.spine;
  std::vector<std::set<Point>> pagePts(k);
  for (int i = 0; i < k; ++i)
    for (int v : sc.domain.pages[i]->vertexIds())
      if (!spine.contains(0, v)) pagePts[i].insert(Z.point(v));
  for (int i = 0; i < k; ++i) {
    std::set<Point> img;
    for (const auto& p : pagePts[i]) img.insert(act(g, p));
    int target = -1;
    for (int j = 0; j < k; ++j)
      if (pagePts[j] == img) target = j;
    if (target < 0) throw ContractViolation("isometry does not preserve f(W_k): page " + std::to_string(i + 1));
    out.pagePermutation.push_back(target);
  }

  // ends: follow the vertex of each deep component farthest from f(W_k)
  const PageSet P = allPages(k);
  const auto& E = A.ends(P);
  const auto& W = *sc.window;
  std::ostringstream diag;
  const int R = E.R0;
  bool ok = R <= A.options().Rmax;
  if (ok) {
    const int j = R - A.options().Rmin;
    const auto& lab = E.components[j].label;
    auto dist = graphDistances(W.full(), sc.image(P)->vertexIds());
    std::vector<int> best(E.endCount, -1);
    for (int v = 0; v < static_cast<int>(lab.size()); ++v)
      for (int e = 0; e < E.endCount; ++e)
        if (lab[v] >= 0 && lab[v] == E.perStage[j][e] && (best[e] < 0 || dist[v] > dist[best[e]])) best[e] = v;
    std::vector<char> hit(E.endCount, 0);
    for (int e = 0; e < E.endCount; ++e) {
      const int w = W.vertexId(act(g, W.complex->point(best[e])));
      int target = -1;
      for (int f = 0; f < E.endCount; ++f)
        if (lab[w] == E.perStage[j][f]) target = f;
      out.endPermutation.push_back(target);
      if (target < 0 || hit[target]) {
        ok = false;
        diag << "end " << e << " has no distinct image end; ";
      } else {
        hit[target] = 1;
      }
    }
  } else {
    diag << "ends not stable before the last stage; ";
  }

  if (ok) {
    auto G = adjacencyGraph(A, P);
    for (const auto& e : G.edges) {
      const int tp = out.pagePermutation[e.page - 1] + 1;
      int s = 0;
      for (const auto& f : G.edges)
        if (f.page == tp) {
          IntVector pushed(G.vertexCount);
          for (int v = 0; v < G.vertexCount; ++v) pushed[out.endPermutation[v]] += e.certificateBoundary[v];
          s = pushed == f.certificateBoundary ? 1 : pushed == scaled(f.certificateBoundary, -1) ? -1 : 0;
        }
      out.edgeSigns.push_back(s);
      if (s == 0) {
        ok = false;
        diag << "edge " << e.page << " is not carried to the edge of page " << tp << "; ";
      }
    }
  }
  out.compatible = ok;
  out.diagnostic = diag.str();
  return out;
}

std::string SymmetryAction::toJson() const {
  json j;
  j["g"] = g;
  j["simplicial"] = simplicial;
  j["pagePermutation"] = pagePermutation;
  j["endPermutation"] = endPermutation;
  j["edgeSigns"] = edgeSigns;
  j["compatible"] = compatible;
  j["diagnostic"] = diagnostic;
  return j.dump();
}

}  // namespace deepho
