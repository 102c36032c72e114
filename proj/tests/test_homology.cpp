#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <random>

#include <json.hpp>

#include "deepho/errors.hpp"
#include "deepho/homology.hpp"

using namespace deepho;

namespace {

std::shared_ptr<const Subcomplex> whole(ComplexPtr X) { return std::make_shared<Subcomplex>(X, true); }

// 3x3 grid torus with two triangles per square.
ComplexPtr torus() {
  std::vector<Point> pts;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) pts.push_back({i, j, 0});
  auto id = [](int i, int j) { return ((i + 3) % 3) * 3 + (j + 3) % 3; };
  std::vector<std::vector<int>> tri;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      tri.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      tri.push_back({id(i, j), id(i, j + 1), id(i + 1, j + 1)});
    }
  return SimplicialComplex::build(3, pts, tri);
}

// Six-vertex projective plane.
ComplexPtr projectivePlane() {
  std::vector<Point> pts;
  for (int i = 0; i < 6; ++i) pts.push_back({i, 0, 0});
  std::vector<std::vector<int>> tri = {{0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 5}, {0, 5, 1},
                                       {1, 2, 4}, {2, 3, 5}, {3, 4, 1}, {4, 5, 2}, {5, 1, 3}};
  return SimplicialComplex::build(3, pts, tri);
}

ComplexPtr tetrahedronBoundary() {
  std::vector<Point> pts = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  return SimplicialComplex::build(3, pts, {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}});
}

// Reference ranks from full boundary matrices, no reductions.
FgAbGroup oracleHomology(const ChainComplexZ& C, int g) {
  auto rankOf = [&](int k) {
    if (k < 1 || k > C.top()) return 0;
    return static_cast<int>(invariantFactors(C.boundaryMatrix(k)).size());
  };
  int free = C.size(g) - rankOf(g) - rankOf(g + 1);
  std::vector<Integer> torsion;
  if (g + 1 <= C.top())
    for (const auto& d : invariantFactors(C.boundaryMatrix(g + 1)))
      if (d != 1) torsion.push_back(d);
  return FgAbGroup(free, torsion);
}

void checkRepresentatives(const HomologyGroup& H) {
  const int n = H.group().generatorCount();
  for (int k = 0; k < n; ++k) {
    IntVector unit(n);
    unit[k] = 1;
    REQUIRE(H.coordinates(H.representatives()[k]) == unit);
  }
}

}  // namespace

TEST_CASE("fixture homology", "[homology]") {
  SECTION("torus") {
    auto M = HomologyModel::ofPair(whole(torus()));
    REQUIRE(M->group(0).group().isomorphic(FgAbGroup::free(1)));
    REQUIRE(M->group(1).group().isomorphic(FgAbGroup::free(2)));
    REQUIRE(M->group(2).group().isomorphic(FgAbGroup::free(1)));
    REQUIRE(M->group(0, true).group().isTrivial());
    for (int d = 0; d <= 2; ++d) checkRepresentatives(M->group(d));
  }
  SECTION("projective plane has Z/2 in degree one") {
    auto M = HomologyModel::ofPair(whole(projectivePlane()));
    REQUIRE(M->group(1).group().isomorphic(FgAbGroup(0, {2})));
    REQUIRE(M->group(2).group().isTrivial());
    checkRepresentatives(M->group(1));
    auto C = HomologyModel::cohomologyOfPair(whole(projectivePlane()));
    REQUIRE(C->group(1).group().isTrivial());
    REQUIRE(C->group(2).group().isomorphic(FgAbGroup(0, {2})));
  }
  SECTION("sphere") {
    auto M = HomologyModel::ofPair(whole(tetrahedronBoundary()));
    REQUIRE(M->group(2).group().isomorphic(FgAbGroup::free(1)));
    REQUIRE(M->group(1).group().isTrivial());
  }
}

TEST_CASE("windows are acyclic and relative to the boundary look like a sphere", "[homology]") {
  auto W = buildWindow(3, 3);
  auto X = whole(W.complex);
  auto dX = std::make_shared<Subcomplex>(W.boundary);
  auto M = HomologyModel::ofPair(X);
  for (int d = 0; d <= 3; ++d) REQUIRE(M->group(d, true).group().isTrivial());
  REQUIRE(M->remainderCells() == 1);
  auto R = HomologyModel::ofPair(X, dX);
  REQUIRE(R->group(3).group().isomorphic(FgAbGroup::free(1)));
  for (int d = 0; d < 3; ++d) REQUIRE(R->group(d).group().isTrivial());
  auto B = HomologyModel::ofPair(dX);
  REQUIRE(B->group(2).group().isomorphic(FgAbGroup::free(1)));
  auto dm = connectingHomomorphism(R->group(3), B->group(2));
  REQUIRE(isIsomorphism(dm));
  auto Co = HomologyModel::cohomologyOfPair(X, dX);
  REQUIRE(Co->group(3).group().isomorphic(FgAbGroup::free(1)));
  REQUIRE(Co->group(2).group().isTrivial());
}

TEST_CASE("reductions preserve homology of random subcomplexes", "[homology][property]") {
  auto W = buildWindow(3, 2);
  std::mt19937_64 rng(7);
  std::bernoulli_distribution keep(0.55);
  for (int trial = 0; trial < 12; ++trial) {
    std::vector<std::pair<int, int>> tops;
    for (int id = 0; id < W.complex->count(3); ++id)
      if (keep(rng)) tops.emplace_back(3, id);
    for (int id = 0; id < W.complex->count(2); id += 7)
      if (keep(rng)) tops.emplace_back(2, id);
    auto K = std::make_shared<Subcomplex>(Subcomplex::closureOf(W.complex, tops));
    std::shared_ptr<const Subcomplex> L;
    if (trial % 2) L = std::make_shared<Subcomplex>(K->intersect(W.boundary));
    auto C = chainComplexOf(K, L);
    auto M = HomologyModel::ofComplex(C);
    for (int d = 0; d <= 3; ++d) {
      REQUIRE(M->group(d).group().isomorphic(oracleHomology(C, d)));
      checkRepresentatives(M->group(d));
    }
    auto rc = collapsePreprocess(C);
    for (int g = 0; g <= 3; ++g) {
      IntVector y(rc->size(g));
      for (auto& v : y) v = static_cast<int>(rng() % 5) - 2;
      REQUIRE(rc->project(g, rc->lift(g, y)) == y);
    }
  }
}

TEST_CASE("reading rejects non-cycles and foreign terms", "[homology]") {
  auto X = torus();
  auto M = HomologyModel::ofPair(whole(X));
  REQUIRE_THROWS_AS(M->group(1).coordinates(makeChain(1, {{0, 1}})), ContractViolation);
  auto b = boundary(*X, makeChain(2, {{0, 1}}));
  REQUIRE(M->group(1).coordinates(b) == IntVector{0, 0});
}

TEST_CASE("segment relative to its ends", "[homology]") {
  std::vector<Point> pts;
  for (int i = 0; i < 5; ++i) pts.push_back({i, 0, 0});
  auto X = SimplicialComplex::build(1, pts, {{0, 1}, {1, 2}, {2, 3}, {3, 4}});
  auto Z = whole(X);
  Subcomplex endpoints(X);
  endpoints.insert(0, 0);
  endpoints.insert(0, 4);
  auto ends = std::make_shared<const Subcomplex>(endpoints);
  auto H = compactSupportCohomology(Z, ends, 1);
  REQUIRE(H.group().isomorphic(FgAbGroup::free(1)));
  // the dual of any single edge generates
  auto c = H.coordinates(makeChain(1, {{2, 1}}));
  REQUIRE((c == IntVector{1} || c == IntVector{-1}));
  auto H0 = compactSupportCohomology(Z, ends, 0);
  REQUIRE(H0.group().isTrivial());
}

TEST_CASE("abstract complexes from matrices", "[homology]") {
  // one vertex, one loop, a disk attached by degree 2
  std::vector<SparseIntMatrix> bd(3);
  bd[1] = SparseIntMatrix(1, 1);
  bd[2] = SparseIntMatrix::fromDense({{2}});
  auto C = ChainComplexZ::fromMatrices({1, 1, 1}, bd);
  auto M = HomologyModel::ofComplex(C);
  REQUIRE(M->group(1).group().isomorphic(FgAbGroup(0, {2})));
  REQUIRE(M->group(0).group().isomorphic(FgAbGroup::free(1)));
}

TEST_CASE("long exact sequence of random pairs", "[homology][property]") {
  auto W = buildWindow(3, 2);
  std::mt19937_64 rng(31);
  std::bernoulli_distribution keep(0.6), sub(0.4);
  for (int trial = 0; trial < 8; ++trial) {
    std::vector<std::pair<int, int>> tops, inner;
    for (int id = 0; id < W.complex->count(3); ++id)
      if (keep(rng)) {
        tops.emplace_back(3, id);
        if (sub(rng)) inner.emplace_back(3, id);
      }
    auto K = std::make_shared<const Subcomplex>(Subcomplex::closureOf(W.complex, tops));
    auto L = std::make_shared<const Subcomplex>(Subcomplex::closureOf(W.complex, inner));
    std::vector<HomologyGroup> HL, HK, HKL;
    for (int d = 0; d <= 3; ++d) {
      HL.push_back(homology(L, nullptr, d));
      HK.push_back(homology(K, nullptr, d));
      HKL.push_back(homology(K, L, d));
    }
    for (int d = 0; d <= 3; ++d) {
      auto i = inducedMapOnHomology(HL[d], HK[d]);
      auto j = inducedMapOnHomology(HK[d], HKL[d]);
      REQUIRE(isExactAt(i, j));
      if (d == 0) continue;
      auto del = connectingHomomorphism(HKL[d], HL[d - 1]);
      REQUIRE(isExactAt(j, del));
      REQUIRE(isExactAt(del, inducedMapOnHomology(HL[d - 1], HK[d - 1])));
    }
  }
}

TEST_CASE("homology groups serialize with lattice representatives", "[homology]") {
  auto T = homology(whole(torus()), nullptr, 1);
  auto j = nlohmann::json::parse(T.toJson());
  REQUIRE(j["degree"] == 1);
  REQUIRE(j["freeRank"] == 2);
  REQUIRE(j["torsion"].empty());
  REQUIRE(j["representatives"].size() == 2);
  for (const auto& rep : j["representatives"]) {
    // each representative is a cycle: boundary mass cancels at every vertex
    std::map<std::vector<int>, Integer> mass;
    for (const auto& t : rep) {
      REQUIRE(t["simplex"].size() == 2);
      Integer c(t["c"].get<std::string>());
      mass[t["simplex"][1].get<std::vector<int>>()] += c;
      mass[t["simplex"][0].get<std::vector<int>>()] -= c;
    }
    for (const auto& [p, m] : mass) REQUIRE(m == 0);
  }
  auto P = nlohmann::json::parse(homology(whole(projectivePlane()), nullptr, 1).toJson());
  REQUIRE(P["freeRank"] == 0);
  REQUIRE(P["torsion"] == nlohmann::json::array({"2"}));
}
