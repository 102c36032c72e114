#include <catch2/catch_amalgamated.hpp>

#include <chrono>
#include <iostream>

#include "deepho/book_scenes.hpp"
#include "deepho/errors.hpp"

using namespace deepho;

namespace {

std::shared_ptr<SceneAnalysis> analyze(int k, int T, int S, int Rmax = 3) {
  auto scene = std::make_shared<const BookScene>(embedBookInWindow(buildBook(k, defaultDirections(k), T), S));
  SceneOptions opt;
  opt.Rmin = 1;
  opt.Rmax = Rmax;
  opt.deep.jobs = 4;
  return std::make_shared<SceneAnalysis>(scene, opt);
}

}  // namespace

TEST_CASE("staircase pages", "[book]") {
  for (PageDirection d : {PageDirection{2, 1}, PageDirection{-3, 1}, PageDirection{1, -1}, PageDirection{0, -1}}) {
    auto path = staircasePath(d, 9);
    REQUIRE(path.size() > 3);
    for (std::size_t t = 1; t < path.size(); ++t) {
      const int dx = path[t][0] - path[t - 1][0], dy = path[t][1] - path[t - 1][1];
      REQUIRE(std::abs(dx) <= 1);
      REQUIRE(std::abs(dy) <= 1);
      REQUIRE(dx * dy >= 0);
      REQUIRE(dx * d.a + dy * d.b > 0);
      // stays within one period of the ray
      REQUIRE(std::abs(d.b * path[t][0] - d.a * path[t][1]) <= std::abs(d.a) + std::abs(d.b));
    }
  }
  REQUIRE_THROWS_AS(staircasePath({2, 2}, 5), ContractViolation);
}

TEST_CASE("books are contractible with theta-graph frontier", "[book]") {
  for (int k = 1; k <= 4; ++k) {
    auto W = buildBook(k, defaultDirections(k), 5);
    REQUIRE(W.eulerCharacteristic() == 1);
    auto H2 = compactSupportCohomology(std::make_shared<const Subcomplex>(W.complex, true), W.frontier, 2);
    REQUIRE(H2.group().isomorphic(FgAbGroup::free(k - 1)));
    auto H1 = compactSupportCohomology(std::make_shared<const Subcomplex>(W.complex, true), W.frontier, 1);
    REQUIRE(H1.group().isTrivial());
    auto H0 = homology(W.pages[0], nullptr, 0);
    REQUIRE(H0.group().isomorphic(FgAbGroup::free(1)));
  }
  REQUIRE_THROWS_AS(buildBook(2, {{1, 0}, {1, 0}}, 5), ContractViolation);
  REQUIRE_THROWS_AS(buildBook(2, {{1, 0}, {5, 1}}, 6), ContractViolation);
  REQUIRE_THROWS_AS(embedBookInWindow(buildBook(2, defaultDirections(2), 6), 7), ContractViolation);
}

TEST_CASE("adjacency of a three-page book", "[book]") {
  auto t0 = std::chrono::steady_clock::now();
  auto A = analyze(3, 6, 8);
  auto G = adjacencyGraph(*A);
  INFO(G.toJson());
  REQUIRE(G.valid);
  REQUIRE(G.vertexCount == 3);
  REQUIRE(G.edges.size() == 3);
  auto C = verifyCircuit(G);
  INFO(C.witness);
  REQUIRE(C.isCircuit);
  REQUIRE_FALSE(G.toDot().empty());

  auto cx = adjacencyChainComplex(*A, G);
  INFO(cx.toJson());
  REQUIRE(cx.splittingIso);
  REQUIRE(cx.matchesIncidence);
  REQUIRE(cx.rankBoundary == 2);
  REQUIRE(cx.H0.isomorphic(FgAbGroup::free(1)));
  REQUIRE(cx.H1.isomorphic(FgAbGroup::free(1)));

  for (int o : {1, -1}) {
    auto J = jordanCycle(*A, o);
    INFO(J.toJson());
    REQUIRE(J.coordinates.size() == 3);
    for (const auto& c : J.coordinates) REQUIRE(abs(c) == 1);
    for (const auto& c : J.normalized) REQUIRE(c == 1);
    REQUIRE(J.generatesH1);
  }
  auto t1 = std::chrono::steady_clock::now();
  std::cerr << "k=3 S=8: " << std::chrono::duration<double>(t1 - t0).count() << " s\n";
}

TEST_CASE("small books: circuits and degenerate collapses", "[book]") {
  auto A1 = analyze(1, 6, 8);
  auto G1 = adjacencyGraph(*A1);
  REQUIRE(G1.valid);
  REQUIRE(G1.vertexCount == 1);
  REQUIRE(G1.edges.empty());
  REQUIRE_FALSE(verifyCircuit(G1).isCircuit);

  auto A2 = analyze(2, 6, 8);
  auto G2 = adjacencyGraph(*A2);
  REQUIRE(G2.vertexCount == 2);
  REQUIRE(G2.edges.size() == 2);
  REQUIRE(verifyCircuit(G2).isCircuit);
  auto cx = adjacencyChainComplex(*A2, G2);
  REQUIRE(cx.matchesIncidence);
  for (int c = 0; c < 2; ++c) {
    auto col = cx.boundary.denseColumn(c);
    REQUIRE(((col[0] == 1 && col[1] == -1) || (col[0] == -1 && col[1] == 1)));
  }
  auto m = collapseMap(*A2, 1);
  INFO(m.toJson());
  REQUIRE(m.degenerate);
  REQUIRE_FALSE(m.collapsesExactly);
  REQUIRE(m.to.vertexCount == 1);
  REQUIRE(m.edgeVertex[0] == 0);
  REQUIRE(m.edgeVertex[1] == 0);
}

TEST_CASE("collapse maps of a four-page book", "[book]") {
  auto A = analyze(4, 6, 8);
  auto G = adjacencyGraph(*A);
  REQUIRE(verifyCircuit(G).isCircuit);
  for (int i = 1; i <= 4; ++i) {
    auto m = collapseMap(*A, i);
    INFO(m.toJson());
    REQUIRE(m.collapsesExactly);
    REQUIRE(verifyCircuit(m.to).isCircuit);
    REQUIRE(m.edgeTarget[i - 1] == -1);
  }
  // collapsing 1 then 2 agrees with 2 then 1 on vertices and edges
  auto a = collapseMap(*A, 1), ab = collapseMap(*A, {2, 3, 4}, 2);
  auto b = collapseMap(*A, 2), ba = collapseMap(*A, {1, 3, 4}, 1);
  REQUIRE(ab.collapsesExactly);
  REQUIRE(ba.collapsesExactly);
  for (int v = 0; v < G.vertexCount; ++v) REQUIRE(ab.vertexMap[a.vertexMap[v]] == ba.vertexMap[b.vertexMap[v]]);
  for (int e = 0; e < 4; ++e) {
    auto through = [](const CollapseMap& first, const CollapseMap& second, int edge) {
      const int mid = first.edgeTarget[edge];
      if (mid < 0) return -1;
      const int last = second.edgeTarget[mid];
      return last < 0 ? -1 : second.to.edges[last].page;
    };
    REQUIRE(through(a, ab, e) == through(b, ba, e));
  }

  SECTION("deep containment") {
    for (int i = 1; i <= 4; ++i) {
      auto d = deepContainmentCheck(*A, withoutPage(allPages(4), i));
      INFO(d.toJson());
      REQUIRE(d.holds);
      // the far part of page i sits in the end where its two neighbors merged
      auto phi = A->endInclusion(allPages(4), withoutPage(allPages(4), i), std::max(A->ends(allPages(4)).R0, d.R0));
      const auto& e = G.edges[i - 1];
      REQUIRE(d.end[0] == phi[e.from]);
    }
    auto d = deepContainmentCheck(*A, {1, 3});
    INFO(d.toJson());
    REQUIRE(d.holds);
    REQUIRE(d.pages == std::vector<int>{2, 4});
    REQUIRE(d.end[0] != d.end[1]);
  }

  SECTION("symmetries") {
    LatticeIsometry negate{{{-1, 0, 0}, {0, -1, 0}, {0, 0, -1}}};
    auto s = sceneSymmetryAction(*A, negate);
    INFO(s.toJson());
    REQUIRE(s.simplicial);
    REQUIRE(s.compatible);
    REQUIRE(s.pagePermutation == std::vector<int>{2, 3, 0, 1});
    LatticeIsometry rotX{{{1, 0, 0}, {0, -1, 0}, {0, 0, -1}}};
    auto r = sceneSymmetryAction(*A, rotX);
    REQUIRE_FALSE(r.simplicial);
    REQUIRE(r.compatible);
    REQUIRE(r.pagePermutation == std::vector<int>{0, 3, 2, 1});
    LatticeIsometry swapXZ{{{0, 0, 1}, {0, 1, 0}, {1, 0, 0}}};
    REQUIRE_THROWS_AS(sceneSymmetryAction(*A, swapXZ), ContractViolation);
  }
}

TEST_CASE("reflection of a three-page book", "[book]") {
  auto A = analyze(3, 6, 8);
  LatticeIsometry swapXY{{{0, 1, 0}, {1, 0, 0}, {0, 0, 1}}};
  auto s = sceneSymmetryAction(*A, swapXY);
  INFO(s.toJson());
  REQUIRE(s.simplicial);
  REQUIRE(s.compatible);
  REQUIRE(s.pagePermutation == std::vector<int>{1, 0, 2});
  // the end between pages 1 and 2 is fixed, the other two are swapped
  int fixed = 0;
  for (int e = 0; e < 3; ++e) fixed += s.endPermutation[e] == e;
  REQUIRE(fixed == 1);
}
