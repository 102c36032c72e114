#include <catch2/catch_amalgamated.hpp>

#include "deepho/errors.hpp"
#include "deepho/grid_complex.hpp"

using namespace deepho;

namespace {

long long euler(const Subcomplex& K) {
  long long e = 0;
  for (int d = 0; d <= K.complex().dim(); ++d) e += (d % 2 ? -1 : 1) * static_cast<long long>(K.count(d));
  return e;
}

Subcomplex axisLine(const Window& W, int axis) {
  std::vector<char> mask(W.complex->count(0), 0);
  for (int t = -W.S; t <= W.S; ++t) {
    Point p{0, 0, 0};
    p[axis] = t;
    mask[W.vertexId(p)] = 1;
  }
  return Subcomplex::spannedBy(W.complex, mask);
}

}  // namespace

TEST_CASE("window counts", "[grid]") {
  SECTION("square of radius 1") {
    auto W = buildWindow(2, 1);
    const auto& X = *W.complex;
    REQUIRE(X.count(0) == 9);
    REQUIRE(X.count(1) == 16);
    REQUIRE(X.count(2) == 8);
    REQUIRE(euler(W.full()) == 1);
    REQUIRE(euler(W.boundary) == 0);
  }
  SECTION("cube of radius 1 has 48 tetrahedra") {
    auto W = buildWindow(3, 1);
    REQUIRE(W.complex->count(3) == 48);
    REQUIRE(euler(W.full()) == 1);
    REQUIRE(euler(W.boundary) == 2);
    REQUIRE(W.complex->totalSimplices() == windowSimplexEstimate(3, 1));
  }
  SECTION("radius 3 in dimension 3") {
    auto W = buildWindow(3, 3);
    REQUIRE(W.complex->count(3) == 6 * 6 * 6 * 6);
    REQUIRE(W.complex->totalSimplices() == windowSimplexEstimate(3, 3));
    REQUIRE(W.boundary.isClosed());
  }
}

TEST_CASE("vertex and simplex ids are lexicographic", "[grid]") {
  auto W = buildWindow(3, 2);
  const auto& X = *W.complex;
  for (int v = 1; v < X.count(0); ++v) REQUIRE(X.point(v - 1) < X.point(v));
  for (int v = 0; v < X.count(0); ++v) REQUIRE(W.vertexId(X.point(v)) == v);
  for (int d = 1; d <= 3; ++d)
    for (int id = 1; id < X.count(d); ++id) {
      auto a = X.vertices(d, id - 1), b = X.vertices(d, id);
      REQUIRE(std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end()));
      REQUIRE(X.find(d, b) == id);
    }
}

TEST_CASE("budget guard", "[grid]") {
  REQUIRE_THROWS_AS(buildWindow(3, 12, 1000), ResourceError);
}

TEST_CASE("neighborhood invariants", "[grid][property]") {
  auto W = buildWindow(3, 4);
  auto K = axisLine(W, 2);
  Subcomplex prev = K;
  for (int R = 1; R <= 3; ++R) {
    auto N = starNeighborhood(K, R);
    REQUIRE(N.isClosed());
    REQUIRE(prev.includedIn(N));
    auto Y = complementClosure(N);
    REQUIRE(Y.isClosed());
    REQUIRE(Y.unite(N) == W.full());
    auto F = frontier(N);
    REQUIRE(F.includedIn(N));
    REQUIRE(F.includedIn(Y));
    REQUIRE(F == N.intersect(Y));
    prev = N;
  }
  // star of a vertex in the cube: all vertices at sup-distance 1
  Subcomplex origin(W.complex);
  origin.insert(0, W.vertexId({0, 0, 0}));
  auto st = starNeighborhood(origin, 1);
  REQUIRE(st.count(0) == 15);
}

TEST_CASE("components of complements", "[grid]") {
  auto W = buildWindow(3, 4);
  SECTION("a line does not separate") {
    auto Y = complementClosure(starNeighborhood(axisLine(W, 2), 1));
    REQUIRE(connectedComponents(Y).count == 1);
  }
  SECTION("a plane separates into two") {
    std::vector<char> mask(W.complex->count(0), 0);
    for (int v = 0; v < W.complex->count(0); ++v) mask[v] = W.complex->point(v)[0] == 0;
    auto P = Subcomplex::spannedBy(W.complex, mask);
    auto Y = complementClosure(starNeighborhood(P, 1));
    auto c = connectedComponents(Y);
    REQUIRE(c.count == 2);
    REQUIRE(c.label[0] == 0);
  }
}

TEST_CASE("json round trip", "[grid]") {
  auto W = buildWindow(2, 2);
  auto X2 = SimplicialComplex::fromJson(W.complex->toJson(2));
  for (int d = 0; d <= 2; ++d) REQUIRE(X2->count(d) == W.complex->count(d));
  REQUIRE_THROWS_AS(SimplicialComplex::fromJson("{\"n\":2}"), ContractViolation);
}

TEST_CASE("top simplices of a window are consistently oriented", "[grid]") {
  auto W = buildWindow(3, 1);
  int pos = 0, neg = 0;
  for (int id = 0; id < W.complex->count(3); ++id) (topSimplexOrientation(*W.complex, id) > 0 ? pos : neg)++;
  REQUIRE(pos == 24);
  REQUIRE(neg == 24);
}
