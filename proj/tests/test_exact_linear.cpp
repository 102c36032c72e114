#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "deepho/errors.hpp"
#include "deepho/exact_linear.hpp"
#include "oracles.hpp"

using namespace deepho;

namespace {

SparseIntMatrix dense(std::initializer_list<std::initializer_list<int>> rows) {
  std::vector<std::vector<Integer>> d;
  for (auto r : rows) {
    std::vector<Integer> row;
    for (int v : r) row.push_back(v);
    d.push_back(row);
  }
  return SparseIntMatrix::fromDense(d);
}

void checkDecomposition(const SparseIntMatrix& A, const SmithDecomposition& s) {
  REQUIRE(s.U * A * s.V == s.D());
  REQUIRE(s.U * s.Uinv == SparseIntMatrix::identity(A.rows()));
  REQUIRE(s.V * s.Vinv == SparseIntMatrix::identity(A.cols()));
  for (int i = 0; i < s.rank(); ++i) {
    REQUIRE(s.diagonal[i] > 0);
    if (i > 0) REQUIRE(s.diagonal[i] % s.diagonal[i - 1] == 0);
  }
}

}  // namespace

TEST_CASE("smith normal form of small matrices", "[exact]") {
  SECTION("2 4 / 6 8") {
    auto A = dense({{2, 4}, {6, 8}});
    auto s = smithNormalForm(A);
    checkDecomposition(A, s);
    REQUIRE(s.diagonal == std::vector<Integer>{2, 4});
  }
  SECTION("boundary of a triangle") {
    auto A = dense({{-1, 0, -1}, {1, -1, 0}, {0, 1, 1}});
    auto s = smithNormalForm(A);
    checkDecomposition(A, s);
    REQUIRE(s.diagonal == std::vector<Integer>{1, 1});
    auto G = cokernelPresentation(A);
    REQUIRE(G.freeRank() == 1);
    REQUIRE(G.torsion().empty());
  }
  SECTION("diagonal needing a gcd swap") {
    auto A = dense({{4, 0}, {0, 6}});
    auto s = smithNormalForm(A);
    checkDecomposition(A, s);
    REQUIRE(s.diagonal == std::vector<Integer>{2, 12});
  }
  SECTION("empty and zero matrices") {
    auto s = smithNormalForm(SparseIntMatrix(3, 0));
    REQUIRE(s.rank() == 0);
    auto z = smithNormalForm(SparseIntMatrix(2, 3));
    checkDecomposition(SparseIntMatrix(2, 3), z);
    REQUIRE(cokernelPresentation(SparseIntMatrix(2, 3)).freeRank() == 2);
  }
}

TEST_CASE("cokernel carries torsion first", "[exact]") {
  auto A = dense({{2, 0, 0}, {0, 3, 0}, {0, 0, 0}});
  auto G = cokernelPresentation(A);
  REQUIRE(G.torsion() == std::vector<Integer>{6});
  REQUIRE(G.freeRank() == 1);
  // e_0 has order 2 in the cokernel
  IntVector e0{1, 0, 0};
  auto c = G.coordinatesOf(e0);
  IntVector twice = c;
  for (auto& x : twice) x *= 2;
  REQUIRE(G.isZero(twice));
  REQUIRE_FALSE(G.isZero(c));
  // ambient generators read back to unit coordinates
  for (int j = 0; j < G.generatorCount(); ++j) {
    auto back = G.coordinatesOf(G.ambientGenerators().denseColumn(j));
    IntVector unit(G.generatorCount());
    unit[j] = 1;
    REQUIRE(back == unit);
  }
}

TEST_CASE("random matrices agree with the determinantal-divisor oracle", "[exact][oracle]") {
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<int> dim(1, 6);
  for (int trial = 0; trial < 120; ++trial) {
    int m = dim(rng), n = dim(rng);
    auto D = oracle::randomDense(rng, m, n, -9, 9, trial % 3 == 0 ? 0.5 : 0.0);
    auto A = SparseIntMatrix::fromDense(D, n);
    auto s = smithNormalForm(A);
    checkDecomposition(A, s);
    REQUIRE(s.diagonal == oracle::invariantFactors(D, n));
    IntVector b(m);
    std::uniform_int_distribution<int> e(-9, 9);
    for (auto& x : b) x = e(rng);
    auto x = solveIntegerLinear(s, b);
    REQUIRE(x.has_value() == oracle::solvable(D, n, b));
    if (x) REQUIRE(A.apply(*x) == b);
  }
}

TEST_CASE("kernel basis is saturated with a left inverse", "[exact]") {
  auto A = dense({{1, 2, 3}, {2, 4, 6}});
  auto kb = integerKernel(A);
  REQUIRE(kb.basis.cols() == 2);
  REQUIRE((A * kb.basis).isZero());
  REQUIRE(kb.leftInverse * kb.basis == SparseIntMatrix::identity(2));
}

TEST_CASE("homomorphisms validate torsion and compose", "[exact]") {
  FgAbGroup Z2(0, {2}), Z4(0, {4}), Z(1, {});
  REQUIRE_THROWS_AS(homFromMatrix(Z2, Z, dense({{1}})), ContractViolation);
  auto f = homFromMatrix(Z2, Z4, dense({{2}}));
  REQUIRE(isInjective(f));
  REQUIRE_FALSE(isSurjective(f));
  auto g = homFromMatrix(Z4, Z2, dense({{1}}));
  REQUIRE(isExactAt(f, g));
  REQUIRE(compose(g, f).matrix().isZero());
  auto ki = kernelImage(g);
  REQUIRE(ki.kernel.isomorphic(Z2));
  REQUIRE(ki.image.isomorphic(Z2));
}

TEST_CASE("kernel and image of a map Z^3 -> Z^2", "[exact]") {
  auto f = homFromMatrix(FgAbGroup::free(3), FgAbGroup::free(2), dense({{1, 1, 0}, {0, 2, 2}}));
  auto ki = kernelImage(f);
  REQUIRE(ki.kernel.isomorphic(FgAbGroup::free(1)));
  REQUIRE(ki.image.isomorphic(FgAbGroup::free(2)));
  REQUIRE(compose(f, ki.kernelInclusion).matrix().isZero());
  REQUIRE(isInjective(ki.imageInclusion));
  REQUIRE(quotientType(wholeGroup(f.codomain()), imageSubgroup(f)).isomorphic(FgAbGroup(0, {2})));
}

TEST_CASE("inverse of an isomorphism", "[exact]") {
  auto f = homFromMatrix(FgAbGroup::free(2), FgAbGroup::free(2), dense({{2, 1}, {1, 1}}));
  REQUIRE(isIsomorphism(f));
  auto g = inverse(f);
  REQUIRE(compose(g, f) == identityHom(FgAbGroup::free(2)));
  auto h = homFromMatrix(FgAbGroup::free(1), FgAbGroup::free(1), dense({{2}}));
  REQUIRE_THROWS_AS(inverse(h), ContractViolation);
}

TEST_CASE("matrix dump round-trips", "[exact]") {
  auto A = dense({{0, -3}, {5, 0}, {0, 0}});
  auto text = A.dump();
  REQUIRE(text.rfind("3 2 2\n", 0) == 0);
  REQUIRE(SparseIntMatrix::parseDump(text) == A);
}

TEST_CASE("coefficient budget raises a resource error", "[exact]") {
  SnfOptions opt;
  opt.maxCoefficientBits = 64;
  std::vector<std::vector<Integer>> d(2, std::vector<Integer>(2));
  d[0][0] = Integer(1) << 200;
  d[0][1] = (Integer(1) << 200) + 1;
  d[1][0] = 3;
  d[1][1] = 7;
  REQUIRE_THROWS_AS(smithNormalForm(SparseIntMatrix::fromDense(d), opt), ResourceError);
}
