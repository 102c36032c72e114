#include <catch2/catch_amalgamated.hpp>

#include "deepho/errors.hpp"
#include "deepho/pro_group.hpp"

using namespace deepho;

namespace {

const FgAbGroup Z = FgAbGroup::free(1);
const FgAbGroup Z2 = FgAbGroup(0, {2});
const FgAbGroup O = FgAbGroup::trivial();

AbHom scalar(const FgAbGroup& a, const FgAbGroup& b, int c) {
  return homFromMatrix(a, b, SparseIntMatrix::fromDense({{c}}));
}

InverseSequenceAb timesTwo(int first, int last) {
  std::vector<AbHom> b(last - first, scalar(Z, Z, 2));
  return InverseSequenceAb(first, std::vector<FgAbGroup>(last - first + 1, Z), b);
}

std::vector<AbHom> repeat(const AbHom& f, int n) { return std::vector<AbHom>(n, f); }

}  // namespace

TEST_CASE("stability verdicts", "[pro]") {
  SECTION("constant Z") {
    auto r = eventualImages(InverseSequenceAb::constant(1, 6, Z));
    REQUIRE(r.verdict == Verdict::StableEmpirically);
    REQUIRE(r.R0 == 1);
    REQUIRE(r.eventualImage.isomorphic(Z));
  }
  SECTION("multiplication by two never stabilizes") {
    auto r = eventualImages(timesTwo(1, 6));
    REQUIRE(r.verdict == Verdict::Unstable);
    REQUIRE_THROWS_AS(inverseLimitStable(timesTwo(1, 6), r), Error);
  }
  SECTION("eventually zero") {
    std::vector<FgAbGroup> t = {Z, Z, O, O, O};
    std::vector<AbHom> b = {identityHom(Z), zeroHom(O, Z), zeroHom(O, O), zeroHom(O, O)};
    InverseSequenceAb s(0, t, b);
    auto r = eventualImages(s);
    REQUIRE(r.verdict == Verdict::StableEmpirically);
    REQUIRE(inverseLimitStable(s, r).group.isTrivial());
  }
  SECTION("a finite pocket dies: Z + Z with a projection to the first summand") {
    auto Z2f = FgAbGroup::free(2);
    auto proj = homFromMatrix(Z2f, Z2f, SparseIntMatrix::fromDense({{1, 0}, {0, 0}}));
    InverseSequenceAb s(0, std::vector<FgAbGroup>(5, Z2f), repeat(proj, 4));
    auto r = eventualImages(s);
    REQUIRE(r.verdict == Verdict::StableEmpirically);
    REQUIRE(r.eventualImage.isomorphic(Z));
    REQUIRE(inverseLimitStable(s, r).group.isomorphic(Z));
  }
  SECTION("window larger than the range is a contract violation") {
    REQUIRE_THROWS_AS(eventualImages(InverseSequenceAb::constant(0, 1, Z), 3), ContractViolation);
  }
}

TEST_CASE("cofinal restriction keeps the verdict", "[pro][property]") {
  auto Z2f = FgAbGroup::free(2);
  auto proj = homFromMatrix(Z2f, Z2f, SparseIntMatrix::fromDense({{1, 1}, {0, 0}}));
  InverseSequenceAb s(0, std::vector<FgAbGroup>(8, Z2f), repeat(proj, 7));
  auto full = eventualImages(s);
  for (int a = 0; a <= 5; ++a) {
    auto sub = eventualImages(s.restrict(a, 7));
    REQUIRE(sub.verdict == full.verdict);
    REQUIRE(sub.eventualImage.isomorphic(full.eventualImage));
  }
  auto two = timesTwo(0, 8);
  for (int a = 0; a <= 5; ++a) REQUIRE(eventualImages(two.restrict(a, 8)).verdict == Verdict::Unstable);
}

TEST_CASE("limit equals the eventual image at every stable index", "[pro][property]") {
  auto Z2f = FgAbGroup::free(2);
  auto proj = homFromMatrix(Z2f, Z2f, SparseIntMatrix::fromDense({{1, 1}, {0, 0}}));
  InverseSequenceAb s(0, std::vector<FgAbGroup>(6, Z2f), repeat(proj, 5));
  auto r = eventualImages(s);
  for (int m = r.R0; m < s.last(); ++m) REQUIRE(inverseLimitStable(s, r, m).group.isomorphic(r.eventualImage));
}

TEST_CASE("level exactness", "[pro]") {
  auto O5 = InverseSequenceAb::constant(0, 4, O);
  auto Z5 = InverseSequenceAb::constant(0, 4, Z);
  auto T5 = InverseSequenceAb::constant(0, 4, Z2);
  SECTION("0 -> Z -> Z -> 0") {
    std::vector<ProMorphism> maps = {ProMorphism(O5, Z5, repeat(zeroHom(O, Z), 5)),
                                     ProMorphism(Z5, Z5, repeat(identityHom(Z), 5)),
                                     ProMorphism(Z5, O5, repeat(zeroHom(Z, O), 5))};
    REQUIRE(levelExactnessCheck({O5, Z5, Z5, O5}, maps).allExact());
  }
  SECTION("0 -> Z -> Z -> Z/2 -> 0") {
    std::vector<ProMorphism> maps = {ProMorphism(O5, Z5, repeat(zeroHom(O, Z), 5)),
                                     ProMorphism(Z5, Z5, repeat(scalar(Z, Z, 2), 5)),
                                     ProMorphism(Z5, T5, repeat(scalar(Z, Z2, 1), 5)),
                                     ProMorphism(T5, O5, repeat(zeroHom(Z2, O), 5))};
    REQUIRE(levelExactnessCheck({O5, Z5, Z5, T5, O5}, maps).allExact());
    auto lim = limitExactnessCheck({O5, Z5, Z5, T5, O5}, maps);
    REQUIRE(lim.exact);
  }
  SECTION("a non-exact level is reported") {
    std::vector<ProMorphism> maps = {ProMorphism(O5, Z5, repeat(zeroHom(O, Z), 5)),
                                     ProMorphism(Z5, Z5, repeat(scalar(Z, Z, 2), 5)),
                                     ProMorphism(Z5, O5, repeat(zeroHom(Z, O), 5))};
    REQUIRE_FALSE(levelExactnessCheck({O5, Z5, Z5, O5}, maps).allExact());
  }
  SECTION("index mismatch") {
    auto Z4 = InverseSequenceAb::constant(0, 3, Z);
    REQUIRE_THROWS_AS(ProMorphism(Z5, Z4, repeat(identityHom(Z), 5)), ContractViolation);
  }
  SECTION("non-commuting squares are recorded") {
    std::vector<AbHom> c = repeat(identityHom(Z), 5);
    c[2] = scalar(Z, Z, 3);
    ProMorphism f(Z5, Z5, c);
    REQUIRE_FALSE(f.allSquaresCommute());
  }
}

TEST_CASE("five lemma for stability", "[pro]") {
  auto O5 = InverseSequenceAb::constant(0, 4, O);
  auto Z5 = InverseSequenceAb::constant(0, 4, Z);
  SECTION("all constant") {
    // Z -id-> Z -0-> 0 -0-> Z -id-> Z
    std::vector<ProMorphism> maps = {ProMorphism(Z5, Z5, repeat(identityHom(Z), 5)),
                                     ProMorphism(Z5, O5, repeat(zeroHom(Z, O), 5)),
                                     ProMorphism(O5, Z5, repeat(zeroHom(O, Z), 5)),
                                     ProMorphism(Z5, Z5, repeat(identityHom(Z), 5))};
    auto r = fiveLemmaStabilityCheck({Z5, Z5, O5, Z5, Z5}, maps);
    REQUIRE(r.claimed == Verdict::StableEmpirically);
    REQUIRE(r.agrees());
  }
  SECTION("an unstable D is named") {
    auto D = timesTwo(0, 4);
    std::vector<ProMorphism> maps = {ProMorphism(O5, O5, repeat(zeroHom(O, O), 5)),
                                     ProMorphism(O5, O5, repeat(zeroHom(O, O), 5)),
                                     ProMorphism(O5, D, repeat(zeroHom(O, Z), 5)),
                                     ProMorphism(D, D, repeat(identityHom(Z), 5))};
    auto r = fiveLemmaStabilityCheck({O5, O5, O5, D, D}, maps);
    REQUIRE(r.claimed == Verdict::Inconclusive);
    REQUIRE(r.failedHypothesis == "D");
  }
}

TEST_CASE("limit maps through eventual images", "[pro]") {
  auto Z2f = FgAbGroup::free(2);
  auto proj = homFromMatrix(Z2f, Z2f, SparseIntMatrix::fromDense({{1, 0}, {0, 0}}));
  InverseSequenceAb s(0, std::vector<FgAbGroup>(5, Z2f), repeat(proj, 4));
  auto Z5 = InverseSequenceAb::constant(0, 4, Z);
  auto first = homFromMatrix(Z2f, Z, SparseIntMatrix::fromDense({{3, 5}}));
  ProMorphism f(s, Z5, repeat(first, 5));
  REQUIRE(f.allSquaresCommute() == false);  // 5 on the dying summand breaks the squares
  auto good = homFromMatrix(Z2f, Z, SparseIntMatrix::fromDense({{3, 0}}));
  ProMorphism g(s, Z5, repeat(good, 5));
  REQUIRE(g.allSquaresCommute());
  auto rs = eventualImages(s), rz = eventualImages(Z5);
  auto L = limitMap(inverseLimitStable(s, rs, 2), inverseLimitStable(Z5, rz, 2), g.at(2));
  REQUIRE(L.matrix().toDense() == std::vector<std::vector<Integer>>{{3}});
}

TEST_CASE("stability report json", "[pro]") {
  auto r = eventualImages(InverseSequenceAb::constant(1, 4, Z2));
  REQUIRE(r.toJson() == R"({"R0":1,"eventualImage":{"freeRank":0,"torsion":["2"]},"verdict":"stable-empirically","window":3})");
}
