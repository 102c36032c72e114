#include <catch2/catch_amalgamated.hpp>

#include "deepho/coarse_map.hpp"
#include "deepho/duality.hpp"
#include "scene_fixtures.hpp"

using namespace deepho;

namespace {

struct Embedded {
  ExtractedComplex domain;
  GradedChainMap fsharp;
};

Embedded embed(const Window& W, const Subcomplex& K) {
  Embedded e{extractComplex(K), {}};
  e.fsharp = approximateChainMap(identitySample(e.domain.complex), W).map;
  return e;
}

// Subcomplex of an extracted domain spanned by the vertices satisfying pred.
SubcomplexPtr domainPart(const ComplexPtr& Z, const std::function<bool(const Point&)>& pred) {
  std::vector<char> mask(Z->count(0), 0);
  for (int v = 0; v < Z->count(0); ++v) mask[v] = pred(Z->point(v));
  return std::make_shared<const Subcomplex>(Subcomplex::spannedBy(Z, mask));
}

}  // namespace

TEST_CASE("duality maps for single subcomplexes", "[duality]") {
  auto W = std::make_shared<const Window>(buildWindow(3, 8));
  auto X = fixture::whole(*W);

  SECTION("line") {
    auto e = embed(*W, *fixture::zAxis(*W));
    auto S = makeDualitySetup(W, e.fsharp);
    REQUIRE(S.displacement == 1);
    REQUIRE(S.offset == 1);
    auto F = complementFiltration(X, fixture::zAxis(*W), 1, 3);
    auto Z = std::make_shared<const Subcomplex>(e.domain.complex, true);
    REQUIRE(domainFrontier(S, *Z)->count(0) == 2);
    auto r1 = verifyDualityIso(S, F, Z, 1);
    REQUIRE(r1.top.limit->group.isomorphic(FgAbGroup::free(1)));
    REQUIRE(r1.bottom.group().isomorphic(FgAbGroup::free(1)));
    REQUIRE(r1.iso);
    for (bool b : r1.proMorphism) REQUIRE(b);
    auto r0 = verifyDualityIso(S, F, Z, 0);
    REQUIRE(r0.iso);
    REQUIRE(r0.bottom.group().isTrivial());
    auto one = dualityStageMap(S, F, *Z, 1, 2);
    REQUIRE(isIsomorphism(one));
  }
  SECTION("plane and half-plane") {
    auto e = embed(*W, *fixture::planeY0(*W));
    auto S = makeDualitySetup(W, e.fsharp);
    auto Z = std::make_shared<const Subcomplex>(e.domain.complex, true);
    auto F = complementFiltration(X, fixture::planeY0(*W), 1, 3);
    auto r = verifyDualityIso(S, F, Z, 0);
    REQUIRE(r.top.limit->group.isomorphic(FgAbGroup::free(1)));
    REQUIRE(r.iso);
    auto Zh = domainPart(e.domain.complex, [](const Point& p) { return p[0] >= 0; });
    auto Fh = complementFiltration(X, fixture::halfPlane(*W), 1, 3);
    auto rh = verifyDualityIso(S, Fh, Zh, 0);
    REQUIRE(rh.bottom.group().isTrivial());
    REQUIRE(rh.iso);
  }
}

TEST_CASE("ladder for a half-plane inside a plane", "[duality]") {
  auto W = std::make_shared<const Window>(buildWindow(3, 8));
  auto X = fixture::whole(*W);
  auto e = embed(*W, *fixture::planeY0(*W));
  auto Z0 = std::make_shared<const Subcomplex>(e.domain.complex, true);
  auto Z1 = domainPart(e.domain.complex, [](const Point& p) { return p[0] >= 0; });
  auto F0 = complementFiltration(X, fixture::planeY0(*W), 1, 3);
  auto F1 = complementFiltration(X, fixture::halfPlane(*W), 1, 3);
  for (int orientation : {1, -1}) {
    auto S = makeDualitySetup(W, e.fsharp, orientation);
    DeepOptions opt;
    opt.jobs = 3;
    auto L = pairLES(S, F0, F1, Z0, Z1, opt);
    REQUIRE(L.topLabels.size() == 10);
    REQUIRE(L.stable);
    REQUIRE(L.verticalsIso());
    REQUIRE(L.squaresCommuteUpToSign());
    for (bool b : L.limitTopExact) REQUIRE(b);
    for (bool b : L.bottomExact) REQUIRE(b);
    for (const auto& stage : L.topExact)
      for (bool b : stage) REQUIRE(b);
    for (const auto& col : L.proMorphism)
      for (bool b : col) REQUIRE(b);
    // H_1(Y1, Y0) carries the plane's second end
    REQUIRE(L.limits[6].group.isomorphic(FgAbGroup::free(1)));
    REQUIRE(L.bottom[6].group().isomorphic(FgAbGroup::free(1)));
    REQUIRE_FALSE(L.toJson().empty());
  }
}

TEST_CASE("excision between nested pairs", "[duality]") {
  auto W = buildWindow(3, 8);
  auto X = fixture::whole(W);
  auto Fh = complementFiltration(X, fixture::halfPlane(W), 1, 3);
  auto Fp = complementFiltration(X, fixture::planeY0(W), 1, 3);
  auto Fe = complementFiltration(X, fixture::empty(W), 1, 3);
  auto axis = fixture::spanned(W, [](const Point& p) { return p[0] == 0 && p[1] == 0; });
  auto Fa = complementFiltration(X, axis, 1, 3);
  // (Y_half, Y_plane) -> (Y_axis, Y_plane): both Z, the other half-plane's end
  auto rep = excisionCheck(Fh, Fp, Fa, Fp, 1);
  REQUIRE(rep.source.limit->group.isomorphic(FgAbGroup::free(1)));
  REQUIRE(rep.target.limit->group.isomorphic(FgAbGroup::free(2)));
  REQUIRE_FALSE(rep.iso);
  auto same = excisionCheck(Fh, Fp, Fh, Fp, 1);
  REQUIRE(same.iso);
  (void)Fe;
}
