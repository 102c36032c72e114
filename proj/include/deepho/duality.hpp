#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "deepho/chain_map.hpp"
#include "deepho/filtered_end.hpp"

namespace deepho {

/// Data shared by every duality computation in one window: the cap map, the
/// domain map f_# and the part of the domain carried into the window boundary.
struct DualitySetup {
  std::shared_ptr<const Window> window;
  SubcomplexPtr X, dX;
  int orientation = 1;
  GradedChainMap cap;
  int displacement = 0;
  /// Stage Y^R is paired with cochains on N_{R + offset}(K).
  int offset = 1;
  GradedChainMap fsharp;
  SubcomplexPtr domainBoundary;

  int n() const { return window->n; }
};

DualitySetup makeDualitySetup(std::shared_ptr<const Window> W, GradedChainMap fsharp, int orientation = 1);

/// Intersection of a domain subcomplex with the domain boundary.
SubcomplexPtr domainFrontier(const DualitySetup& S, const Subcomplex& Z);

/// H~_j(Y^R) -> H^{n-j-1}(Z, dZ): inverse connecting map to H_{j+1}(X, Y^R), inverse cap
/// from H^{n-j-1}(N_{R+1}(K), N_{R+1}(K) n dX), then f^*.
AbHom dualityStageMap(const DualitySetup& S, const EndFiltration& F, const Subcomplex& Z, int j, int R,
                      const HomologyOptions& opt = {});

/// H_j(Y_1^R, Y_0^R) -> H^{n-j}(Z_0, Z_1 + dZ_0) at one stage for K_1 inside K_0. `top` is the
/// stage group of (Y_1^R, Y_0^R) and `bottom` a cohomology group of (Z_0, Z_1 + dZ_0).
AbHom relativeDualityStageMap(const DualitySetup& S, const FiltrationStage& s0, const FiltrationStage& s1,
                              const HomologyGroup& top, const HomologyGroup& bottom, const HomologyOptions& opt = {});

struct DualityIsoReport {
  int j = 0, k = 0;
  DeepHomologyResult top;
  HomologyGroup bottom;
  std::vector<AbHom> stageMaps;   // index R - Rmin
  std::vector<bool> proMorphism;  // A^R b_R == A^{R+1}
  std::optional<AbHom> limitMap;
  bool iso = false;
  std::string diagnostic;
  std::string toJson() const;
};
DualityIsoReport verifyDualityIso(const DualitySetup& S, const EndFiltration& F, SubcomplexPtr Z, int j,
                                  const DeepOptions& opt = {});

/// Ladder between the deep homology sequence of (Y_1, Y_0) and the compactly supported
/// cohomology sequence of (Z_0, Z_1), for K_1 inside K_0 and Z_1 inside Z_0.
struct DualityLadder {
  int n = 0, Rmin = 0, Rmax = 0;
  std::vector<std::string> topLabels, bottomLabels;
  std::vector<DeepHomologyResult> top;
  std::vector<HomologyGroup> bottom;
  std::vector<std::vector<AbHom>> topMaps;     // [stage][c]: column c -> c + 1
  std::vector<AbHom> bottomMaps;               // [c]
  std::vector<std::vector<AbHom>> verticals;   // [stage][c]
  std::vector<std::vector<int>> squareSigns;   // [stage][c]: +1, -1, 0 when neither sign commutes
  std::vector<std::vector<bool>> topExact;     // [stage][interior c]
  std::vector<bool> bottomExact;               // [interior c]
  std::vector<std::vector<bool>> proMorphism;  // [c][stage]
  bool stable = false;
  int limitIndex = 0;
  std::vector<StableLimit> limits;
  std::vector<AbHom> limitTopMaps, limitVerticals;
  std::vector<bool> limitTopExact, limitVerticalIso;
  std::vector<int> limitSquareSigns;
  std::string diagnostic;

  bool squaresCommuteUpToSign() const;
  bool verticalsIso() const;
  std::string toJson() const;
};

DualityLadder pairLES(const DualitySetup& S, const EndFiltration& F0, const EndFiltration& F1, SubcomplexPtr Z0,
                      SubcomplexPtr Z1, const DeepOptions& opt = {});

/// +1 when g1 f1 == g2 f2, -1 when g1 f1 == -(g2 f2), 0 otherwise.
int squareSign(const AbHom& g1, const AbHom& f1, const AbHom& g2, const AbHom& f2);

/// Deep homology map induced by the inclusion of pairs
/// (Y(srcOuter), Y(srcInner)) -> (Y(tgtOuter), Y(tgtInner)).
struct ExcisionReport {
  DeepHomologyResult source, target;
  std::optional<AbHom> map;
  bool iso = false;
  std::string diagnostic;
  std::string toJson() const;
};
ExcisionReport excisionCheck(const EndFiltration& srcOuter, const EndFiltration& srcInner, const EndFiltration& tgtOuter,
                             const EndFiltration& tgtInner, int degree, const DeepOptions& opt = {});

}  // namespace deepho
