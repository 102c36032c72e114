#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "deepho/chain_map.hpp"
#include "deepho/filtered_end.hpp"

namespace deepho {

/// Sample of a coarse map: one lattice point per domain vertex.
struct CoarseMapSample {
  ComplexPtr domain;
  std::vector<Point> vertexImage;
  std::string domainRef, codomainRef;

  std::string toJson() const;
  static CoarseMapSample fromJson(const std::string& text, ComplexPtr domain);
};

/// Copy of a subcomplex as a complex of its own.
struct ExtractedComplex {
  ComplexPtr complex;
  std::vector<std::vector<int>> parentId;  // per degree: id of the same simplex in the parent
};
ExtractedComplex extractComplex(const Subcomplex& K);
/// Sample sending every vertex to its own point.
CoarseMapSample identitySample(ComplexPtr domain, std::string domainRef = "", std::string codomainRef = "");

/// Empirical control functions: rhoMinus is the lower staircase (min image distance over
/// pairs at domain distance >= d), rhoPlus the upper one (max over pairs at distance <= d).
struct ControlEstimate {
  std::vector<int> rhoMinus, rhoPlus;  // index d = domain distance
  std::size_t pairs = 0;
  bool properFailure = false;
  std::string diagnostic;
  std::string toJson() const;
};

/// Domain distances are path lengths in the domain 1-skeleton, codomain distances the
/// lattice metric. Sources are sampled with `seed` until `pairBudget` pairs are seen.
ControlEstimate estimateControls(const CoarseMapSample& f, std::size_t pairBudget = 200000, std::uint64_t seed = 1);

/// Path distances in the 1-skeleton of K from a set of its vertices (-1 unreachable).
std::vector<int> graphDistances(const Subcomplex& K, const std::vector<int>& sources);

struct ApproximationOptions {
  /// 0: nearest window vertex. Otherwise every image is moved by one unit step
  /// chosen from this seed before snapping.
  std::uint64_t seed = 0;
  /// Largest neighborhood radius tried when a local fill is needed.
  int maxFillRadius = 3;
};

struct ChainApproximation {
  GradedChainMap map;          // domain -> window
  std::vector<int> vertexTarget;  // window vertex of each domain vertex
  /// Hausdorff distance between supp f(s) and the images of the vertices of s.
  int M = 0;
  std::size_t localFills = 0;
};

/// Cellular approximation of a vertex map; degree d >= 1 is filled inductively inside
/// neighborhoods of the images. Throws WindowTooSmall when a fill is not found.
ChainApproximation approximateChainMap(const CoarseMapSample& f, const Window& W, const ApproximationOptions& opt = {});

struct ControlledHomotopy {
  /// F[d]: window chains of degree d + 1 per domain simplex of degree d.
  std::vector<SparseIntMatrix> F;
  int D = 0;
  std::size_t localFills = 0;
};

/// Chain homotopy between two approximations of nearby maps: boundary F + F boundary = f - g.
ControlledHomotopy controlledHomotopy(const ChainApproximation& f, const ChainApproximation& g, const Window& W,
                                      int maxFillRadius = 3);
bool verifyHomotopyIdentity(const ControlledHomotopy& H, const ChainApproximation& f, const ChainApproximation& g,
                            const Window& W);

/// Deep homology map of f_#: the complement of B in A (domain) into the complement of
/// f(B) in the window. Stage R of the target receives the first domain stage mapping into it.
struct InducedDeepMap {
  AbHom map;
  int targetIndex = 0;
  int domainIndex = 0;
  DeepHomologyResult domainSide, targetSide;
};
InducedDeepMap inducedDeepMap(const GradedChainMap& fsharp, const EndFiltration& domainF, const EndFiltration& targetF,
                              int degree, bool reduced = false, const DeepOptions& opt = {});

}  // namespace deepho
