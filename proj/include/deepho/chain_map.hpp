#pragma once

#include <string>
#include <vector>

#include "deepho/grid_complex.hpp"
#include "deepho/homology.hpp"

namespace deepho {

/// Graph metric of the Freudenthal lattice: steps are the nonzero 0/1 vectors and their negatives.
int latticeDistance(const Point& a, const Point& b);

/// Full boundary matrix C_d -> C_{d-1} of a complex.
SparseIntMatrix boundaryMatrixOf(const SimplicialComplex& X, int d);

/// Degree-wise integer map between simplicial chain groups. With `fromCochains`
/// the source is read as cochains of degree d and lands in chains of degree n - d.
struct GradedChainMap {
  ComplexPtr source, target;
  bool fromCochains = false;
  int n = 0;
  /// components[d]: (simplices of target degree) x (simplices of source degree d)
  std::vector<SparseIntMatrix> components;
  int declaredDisplacement = 0;

  int targetDegree(int d) const { return fromCochains ? n - d : d; }
  Chain apply(const Chain& c) const;
  /// Cochain on the source dual to a cochain on the target: (f^* phi)(s) = phi(f s).
  Chain pullback(const Chain& cochain) const;
  ChainMapFn asFunction() const;
};

/// Covariant maps: boundary(f c) == f(boundary c) on every basis chain.
/// Cap-type maps: boundary P_k == P_{k+1} coboundary on cochains supported off `relativeTo`.
bool verifyChainMapLaw(const GradedChainMap& f, const Subcomplex* relativeTo = nullptr);

/// Largest lattice distance from a vertex of a target simplex to the nearest vertex of
/// the source simplex, over the non-zero entries (source and target share points).
int measuredDisplacement(const GradedChainMap& f);

/// Sum of the oriented top simplices of a window.
Chain fundamentalCycle(const Window& W, int orientation = 1);

/// Cap product with the fundamental cycle, front face against the cochain, back face kept.
/// Degree k carries the sign (-1)^{k(k+1)/2} so that it commutes with the (co)boundaries.
GradedChainMap capWithFundamentalCycle(const Window& W, int orientation = 1);

int capSign(int k);

}  // namespace deepho
