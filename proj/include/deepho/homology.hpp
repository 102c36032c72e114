#pragma once

#include <functional>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "deepho/exact_linear.hpp"
#include "deepho/grid_complex.hpp"

namespace deepho {

/// Integer chain (or cochain) on simplices of one dimension of a parent
/// complex, terms sorted by simplex id without zero coefficients.
struct Chain {
  int dim = 0;
  std::vector<std::pair<int, Integer>> terms;

  bool empty() const { return terms.empty(); }
  Integer coefficient(int id) const;
  bool operator==(const Chain& o) const { return dim == o.dim && terms == o.terms; }
};

Chain makeChain(int dim, std::vector<std::pair<int, Integer>> terms);
Chain operator+(const Chain& a, const Chain& b);
Chain operator-(const Chain& a, const Chain& b);
Chain operator*(const Integer& c, const Chain& a);
/// Simplicial boundary in the parent complex.
Chain boundary(const SimplicialComplex& X, const Chain& c);
/// Coboundary of a cochain, evaluated on the simplices of `ambient`.
Chain coboundary(const Subcomplex& ambient, const Chain& c);
/// Keeps the terms on simplices of `K`.
Chain restrictTo(const Chain& c, const Subcomplex& K);
/// Terms outside K.
Chain restrictOutside(const Chain& c, const Subcomplex& K);
/// Sum of coefficients of a 0-chain.
Integer augmentation(const Chain& c);

/// Based chain complex over Z with small (int) incidence coefficients.
/// Internal degree g has boundary to g-1. A cochain complex is stored with
/// reversed grading g = shift - k so that one reduction engine serves both.
class ChainComplexZ {
 public:
  struct Term {
    int idx;
    int coeff;
  };

  int top() const { return static_cast<int>(labels_.size()) - 1; }
  int size(int g) const { return g < 0 || g > top() ? 0 : static_cast<int>(labels_[g].size()); }
  const std::vector<int>& labels(int g) const { return labels_[g]; }
  std::span<const Term> boundary(int g, int j) const {
    const auto& off = offsets_[g];
    return {terms_[g].data() + off[j], static_cast<std::size_t>(off[j + 1] - off[j])};
  }
  SparseIntMatrix boundaryMatrix(int g) const;
  int localIndex(int g, int label) const;

  bool isCochain() const { return cochain_; }
  /// External degree (homological or cohomological) of internal degree g.
  int externalDegree(int g) const { return cochain_ ? shift_ - g : g; }
  int internalDegree(int k) const { return cochain_ ? shift_ - k : k; }

  /// Pair (K, L) of subcomplexes of one parent; L may be empty.
  const std::shared_ptr<const Subcomplex>& ambient() const { return ambient_; }
  const std::shared_ptr<const Subcomplex>& divisor() const { return divisor_; }

  /// Abstract complex from explicit boundary matrices (boundaries[g] : C_g -> C_{g-1}, g >= 1).
  static ChainComplexZ fromMatrices(const std::vector<int>& sizes, const std::vector<SparseIntMatrix>& boundaries);

  friend ChainComplexZ chainComplexOf(std::shared_ptr<const Subcomplex>, std::shared_ptr<const Subcomplex>);
  friend ChainComplexZ cochainComplexOf(std::shared_ptr<const Subcomplex>, std::shared_ptr<const Subcomplex>);

 private:
  std::vector<std::vector<int>> labels_;
  std::vector<std::vector<int>> offsets_;
  std::vector<std::vector<Term>> terms_;
  bool cochain_ = false;
  int shift_ = 0;
  std::shared_ptr<const Subcomplex> ambient_, divisor_;
};

/// Relative simplicial chain complex C(K, L); L may be null.
ChainComplexZ chainComplexOf(std::shared_ptr<const Subcomplex> K, std::shared_ptr<const Subcomplex> L = nullptr);
/// Relative cochain complex C^*(K, L) (cochains on K vanishing on L).
ChainComplexZ cochainComplexOf(std::shared_ptr<const Subcomplex> K, std::shared_ptr<const Subcomplex> L = nullptr);

namespace detail {
struct Reduction;
struct DegreeReader;
struct GroupFactory;
}  // namespace detail

/// Result of collapse/coreduction preprocessing: survivors per internal degree
/// and their restricted boundaries, plus the data needed to project chains.
class ReducedComplex {
 public:
  int originalSize(int g) const;
  int size(int g) const;
  const std::vector<int>& survivors(int g) const;
  SparseIntMatrix boundaryMatrix(int g) const;  // remainder boundary, g >= 1
  std::size_t reductionCount() const;
  /// Projection of an original chain (local indices) to survivor coordinates.
  IntVector project(int g, const std::vector<std::pair<int, Integer>>& localChain) const;
  /// Lift of a survivor chain back to the original complex (local indices).
  std::vector<std::pair<int, Integer>> lift(int g, const IntVector& survivorChain) const;

  friend std::shared_ptr<ReducedComplex> collapsePreprocess(const ChainComplexZ& C);
  friend struct detail::GroupFactory;

 private:
  std::shared_ptr<const detail::Reduction> impl_;
};

std::shared_ptr<ReducedComplex> collapsePreprocess(const ChainComplexZ& C);

struct HomologyOptions {
  /// Largest remainder (cells in the three degrees involved) handed to Smith normal form.
  std::size_t maxRemainderCells = 60000;
};

/// One homology or cohomology group with cycle representatives and a reader
/// sending cycles to coordinates in the generator basis.
class HomologyGroup {
 public:
  int degree() const { return degree_; }
  bool reduced() const { return reduced_; }
  bool isCohomology() const { return cohomology_; }
  const FgAbGroup& group() const { return group_; }
  const std::vector<Chain>& representatives() const { return reps_; }

  /// Coordinates of the class of a (relative) cycle given on parent simplex ids.
  /// Terms on the divisor are ignored; terms outside the ambient subcomplex or a
  /// non-zero boundary raise ContractViolation.
  IntVector coordinates(const Chain& cycle) const;
  /// The pair (K, L) the group was computed from; null for abstract complexes.
  std::shared_ptr<const Subcomplex> ambient() const;
  std::shared_ptr<const Subcomplex> divisor() const;
  /// {degree, freeRank, torsion, representatives}; simplices are given by their vertex points
  /// when the group has an ambient complex, by ids otherwise.
  std::string toJson() const;

  friend struct detail::GroupFactory;

 private:
  int degree_ = 0;
  bool reduced_ = false;
  bool cohomology_ = false;
  FgAbGroup group_;
  std::vector<Chain> reps_;
  std::shared_ptr<const detail::DegreeReader> reader_;
};

/// Homology (or cohomology) of a simplicial pair in every degree.
class HomologyModel {
 public:
  static std::shared_ptr<const HomologyModel> ofPair(std::shared_ptr<const Subcomplex> K,
                                                     std::shared_ptr<const Subcomplex> L = nullptr,
                                                     const HomologyOptions& opt = {});
  static std::shared_ptr<const HomologyModel> cohomologyOfPair(std::shared_ptr<const Subcomplex> K,
                                                               std::shared_ptr<const Subcomplex> L = nullptr,
                                                               const HomologyOptions& opt = {});
  static std::shared_ptr<const HomologyModel> ofComplex(const ChainComplexZ& C, const HomologyOptions& opt = {});

  bool isCohomology() const { return cohomology_; }
  int topDegree() const { return top_; }
  /// Degree outside [0, top] yields the trivial group. Reduced applies to absolute degree 0.
  const HomologyGroup& group(int degree, bool reduced = false) const;
  const std::shared_ptr<const Subcomplex>& ambient() const { return ambient_; }
  const std::shared_ptr<const Subcomplex>& divisor() const { return divisor_; }
  std::size_t originalCells() const { return originalCells_; }
  std::size_t remainderCells() const { return remainderCells_; }

 private:
  bool cohomology_ = false;
  int top_ = -1;
  std::vector<HomologyGroup> groups_;
  HomologyGroup reducedZero_;
  HomologyGroup empty_;
  bool hasReducedZero_ = false;
  std::shared_ptr<const Subcomplex> ambient_, divisor_;
  std::size_t originalCells_ = 0, remainderCells_ = 0;

  friend struct detail::GroupFactory;
};

using HomologyPtr = std::shared_ptr<const HomologyModel>;

/// Homology in one degree; convenience wrapper around HomologyModel.
HomologyGroup homology(std::shared_ptr<const Subcomplex> K, std::shared_ptr<const Subcomplex> L, int degree,
                       bool reduced = false);

using ChainMapFn = std::function<Chain(const Chain&)>;

/// Map on (co)homology induced by a chain map (identity when omitted).
AbHom inducedMapOnHomology(const HomologyGroup& source, const HomologyGroup& target, const ChainMapFn& f = {});
/// Connecting map H_d(K, L) -> H_{d-1}(L, M): boundary of relative representatives.
AbHom connectingHomomorphism(const HomologyGroup& relative, const HomologyGroup& target);
/// Cohomological connecting map: coboundary (taken in `ambient`) of zero-extended cocycles.
AbHom coboundaryConnecting(const HomologyGroup& source, const HomologyGroup& target, const Subcomplex& ambient);

/// H^k(Z, dZ) of a finite domain complex relative to its truncation frontier.
HomologyGroup compactSupportCohomology(std::shared_ptr<const Subcomplex> Z, std::shared_ptr<const Subcomplex> frontierZ,
                                       int k);

}  // namespace deepho
