#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace deepho {

using Integer = boost::multiprecision::cpp_int;
using IntVector = std::vector<Integer>;

struct Triplet {
  int row;
  int col;
  Integer value;
};

/// Column-compressed integer matrix with exact entries.
class SparseIntMatrix {
 public:
  struct Entry {
    int row;
    Integer value;
  };
  using Column = std::vector<Entry>;  // sorted by row, no zeros

  SparseIntMatrix() = default;
  SparseIntMatrix(int rows, int cols);

  static SparseIntMatrix fromTriplets(int rows, int cols, const std::vector<Triplet>& t);
  static SparseIntMatrix fromDense(const std::vector<std::vector<Integer>>& rows, int cols = -1);
  static SparseIntMatrix identity(int n);
  static SparseIntMatrix fromColumns(int rows, std::vector<Column> cols);
  static SparseIntMatrix fromColumnVectors(int rows, const std::vector<IntVector>& cols);

  int rows() const { return rows_; }
  int cols() const { return static_cast<int>(cols_.size()); }
  std::size_t nonZeros() const;

  Integer at(int r, int c) const;
  void set(int r, int c, const Integer& v);
  const Column& column(int c) const { return cols_[c]; }
  IntVector denseColumn(int c) const;
  std::vector<std::vector<Integer>> toDense() const;
  std::vector<Triplet> triplets() const;  // row-major order

  SparseIntMatrix transpose() const;
  SparseIntMatrix operator*(const SparseIntMatrix& o) const;
  SparseIntMatrix operator+(const SparseIntMatrix& o) const;
  SparseIntMatrix operator-(const SparseIntMatrix& o) const;
  SparseIntMatrix operator-() const;
  IntVector apply(const IntVector& x) const;
  bool operator==(const SparseIntMatrix& o) const;
  bool isZero() const { return nonZeros() == 0; }

  SparseIntMatrix selectColumns(const std::vector<int>& idx) const;
  SparseIntMatrix selectRows(const std::vector<int>& idx) const;
  /// [this | o]
  SparseIntMatrix hcat(const SparseIntMatrix& o) const;

  /// Header "rows cols nnz" then one "r c v" line per entry, row-major.
  std::string dump() const;
  static SparseIntMatrix parseDump(const std::string& text);

 private:
  int rows_ = 0;
  std::vector<Column> cols_;
};

struct SnfOptions {
  /// Elimination aborts with ResourceError once an entry exceeds this many bits.
  unsigned maxCoefficientBits = 1u << 16;
  bool computeTransforms = true;
};

/// U * A * V = D with U, V unimodular and D = diag(d_1 | d_2 | ... | d_r, 0, ...).
struct SmithDecomposition {
  int rows = 0;
  int cols = 0;
  std::vector<Integer> diagonal;  // positive, divisibility chain
  SparseIntMatrix U, Uinv, V, Vinv;

  int rank() const { return static_cast<int>(diagonal.size()); }
  SparseIntMatrix D() const;
};

SmithDecomposition smithNormalForm(const SparseIntMatrix& A, const SnfOptions& opt = {});

/// Invariant factors only (no transforms).
std::vector<Integer> invariantFactors(const SparseIntMatrix& A);

std::optional<IntVector> solveIntegerLinear(const SparseIntMatrix& A, const IntVector& b);
std::optional<IntVector> solveIntegerLinear(const SmithDecomposition& snf, const IntVector& b);

/// Saturated basis of ker A (columns) together with a left inverse (rows).
struct KernelBasis {
  SparseIntMatrix basis;        // cols x k
  SparseIntMatrix leftInverse;  // k x cols, leftInverse * basis = I
};
KernelBasis integerKernel(const SparseIntMatrix& A);
KernelBasis integerKernel(const SmithDecomposition& snf);

/// Basis (as columns) of the lattice spanned by the columns of G.
SparseIntMatrix latticeBasis(const SparseIntMatrix& G);

/// Finitely generated abelian group Z/t_1 + ... + Z/t_s + Z^f, torsion generators first.
class FgAbGroup {
 public:
  FgAbGroup() = default;
  FgAbGroup(int freeRank, std::vector<Integer> torsion);

  static FgAbGroup free(int rank) { return FgAbGroup(rank, {}); }
  static FgAbGroup trivial() { return FgAbGroup(0, {}); }

  int freeRank() const { return freeRank_; }
  const std::vector<Integer>& torsion() const { return torsion_; }
  int generatorCount() const { return freeRank_ + static_cast<int>(torsion_.size()); }
  /// Order of generator i; 0 means infinite.
  Integer order(int i) const;
  bool isTrivial() const { return generatorCount() == 0; }
  bool isFree() const { return torsion_.empty(); }
  bool isomorphic(const FgAbGroup& o) const;
  IntVector normalize(IntVector x) const;
  bool isZero(const IntVector& x) const;
  std::string str() const;

  /// Present when the group was built as a quotient of an ambient Z^m.
  bool hasAmbient() const { return ambientGenerators_.cols() == generatorCount() && ambientDim_ >= 0; }
  int ambientDimension() const { return ambientDim_; }
  const SparseIntMatrix& ambientGenerators() const { return ambientGenerators_; }  // m x g
  const SparseIntMatrix& coordinateMap() const { return coordinateMap_; }          // g x m
  IntVector coordinatesOf(const IntVector& ambient) const;
  IntVector ambientOf(const IntVector& coords) const;
  void setAmbient(int m, SparseIntMatrix gens, SparseIntMatrix coords);

 private:
  int freeRank_ = 0;
  std::vector<Integer> torsion_;
  int ambientDim_ = -1;
  SparseIntMatrix ambientGenerators_;
  SparseIntMatrix coordinateMap_;
};

/// coker(A) = Z^rows / A Z^cols with ambient generators and coordinate reading.
FgAbGroup cokernelPresentation(const SparseIntMatrix& A);

/// Homomorphism given by a matrix on generators, canonical modulo codomain torsion.
class AbHom {
 public:
  AbHom() = default;
  const FgAbGroup& domain() const { return dom_; }
  const FgAbGroup& codomain() const { return cod_; }
  const SparseIntMatrix& matrix() const { return m_; }
  IntVector apply(const IntVector& x) const;
  bool operator==(const AbHom& o) const;

  friend AbHom homFromMatrix(const FgAbGroup&, const FgAbGroup&, const SparseIntMatrix&);

 private:
  FgAbGroup dom_, cod_;
  SparseIntMatrix m_;
};

/// Throws ContractViolation unless torsion generators land in the relations.
AbHom homFromMatrix(const FgAbGroup& dom, const FgAbGroup& cod, const SparseIntMatrix& M);
AbHom identityHom(const FgAbGroup& G);
AbHom zeroHom(const FgAbGroup& dom, const FgAbGroup& cod);
AbHom compose(const AbHom& g, const AbHom& f);  // g after f
AbHom negate(const AbHom& f);

/// Subgroup of G as the lattice spanned by generators plus the torsion relations.
struct Subgroup {
  FgAbGroup ambient;
  SparseIntMatrix generators;  // g x s
};

Subgroup imageSubgroup(const AbHom& f);
Subgroup kernelSubgroup(const AbHom& f);
Subgroup wholeGroup(const FgAbGroup& G);
bool subgroupContains(const Subgroup& s, const IntVector& x);
bool subgroupIncluded(const Subgroup& a, const Subgroup& b);
bool subgroupEquals(const Subgroup& a, const Subgroup& b);
/// Iso type of the subgroup itself.
FgAbGroup subgroupType(const Subgroup& s);
/// Iso type of s / t, requires t inside s.
FgAbGroup quotientType(const Subgroup& s, const Subgroup& t);

struct KernelImage {
  FgAbGroup kernel;
  AbHom kernelInclusion;  // kernel -> domain
  FgAbGroup image;
  AbHom imageInclusion;   // image -> codomain
};
KernelImage kernelImage(const AbHom& f);

bool isInjective(const AbHom& f);
bool isSurjective(const AbHom& f);
bool isIsomorphism(const AbHom& f);
/// Inverse of an isomorphism; ContractViolation otherwise.
AbHom inverse(const AbHom& f);
/// im f == ker g inside the middle group.
bool isExactAt(const AbHom& f, const AbHom& g);

/// Extended gcd: returns g >= 0 with s*a + t*b = g.
Integer extendedGcd(const Integer& a, const Integer& b, Integer& s, Integer& t);

}  // namespace deepho
