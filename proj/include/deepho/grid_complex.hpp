#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace deepho {

/// Lattice point; coordinates past the ambient dimension are zero.
using Point = std::array<int, 3>;

int supNorm(const Point& p);

/// Finite simplicial complex with vertices in Z^n. Vertex ids follow the
/// lexicographic order of coordinates, simplex ids the lexicographic order of
/// their sorted vertex-id tuples.
class SimplicialComplex {
 public:
  /// Builds the complex spanned by `simplices` (vertex indices into `points`).
  /// With `addFaces` every face of every given simplex is added; otherwise the
  /// input must already be closed under faces.
  static std::shared_ptr<const SimplicialComplex> build(int ambientDim, std::vector<Point> points,
                                                        std::vector<std::vector<int>> simplices,
                                                        bool addFaces = true);

  int ambientDim() const { return ambientDim_; }
  int dim() const { return static_cast<int>(verts_.size()) - 1; }
  int count(int d) const;
  std::size_t totalSimplices() const;

  const Point& point(int v) const { return points_[v]; }
  const std::vector<Point>& points() const { return points_; }
  std::span<const int> vertices(int d, int id) const {
    return {verts_[d].data() + static_cast<std::size_t>(id) * (d + 1), static_cast<std::size_t>(d + 1)};
  }
  /// Facet i omits vertex i; its boundary sign is (-1)^i.
  std::span<const int> facets(int d, int id) const {
    return {facets_[d].data() + static_cast<std::size_t>(id) * (d + 1), static_cast<std::size_t>(d + 1)};
  }
  std::span<const int> cofaces(int d, int id) const {
    const auto& off = cofaceOffsets_[d];
    return {cofaces_[d].data() + off[id], static_cast<std::size_t>(off[id + 1] - off[id])};
  }
  /// Id of the simplex with the given sorted vertex ids, -1 if absent.
  int find(int d, std::span<const int> sortedVertices) const;
  int findVertex(const Point& p) const;

  std::string toJson(int windowRadius = -1) const;
  static std::shared_ptr<const SimplicialComplex> fromJson(const std::string& text);

 private:
  int ambientDim_ = 0;
  std::vector<Point> points_;
  std::vector<std::vector<int>> verts_;    // per dimension, flat (d+1)-tuples
  std::vector<std::vector<int>> facets_;   // per dimension, flat (d+1)-tuples, empty for d=0
  std::vector<std::vector<int>> cofaces_;  // per dimension, CSR payload
  std::vector<std::vector<int>> cofaceOffsets_;
};

using ComplexPtr = std::shared_ptr<const SimplicialComplex>;

/// Subset of a parent complex, stored as per-dimension membership flags.
class Subcomplex {
 public:
  Subcomplex() = default;
  explicit Subcomplex(ComplexPtr parent, bool full = false);

  static Subcomplex closureOf(ComplexPtr parent, const std::vector<std::pair<int, int>>& simplices);
  /// All simplices whose vertices lie in the given vertex set.
  static Subcomplex spannedBy(ComplexPtr parent, const std::vector<char>& vertexMask);

  const SimplicialComplex& complex() const { return *parent_; }
  const ComplexPtr& parent() const { return parent_; }
  bool valid() const { return parent_ != nullptr; }

  bool contains(int d, int id) const { return d < static_cast<int>(mask_.size()) && mask_[d][id]; }
  void insert(int d, int id) { mask_[d][id] = 1; }
  void erase(int d, int id) { mask_[d][id] = 0; }
  /// Adds all faces of member simplices.
  void close();
  bool isClosed() const;

  int count(int d) const;
  std::size_t size() const;
  bool empty() const { return size() == 0; }
  std::vector<int> simplices(int d) const;
  std::vector<int> vertexIds() const { return simplices(0); }
  const std::vector<char>& mask(int d) const { return mask_[d]; }
  int dim() const;

  Subcomplex unite(const Subcomplex& o) const;
  Subcomplex intersect(const Subcomplex& o) const;
  bool includedIn(const Subcomplex& o) const;
  bool operator==(const Subcomplex& o) const;

  std::string toJson() const;

 private:
  ComplexPtr parent_;
  std::vector<std::vector<char>> mask_;
};

/// R-fold iterated closed star of K inside its parent.
Subcomplex starNeighborhood(const Subcomplex& K, int R);
/// Same, restricted to an ambient subcomplex A containing K.
Subcomplex starNeighborhood(const Subcomplex& A, const Subcomplex& K, int R);
/// Closure of the simplices of A not in L.
Subcomplex complementClosure(const Subcomplex& A, const Subcomplex& L);
Subcomplex complementClosure(const Subcomplex& L);
/// L intersected with the closure of its complement.
Subcomplex frontier(const Subcomplex& L);

/// Vertex component labels (-1 outside) and the number of components.
struct Components {
  std::vector<int> label;
  int count = 0;
};
Components connectedComponents(const Subcomplex& K);

/// Triangulated cube [-S, S]^n (Freudenthal-Kuhn) with its boundary subcomplex.
struct Window {
  int n = 0;
  int S = 0;
  ComplexPtr complex;
  Subcomplex boundary;

  int vertexId(const Point& p) const;
  bool contains(const Point& p) const;
  Subcomplex full() const { return Subcomplex(complex, true); }
};

constexpr std::size_t kDefaultSimplexBudget = 2'000'000;

/// Estimated simplex count of a window, used for budget checks.
std::size_t windowSimplexEstimate(int n, int S);
Window buildWindow(int n, int S, std::size_t budget = kDefaultSimplexBudget);

/// Orientation sign of a top simplex relative to the standard orientation of R^n.
int topSimplexOrientation(const SimplicialComplex& X, int id);

}  // namespace deepho
