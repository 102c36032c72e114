#pragma once

#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "deepho/coarse_map.hpp"
#include "deepho/duality.hpp"
#include "deepho/filtered_end.hpp"

namespace deepho {

/// Primitive direction in the xy-plane.
struct PageDirection {
  int a = 0, b = 0;
  bool operator==(const PageDirection&) const = default;
};

/// Sorted 1-based page indices; the spine is always present.
using PageSet = std::vector<int>;

PageSet allPages(int k);
PageSet withoutPage(const PageSet& P, int page);

/// Lattice path from the origin following a direction with steps in
/// {+-e_x, +-e_y, +-(e_x + e_y)}, stopped at sup-norm `extent`.
std::vector<Point> staircasePath(PageDirection d, int extent);

/// Directions used by the standard scenes: (1,0),(-1,0) for k = 2, (1,0),(0,1),(-1,-1)
/// for k = 3, (1,0),(0,1),(-1,0),(0,-1) for k = 4, then further primitive directions.
std::vector<PageDirection> defaultDirections(int k);

/// k half-planes in R^3 glued along the z-axis, truncated at sup-norm T.
struct BookComplex {
  int k = 0, T = 0;
  std::vector<PageDirection> directions;
  ComplexPtr complex;
  SubcomplexPtr spine;
  std::vector<SubcomplexPtr> pages;  // pages[i]: page i + 1 together with the spine
  SubcomplexPtr frontier;            // spanned by the vertices of sup-norm T

  /// Spine together with the listed pages.
  SubcomplexPtr part(const PageSet& P) const;
  long eulerCharacteristic() const;
  std::string toJson() const;
};

/// Throws ContractViolation for repeated or non-primitive directions and for pages that
/// meet outside the spine at this extent.
BookComplex buildBook(int k, const std::vector<PageDirection>& directions, int T);

constexpr int kSceneMargin = 2;

/// A book mapped into a window by the inclusion of lattice points. The domain continues
/// the pages out to the window boundary so that every complement stage sees all ends;
/// `book` keeps the truncation at T.
struct BookScene {
  BookComplex book;
  BookComplex domain;
  std::shared_ptr<const Window> window;
  CoarseMapSample f;
  ChainApproximation fsharp;
  ControlEstimate controls;

  int k() const { return book.k; }
  int S() const { return window->S; }
  /// f(W_P) inside the window.
  SubcomplexPtr image(const PageSet& P) const;
  SubcomplexPtr domainPart(const PageSet& P) const;
};

/// Requires S >= T + kSceneMargin; refuses maps whose control audit fails.
BookScene embedBookInWindow(const BookComplex& book, int S, std::size_t budget = kDefaultSimplexBudget);

struct SceneOptions {
  int Rmin = 1, Rmax = 5;
  DeepOptions deep;
};

/// Caches filtrations, stage homology and ends of the parts W_P of a scene.
/// Not safe for concurrent use; prefetch() parallelizes internally.
class SceneAnalysis {
 public:
  explicit SceneAnalysis(std::shared_ptr<const BookScene> scene, SceneOptions opt = {});

  const BookScene& scene() const { return *scene_; }
  const SceneOptions& options() const { return opt_; }

  const EndFiltration& filtration(const PageSet& P);
  const RelativeEnds& ends(const PageSet& P);
  /// Deep homology of Y(W_P).
  const DeepHomologyResult& deep(const PageSet& P, int degree, bool reduced = false);
  /// Deep homology of the pair (Y(W_P), Y(W_Q)) for P inside Q.
  const DeepHomologyResult& deepRelative(const PageSet& P, const PageSet& Q, int degree);
  const DualitySetup& duality(int orientation);

  /// Computes stage models for absolute parts (Q empty) and pairs in parallel.
  void prefetch(const std::vector<std::pair<PageSet, std::optional<PageSet>>>& requests);

  /// Ends of Y(W_P) sent into ends of Y(W_Q) for Q inside P at stage R; -1 for a shallow target.
  std::vector<int> endInclusion(const PageSet& P, const PageSet& Q, int R);
  /// A vertex of the deep component of end e of Y(W_P) at stage R.
  int endRepresentative(const PageSet& P, int e, int R);

 private:
  const StageHomology& models(const PageSet& P, const std::optional<PageSet>& Q);

  std::shared_ptr<const BookScene> scene_;
  SceneOptions opt_;
  std::shared_ptr<const Subcomplex> X_;
  std::map<PageSet, EndFiltration> filtrations_;
  std::map<PageSet, RelativeEnds> ends_;
  std::map<std::pair<PageSet, PageSet>, StageHomology> models_;  // empty second: absolute
  std::map<std::tuple<PageSet, PageSet, int, bool>, DeepHomologyResult> deep_;
  std::map<int, DualitySetup> duality_;
  std::mutex mutex_;
};

struct AdjacencyEdge {
  int page = 0;
  int from = -1, to = -1;  // ends of Y(W_P), from < to
  /// End coordinates of the boundary of the certificate, oriented so that `from` gets +1.
  IntVector certificateBoundary;
  /// The certificate is this sign times the generator of the deep H_1 limit.
  int certificateSign = 1;
  bool certified = false;
};

struct AdjacencyGraph {
  PageSet pages;
  int vertexCount = 0;
  int stage = 0;
  std::vector<AdjacencyEdge> edges;
  bool valid = true;
  std::string diagnostic;

  std::string toDot() const;
  std::string toJson() const;
};

/// Vertices are the ends of Y(W_P); page p contributes an edge between the unique pair of
/// ends that merge when p is removed, certified by a generator of the deep H_1 of
/// (Y(W_{P - p}), Y(W_P)).
AdjacencyGraph adjacencyGraph(SceneAnalysis& A, const PageSet& P);
AdjacencyGraph adjacencyGraph(SceneAnalysis& A);
/// Graph from an edge list, for circuit checks on abstract graphs.
AdjacencyGraph graphFromEdges(int vertexCount, const std::vector<std::pair<int, int>>& edges);

struct CircuitVerdict {
  bool isCircuit = false;
  std::vector<int> vertexOrder;  // cyclic order of the vertices
  std::vector<int> edgeOrder;    // edgeOrder[i] joins vertexOrder[i] and vertexOrder[i + 1]
  std::string witness;
};
CircuitVerdict verifyCircuit(const AdjacencyGraph& G);

struct AdjacencyChainComplex {
  PageSet pages;
  int stage = 0;
  SparseIntMatrix boundary;   // ends x pages, basis from the edge certificates
  SparseIntMatrix incidence;  // oriented incidence matrix of the graph
  std::vector<int> columnSigns;
  bool matchesIncidence = false;
  bool splittingIso = false;  // deep H_1(Y(W_0), Y(W_P)) -> product over pages of H_1(Y(W_0), Y(W_1^i))
  std::vector<bool> excisionIso;
  int rankBoundary = 0;
  FgAbGroup H0, H1;
  std::string diagnostic;
  std::string toJson() const;
};
AdjacencyChainComplex adjacencyChainComplex(SceneAnalysis& A, const AdjacencyGraph& G);

/// Coordinates of the deep H_1 generator of Y(W_0) in the product over pages, with
/// factor generators chosen by duality from the upward spine edge.
struct JordanCycle {
  int orientation = 1;
  int stage = 0;
  std::vector<Integer> coordinates;  // raw, one per page
  std::vector<Integer> normalized;   // coordinates times the sign of the first
  int normalizationSign = 0;
  Chain generatorCycle;              // window 1-cycle at `stage`
  std::vector<bool> factorIso;       // deep H_1(Y(W_0)) -> H_1(Y(W_0), Y(W_1^i))
  bool inKernel = false;             // image in the adjacency chain complex is a cycle
  bool generatesH1 = false;
  std::string diagnostic;
  std::string toJson() const;
};
JordanCycle jordanCycle(SceneAnalysis& A, int orientation = 1);

/// Gamma(W_P) -> Gamma(W_{P - i}): the ends map by inclusion, edge i collapses to a vertex and
/// every other edge goes to the edge of the same page.
struct CollapseMap {
  PageSet source;
  int collapsed = 0;
  AdjacencyGraph from, to;
  std::vector<int> vertexMap;
  std::vector<int> edgeTarget;         // per edge of `from`: index of an edge of `to`, -1 for a vertex
  std::vector<int> edgeVertex;         // per edge mapped to a vertex: that vertex
  std::vector<bool> excisionSquares;   // per surviving page: exc maps certificate to +-certificate
  bool collapsesExactly = false;
  bool degenerate = false;             // target has no edge for some surviving page
  std::string diagnostic;
  std::string toJson() const;
};
CollapseMap collapseMap(SceneAnalysis& A, const PageSet& P, int page);
CollapseMap collapseMap(SceneAnalysis& A, int page);

/// For every page j outside `kept`, the smallest M such that the vertices of page j at domain
/// distance > M from W_kept land in a single deep component of Y(W_kept) at stage R0.
struct DeepContainment {
  PageSet kept;
  int R0 = 0;
  std::vector<int> pages;
  std::vector<int> M;    // -1 when no M up to the page size works
  std::vector<int> end;  // end of Y(W_kept) holding the far part of the page
  bool holds = false;
  std::string toJson() const;
};
DeepContainment deepContainmentCheck(SceneAnalysis& A, const PageSet& kept);

/// Signed permutation matrix acting on lattice points.
using LatticeIsometry = std::array<std::array<int, 3>, 3>;

struct SymmetryAction {
  LatticeIsometry g{};
  bool simplicial = false;  // preserves the triangulation of the window
  std::vector<int> pagePermutation;  // 0-based page index -> 0-based page index
  std::vector<int> endPermutation;
  std::vector<int> edgeSigns;        // image of the oriented edge boundary relative to the target's
  bool compatible = false;
  std::string diagnostic;
  std::string toJson() const;
};
/// Throws ContractViolation when g does not preserve f(W_k).
SymmetryAction sceneSymmetryAction(SceneAnalysis& A, const LatticeIsometry& g);

}  // namespace deepho
