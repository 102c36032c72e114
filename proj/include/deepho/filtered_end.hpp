#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "deepho/grid_complex.hpp"
#include "deepho/homology.hpp"
#include "deepho/pro_group.hpp"

namespace deepho {

using SubcomplexPtr = std::shared_ptr<const Subcomplex>;

struct FiltrationStage {
  int R = 0;
  SubcomplexPtr N;  // N_R(K) inside X
  SubcomplexPtr Y;  // closure of X - N_R(K)
};

/// Complement filtration Y^R of K inside X for R in [Rmin, Rmax].
struct EndFiltration {
  SubcomplexPtr X, K;
  int Rmin = 0, Rmax = 0;
  std::vector<FiltrationStage> stages;
  /// K empty: every stage is X.
  bool degenerate = false;
  /// Window radius (largest sup-norm of a vertex of X).
  int windowRadius = 0;
  /// S >= 2 Rmax + margin.
  bool windowPolicyOk = true;

  const FiltrationStage& stage(int R) const;
};

constexpr int kWindowPolicyMargin = 2;
constexpr int kDeepShellMargin = 2;

/// Throws RangeError when the last complement stage is empty.
EndFiltration complementFiltration(SubcomplexPtr X, SubcomplexPtr K, int Rmin, int Rmax,
                                   int policyMargin = kWindowPolicyMargin);

struct DeepOptions {
  int window = kDefaultConfidenceWindow;
  int jobs = 1;
  HomologyOptions homology;
};

/// Per-stage homology models of Y^R, or of (Y_1^R, Y_0^R) when `inner` is given.
struct StageHomology {
  int Rmin = 0;
  std::vector<HomologyPtr> models;
  const HomologyModel& at(int R) const { return *models.at(R - Rmin); }
};
StageHomology stageHomology(const EndFiltration& F, const EndFiltration* inner = nullptr, const DeepOptions& opt = {});

struct DeepHomologyResult {
  int degree = 0;
  bool reduced = false;
  bool relative = false;
  InverseSequenceAb sequence;
  StabilityReport stability;
  std::optional<StableLimit> limit;
  /// Stage groups with representatives, index R - sequence.first().
  std::vector<HomologyGroup> stages;

  const HomologyGroup& stage(int R) const { return stages.at(R - sequence.first()); }
  /// Class in the limit of a cycle at stage R >= limit index.
  std::optional<IntVector> limitCoordinates(int R, const Chain& cycle) const;
  /// Cycle at stage R representing a limit element (R between the limit index and the last stage).
  Chain limitRepresentative(const IntVector& limitElement, int R) const;
  std::string toJson() const;
};

DeepHomologyResult deepHomology(const EndFiltration& F, int degree, bool reduced = false,
                                const EndFiltration* relativeTo = nullptr, const DeepOptions& opt = {});
/// Same, from precomputed stage models.
DeepHomologyResult deepHomology(const StageHomology& H, int degree, bool reduced = false, int window = kDefaultConfidenceWindow);

/// Limit map induced by stage inclusions of the source into the target; both stable.
AbHom deepInducedMap(const DeepHomologyResult& source, const DeepHomologyResult& target,
                     const ChainMapFn& f = {});
/// Map between deep homology limits for K_small inside K_big: complements of K_big include into those of K_small.
AbHom endInducedMap(const EndFiltration& outer, const EndFiltration& inner, int degree, bool reduced = false,
                    const DeepOptions& opt = {});

/// Deep components of every stage and the ends they stabilize to.
struct RelativeEnds {
  Verdict verdict = Verdict::Inconclusive;
  int R0 = 0;
  int Rmin = 0;
  int endCount = 0;
  std::vector<Components> components;       // per stage
  std::vector<std::vector<char>> deep;      // per stage, per component label
  std::vector<std::vector<int>> perStage;   // per stage >= R0: end -> component label
  std::string diagnostic;

  /// Coefficient sums of a 0-chain over the deep components of stage R, in end order;
  /// empty when some shallow component carries non-zero mass.
  std::optional<IntVector> endCoordinates(int R, const Chain& zeroChain) const;
  std::string toJson() const;
};

RelativeEnds deepComponents(const EndFiltration& F, int margin = kDeepShellMargin,
                            int window = kDefaultConfidenceWindow);

}  // namespace deepho
