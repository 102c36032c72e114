#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "deepho/book_scenes.hpp"
#include "deepho/errors.hpp"

namespace deepho {

constexpr int kReportSchema = 1;

/// Invalid experiment configuration; `pointer` is a JSON pointer into the config.
class ConfigError : public Error {
 public:
  ConfigError(std::string pointer, const std::string& what) : Error(pointer + ": " + what), pointer(std::move(pointer)) {}
  std::string pointer;
};

struct ExperimentConfig {
  std::string name;
  int k = 2;
  std::vector<PageDirection> directions;
  int T = 10, S = 14;
  /// "book": K = f(W_k); "spine": K = f(W_0).
  std::string subject = "book";
  int Rmin = 1, Rmax = 5;
  std::vector<int> degrees{0, 1, 2};
  /// Subset of: ends, deep, duality, ladder, adjacency, jordan, collapse, containment, chainmap, symmetry.
  std::vector<std::string> checks;
  /// Lattice isometries audited by the symmetry check.
  std::vector<LatticeIsometry> symmetries;
  std::uint64_t seed = 1;
  std::string reportFile = "report.json";
  std::string dotFile = "adjacency.dot";

  std::string toJson() const;
  /// Throws ConfigError naming the offending field.
  static ExperimentConfig fromJson(const std::string& text);
  void validate() const;
};

std::vector<std::string> knownChecks();

struct RunOptions {
  int jobs = 1;
  std::size_t budget = kDefaultSimplexBudget;
};

struct ExperimentReport {
  std::string json;  // deterministic: same config and build give the same bytes
  std::string dot;   // empty unless the adjacency check ran
  bool allPass = false;
};

ExperimentReport runExperiment(const ExperimentConfig& config, const RunOptions& opt = {});

/// Scene construction only: book, window size and control audit.
std::string buildSceneReport(const ExperimentConfig& config, const RunOptions& opt = {});

struct ReplayVerdict {
  std::vector<std::pair<std::string, bool>> certificates;
  bool allPass = false;
  std::string json;
};
/// Re-audits the identities recorded in a report and recomputes its limits, optionally
/// in a window of a different radius. Throws ConfigError for an unknown schema.
ReplayVerdict replayReport(const std::string& reportJson, const RunOptions& opt = {},
                           std::optional<int> windowOverride = std::nullopt);

}  // namespace deepho
