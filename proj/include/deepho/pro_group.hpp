#pragma once

#include <optional>
#include <string>
#include <vector>

#include "deepho/exact_linear.hpp"

namespace deepho {

/// Inverse sequence of finitely generated abelian groups indexed by [first, last].
class InverseSequenceAb {
 public:
  InverseSequenceAb() = default;
  /// bondings[j] maps terms[j + 1] to terms[j].
  InverseSequenceAb(int first, std::vector<FgAbGroup> terms, std::vector<AbHom> bondings);

  static InverseSequenceAb constant(int first, int last, const FgAbGroup& G);

  int first() const { return first_; }
  int last() const { return first_ + static_cast<int>(terms_.size()) - 1; }
  int length() const { return static_cast<int>(terms_.size()); }
  const FgAbGroup& term(int m) const;
  /// term(m + 1) -> term(m)
  const AbHom& bonding(int m) const;
  /// term(from) -> term(to), from >= to.
  AbHom composite(int from, int to) const;
  /// Restriction to the sub-range [a, b].
  InverseSequenceAb restrict(int a, int b) const;

 private:
  int first_ = 0;
  std::vector<FgAbGroup> terms_;
  std::vector<AbHom> bondings_;
};

/// Level morphism: one homomorphism per index, squares audited on construction.
class ProMorphism {
 public:
  ProMorphism() = default;
  ProMorphism(const InverseSequenceAb& source, const InverseSequenceAb& target, std::vector<AbHom> components);

  int first() const { return first_; }
  int last() const { return first_ + static_cast<int>(components_.size()) - 1; }
  const AbHom& at(int m) const;
  /// Squares m (between indices m + 1 and m) that commute.
  const std::vector<bool>& squaresCommute() const { return commutes_; }
  bool allSquaresCommute() const;

 private:
  int first_ = 0;
  std::vector<AbHom> components_;
  std::vector<bool> commutes_;
};

enum class Verdict { StableEmpirically, Unstable, Inconclusive };
std::string toString(Verdict v);

struct StabilityReport {
  Verdict verdict = Verdict::Inconclusive;
  int R0 = 0;
  FgAbGroup eventualImage;
  int window = 3;
  std::string diagnostic;
  std::string toJson() const;
};

constexpr int kDefaultConfidenceWindow = 3;

/// Image chains im(term(m') -> term(m)) and the restricted bondings on the
/// eventual images decide an empirical stability verdict.
StabilityReport eventualImages(const InverseSequenceAb& seq, int w = kDefaultConfidenceWindow);

/// Eventual image of a stable sequence at one index, used as its limit.
struct StableLimit {
  int index = 0;
  FgAbGroup group;
  AbHom inclusion;  // group -> term(index), injective

  /// Coordinates of an element of term(index) lying in the eventual image.
  std::optional<IntVector> coordinatesOf(const IntVector& termElement) const;
};

/// Limit of a stable-empirically sequence at `index` (default: R0).
StableLimit inverseLimitStable(const InverseSequenceAb& seq, const StabilityReport& report, int index = -1);

/// Map between limits induced by a level map at the limits' common index.
AbHom limitMap(const StableLimit& source, const StableLimit& target, const AbHom& levelMap);

/// For a chain seqs[0] -> seqs[1] -> ... with maps[j] : seqs[j] -> seqs[j + 1],
/// per index: exactness at every interior position.
struct LevelExactness {
  std::vector<int> indices;
  std::vector<std::vector<bool>> exactAt;  // [index][interior position]
  bool allExact() const;
};
LevelExactness levelExactnessCheck(const std::vector<InverseSequenceAb>& seqs, const std::vector<ProMorphism>& maps);

struct FiveLemmaReport {
  Verdict claimed = Verdict::Inconclusive;  // what the lemma gives for C
  std::string failedHypothesis;
  StabilityReport direct;  // eventualImages(C)
  bool agrees() const;
};
FiveLemmaReport fiveLemmaStabilityCheck(const std::vector<InverseSequenceAb>& seqsABCDE,
                                        const std::vector<ProMorphism>& maps, int w = kDefaultConfidenceWindow);

struct LimitExactness {
  bool exact = false;
  int index = 0;
  std::vector<FgAbGroup> limits;
  std::vector<AbHom> maps;
  std::vector<bool> exactAt;  // interior positions
  std::string diagnostic;
};
LimitExactness limitExactnessCheck(const std::vector<InverseSequenceAb>& seqs, const std::vector<ProMorphism>& maps,
                                   int w = kDefaultConfidenceWindow);

}  // namespace deepho
