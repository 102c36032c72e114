#include "deepho/pro_group.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

#include "deepho/errors.hpp"

namespace deepho {

namespace {

// Columns t_i e_i for the torsion generators of G.
SparseIntMatrix relationColumns(const FgAbGroup& G) {
  std::vector<Triplet> t;
  const int nt = static_cast<int>(G.torsion().size());
  for (int i = 0; i < nt; ++i) t.push_back({i, i, G.torsion()[i]});
  return SparseIntMatrix::fromTriplets(G.generatorCount(), nt, t);
}

// Coordinates of x in the domain of an injective hom, if x is in its image.
std::optional<IntVector> preimage(const AbHom& inj, const IntVector& x) {
  const int k = inj.domain().generatorCount();
  if (k == 0) {
    if (inj.codomain().isZero(x)) return IntVector{};
    return std::nullopt;
  }
  auto sol = solveIntegerLinear(inj.matrix().hcat(relationColumns(inj.codomain())), x);
  if (!sol) return std::nullopt;
  sol->resize(k);
  return inj.domain().normalize(*sol);
}

// Hom S -> T where every image of a generator of S (given in the codomain of
// `into`) is expressed through the injective `into`.
AbHom factorThrough(const FgAbGroup& S, const std::vector<IntVector>& images, const AbHom& into) {
  std::vector<IntVector> cols;
  for (const auto& x : images) {
    auto y = preimage(into, x);
    require(y.has_value(), "element does not lie in the target subgroup");
    cols.push_back(*y);
  }
  return homFromMatrix(S, into.domain(),
                       SparseIntMatrix::fromColumnVectors(into.domain().generatorCount(), cols));
}

std::vector<IntVector> imagesOfGenerators(const AbHom& f) {
  std::vector<IntVector> out;
  for (int j = 0; j < f.domain().generatorCount(); ++j) out.push_back(f.matrix().denseColumn(j));
  return out;
}

}  // namespace

InverseSequenceAb::InverseSequenceAb(int first, std::vector<FgAbGroup> terms, std::vector<AbHom> bondings)
    : first_(first), terms_(std::move(terms)), bondings_(std::move(bondings)) {
  require(!terms_.empty(), "inverse sequence with empty index range");
  require(bondings_.size() + 1 == terms_.size(), "inverse sequence needs one bonding per consecutive pair");
  for (std::size_t j = 0; j < bondings_.size(); ++j) {
    require(bondings_[j].domain().freeRank() == terms_[j + 1].freeRank() &&
                bondings_[j].domain().torsion() == terms_[j + 1].torsion(),
            "bonding domain does not match its term");
    require(bondings_[j].codomain().generatorCount() == terms_[j].generatorCount(),
            "bonding codomain does not match its term");
  }
}

InverseSequenceAb InverseSequenceAb::constant(int first, int last, const FgAbGroup& G) {
  require(last >= first, "empty index range");
  std::vector<FgAbGroup> terms(last - first + 1, G);
  std::vector<AbHom> b(last - first, identityHom(G));
  return InverseSequenceAb(first, std::move(terms), std::move(b));
}

const FgAbGroup& InverseSequenceAb::term(int m) const {
  if (m < first() || m > last()) throw RangeError("index outside the inverse sequence");
  return terms_[m - first_];
}

const AbHom& InverseSequenceAb::bonding(int m) const {
  if (m < first() || m >= last()) throw RangeError("bonding index outside the inverse sequence");
  return bondings_[m - first_];
}

AbHom InverseSequenceAb::composite(int from, int to) const {
  require(from >= to, "composite runs from a larger index to a smaller one");
  AbHom h = identityHom(term(from));
  for (int m = from - 1; m >= to; --m) h = compose(bonding(m), h);
  return h;
}

InverseSequenceAb InverseSequenceAb::restrict(int a, int b) const {
  require(a >= first() && b <= last() && a <= b, "sub-range outside the sequence");
  std::vector<FgAbGroup> t(terms_.begin() + (a - first_), terms_.begin() + (b - first_ + 1));
  std::vector<AbHom> h(bondings_.begin() + (a - first_), bondings_.begin() + (b - first_));
  return InverseSequenceAb(a, std::move(t), std::move(h));
}

ProMorphism::ProMorphism(const InverseSequenceAb& source, const InverseSequenceAb& target,
                         std::vector<AbHom> components)
    : first_(source.first()), components_(std::move(components)) {
  require(source.first() == target.first() && source.last() == target.last(),
          "level morphism between sequences with different index ranges");
  require(static_cast<int>(components_.size()) == source.length(), "one component per index required");
  for (int m = source.first(); m <= source.last(); ++m) {
    const auto& f = components_[m - first_];
    require(f.domain().generatorCount() == source.term(m).generatorCount() &&
                f.codomain().generatorCount() == target.term(m).generatorCount(),
            "component does not match the terms");
  }
  for (int m = source.first(); m < source.last(); ++m)
    commutes_.push_back(compose(target.bonding(m), at(m + 1)) == compose(at(m), source.bonding(m)));
}

const AbHom& ProMorphism::at(int m) const {
  if (m < first() || m > last()) throw RangeError("index outside the morphism");
  return components_[m - first_];
}

bool ProMorphism::allSquaresCommute() const {
  for (bool b : commutes_)
    if (!b) return false;
  return true;
}

std::string toString(Verdict v) {
  switch (v) {
    case Verdict::StableEmpirically:
      return "stable-empirically";
    case Verdict::Unstable:
      return "unstable";
    default:
      return "inconclusive";
  }
}

std::string StabilityReport::toJson() const {
  nlohmann::json j;
  j["verdict"] = toString(verdict);
  j["R0"] = R0;
  std::vector<std::string> tor;
  for (const auto& t : eventualImage.torsion()) tor.push_back(t.str());
  j["eventualImage"] = {{"freeRank", eventualImage.freeRank()}, {"torsion", tor}};
  j["window"] = window;
  if (!diagnostic.empty()) j["diagnostic"] = diagnostic;
  return j.dump();
}

StabilityReport eventualImages(const InverseSequenceAb& seq, int w) {
  require(w >= 2 && seq.length() >= w, "stability needs a window w >= 2 inside the index range");
  const int last = seq.last();
  StabilityReport rep;
  rep.window = w;

  std::vector<char> coincide(seq.length(), 1), iso(seq.length(), 1);
  std::vector<KernelImage> eventual;
  for (int m = seq.first(); m <= last; ++m) eventual.push_back(kernelImage(seq.composite(last, m)));
  auto E = [&](int m) -> const KernelImage& { return eventual[m - seq.first()]; };
  for (int m = seq.first(); m < last; ++m) {
    Subgroup oneStep = imageSubgroup(seq.bonding(m));
    Subgroup ev = imageSubgroup(E(m).imageInclusion);
    coincide[m - seq.first()] = subgroupEquals(oneStep, ev);
    // p_m maps E(m+1) onto E(m); it is an isomorphism there iff injective.
    // E(last) is the whole last term, so the final bonding carries no evidence.
    if (m + 1 < last) iso[m - seq.first()] = isInjective(compose(seq.bonding(m), E(m + 1).imageInclusion));
  }

  int R0 = last;
  while (R0 > seq.first() && coincide[R0 - 1 - seq.first()] && iso[R0 - 1 - seq.first()]) --R0;
  rep.R0 = R0;
  rep.eventualImage = E(R0).image;
  if (last - R0 + 1 >= w) {
    rep.verdict = Verdict::StableEmpirically;
    return rep;
  }
  std::ostringstream diag;
  bool decreasing = false;
  for (int m = last - w + 1; m < last; ++m)
    if (!coincide[m - seq.first()]) {
      decreasing = true;
      diag << "image chain at index " << m << " still decreasing; ";
    } else if (!iso[m - seq.first()]) {
      diag << "bonding " << m + 1 << " -> " << m << " not injective on eventual images; ";
    }
  rep.verdict = decreasing ? Verdict::Unstable : Verdict::Inconclusive;
  rep.diagnostic = diag.str();
  return rep;
}

std::optional<IntVector> StableLimit::coordinatesOf(const IntVector& termElement) const {
  return preimage(inclusion, termElement);
}

StableLimit inverseLimitStable(const InverseSequenceAb& seq, const StabilityReport& report, int index) {
  if (report.verdict != Verdict::StableEmpirically)
    throw Error("inverse limit refused: sequence is " + toString(report.verdict) +
                (report.diagnostic.empty() ? "" : " (" + report.diagnostic + ")"));
  if (index < 0) index = report.R0;
  // the last term is its own eventual image and may still carry dying classes
  require(index >= report.R0 && index < std::max(seq.last(), report.R0 + 1), "limit index outside the stable range");
  auto ki = kernelImage(seq.composite(seq.last(), index));
  StableLimit L;
  L.index = index;
  L.group = ki.image;
  L.inclusion = ki.imageInclusion;
  return L;
}

AbHom limitMap(const StableLimit& source, const StableLimit& target, const AbHom& levelMap) {
  require(source.index == target.index, "limits taken at different indices");
  AbHom viaLevel = compose(levelMap, source.inclusion);
  return factorThrough(source.group, imagesOfGenerators(viaLevel), target.inclusion);
}

bool LevelExactness::allExact() const {
  for (const auto& row : exactAt)
    for (bool b : row)
      if (!b) return false;
  return true;
}

LevelExactness levelExactnessCheck(const std::vector<InverseSequenceAb>& seqs, const std::vector<ProMorphism>& maps) {
  require(seqs.size() >= 2 && maps.size() + 1 == seqs.size(), "need n sequences and n-1 maps");
  for (const auto& s : seqs)
    require(s.first() == seqs[0].first() && s.last() == seqs[0].last(), "sequences must share the index range");
  for (const auto& f : maps)
    require(f.first() == seqs[0].first() && f.last() == seqs[0].last(), "maps must share the index range");
  LevelExactness out;
  for (int m = seqs[0].first(); m <= seqs[0].last(); ++m) {
    out.indices.push_back(m);
    std::vector<bool> row;
    for (std::size_t j = 1; j + 1 < seqs.size(); ++j) row.push_back(isExactAt(maps[j - 1].at(m), maps[j].at(m)));
    out.exactAt.push_back(std::move(row));
  }
  return out;
}

bool FiveLemmaReport::agrees() const {
  return claimed != Verdict::StableEmpirically || direct.verdict == Verdict::StableEmpirically;
}

FiveLemmaReport fiveLemmaStabilityCheck(const std::vector<InverseSequenceAb>& seqs, const std::vector<ProMorphism>& maps,
                                        int w) {
  require(seqs.size() == 5 && maps.size() == 4, "five sequences and four maps expected");
  static const char* names[] = {"A", "B", "C", "D", "E"};
  FiveLemmaReport rep;
  rep.direct = eventualImages(seqs[2], w);
  for (std::size_t j = 0; j < maps.size(); ++j)
    if (!maps[j].allSquaresCommute()) {
      rep.failedHypothesis = std::string("map ") + names[j] + " -> " + names[j + 1] + " is not a level morphism";
      return rep;
    }
  auto ex = levelExactnessCheck(seqs, maps);
  for (std::size_t r = 0; r < ex.exactAt.size(); ++r)
    for (std::size_t p = 0; p < ex.exactAt[r].size(); ++p)
      if (!ex.exactAt[r][p]) {
        rep.failedHypothesis = std::string("level exactness at ") + names[p + 1] + ", index " +
                               std::to_string(ex.indices[r]);
        return rep;
      }
  for (int j : {0, 1, 3, 4}) {
    auto s = eventualImages(seqs[j], w);
    if (s.verdict != Verdict::StableEmpirically) {
      rep.failedHypothesis = names[j];
      return rep;
    }
  }
  rep.claimed = Verdict::StableEmpirically;
  return rep;
}

LimitExactness limitExactnessCheck(const std::vector<InverseSequenceAb>& seqs, const std::vector<ProMorphism>& maps,
                                   int w) {
  LimitExactness out;
  auto ex = levelExactnessCheck(seqs, maps);
  if (!ex.allExact()) {
    out.diagnostic = "level data not exact";
    return out;
  }
  std::vector<StabilityReport> reps;
  int index = seqs[0].first();
  for (std::size_t j = 0; j < seqs.size(); ++j) {
    reps.push_back(eventualImages(seqs[j], w));
    if (reps.back().verdict != Verdict::StableEmpirically) {
      out.diagnostic = "sequence " + std::to_string(j) + " is " + toString(reps.back().verdict);
      return out;
    }
    index = std::max(index, reps.back().R0);
  }
  out.index = index;
  std::vector<StableLimit> lims;
  for (std::size_t j = 0; j < seqs.size(); ++j) {
    lims.push_back(inverseLimitStable(seqs[j], reps[j], index));
    out.limits.push_back(lims.back().group);
  }
  for (std::size_t j = 0; j < maps.size(); ++j) out.maps.push_back(limitMap(lims[j], lims[j + 1], maps[j].at(index)));
  out.exact = true;
  for (std::size_t j = 1; j < out.maps.size(); ++j) {
    out.exactAt.push_back(isExactAt(out.maps[j - 1], out.maps[j]));
    out.exact = out.exact && out.exactAt.back();
  }
  return out;
}

}  // namespace deepho
