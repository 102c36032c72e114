#include "deepho/filtered_end.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

#include "deepho/errors.hpp"
#include "parallel.hpp"

namespace deepho {

namespace {

nlohmann::json groupJson(const FgAbGroup& G) {
  std::vector<std::string> tor;
  for (const auto& t : G.torsion()) tor.push_back(t.str());
  return {{"freeRank", G.freeRank()}, {"torsion", tor}};
}

Chain combination(const std::vector<Chain>& reps, const IntVector& coeffs, int dim) {
  Chain c;
  c.dim = dim;
  for (std::size_t k = 0; k < coeffs.size(); ++k)
    if (coeffs[k] != 0) c = c + coeffs[k] * reps[k];
  return c;
}

}  // namespace

const FiltrationStage& EndFiltration::stage(int R) const {
  if (R < Rmin || R > Rmax) throw RangeError("stage outside the filtration range");
  return stages[R - Rmin];
}

EndFiltration complementFiltration(SubcomplexPtr X, SubcomplexPtr K, int Rmin, int Rmax, int policyMargin) {
  require(X && K, "filtration needs X and K");
  require(0 <= Rmin && Rmin <= Rmax, "bad filtration range");
  require(K->includedIn(*X), "K must lie in X");
  EndFiltration F;
  F.X = X;
  F.K = K;
  F.Rmin = Rmin;
  F.Rmax = Rmax;
  F.degenerate = K->empty();
  for (int v : X->vertexIds()) F.windowRadius = std::max(F.windowRadius, supNorm(X->complex().point(v)));
  F.windowPolicyOk = F.windowRadius >= 2 * Rmax + policyMargin;

  Subcomplex N = *K;
  for (int R = 0; R < Rmin; ++R) N = starNeighborhood(*X, N, 1);
  for (int R = Rmin; R <= Rmax; ++R) {
    if (R > Rmin) N = starNeighborhood(*X, N, 1);
    FiltrationStage s;
    s.R = R;
    s.N = std::make_shared<const Subcomplex>(N);
    s.Y = F.degenerate ? X : std::make_shared<const Subcomplex>(complementClosure(*X, N));
    F.stages.push_back(std::move(s));
  }
  if (F.stages.back().Y->empty()) throw RangeError("complement exhausted at R = " + std::to_string(Rmax));
  return F;
}

StageHomology stageHomology(const EndFiltration& F, const EndFiltration* inner, const DeepOptions& opt) {
  if (inner) {
    require(inner->Rmin == F.Rmin && inner->Rmax == F.Rmax, "relative filtrations need the same range");
    require(F.K->includedIn(*inner->K), "relative mode needs the outer K inside the inner K");
  }
  StageHomology H;
  H.Rmin = F.Rmin;
  H.models.resize(F.stages.size());
  detail::parallelFor(static_cast<int>(F.stages.size()), opt.jobs, [&](int j) {
    SubcomplexPtr L;
    if (inner) {
      L = inner->stages[j].Y;
      require(L->includedIn(*F.stages[j].Y), "relative stages do not nest");
    }
    H.models[j] = HomologyModel::ofPair(F.stages[j].Y, L, opt.homology);
  });
  return H;
}

DeepHomologyResult deepHomology(const StageHomology& H, int degree, bool reduced, int window) {
  DeepHomologyResult out;
  out.degree = degree;
  out.reduced = reduced;
  out.relative = !H.models.empty() && H.models[0]->divisor() != nullptr;
  std::vector<FgAbGroup> terms;
  for (const auto& M : H.models) {
    out.stages.push_back(M->group(degree, reduced));
    terms.push_back(out.stages.back().group());
  }
  std::vector<AbHom> bond;
  for (std::size_t j = 0; j + 1 < out.stages.size(); ++j)
    bond.push_back(inducedMapOnHomology(out.stages[j + 1], out.stages[j]));
  out.sequence = InverseSequenceAb(H.Rmin, std::move(terms), std::move(bond));
  out.stability = eventualImages(out.sequence, window);
  if (out.stability.verdict == Verdict::StableEmpirically)
    out.limit = inverseLimitStable(out.sequence, out.stability);
  return out;
}

DeepHomologyResult deepHomology(const EndFiltration& F, int degree, bool reduced, const EndFiltration* relativeTo,
                                const DeepOptions& opt) {
  return deepHomology(stageHomology(F, relativeTo, opt), degree, reduced, opt.window);
}

std::optional<IntVector> DeepHomologyResult::limitCoordinates(int R, const Chain& cycle) const {
  require(limit.has_value(), "deep homology is not stable");
  require(R >= limit->index, "stage below the limit index");
  IntVector x = stage(R).coordinates(cycle);
  return limit->coordinatesOf(sequence.composite(R, limit->index).apply(x));
}

Chain DeepHomologyResult::limitRepresentative(const IntVector& limitElement, int R) const {
  require(limit.has_value(), "deep homology is not stable");
  require(R >= limit->index && R <= sequence.last(), "stage outside the stable range");
  IntVector x = limit->inclusion.apply(limitElement);
  const int last = sequence.last();
  auto down = sequence.composite(last, limit->index);
  std::vector<Triplet> rel;
  const auto& T = sequence.term(limit->index);
  for (std::size_t i = 0; i < T.torsion().size(); ++i)
    rel.push_back({static_cast<int>(i), static_cast<int>(i), T.torsion()[i]});
  auto relM = SparseIntMatrix::fromTriplets(T.generatorCount(), static_cast<int>(T.torsion().size()), rel);
  auto w = solveIntegerLinear(down.matrix().hcat(relM), x);
  require(w.has_value(), "limit element outside the eventual image");
  w->resize(sequence.term(last).generatorCount());
  IntVector y = sequence.term(R).normalize(sequence.composite(last, R).apply(*w));
  return combination(stage(R).representatives(), y, degree);
}

std::string DeepHomologyResult::toJson() const {
  nlohmann::json j;
  j["i"] = degree;
  j["reduced"] = reduced;
  j["relative"] = relative;
  auto st = nlohmann::json::array();
  for (int R = sequence.first(); R <= sequence.last(); ++R) {
    auto g = groupJson(sequence.term(R));
    g["R"] = R;
    st.push_back(g);
  }
  j["stages"] = st;
  j["verdict"] = toString(stability.verdict);
  j["R0"] = stability.R0;
  j["limit"] = limit ? groupJson(limit->group) : nlohmann::json(nullptr);
  return j.dump();
}

AbHom deepInducedMap(const DeepHomologyResult& source, const DeepHomologyResult& target, const ChainMapFn& f) {
  if (!source.limit || !target.limit) throw Error("induced map on deep homology refused: sequence not stable");
  const int index = std::max(source.limit->index, target.limit->index);
  require(index < std::min(source.sequence.last(), target.sequence.last()) &&
              index >= std::max(source.sequence.first(), target.sequence.first()),
          "no common stable stage");
  auto ls = inverseLimitStable(source.sequence, source.stability, index);
  auto lt = inverseLimitStable(target.sequence, target.stability, index);
  return limitMap(ls, lt, inducedMapOnHomology(source.stage(index), target.stage(index), f));
}

AbHom endInducedMap(const EndFiltration& outer, const EndFiltration& inner, int degree, bool reduced,
                    const DeepOptions& opt) {
  require(outer.K->includedIn(*inner.K), "end map needs the outer K inside the inner K");
  auto big = deepHomology(inner, degree, reduced, nullptr, opt);
  auto small = deepHomology(outer, degree, reduced, nullptr, opt);
  return deepInducedMap(big, small);
}

RelativeEnds deepComponents(const EndFiltration& F, int margin, int window) {
  RelativeEnds E;
  E.Rmin = F.Rmin;
  const int n = static_cast<int>(F.stages.size());
  const auto& X = F.X->complex();
  const int shell = F.windowRadius - margin;
  E.components.resize(n);
  E.deep.resize(n);
  std::vector<std::vector<char>> candidate(n);
  for (int j = 0; j < n; ++j) {
    E.components[j] = connectedComponents(*F.stages[j].Y);
    candidate[j].assign(E.components[j].count, 0);
    for (int v : F.stages[j].Y->vertexIds())
      if (supNorm(X.point(v)) >= shell) candidate[j][E.components[j].label[v]] = 1;
  }
  // a representative vertex per component, and the parent component one stage down
  auto firstVertex = [&](int j) {
    std::vector<int> rep(E.components[j].count, -1);
    const auto& lab = E.components[j].label;
    for (int v = 0; v < static_cast<int>(lab.size()); ++v)
      if (lab[v] >= 0 && rep[lab[v]] < 0) rep[lab[v]] = v;
    return rep;
  };
  std::vector<std::vector<int>> parent(n);  // parent[j][c]: component of stage j-1 containing c
  for (int j = 1; j < n; ++j) {
    auto rep = firstVertex(j);
    for (int c = 0; c < E.components[j].count; ++c) parent[j].push_back(E.components[j - 1].label[rep[c]]);
  }
  E.deep[n - 1] = candidate[n - 1];
  for (int j = n - 2; j >= 0; --j) {
    E.deep[j].assign(E.components[j].count, 0);
    for (int c = 0; c < E.components[j + 1].count; ++c)
      if (E.deep[j + 1][c] && candidate[j][parent[j + 1][c]]) E.deep[j][parent[j + 1][c]] = 1;
  }
  // bijection between deep components of consecutive stages
  std::vector<char> bij(n, 1);
  for (int j = 1; j < n; ++j) {
    std::vector<int> hits(E.components[j - 1].count, 0);
    int deepHere = 0, deepBelow = 0;
    for (int c = 0; c < E.components[j].count; ++c)
      if (E.deep[j][c]) {
        ++deepHere;
        ++hits[parent[j][c]];
      }
    for (int c = 0; c < E.components[j - 1].count; ++c)
      if (E.deep[j - 1][c]) {
        ++deepBelow;
        if (hits[c] != 1) bij[j] = 0;
      }
    if (deepHere != deepBelow) bij[j] = 0;
  }
  int j0 = n - 1;
  while (j0 > 0 && bij[j0]) --j0;
  E.R0 = F.Rmin + j0;
  if (n - j0 < window) {
    std::ostringstream d;
    d << "deep components change at stage " << E.R0 << "; fewer than " << window << " agreeing stages";
    E.diagnostic = d.str();
    E.verdict = Verdict::Inconclusive;
  } else {
    E.verdict = Verdict::StableEmpirically;
  }
  E.perStage.resize(n);
  std::vector<int> endOf(E.components[j0].count, -1);
  for (int c = 0; c < E.components[j0].count; ++c)
    if (E.deep[j0][c]) {
      endOf[c] = E.endCount++;
      E.perStage[j0].push_back(c);
    }
  for (int j = j0 + 1; j < n; ++j) {
    E.perStage[j].assign(E.endCount, -1);
    std::vector<int> next(E.components[j].count, -1);
    for (int c = 0; c < E.components[j].count; ++c)
      if (E.deep[j][c]) {
        next[c] = endOf[parent[j][c]];
        E.perStage[j][next[c]] = c;
      }
    endOf = std::move(next);
  }
  return E;
}

std::optional<IntVector> RelativeEnds::endCoordinates(int R, const Chain& zeroChain) const {
  require(zeroChain.empty() || zeroChain.dim == 0, "end coordinates need a 0-chain");
  require(R >= R0 && R - Rmin < static_cast<int>(components.size()), "stage outside the stable range");
  const int j = R - Rmin;
  const auto& C = components[j];
  std::vector<Integer> mass(C.count);
  for (const auto& [v, c] : zeroChain.terms) {
    require(C.label[v] >= 0, "vertex outside the complement stage");
    mass[C.label[v]] += c;
  }
  IntVector out(endCount);
  std::vector<int> endOf(C.count, -1);
  for (int e = 0; e < endCount; ++e) endOf[perStage[j][e]] = e;
  for (int c = 0; c < C.count; ++c) {
    if (endOf[c] >= 0)
      out[endOf[c]] = mass[c];
    else if (mass[c] != 0)
      return std::nullopt;
  }
  return out;
}

std::string RelativeEnds::toJson() const {
  nlohmann::json j;
  j["verdict"] = toString(verdict);
  j["R0"] = R0;
  j["ends"] = endCount;
  auto st = nlohmann::json::array();
  for (std::size_t s = 0; s < components.size(); ++s) {
    int d = 0;
    for (char c : deep[s]) d += c;
    st.push_back({{"R", Rmin + static_cast<int>(s)}, {"components", components[s].count}, {"deep", d}});
  }
  j["stages"] = st;
  if (!diagnostic.empty()) j["diagnostic"] = diagnostic;
  return j.dump();
}

}  // namespace deepho
