#include "deepho/duality.hpp"

#include <json.hpp>

#include "deepho/errors.hpp"
#include "parallel.hpp"

namespace deepho {

using nlohmann::json;

namespace {

json groupJson(const FgAbGroup& G) {
  std::vector<std::string> tor;
  for (const auto& t : G.torsion()) tor.push_back(t.str());
  return {{"freeRank", G.freeRank()}, {"torsion", tor}};
}

json homJson(const AbHom& f) {
  json rows = json::array();
  for (const auto& r : f.matrix().toDense()) {
    json row = json::array();
    for (const auto& v : r) row.push_back(v.str());
    rows.push_back(row);
  }
  return rows;
}

SubcomplexPtr neighborhoodAbove(const DualitySetup& S, const FiltrationStage& st) {
  return std::make_shared<const Subcomplex>(starNeighborhood(*S.X, *st.N, S.offset));
}

SubcomplexPtr meetBoundary(const DualitySetup& S, const Subcomplex& N) {
  return std::make_shared<const Subcomplex>(N.intersect(*S.dX));
}

ChainMapFn capFn(const DualitySetup& S) {
  return [&S](const Chain& c) { return S.cap.apply(c); };
}

// f^* after the inverse of the cap map from `coh` to `hom`.
AbHom capInverseThenPullback(const DualitySetup& S, const HomologyGroup& coh, const HomologyGroup& hom,
                             const HomologyGroup& bottom, const std::string& where) {
  auto P = inducedMapOnHomology(coh, hom, capFn(S));
  if (!isIsomorphism(P)) throw Error("cap map is not an isomorphism at " + where);
  // f restricted to Z: pull back, then restrict to the bottom group's ambient
  auto Z = bottom.ambient();
  auto fstar = inducedMapOnHomology(coh, bottom, [&S, Z](const Chain& c) { return restrictTo(S.fsharp.pullback(c), *Z); });
  return compose(fstar, inverse(P));
}

AbHom absoluteVertical(const DualitySetup& S, const HomologyGroup& top, const HomologyGroup& relXY,
                       const HomologyGroup& coh, const HomologyGroup& bottom, const std::string& where) {
  auto conn = connectingHomomorphism(relXY, top);
  if (!isIsomorphism(conn)) throw Error("connecting map of (X, Y) is not an isomorphism at " + where);
  return compose(capInverseThenPullback(S, coh, relXY, bottom, where), inverse(conn));
}

// Models needed for the absolute vertical of one filtration at one stage.
struct AbsoluteStage {
  HomologyPtr y, xy, coh;
};

AbsoluteStage absoluteStage(const DualitySetup& S, const FiltrationStage& st, const HomologyOptions& opt) {
  AbsoluteStage a;
  a.y = HomologyModel::ofPair(st.Y, nullptr, opt);
  a.xy = HomologyModel::ofPair(S.X, st.Y, opt);
  auto N = neighborhoodAbove(S, st);
  a.coh = HomologyModel::cohomologyOfPair(N, meetBoundary(S, *N), opt);
  return a;
}

}  // namespace

DualitySetup makeDualitySetup(std::shared_ptr<const Window> W, GradedChainMap fsharp, int orientation) {
  require(W != nullptr, "duality needs a window");
  require(fsharp.target == W->complex && !fsharp.fromCochains, "f_# must map into the window");
  DualitySetup S;
  S.window = W;
  S.X = std::make_shared<const Subcomplex>(W->full());
  S.dX = std::make_shared<const Subcomplex>(W->boundary);
  S.orientation = orientation;
  S.cap = capWithFundamentalCycle(*W, orientation);
  S.displacement = measuredDisplacement(S.cap);
  S.offset = std::max(1, S.displacement);
  S.fsharp = std::move(fsharp);
  const auto& Z = *S.fsharp.source;
  Subcomplex dZ(S.fsharp.source);
  for (int d = 0; d <= Z.dim() && d < static_cast<int>(S.fsharp.components.size()); ++d)
    for (int s = 0; s < Z.count(d); ++s) {
      bool in = true;
      for (int v : Z.vertices(d, s))
        for (const auto& e : S.fsharp.components[0].column(v)) in = in && W->boundary.contains(0, e.row);
      for (const auto& e : S.fsharp.components[d].column(s)) in = in && W->boundary.contains(d, e.row);
      if (in) dZ.insert(d, s);
    }
  require(dZ.isClosed(), "preimage of the window boundary is not a subcomplex");
  S.domainBoundary = std::make_shared<const Subcomplex>(std::move(dZ));
  return S;
}

SubcomplexPtr domainFrontier(const DualitySetup& S, const Subcomplex& Z) {
  return std::make_shared<const Subcomplex>(Z.intersect(*S.domainBoundary));
}

AbHom dualityStageMap(const DualitySetup& S, const EndFiltration& F, const Subcomplex& Z, int j, int R,
                      const HomologyOptions& opt) {
  const int k = S.n() - j - 1;
  require(k >= 0, "degree out of range for duality");
  auto a = absoluteStage(S, F.stage(R), opt);
  auto Zp = std::make_shared<const Subcomplex>(Z);
  auto bottom = HomologyModel::cohomologyOfPair(Zp, domainFrontier(S, Z), opt);
  return absoluteVertical(S, a.y->group(j, j == 0), a.xy->group(j + 1), a.coh->group(k), bottom->group(k),
                          "stage " + std::to_string(R));
}

AbHom relativeDualityStageMap(const DualitySetup& S, const FiltrationStage& s0, const FiltrationStage& s1,
                              const HomologyGroup& top, const HomologyGroup& bottom, const HomologyOptions& opt) {
  require(bottom.isCohomology(), "relative duality needs a cohomology target");
  auto N0 = neighborhoodAbove(S, s0);
  auto N1 = neighborhoodAbove(S, s1);
  auto c01 = HomologyModel::cohomologyOfPair(
      N0, std::make_shared<const Subcomplex>(N1->unite(*meetBoundary(S, *N0))), opt);
  return capInverseThenPullback(S, c01->group(S.n() - top.degree()), top, bottom, "stage " + std::to_string(s0.R));
}

DualityIsoReport verifyDualityIso(const DualitySetup& S, const EndFiltration& F, SubcomplexPtr Z, int j,
                                  const DeepOptions& opt) {
  DualityIsoReport rep;
  rep.j = j;
  rep.k = S.n() - j - 1;
  require(rep.k >= 0, "degree out of range for duality");
  const int count = static_cast<int>(F.stages.size());
  std::vector<AbsoluteStage> st(count);
  detail::parallelFor(count, opt.jobs, [&](int i) { st[i] = absoluteStage(S, F.stages[i], opt.homology); });
  StageHomology H;
  H.Rmin = F.Rmin;
  for (const auto& a : st) H.models.push_back(a.y);
  rep.top = deepHomology(H, j, j == 0, opt.window);
  rep.bottom = HomologyModel::cohomologyOfPair(Z, domainFrontier(S, *Z), opt.homology)->group(rep.k);
  for (int i = 0; i < count; ++i)
    rep.stageMaps.push_back(absoluteVertical(S, rep.top.stages[i], st[i].xy->group(j + 1), st[i].coh->group(rep.k),
                                             rep.bottom, "stage " + std::to_string(F.Rmin + i)));
  for (int i = 0; i + 1 < count; ++i)
    rep.proMorphism.push_back(compose(rep.stageMaps[i], rep.top.sequence.bonding(F.Rmin + i)) == rep.stageMaps[i + 1]);
  if (!rep.top.limit) {
    rep.diagnostic = "deep homology is " + toString(rep.top.stability.verdict);
    return rep;
  }
  const auto& L = *rep.top.limit;
  rep.limitMap = compose(rep.stageMaps[L.index - F.Rmin], L.inclusion);
  rep.iso = isIsomorphism(*rep.limitMap);
  if (!rep.iso) rep.diagnostic = "limit map is not an isomorphism";
  return rep;
}

std::string DualityIsoReport::toJson() const {
  json out;
  out["j"] = j;
  out["k"] = k;
  out["top"] = json::parse(top.toJson());
  out["bottom"] = groupJson(bottom.group());
  std::vector<bool> pm(proMorphism.begin(), proMorphism.end());
  out["proMorphism"] = pm;
  if (limitMap) out["limitMap"] = homJson(*limitMap);
  out["iso"] = iso;
  if (!diagnostic.empty()) out["diagnostic"] = diagnostic;
  return out.dump();
}

int squareSign(const AbHom& g1, const AbHom& f1, const AbHom& g2, const AbHom& f2) {
  auto a = compose(g1, f1);
  auto b = compose(g2, f2);
  if (a == b) return 1;
  if (a == negate(b)) return -1;
  return 0;
}

namespace {

enum class ColumnKind { Relative, Outer, Inner };

struct Column {
  ColumnKind kind;
  int j;
};

// Every model of one ladder stage.
struct LadderStage {
  HomologyPtr y0, y1, y10, xy0, xy1, c0, c1, c01;
};

}  // namespace

DualityLadder pairLES(const DualitySetup& S, const EndFiltration& F0, const EndFiltration& F1, SubcomplexPtr Z0,
                      SubcomplexPtr Z1, const DeepOptions& opt) {
  require(F1.K->includedIn(*F0.K), "ladder needs K_1 inside K_0");
  require(Z1->includedIn(*Z0), "ladder needs Z_1 inside Z_0");
  require(F0.Rmin == F1.Rmin && F0.Rmax == F1.Rmax, "ladder filtrations need the same range");
  const int n = S.n();
  DualityLadder L;
  L.n = n;
  L.Rmin = F0.Rmin;
  L.Rmax = F0.Rmax;
  const int count = static_cast<int>(F0.stages.size());

  std::vector<LadderStage> st(count);
  detail::parallelFor(count, opt.jobs, [&](int i) {
    const auto& s0 = F0.stages[i];
    const auto& s1 = F1.stages[i];
    require(s0.Y->includedIn(*s1.Y), "complement stages do not nest");
    auto& m = st[i];
    m.y0 = HomologyModel::ofPair(s0.Y, nullptr, opt.homology);
    m.y1 = HomologyModel::ofPair(s1.Y, nullptr, opt.homology);
    m.y10 = HomologyModel::ofPair(s1.Y, s0.Y, opt.homology);
    m.xy0 = HomologyModel::ofPair(S.X, s0.Y, opt.homology);
    m.xy1 = HomologyModel::ofPair(S.X, s1.Y, opt.homology);
    auto N0 = neighborhoodAbove(S, s0);
    auto N1 = neighborhoodAbove(S, s1);
    auto b0 = meetBoundary(S, *N0);
    m.c0 = HomologyModel::cohomologyOfPair(N0, b0, opt.homology);
    m.c1 = HomologyModel::cohomologyOfPair(N1, meetBoundary(S, *N1), opt.homology);
    m.c01 = HomologyModel::cohomologyOfPair(N0, std::make_shared<const Subcomplex>(N1->unite(*b0)), opt.homology);
  });

  auto dZ0 = domainFrontier(S, *Z0);
  auto dZ1 = domainFrontier(S, *Z1);
  auto b0 = HomologyModel::cohomologyOfPair(Z0, dZ0, opt.homology);
  auto b1 = HomologyModel::cohomologyOfPair(Z1, dZ1, opt.homology);
  auto b01 = HomologyModel::cohomologyOfPair(Z0, std::make_shared<const Subcomplex>(Z1->unite(*dZ0)), opt.homology);

  std::vector<Column> cols{{ColumnKind::Relative, n}};
  for (int j = n - 1; j >= 0; --j) {
    cols.push_back({ColumnKind::Outer, j});
    cols.push_back({ColumnKind::Inner, j});
    cols.push_back({ColumnKind::Relative, j});
  }
  const int C = static_cast<int>(cols.size());

  for (const auto& c : cols) {
    const std::string j = std::to_string(c.j);
    StageHomology H;
    H.Rmin = L.Rmin;
    bool reduced = c.kind != ColumnKind::Relative && c.j == 0;
    for (const auto& m : st)
      H.models.push_back(c.kind == ColumnKind::Relative ? m.y10 : c.kind == ColumnKind::Outer ? m.y0 : m.y1);
    L.top.push_back(deepHomology(H, c.j, reduced, opt.window));
    const std::string h = reduced ? "H~_" : "H_";
    if (c.kind == ColumnKind::Relative) {
      L.topLabels.push_back("H_" + j + "(Y1,Y0)");
      L.bottomLabels.push_back("H^" + std::to_string(n - c.j) + "(Z0,Z1+dZ0)");
      L.bottom.push_back(b01->group(n - c.j));
    } else if (c.kind == ColumnKind::Outer) {
      L.topLabels.push_back(h + j + "(Y0)");
      L.bottomLabels.push_back("H^" + std::to_string(n - c.j - 1) + "(Z0,dZ0)");
      L.bottom.push_back(b0->group(n - c.j - 1));
    } else {
      L.topLabels.push_back(h + j + "(Y1)");
      L.bottomLabels.push_back("H^" + std::to_string(n - c.j - 1) + "(Z1,dZ1)");
      L.bottom.push_back(b1->group(n - c.j - 1));
    }
  }

  auto restrictFn = [Z1](const Chain& c) { return restrictTo(c, *Z1); };
  for (int c = 0; c + 1 < C; ++c) {
    switch (cols[c].kind) {
      case ColumnKind::Relative:
        L.bottomMaps.push_back(inducedMapOnHomology(L.bottom[c], L.bottom[c + 1]));
        break;
      case ColumnKind::Outer:
        L.bottomMaps.push_back(inducedMapOnHomology(L.bottom[c], L.bottom[c + 1], restrictFn));
        break;
      case ColumnKind::Inner:
        L.bottomMaps.push_back(coboundaryConnecting(L.bottom[c], L.bottom[c + 1], *Z0));
        break;
    }
  }

  L.topMaps.resize(count);
  L.verticals.resize(count);
  L.squareSigns.resize(count);
  L.topExact.resize(count);
  for (int i = 0; i < count; ++i) {
    const auto& m = st[i];
    const std::string where = "stage " + std::to_string(L.Rmin + i);
    for (int c = 0; c < C; ++c) {
      const auto& top = L.top[c].stages[i];
      const int j = cols[c].j;
      switch (cols[c].kind) {
        case ColumnKind::Relative:
          L.verticals[i].push_back(
              capInverseThenPullback(S, m.c01->group(n - j), top, L.bottom[c], where + ", " + L.topLabels[c]));
          break;
        case ColumnKind::Outer:
          L.verticals[i].push_back(absoluteVertical(S, top, m.xy0->group(j + 1), m.c0->group(n - j - 1), L.bottom[c],
                                                    where + ", " + L.topLabels[c]));
          break;
        case ColumnKind::Inner:
          L.verticals[i].push_back(absoluteVertical(S, top, m.xy1->group(j + 1), m.c1->group(n - j - 1), L.bottom[c],
                                                    where + ", " + L.topLabels[c]));
          break;
      }
      if (c + 1 < C) {
        const auto& next = L.top[c + 1].stages[i];
        if (cols[c].kind == ColumnKind::Relative)
          L.topMaps[i].push_back(connectingHomomorphism(top, next));
        else
          L.topMaps[i].push_back(inducedMapOnHomology(top, next));
      }
    }
    for (int c = 0; c + 1 < C; ++c)
      L.squareSigns[i].push_back(
          squareSign(L.verticals[i][c + 1], L.topMaps[i][c], L.bottomMaps[c], L.verticals[i][c]));
    for (int c = 1; c + 1 < C; ++c) L.topExact[i].push_back(isExactAt(L.topMaps[i][c - 1], L.topMaps[i][c]));
  }
  for (int c = 1; c + 1 < C; ++c) L.bottomExact.push_back(isExactAt(L.bottomMaps[c - 1], L.bottomMaps[c]));
  L.proMorphism.resize(C);
  for (int c = 0; c < C; ++c)
    for (int i = 0; i + 1 < count; ++i)
      L.proMorphism[c].push_back(compose(L.verticals[i][c], L.top[c].sequence.bonding(L.Rmin + i)) ==
                                 L.verticals[i + 1][c]);

  L.stable = true;
  L.limitIndex = L.Rmin;
  for (int c = 0; c < C; ++c) {
    if (!L.top[c].limit) {
      L.stable = false;
      L.diagnostic += L.topLabels[c] + " is " + toString(L.top[c].stability.verdict) + "; ";
    } else {
      L.limitIndex = std::max(L.limitIndex, L.top[c].stability.R0);
    }
  }
  if (!L.stable) return L;
  if (L.limitIndex >= L.Rmax) {
    L.stable = false;
    L.diagnostic = "no common stable stage below the last one";
    return L;
  }
  const int I = L.limitIndex - L.Rmin;
  for (int c = 0; c < C; ++c)
    L.limits.push_back(inverseLimitStable(L.top[c].sequence, L.top[c].stability, L.limitIndex));
  for (int c = 0; c < C; ++c) {
    L.limitVerticals.push_back(compose(L.verticals[I][c], L.limits[c].inclusion));
    L.limitVerticalIso.push_back(isIsomorphism(L.limitVerticals.back()));
  }
  for (int c = 0; c + 1 < C; ++c) L.limitTopMaps.push_back(limitMap(L.limits[c], L.limits[c + 1], L.topMaps[I][c]));
  for (int c = 1; c + 1 < C; ++c) L.limitTopExact.push_back(isExactAt(L.limitTopMaps[c - 1], L.limitTopMaps[c]));
  for (int c = 0; c + 1 < C; ++c)
    L.limitSquareSigns.push_back(
        squareSign(L.limitVerticals[c + 1], L.limitTopMaps[c], L.bottomMaps[c], L.limitVerticals[c]));
  return L;
}

bool DualityLadder::squaresCommuteUpToSign() const {
  if (!stable) return false;
  for (int s : limitSquareSigns)
    if (s == 0) return false;
  return true;
}

bool DualityLadder::verticalsIso() const {
  if (!stable) return false;
  for (bool b : limitVerticalIso)
    if (!b) return false;
  return true;
}

std::string DualityLadder::toJson() const {
  json out;
  out["n"] = n;
  out["Rmin"] = Rmin;
  out["Rmax"] = Rmax;
  out["topLabels"] = topLabels;
  out["bottomLabels"] = bottomLabels;
  json stages = json::array();
  for (std::size_t i = 0; i < squareSigns.size(); ++i) {
    std::vector<bool> ex(topExact[i].begin(), topExact[i].end());
    stages.push_back({{"R", Rmin + static_cast<int>(i)}, {"squareSigns", squareSigns[i]}, {"topExact", ex}});
  }
  out["stages"] = stages;
  out["bottomExact"] = std::vector<bool>(bottomExact.begin(), bottomExact.end());
  json columns = json::array();
  for (std::size_t c = 0; c < topLabels.size(); ++c) {
    json col{{"top", topLabels[c]},
             {"bottom", bottomLabels[c]},
             {"bottomGroup", groupJson(bottom[c].group())},
             {"verdict", toString(top[c].stability.verdict)},
             {"proMorphism", std::vector<bool>(proMorphism[c].begin(), proMorphism[c].end())}};
    if (stable) {
      col["limit"] = groupJson(limits[c].group);
      col["verticalIso"] = static_cast<bool>(limitVerticalIso[c]);
    }
    columns.push_back(col);
  }
  out["columns"] = columns;
  out["stable"] = stable;
  if (stable) {
    out["limitIndex"] = limitIndex;
    out["limitSquareSigns"] = limitSquareSigns;
    out["limitTopExact"] = std::vector<bool>(limitTopExact.begin(), limitTopExact.end());
  }
  if (!diagnostic.empty()) out["diagnostic"] = diagnostic;
  return out.dump();
}

ExcisionReport excisionCheck(const EndFiltration& srcOuter, const EndFiltration& srcInner, const EndFiltration& tgtOuter,
                             const EndFiltration& tgtInner, int degree, const DeepOptions& opt) {
  ExcisionReport rep;
  rep.source = deepHomology(srcOuter, degree, false, &srcInner, opt);
  rep.target = deepHomology(tgtOuter, degree, false, &tgtInner, opt);
  if (!rep.source.limit || !rep.target.limit) {
    rep.diagnostic = "source " + toString(rep.source.stability.verdict) + ", target " +
                     toString(rep.target.stability.verdict);
    return rep;
  }
  rep.map = deepInducedMap(rep.source, rep.target);
  rep.iso = isIsomorphism(*rep.map);
  return rep;
}

std::string ExcisionReport::toJson() const {
  json out;
  out["source"] = json::parse(source.toJson());
  out["target"] = json::parse(target.toJson());
  if (map) out["map"] = homJson(*map);
  out["iso"] = iso;
  if (!diagnostic.empty()) out["diagnostic"] = diagnostic;
  return out.dump();
}

}  // namespace deepho
