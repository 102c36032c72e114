#include "deepho/experiment.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <json.hpp>

namespace deepho {

using nlohmann::json;

std::vector<std::string> knownChecks() {
  return {"ends", "deep", "duality", "ladder", "adjacency", "jordan", "collapse", "containment", "chainmap", "symmetry"};
}

// ---------------------------------------------------------------- config

std::string ExperimentConfig::toJson() const {
  json j;
  j["schema"] = kReportSchema;
  j["name"] = name;
  json dirs = json::array();
  for (const auto& d : directions) dirs.push_back({d.a, d.b});
  j["scene"] = {{"k", k}, {"directions", dirs}, {"T", T}, {"S", S}, {"subject", subject}};
  j["R"] = {Rmin, Rmax};
  j["degrees"] = degrees;
  j["checks"] = checks;
  j["symmetries"] = symmetries;
  j["seed"] = seed;
  j["outputs"] = {{"report", reportFile}, {"dot", dotFile}};
  return j.dump(2);
}

namespace {

template <class T>
T field(const json& j, const std::string& key, const std::string& pointer) {
  if (!j.contains(key)) throw ConfigError(pointer + "/" + key, "missing");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(pointer + "/" + key, std::string("wrong type: ") + e.what());
  }
}

template <class T>
T fieldOr(const json& j, const std::string& key, const std::string& pointer, T fallback) {
  return j.contains(key) ? field<T>(j, key, pointer) : fallback;
}

}  // namespace

ExperimentConfig ExperimentConfig::fromJson(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("", "config must be an object");
  if (field<int>(j, "schema", "") != kReportSchema) throw ConfigError("/schema", "unsupported schema version");
  ExperimentConfig c;
  c.name = fieldOr<std::string>(j, "name", "", "");
  if (!j.contains("scene") || !j["scene"].is_object()) throw ConfigError("/scene", "missing or not an object");
  const json& s = j["scene"];
  c.k = field<int>(s, "k", "/scene");
  if (c.k < 1) throw ConfigError("/scene/k", "must be at least 1");
  if (s.contains("directions")) {
    auto dirs = field<std::vector<std::array<int, 2>>>(s, "directions", "/scene");
    for (const auto& d : dirs) c.directions.push_back({d[0], d[1]});
  } else {
    try {
      c.directions = defaultDirections(c.k);
    } catch (const ContractViolation& e) {
      throw ConfigError("/scene/directions", e.what());
    }
  }
  c.T = field<int>(s, "T", "/scene");
  c.S = field<int>(s, "S", "/scene");
  c.subject = fieldOr<std::string>(s, "subject", "/scene", "book");
  auto R = fieldOr<std::array<int, 2>>(j, "R", "", {1, 5});
  c.Rmin = R[0];
  c.Rmax = R[1];
  c.degrees = fieldOr<std::vector<int>>(j, "degrees", "", {0, 1, 2});
  c.checks = fieldOr<std::vector<std::string>>(j, "checks", "", knownChecks());
  c.symmetries = fieldOr<std::vector<LatticeIsometry>>(j, "symmetries", "", {});
  c.seed = fieldOr<std::uint64_t>(j, "seed", "", 1);
  if (j.contains("outputs")) {
    c.reportFile = fieldOr<std::string>(j["outputs"], "report", "/outputs", c.reportFile);
    c.dotFile = fieldOr<std::string>(j["outputs"], "dot", "/outputs", c.dotFile);
  }
  c.validate();
  return c;
}

void ExperimentConfig::validate() const {
  if (k < 1) throw ConfigError("/scene/k", "must be at least 1");
  if (static_cast<int>(directions.size()) != k) throw ConfigError("/scene/directions", "one direction per page");
  if (T < 1) throw ConfigError("/scene/T", "must be positive");
  if (S < T + kSceneMargin) throw ConfigError("/scene/S", "must be at least T + " + std::to_string(kSceneMargin));
  if (Rmin < 0 || Rmax - Rmin + 1 < kDefaultConfidenceWindow)
    throw ConfigError("/R", "needs at least " + std::to_string(kDefaultConfidenceWindow) + " stages");
  if (S < 2 * Rmax + kWindowPolicyMargin)
    throw ConfigError("/scene/S", "must be at least 2 Rmax + " + std::to_string(kWindowPolicyMargin));
  if (subject != "book" && subject != "spine") throw ConfigError("/scene/subject", "must be book or spine");
  for (std::size_t i = 0; i < degrees.size(); ++i)
    if (degrees[i] < 0 || degrees[i] > 2) throw ConfigError("/degrees/" + std::to_string(i), "must be 0, 1 or 2");
  auto known = knownChecks();
  for (std::size_t i = 0; i < checks.size(); ++i)
    if (std::find(known.begin(), known.end(), checks[i]) == known.end())
      throw ConfigError("/checks/" + std::to_string(i), "unknown check " + checks[i]);
}

// ---------------------------------------------------------------- run

namespace {

json groupJson(const FgAbGroup& G) {
  std::vector<std::string> tor;
  for (const auto& t : G.torsion()) tor.push_back(t.str());
  return {{"freeRank", G.freeRank()}, {"torsion", tor}};
}

json chainJson(const SimplicialComplex& X, const Chain& c) {
  json terms = json::array();
  for (const auto& [id, coef] : c.terms) {
    json simplex = json::array();
    for (int v : X.vertices(c.dim, id)) simplex.push_back(X.point(v));
    terms.push_back({{"simplex", simplex}, {"c", coef.str()}});
  }
  return terms;
}

json sceneJson(const BookScene& sc) {
  json j;
  j["book"] = json::parse(sc.book.toJson());
  j["domain"] = json::parse(sc.domain.toJson());
  j["window"] = {{"S", sc.S()}, {"simplices", sc.window->complex->totalSimplices()}};
  j["controls"] = json::parse(sc.controls.toJson());
  j["chainMapLaw"] = verifyChainMapLaw(sc.fsharp.map);
  j["M"] = sc.fsharp.M;
  return j;
}

std::shared_ptr<const BookScene> makeScene(const ExperimentConfig& c, const RunOptions& opt) {
  c.validate();
  return std::make_shared<const BookScene>(embedBookInWindow(buildBook(c.k, c.directions, c.T), c.S, opt.budget));
}

bool allTrue(const std::vector<bool>& v) { return std::all_of(v.begin(), v.end(), [](bool b) { return b; }); }

json ladderJson(SceneAnalysis& A, const PageSet& Q, int window, bool& pass) {
  const auto& sc = A.scene();
  const PageSet all = allPages(sc.k());
  auto L = pairLES(A.duality(1), A.filtration(all), A.filtration(Q), sc.domainPart(all), sc.domainPart(Q),
                   A.options().deep);
  json j;
  j["pair"] = {all, Q};
  j["stable"] = L.stable;
  j["verticalsIso"] = L.verticalsIso();
  j["squaresCommute"] = L.squaresCommuteUpToSign();
  bool level = true;
  for (const auto& st : L.topExact) level = level && allTrue(st);
  j["levelExact"] = level;
  j["bottomExact"] = allTrue(L.bottomExact);
  j["limitExact"] = allTrue(L.limitTopExact);
  bool pro = true;
  for (const auto& col : L.proMorphism) pro = pro && allTrue(col);
  j["proMorphism"] = pro;
  j["labels"] = L.topLabels;
  json limits = json::array();
  std::vector<int> ranks;
  for (const auto& lim : L.limits) {
    limits.push_back(groupJson(lim.group));
    ranks.push_back(lim.group.isFree() ? lim.group.freeRank() : -1);
  }
  j["limits"] = limits;

  // row of the sequence: H_1(Y1) -> H_1(Y1, Y0) -> H~_0(Y0) -> H~_0(Y1), everything else 0
  const int k = sc.k();
  std::vector<int> expected(L.limits.size(), 0);
  if (expected.size() == 10) {
    if (Q.empty()) {
      expected[5] = 1;
      expected[6] = k;
      expected[7] = k - 1;
    } else {
      expected[6] = 1;
      expected[7] = k - 1;
      expected[8] = k - 2;
    }
  }
  j["expectedRanks"] = expected;
  const bool row = ranks == expected;
  j["rowMatches"] = row;

  // validators of the pro-group module on the same top row
  bool five = false, limitExact = false;
  if (L.stable) {
    std::vector<InverseSequenceAb> seqs;
    for (const auto& t : L.top) seqs.push_back(t.sequence);
    std::vector<ProMorphism> maps;
    for (std::size_t c = 0; c + 1 < seqs.size(); ++c) {
      std::vector<AbHom> comps;
      for (const auto& st : L.topMaps) comps.push_back(st[c]);
      maps.emplace_back(seqs[c], seqs[c + 1], comps);
    }
    limitExact = limitExactnessCheck(seqs, maps, window).exact;
    if (seqs.size() == 10) {
      std::vector<InverseSequenceAb> five5(seqs.begin() + 4, seqs.begin() + 9);
      std::vector<ProMorphism> maps4(maps.begin() + 4, maps.begin() + 8);
      five = fiveLemmaStabilityCheck(five5, maps4, window).agrees();
    }
  }
  j["fiveLemmaAgrees"] = five;
  j["limitExactnessValidator"] = limitExact;
  pass = L.stable && L.verticalsIso() && L.squaresCommuteUpToSign() && level && allTrue(L.bottomExact) &&
         allTrue(L.limitTopExact) && pro && row && five && limitExact;
  return j;
}

}  // namespace

std::string buildSceneReport(const ExperimentConfig& config, const RunOptions& opt) {
  auto sc = makeScene(config, opt);
  json j;
  j["schema"] = kReportSchema;
  j["config"] = json::parse(config.toJson());
  j["scene"] = sceneJson(*sc);
  return j.dump(2);
}

ExperimentReport runExperiment(const ExperimentConfig& c, const RunOptions& opt) {
  auto scene = makeScene(c, opt);
  SceneOptions so;
  so.Rmin = c.Rmin;
  so.Rmax = c.Rmax;
  so.deep.jobs = opt.jobs;
  SceneAnalysis A(scene, so);
  const int k = c.k;
  const bool book = c.subject == "book";
  const PageSet all = allPages(k);
  const PageSet K = book ? all : PageSet{};
  const auto& X = *scene->window->complex;
  auto has = [&](const std::string& name) { return std::find(c.checks.begin(), c.checks.end(), name) != c.checks.end(); };

  // stage models that several checks share
  std::vector<std::pair<PageSet, std::optional<PageSet>>> requests{{K, std::nullopt}};
  if (book && (has("adjacency") || has("jordan") || has("collapse"))) {
    requests.push_back({{}, std::nullopt});
    requests.push_back({{}, all});
    for (int p : all) {
      requests.push_back({{}, PageSet{p}});
      requests.push_back({withoutPage(all, p), all});
    }
  }
  A.prefetch(requests);

  json rep;
  rep["schema"] = kReportSchema;
  rep["config"] = json::parse(c.toJson());
  rep["scene"] = sceneJson(*scene);
  json checks = json::object(), verdicts = json::object();
  ExperimentReport out;

  if (has("ends")) {
    const auto& E = A.ends(K);
    const int expected = book && k >= 2 ? k : 1;
    checks["ends"] = {{"count", E.endCount},
                      {"expected", expected},
                      {"R0", E.R0},
                      {"verdict", toString(E.verdict)},
                      {"diagnostic", E.diagnostic}};
    verdicts["ends"] = E.verdict == Verdict::StableEmpirically && E.endCount == expected;
  }

  if (has("deep")) {
    auto Zt = scene->book.part(K);
    auto frontierZt = std::make_shared<const Subcomplex>(Zt->intersect(*scene->book.frontier));
    json arr = json::array();
    bool pass = true;
    for (int j : c.degrees) {
      const auto& D = A.deep(K, j, j == 0);
      auto expected = compactSupportCohomology(Zt, frontierZt, 2 - j).group();
      json e;
      e["degree"] = j;
      e["reduced"] = j == 0;
      e["deep"] = json::parse(D.toJson());
      e["expected"] = groupJson(expected);
      json gens = json::array();
      if (D.limit)
        for (int g = 0; g < D.limit->group.generatorCount(); ++g) {
          IntVector x(D.limit->group.generatorCount());
          x[g] = 1;
          gens.push_back(chainJson(X, D.limitRepresentative(x, D.limit->index)));
        }
      e["generators"] = gens;
      const bool ok = D.limit && D.limit->group.isomorphic(expected);
      e["pass"] = ok;
      pass = pass && ok;
      arr.push_back(e);
    }
    checks["deep"] = arr;
    verdicts["deep"] = pass;
  }

  if (has("duality")) {
    const auto& S = A.duality(1);
    auto Z = scene->domainPart(K);
    json arr = json::array();
    bool pass = true;
    for (int j : c.degrees) {
      if (3 - j - 1 < 0) continue;
      auto r = verifyDualityIso(S, A.filtration(K), Z, j, so.deep);
      arr.push_back(json::parse(r.toJson()));
      pass = pass && r.iso;
    }
    checks["duality"] = arr;
    verdicts["duality"] = pass;
  }

  if (has("ladder") && book) {
    json arr = json::array();
    bool pass = true;
    std::set<PageSet> pairs{PageSet{}};
    for (int p : all) pairs.insert(withoutPage(all, p));
    for (const auto& Q : pairs) {
      bool ok = false;
      arr.push_back(ladderJson(A, Q, so.deep.window, ok));
      pass = pass && ok;
    }
    checks["ladder"] = arr;
    verdicts["ladder"] = pass;
  }

  std::optional<AdjacencyGraph> G;
  if (book && (has("adjacency") || has("containment"))) G = adjacencyGraph(A);
  if (has("adjacency") && book) {
    json j;
    j["graph"] = json::parse(G->toJson());
    bool pass = G->valid;
    if (k >= 2) {
      auto circ = verifyCircuit(*G);
      j["circuit"] = {{"isCircuit", circ.isCircuit},
                      {"vertexOrder", circ.vertexOrder},
                      {"edgeOrder", circ.edgeOrder},
                      {"witness", circ.witness}};
      auto cx = adjacencyChainComplex(A, *G);
      j["chainComplex"] = json::parse(cx.toJson());
      pass = pass && circ.isCircuit && cx.matchesIncidence && cx.splittingIso && cx.rankBoundary == k - 1 &&
             cx.H0.isomorphic(FgAbGroup::free(1)) && cx.H1.isomorphic(FgAbGroup::free(1)) && allTrue(cx.excisionIso);
    } else {
      pass = pass && G->edges.empty() && G->vertexCount == 1;
    }
    out.dot = G->toDot();
    checks["adjacency"] = j;
    verdicts["adjacency"] = pass;
  }

  if (has("jordan") && book) {
    auto Jp = jordanCycle(A, 1), Jn = jordanCycle(A, -1);
    auto asJson = [&](const JordanCycle& J) {
      auto j = json::parse(J.toJson());
      j["generatorCycle"] = chainJson(X, J.generatorCycle);
      return j;
    };
    checks["jordan"] = {{"positive", asJson(Jp)}, {"negative", asJson(Jn)}};
    bool pass = static_cast<int>(Jp.coordinates.size()) == k && Jp.coordinates.size() == Jn.coordinates.size() &&
                allTrue(Jp.factorIso) && Jp.generatesH1;
    for (std::size_t i = 0; pass && i < Jp.coordinates.size(); ++i)
      pass = abs(Jp.coordinates[i]) == 1 && Jp.coordinates[i] == Jp.coordinates[0] && Jp.normalized[i] == 1 &&
             Jn.coordinates[i] == -Jp.coordinates[i];
    verdicts["jordan"] = pass;
  }

  if (has("collapse") && book && k >= 2) {
    json arr = json::array();
    bool pass = true;
    for (int p : all) {
      auto m = collapseMap(A, p);
      arr.push_back(json::parse(m.toJson()));
      if (k >= 3) {
        pass = pass && m.collapsesExactly;
      } else {
        pass = pass && m.degenerate &&
               std::all_of(m.edgeVertex.begin(), m.edgeVertex.end(), [](int v) { return v >= 0; });
      }
    }
    checks["collapse"] = arr;
    verdicts["collapse"] = pass;
  }

  if (has("containment") && book) {
    json arr = json::array();
    bool pass = true;
    if (k == 1) {
      arr.push_back({{"vacuous", true}});
    } else {
      for (int p : all) {
        auto d = deepContainmentCheck(A, withoutPage(all, p));
        auto j = json::parse(d.toJson());
        bool ok = d.holds;
        for (const auto& e : G->edges)
          if (e.page == p && ok) {
            const int R = std::max(A.ends(all).R0, d.R0);
            auto phi = A.endInclusion(all, withoutPage(all, p), R);
            j["mergedEnd"] = phi[e.from];
            ok = d.end[0] == phi[e.from];
          }
        j["pass"] = ok;
        pass = pass && ok;
        arr.push_back(j);
      }
    }
    checks["containment"] = arr;
    verdicts["containment"] = pass;
  }

  if (has("chainmap")) {
    json j;
    const auto& W = *scene->window;
    ApproximationOptions ao;
    ao.seed = c.seed == 0 ? 1 : c.seed;
    auto B = approximateChainMap(scene->f, W, ao);
    auto H = controlledHomotopy(scene->fsharp, B, W);
    j["law"] = verifyChainMapLaw(scene->fsharp.map);
    j["lawShifted"] = verifyChainMapLaw(B.map);
    j["M"] = scene->fsharp.M;
    j["shiftedM"] = B.M;
    j["homotopyVerified"] = verifyHomotopyIdentity(H, scene->fsharp, B, W);
    j["D"] = H.D;
    auto Zfull = std::make_shared<const Subcomplex>(scene->domain.complex, true);
    auto domainF = complementFiltration(Zfull, scene->domain.spine, c.Rmin, c.Rmax);
    const auto& targetF = A.filtration({});
    auto m1 = inducedDeepMap(scene->fsharp.map, domainF, targetF, 0, false, so.deep);
    auto m2 = inducedDeepMap(B.map, domainF, targetF, 0, false, so.deep);
    j["inducedMatrix"] = m1.map.matrix().dump();
    j["inducedAgree"] = m1.map == m2.map;
    checks["chainmap"] = j;
    verdicts["chainmap"] = j["law"].get<bool>() && j["lawShifted"].get<bool>() && j["homotopyVerified"].get<bool>() &&
                           j["inducedAgree"].get<bool>();
  }

  if (has("symmetry") && book) {
    json arr = json::array();
    bool pass = true;
    for (const auto& g : c.symmetries) {
      try {
        auto s = sceneSymmetryAction(A, g);
        arr.push_back(json::parse(s.toJson()));
        pass = pass && s.compatible;
      } catch (const ContractViolation& e) {
        arr.push_back({{"g", g}, {"refused", e.what()}});
        pass = false;
      }
    }
    checks["symmetry"] = arr;
    verdicts["symmetry"] = pass;
  }

  bool all_ = true;
  for (const auto& [name, v] : verdicts.items()) all_ = all_ && v.get<bool>();
  rep["checks"] = checks;
  rep["verdicts"] = verdicts;
  rep["allPass"] = all_;
  out.allPass = all_;
  out.json = rep.dump(2);
  return out;
}

// ---------------------------------------------------------------- replay

namespace {

// A lattice 1-chain given by vertex points has zero boundary.
bool pointChainIsCycle(const json& terms) {
  std::map<std::vector<int>, Integer> mass;
  for (const auto& t : terms) {
    const auto& s = t.at("simplex");
    if (s.size() != 2) return false;
    Integer c(t.at("c").get<std::string>());
    mass[s[1].get<std::vector<int>>()] += c;
    mass[s[0].get<std::vector<int>>()] -= c;
  }
  return std::all_of(mass.begin(), mass.end(), [](const auto& kv) { return kv.second == 0; });
}

std::vector<Integer> integers(const json& a) {
  std::vector<Integer> v;
  for (const auto& x : a) v.emplace_back(x.get<std::string>());
  return v;
}

}  // namespace

ReplayVerdict replayReport(const std::string& reportJson, const RunOptions& opt, std::optional<int> windowOverride) {
  json r;
  try {
    r = json::parse(reportJson);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed report: ") + e.what());
  }
  if (!r.contains("schema") || r["schema"] != kReportSchema) throw ConfigError("/schema", "stale or unknown schema");
  if (!r.contains("config") || !r.contains("checks")) throw ConfigError("", "report lacks config or checks");
  auto config = ExperimentConfig::fromJson(r["config"].dump());
  if (windowOverride) {
    config.S = *windowOverride;
    config.validate();
  }
  ReplayVerdict v;
  const json& checks = r["checks"];

  // identities audited on the stored certificates
  if (checks.contains("jordan")) {
    bool ok = true;
    try {
      auto p = integers(checks["jordan"]["positive"]["coordinates"]);
      auto n = integers(checks["jordan"]["negative"]["coordinates"]);
      auto norm = integers(checks["jordan"]["positive"]["normalization"]["normalized"]);
      ok = !p.empty() && p.size() == n.size() && norm.size() == p.size();
      for (std::size_t i = 0; ok && i < p.size(); ++i)
        ok = abs(p[i]) == 1 && p[i] == p[0] && n[i] == -p[i] && norm[i] == 1 && norm[i] == p[i] * p[0];
      ok = ok && pointChainIsCycle(checks["jordan"]["positive"]["generatorCycle"]);
    } catch (const std::exception&) {
      ok = false;
    }
    v.certificates.push_back({"jordan-diagonal", ok});
  }
  if (checks.contains("adjacency") && checks["adjacency"].contains("chainComplex")) {
    bool ok = true;
    try {
      const auto& g = checks["adjacency"]["graph"];
      std::vector<std::pair<int, int>> edges;
      for (const auto& e : g["edges"]) edges.push_back({e["from"].get<int>(), e["to"].get<int>()});
      ok = verifyCircuit(graphFromEdges(g["vertices"].get<int>(), edges)).isCircuit;
      const auto& cx = checks["adjacency"]["chainComplex"];
      auto B = SparseIntMatrix::parseDump(cx["boundary"].get<std::string>());
      auto I = SparseIntMatrix::parseDump(cx["incidence"].get<std::string>());
      ok = ok && B.cols() == I.cols() && B.rows() == I.rows();
      for (int c = 0; ok && c < B.cols(); ++c) {
        auto b = B.denseColumn(c);
        auto i = I.denseColumn(c);
        IntVector ni(i);
        for (auto& x : ni) x = -x;
        ok = b == i || b == ni;
      }
      const int rank = smithNormalForm(B).rank();
      ok = ok && rank == B.cols() - 1 && cokernelPresentation(B).isomorphic(FgAbGroup::free(1));
    } catch (const std::exception&) {
      ok = false;
    }
    v.certificates.push_back({"adjacency-chain-complex", ok});
  }
  if (checks.contains("deep")) {
    bool ok = true;
    for (const auto& e : checks["deep"])
      if (e["degree"].get<int>() >= 1)
        for (const auto& g : e["generators"]) ok = ok && pointChainIsCycle(g);
    v.certificates.push_back({"deep-generators-are-cycles", ok});
  }

  // recomputation: limit-level data must agree
  RunOptions ro = opt;
  auto fresh = json::parse(runExperiment(config, ro).json);
  const json& fc = fresh["checks"];
  if (checks.contains("ends")) v.certificates.push_back({"ends", checks["ends"]["count"] == fc["ends"]["count"]});
  if (checks.contains("deep")) {
    bool ok = checks["deep"].size() == fc["deep"].size();
    for (std::size_t i = 0; ok && i < checks["deep"].size(); ++i)
      ok = checks["deep"][i]["deep"]["limit"] == fc["deep"][i]["deep"]["limit"];
    v.certificates.push_back({"deep-limits", ok});
  }
  if (checks.contains("adjacency")) {
    auto edgesOf = [](const json& g) {
      std::vector<std::array<int, 3>> out;
      for (const auto& e : g["edges"]) out.push_back({e["page"].get<int>(), e["from"].get<int>(), e["to"].get<int>()});
      return out;
    };
    v.certificates.push_back(
        {"adjacency-graph", edgesOf(checks["adjacency"]["graph"]) == edgesOf(fc["adjacency"]["graph"])});
  }
  if (checks.contains("jordan"))
    v.certificates.push_back(
        {"jordan-coordinates", checks["jordan"]["positive"]["coordinates"] == fc["jordan"]["positive"]["coordinates"] &&
                                   checks["jordan"]["negative"]["coordinates"] == fc["jordan"]["negative"]["coordinates"]});
  v.certificates.push_back({"verdicts", r["verdicts"] == fresh["verdicts"] && fresh["allPass"].get<bool>()});

  v.allPass = std::all_of(v.certificates.begin(), v.certificates.end(), [](const auto& c) { return c.second; });
  json out;
  out["schema"] = kReportSchema;
  json certs = json::object();
  for (const auto& [name, ok] : v.certificates) certs[name] = ok;
  out["certificates"] = certs;
  out["window"] = config.S;
  out["allPass"] = v.allPass;
  v.json = out.dump(2);
  return v;
}

}  // namespace deepho
