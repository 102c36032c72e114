// Batch runner: deepho scene build|run|replay
#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "deepho/experiment.hpp"

namespace fs = std::filesystem;
using namespace deepho;

namespace {

enum Exit { kPass = 0, kVerdictFail = 1, kConfigFail = 2, kResourceFail = 3, kInternalFail = 4 };

int fail(int code, const std::string& kind, const std::string& message, const std::string& pointer = {}) {
  nlohmann::json j{{"error", kind}, {"message", message}};
  if (!pointer.empty() || kind == "config") j["pointer"] = pointer;
  std::cerr << j.dump() << "\n";
  return code;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spill(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deep homology of filtered ends in lattice windows"};
  app.require_subcommand(1);
  auto* scene = app.add_subcommand("scene", "book scenes");
  scene->require_subcommand(1);

  std::string config, report, out = ".";
  RunOptions opt;
  int window = 0;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--out", out, "output directory");
    sub->add_option("--jobs", opt.jobs, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--budget", opt.budget, "simplex budget")->check(CLI::PositiveNumber);
  };
  auto* build = scene->add_subcommand("build", "construct the scene and audit the coarse map");
  build->add_option("--config", config, "experiment config")->required();
  common(build);
  auto* run = scene->add_subcommand("run", "run the configured checks");
  run->add_option("--config", config, "experiment config")->required();
  common(run);
  auto* replay = scene->add_subcommand("replay", "re-audit a stored report");
  replay->add_option("--report,--config", report, "report written by run")->required();
  replay->add_option("--window", window, "recompute in a window of this radius")->check(CLI::PositiveNumber);
  common(replay);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return fail(kConfigFail, "usage", e.what());
  }

  if (const char* env = std::getenv("DEEPHO_BUDGET")) {
    try {
      opt.budget = std::stoull(env);
    } catch (const std::exception&) {
      return fail(kConfigFail, "config", "DEEPHO_BUDGET is not a number", "/env/DEEPHO_BUDGET");
    }
  }

  try {
    fs::create_directories(out);
    if (build->parsed()) {
      auto c = ExperimentConfig::fromJson(slurp(config));
      spill(fs::path(out) / "scene.json", buildSceneReport(c, opt));
      return kPass;
    }
    if (run->parsed()) {
      auto c = ExperimentConfig::fromJson(slurp(config));
      auto r = runExperiment(c, opt);
      spill(fs::path(out) / c.reportFile, r.json);
      if (!r.dot.empty()) spill(fs::path(out) / c.dotFile, r.dot);
      std::cout << (r.allPass ? "PASS" : "FAIL") << " " << c.name << "\n";
      return r.allPass ? kPass : kVerdictFail;
    }
    auto v = replayReport(slurp(report), opt, window > 0 ? std::optional<int>(window) : std::nullopt);
    spill(fs::path(out) / "replay.json", v.json);
    for (const auto& [name, ok] : v.certificates) std::cout << (ok ? "PASS " : "FAIL ") << name << "\n";
    return v.allPass ? kPass : kVerdictFail;
  } catch (const ConfigError& e) {
    return fail(kConfigFail, "config", e.what(), e.pointer);
  } catch (const ResourceError& e) {
    return fail(kResourceFail, "resource", e.what());
  } catch (const WindowTooSmall& e) {
    return fail(kResourceFail, "window", e.what());
  } catch (const std::exception& e) {
    return fail(kInternalFail, "internal", e.what());
  }
}
