// Scenario runner for the CMV bispectral toolkit.
//
// cmvlab <solve|verify|kernel|reconstruct|olp|sweep> --config <file>
//        [--backend exact|float] [--window N] [--out <file>]
//        [--summary] [--timings] [--jobs K]
//
// Exit codes: 0 success, 1 scenario failure, 2 configuration error.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cmvlab/scenario.hpp"

namespace {

using cmvlab::Json;
using cmvlab::Report;
using cmvlab::ScenarioConfig;

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw cmvlab::ConfigInvalid("cannot open config file: " + path);
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw cmvlab::ConfigInvalid(std::string("config is not valid JSON: ") +
                                e.what());
  }
  return j;
}

void write_output(const std::string& out, const std::string& text) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(out, std::ios::binary);
  if (!os) throw cmvlab::ConfigInvalid("cannot open output file: " + out);
  os << text;
}

void apply_overrides(Json& scenario, const std::string& kind,
                     const std::string& backend, int window) {
  if (!scenario.contains("kind") && !kind.empty()) scenario["kind"] = kind;
  if (!backend.empty()) scenario["backend"] = backend;
  if (window > 0) scenario["window"] = window;
}

void print_summary(const Report& r) {
  const Json& res = r.doc.at("result");
  const Json& sc = r.doc.at("scenario");
  std::ostringstream line;
  line << sc.at("kind").get<std::string>() << " [" << sc.at("backend").get<std::string>()
       << "]: ";
  if (res.contains("error")) {
    line << "error " << res.at("error").at("type").get<std::string>() << " ("
         << res.at("error").at("message").get<std::string>() << ")";
  } else if (res.contains("dimension")) {
    line << "dimension " << res.at("dimension").get<int>() << ", "
         << res.at("classification").get<std::string>();
  } else if (res.contains("all_pass")) {
    line << (res.at("all_pass").get<bool>() ? "all checks pass" : "CHECKS FAILED");
  } else if (res.contains("order")) {
    line << "operator order " << res.at("order").get<int>();
  } else {
    line << "done";
  }
  std::cout << line.str() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CMV bispectral scenario runner"};
  app.require_subcommand(1);

  std::string config_path, backend, out;
  int window = 0, jobs = 1;
  bool summary = false, timings = false;

  struct Sub {
    CLI::App* cmd;
    std::string kind;  // empty for sweep
  };
  std::vector<Sub> subs = {
      {app.add_subcommand("solve", "solve an ad-condition nullspace"), "solve"},
      {app.add_subcommand("verify", "run the identity suite"), "verify-identities"},
      {app.add_subcommand("kernel", "kernel-basis certification"), "verify-kernel"},
      {app.add_subcommand("reconstruct", "recover the differential operator"),
       "reconstruct"},
      {app.add_subcommand("olp", "dump orthonormal Laurent polynomials"),
       "olp-dump"},
      {app.add_subcommand("sweep", "run a list of scenarios"), ""},
  };
  for (auto& s : subs) {
    s.cmd->add_option("--config", config_path, "scenario configuration (JSON)")
        ->required();
    s.cmd->add_option("--backend", backend, "override backend (exact|float)");
    s.cmd->add_option("--window", window, "override window size");
    s.cmd->add_option("--out", out, "write the report document to a file");
    s.cmd->add_flag("--summary", summary, "print one summary line per scenario");
    s.cmd->add_flag("--timings", timings, "include wall-clock times in reports");
    if (s.kind.empty())
      s.cmd->add_option("--jobs", jobs, "sweep worker count")->default_val(1);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    Json j = load_json(config_path);
    const Sub* active = nullptr;
    for (const auto& s : subs)
      if (s.cmd->parsed()) active = &s;

    if (!active->kind.empty()) {
      apply_overrides(j, active->kind, backend, window);
      if (j.at("kind").get<std::string>() != active->kind)
        throw cmvlab::ConfigInvalid("config kind '" +
                                    j.at("kind").get<std::string>() +
                                    "' does not match subcommand");
      ScenarioConfig cfg = ScenarioConfig::parse(j);
      Report report = cmvlab::run_scenario(cfg, timings);
      write_output(out, report.serialize());
      if (summary) print_summary(report);
      return report.ok() ? 0 : 1;
    }

    if (!j.contains("scenarios") || !j["scenarios"].is_array() ||
        j["scenarios"].empty())
      throw cmvlab::ConfigInvalid("sweep config needs a nonempty 'scenarios' list");
    std::vector<ScenarioConfig> configs;
    for (Json sc : j["scenarios"]) {
      apply_overrides(sc, "", backend, window);
      configs.push_back(ScenarioConfig::parse(sc));
    }
    std::vector<Report> reports = cmvlab::sweep(configs, jobs, timings);
    Json outdoc;
    Json list = Json::array();
    bool all_ok = true;
    for (const auto& r : reports) {
      list.push_back(r.doc);
      all_ok = all_ok && r.ok();
    }
    outdoc["reports"] = list;
    write_output(out, outdoc.dump(2) + "\n");
    if (summary)
      for (const auto& r : reports) print_summary(r);
    return all_ok ? 0 : 1;
  } catch (const cmvlab::ConfigInvalid& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const cmvlab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
