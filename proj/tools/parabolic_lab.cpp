// Command-line front end for the batch runner.
//
//   parabolic_lab run --config exp.json --out results/
//   parabolic_lab growth --map F1 --n 200 --out results/
//   parabolic_lab limit --map F2 --n 2000 --tol 0.05 --json
//
// Exit code 0 iff every check in the batch passes; 2 on usage or config errors.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "parabolic/report.hpp"

namespace rp = parabolic::report;

namespace {

void print_result(const rp::AnalysisResult& r) {
  std::printf("[%s] %s%s%s\n", r.passed() ? "PASS" : (r.status == "error" ? "ERROR" : "FAIL"), r.name.c_str(),
              r.map_id.empty() ? "" : " map=", r.map_id.c_str());
  if (!r.error.empty()) std::printf("    error: %s\n", r.error.c_str());
  for (const auto& c : r.checks)
    std::printf("    %-28s %s value=%.10g target=%.10g%s%s\n", c.name.c_str(), c.pass ? "ok  " : "FAIL", c.value,
                c.target, c.detail.empty() ? "" : "  ", c.detail.c_str());
  std::fflush(stdout);
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Growth of derivatives of interval maps with parabolic fixed points"};
  app.require_subcommand(1);

  std::string config_path, out_dir, map_id = "F2";
  std::optional<int> n;
  std::optional<double> tol;
  bool as_json = false;

  auto add_common = [&](CLI::App* sub, bool needs_map) {
    sub->add_option("--out", out_dir, "directory for CSV and report files");
    sub->add_flag("--json", as_json, "print the JSON report on stdout");
    if (needs_map) {
      sub->add_option("--map", map_id, "catalogue map id (F1, F2, F3, F5, F2-reflected, F1-reflected)");
      sub->add_option("--n", n, "number of iterates N");
      sub->add_option("--tol", tol, "relative tolerance for the analysis check");
    }
  };

  auto* run = app.add_subcommand("run", "run every analysis of a config file");
  run->add_option("--config", config_path, "config file (JSON, schema parabolic-config/1)")->required();
  add_common(run, false);
  for (const auto& t : rp::analysis_types()) {
    auto* sub = app.add_subcommand(t, "single '" + t + "' analysis");
    add_common(sub, t != "watanabe");
    if (t == "watanabe") sub->add_option("--n", n, "largest construction index k for the claims");
  }

  CLI11_PARSE(app, argc, argv);

  rp::ExperimentConfig cfg;
  try {
    if (run->parsed()) {
      cfg = rp::load_config(config_path);
    } else {
      const std::string type = app.get_subcommands().front()->get_name();
      rp::json a{{"type", type}, {"name", type}};
      if (type == "watanabe") {
        if (n) a["k_claims"] = *n;
      } else {
        a["map"] = map_id;
        if (n) a["N"] = *n;
        else if (type == "growth") a["N"] = 200;
        if (tol) a["rel_tol"] = *tol;
      }
      cfg = rp::parse_config(rp::json{{"schema", rp::kConfigSchema}, {"analyses", rp::json::array({a})}});
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }

  rp::RunOptions opt;
  if (!out_dir.empty()) opt.out_dir = out_dir;
  if (!as_json) opt.on_result = print_result;
  rp::Report rep;
  try {
    rep = rp::run(cfg, opt);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  if (as_json) {
    std::cout << rp::to_json(rep).dump(2) << "\n";
  } else {
    std::printf("%s: %zu analyses, config %s\n", rep.all_pass() ? "all checks passed" : "some checks failed",
                rep.results.size(), rep.config_hash.c_str());
  }
  return rep.all_pass() ? 0 : 1;
}
