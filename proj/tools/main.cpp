#include <chrono>
#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "reports.hpp"
#include "spinsense/version.hpp"

namespace cli = spinsense::cli;
namespace fs = std::filesystem;

int main(int argc, char** argv) {
  CLI::App app{"Spin-S magnetometry under Ornstein-Uhlenbeck dephasing."};
  app.set_version_flag("--version", std::string(spinsense::kVersion));
  app.require_subcommand(1);
  std::string out;

  cli::QfiCurveArgs qa;
  auto* qfi = app.add_subcommand("qfi-curve", "QFI of the GHZ-like probe versus evolution time");
  qfi->add_option("--s", qa.s, "Spin quantum number (repeatable)")->required();
  qfi->add_option("--b", qa.b, "Noise magnitude")->capture_default_str();
  qfi->add_option("--tau-c", qa.tau_c, "Noise memory time")->capture_default_str();
  qfi->add_option("--tau-min", qa.tau_min)->capture_default_str();
  qfi->add_option("--tau-max", qa.tau_max)->capture_default_str();
  qfi->add_option("--points", qa.points, "Log-spaced tau points")->capture_default_str();
  qfi->add_option("--out", out, "CSV path");

  cli::SweepArgs sa;
  auto* sw = app.add_subcommand("sweep", "Yield rate versus one parameter, with exponent fits");
  sw->add_option("--param", sa.param, "s, b or tau-c")->required();
  sw->add_option("--min", sa.min)->required();
  sw->add_option("--max", sa.max)->required();
  sw->add_option("--points", sa.points)->capture_default_str();
  sw->add_option("--s", sa.s, "Fixed spin")->capture_default_str();
  sw->add_option("--b", sa.b, "Fixed noise magnitude")->capture_default_str();
  sw->add_option("--tau-c", sa.tau_c, "Fixed memory time")->capture_default_str();
  sw->add_option("--out", out, "CSV path");

  cli::OptimizeStateArgs oa;
  auto* opt = app.add_subcommand("optimize-state", "Spin-1 probe optimization versus memory time");
  opt->add_option("--b", oa.b)->capture_default_str();
  opt->add_option("--tau-c-min", oa.tau_c_min)->capture_default_str();
  opt->add_option("--tau-c-max", oa.tau_c_max)->capture_default_str();
  opt->add_option("--points", oa.points)->capture_default_str();
  opt->add_option("--out", out, "CSV path");

  cli::ValidateArgs va;
  auto* val = app.add_subcommand("validate", "Run a validation suite and write a JSON report");
  val->add_option("--suite", va.suite, "mc, oracle, estimator or dd")->required();
  val->add_option("--seed", va.seed)->capture_default_str();
  val->add_option("--out", out, "JSON report path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  const auto t0 = std::chrono::steady_clock::now();
  cli::Manifest manifest;
  fs::path path;
  bool ok = true;
  try {
    if (qfi->parsed()) {
      manifest.command = "qfi-curve";
      path = cli::resolve_output(out, "qfi_curve.csv");
      cli::run_qfi_curve(qa, path, manifest);
    } else if (sw->parsed()) {
      manifest.command = "sweep";
      path = cli::resolve_output(out, "sweep_" + sa.param + ".csv");
      cli::run_sweep(sa, path, manifest);
    } else if (opt->parsed()) {
      manifest.command = "optimize-state";
      path = cli::resolve_output(out, "optimize_state.csv");
      cli::run_optimize_state(oa, path, manifest);
    } else {
      manifest.command = "validate";
      path = cli::resolve_output(out, "validate_" + va.suite + ".json");
      ok = cli::run_validate(va, path, manifest);
    }
  } catch (const cli::UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  manifest.duration_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  cli::write_json(cli::manifest_path(path), manifest.to_json());
  if (!ok) std::cerr << manifest.command << ": checks failed, see " << path.string() << '\n';
  return ok ? 0 : 1;
}
