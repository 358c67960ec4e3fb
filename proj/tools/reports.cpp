#include "reports.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>

#include "spinsense/noise_model.hpp"
#include "spinsense/protocol_optimizer.hpp"
#include "spinsense/qfi_engine.hpp"
#include "spinsense/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace spinsense::cli {

fs::path resolve_output(const std::string& requested, const std::string& default_name) {
  if (!requested.empty()) return requested;
  const char* dir = std::getenv(kOutputDirEnv);
  return (dir && *dir) ? fs::path(dir) / default_name : fs::path(default_name);
}

fs::path manifest_path(const fs::path& out) {
  fs::path p = out;
  p.replace_extension(".manifest.json");
  return p;
}

std::string format_spin(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", s);
  return buf;
}

namespace {

void ensure_parent(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
}

std::string quote(const std::string& v) {
  if (v.find_first_of(",\"\r\n") == std::string::npos) return v;
  std::string q = "\"";
  for (char c : v) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

}  // namespace

CsvWriter::CsvWriter(const fs::path& path) {
  ensure_parent(path);
  file_ = std::fopen(path.c_str(), "wb");
  if (!file_) throw std::runtime_error("cannot open " + path.string() + " for writing");
}

CsvWriter::~CsvWriter() {
  if (file_) std::fclose(file_);
}

void CsvWriter::header(const std::vector<std::string>& names) {
  for (const auto& n : names) cell(n);
  end_row();
}

void CsvWriter::separator() {
  if (!row_.empty()) row_ += ',';
}

CsvWriter& CsvWriter::cell(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  separator();
  row_ += buf;
  return *this;
}

CsvWriter& CsvWriter::cell(const std::string& v) {
  separator();
  row_ += quote(v);
  return *this;
}

void CsvWriter::end_row() {
  row_ += '\n';
  if (std::fputs(row_.c_str(), file_) < 0) throw std::runtime_error("csv write failed");
  row_.clear();
}

void write_json(const fs::path& path, const json& value) {
  ensure_parent(path);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  f << value.dump(2) << '\n';
}

json Manifest::to_json() const {
  return {{"command", command},
          {"parameters", parameters},
          {"seeds", seeds},
          {"rng_algorithm", std::string(kRngAlgorithm)},
          {"version", kVersion},
          {"duration_s", duration_s},
          {"outputs", outputs}};
}

namespace {

void need(bool ok, const std::string& what) {
  if (!ok) throw UsageError(what);
}

OUNoise noise_or_usage(double b, double tau_c) {
  need(b > 0 && std::isfinite(b), "--b must be > 0");
  need(tau_c > 0 && std::isfinite(tau_c), "--tau-c must be > 0");
  return OUNoise(b, tau_c);
}

SpinQuantumNumber spin_or_usage(double s) {
  try {
    return SpinQuantumNumber::from_value(s);
  } catch (const std::invalid_argument&) {
    throw UsageError("--s must be a positive half-integer, got " + format_spin(s));
  }
}

}  // namespace

void run_qfi_curve(const QfiCurveArgs& args, const fs::path& out, Manifest& manifest) {
  need(!args.s.empty(), "--s is required");
  need(args.points >= 1, "--points must be >= 1");
  need(args.tau_min > 0 && args.tau_max >= args.tau_min, "need 0 < --tau-min <= --tau-max");
  const OUNoise noise = noise_or_usage(args.b, args.tau_c);
  std::vector<SpinQuantumNumber> spins;
  for (double s : args.s) spins.push_back(spin_or_usage(s));

  CsvWriter csv(out);
  std::vector<std::string> cols{"tau"};
  for (double s : args.s) cols.push_back("qfi_" + format_spin(s));
  csv.header(cols);
  for (double tau : log_grid(args.tau_min, args.tau_max, args.points)) {
    csv.cell(tau);
    for (const auto& s : spins) csv.cell(qfi_noisy_ghz(s, noise, tau).value);
    csv.end_row();
  }
  manifest.parameters = {{"s", args.s},           {"b", args.b},           {"tau_c", args.tau_c},
                         {"tau_min", args.tau_min}, {"tau_max", args.tau_max}, {"points", args.points}};
  manifest.outputs.push_back(out.string());
}

void run_sweep(const SweepArgs& args, const fs::path& out, Manifest& manifest) {
  SweepParameter p;
  if (args.param == "s") p = SweepParameter::Spin;
  else if (args.param == "b") p = SweepParameter::Magnitude;
  else if (args.param == "tau-c") p = SweepParameter::MemoryTime;
  else throw UsageError("--param must be one of s, b, tau-c");
  need(args.points >= 1, "--points must be >= 1");
  need(args.min > 0 && args.max >= args.min, "need 0 < --min <= --max");
  noise_or_usage(args.b, args.tau_c);
  if (p != SweepParameter::Spin) spin_or_usage(args.s);
  if (p == SweepParameter::Spin) need(args.max >= 0.25, "--max must be >= 1/2 for a spin sweep");

  const auto table = sweep(p, log_grid(args.min, args.max, args.points), {args.s, args.b, args.tau_c});
  CsvWriter csv(out);
  csv.header({"param", "rate", "tau_opt", "markov_param", "regime", "status"});
  for (const auto& row : table.rows) {
    csv.cell(row.value).cell(row.rate).cell(row.tau_opt).cell(row.markov_param);
    csv.cell(std::string(to_string(row.regime))).cell(std::string(row.on_boundary ? "boundary" : "ok"));
    csv.end_row();
  }

  json fits = json::object();
  for (const auto& w : table.fits) {
    fits[w.label] = {{"exponent", w.fit.slope},
                     {"intercept", w.fit.intercept},
                     {"max_residual", w.fit.max_residual},
                     {"first_row", w.fit.first},
                     {"last_row", w.fit.last - 1},
                     {"param_from", table.rows[w.fit.first].value},
                     {"param_to", table.rows[w.fit.last - 1].value}};
  }
  fs::path summary = out;
  summary.replace_extension(".fits.json");
  write_json(summary, {{"param", args.param},
                       {"markovian_max", kFitMarkovianMax},
                       {"quasi_static_min", kFitQuasiStaticMin},
                       {"rows", table.rows.size()},
                       {"fits", fits}});

  manifest.parameters = {{"param", args.param}, {"min", args.min}, {"max", args.max}, {"points", args.points},
                         {"s", args.s},         {"b", args.b},     {"tau_c", args.tau_c}};
  manifest.outputs.push_back(out.string());
  manifest.outputs.push_back(summary.string());
}

void run_optimize_state(const OptimizeStateArgs& args, const fs::path& out, Manifest& manifest) {
  need(args.points >= 1, "--points must be >= 1");
  need(args.tau_c_min > 0 && args.tau_c_max >= args.tau_c_min, "need 0 < --tau-c-min <= --tau-c-max");
  noise_or_usage(args.b, args.tau_c_min);

  CsvWriter csv(out);
  csv.header({"tau_c", "r_ghz", "r_opt", "theta_opt", "phi_opt", "fidelity"});
  for (double tau_c : log_grid(args.tau_c_min, args.tau_c_max, args.points)) {
    const auto r = optimize_initial_state_spin1(OUNoise(args.b, tau_c));
    csv.cell(tau_c).cell(r.r_ghz).cell(r.r_max).cell(r.theta_opt).cell(r.phi_opt).cell(r.fidelity_with_ghz);
    csv.end_row();
  }
  manifest.parameters = {
      {"b", args.b}, {"tau_c_min", args.tau_c_min}, {"tau_c_max", args.tau_c_max}, {"points", args.points}};
  manifest.outputs.push_back(out.string());
}

bool run_validate(const ValidateArgs& args, const fs::path& out, Manifest& manifest) {
  if (args.suite != "mc" && args.suite != "oracle" && args.suite != "estimator" && args.suite != "dd") {
    throw UsageError("--suite must be one of mc, oracle, estimator, dd");
  }
  const json report = validation_report(args.suite, args.seed);
  write_json(out, report);
  manifest.parameters = {{"suite", args.suite}};
  manifest.seeds.push_back(args.seed);
  manifest.outputs.push_back(out.string());
  return report.at("pass").get<bool>();
}

}  // namespace spinsense::cli
