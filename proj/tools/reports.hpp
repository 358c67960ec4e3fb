#pragma once

// Report writers behind the spinsense command line: CSV tables, JSON
// manifests and validation suites.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace spinsense::cli {

inline constexpr const char* kOutputDirEnv = "SPINSENSE_OUTPUT_DIR";

/// Bad flag values. Reported with exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// `requested` if given, else `default_name` inside $SPINSENSE_OUTPUT_DIR (or the working directory).
std::filesystem::path resolve_output(const std::string& requested, const std::string& default_name);

/// `<stem>.manifest.json` next to `out`.
std::filesystem::path manifest_path(const std::filesystem::path& out);

/// Shortest "%g" form, e.g. 4 or 0.5.
std::string format_spin(double s);

/// RFC 4180 writer with 17 significant digits and '\n' row ends.
class CsvWriter {
 public:
  explicit CsvWriter(const std::filesystem::path& path);
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void header(const std::vector<std::string>& names);
  CsvWriter& cell(double v);
  CsvWriter& cell(const std::string& v);
  void end_row();

 private:
  void separator();

  std::FILE* file_ = nullptr;
  std::string row_;
};

void write_json(const std::filesystem::path& path, const nlohmann::json& value);

struct Manifest {
  std::string command;
  nlohmann::json parameters = nlohmann::json::object();
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> outputs;
  double duration_s = 0.0;

  nlohmann::json to_json() const;
};

struct QfiCurveArgs {
  std::vector<double> s;
  double b = 1.0;
  double tau_c = 0.1;
  double tau_min = 1e-3;
  double tau_max = 1.0;
  std::size_t points = 400;
};

struct SweepArgs {
  std::string param;
  double min = 0.0;
  double max = 0.0;
  std::size_t points = 100;
  double s = 0.5;
  double b = 1.0;
  double tau_c = 1.0;
};

struct OptimizeStateArgs {
  double b = 1.0;
  double tau_c_min = 1e-4;
  double tau_c_max = 1e3;
  std::size_t points = 15;
};

struct ValidateArgs {
  std::string suite;
  std::uint64_t seed = 42;
};

/// Each command writes its files and fills `manifest` (outputs and parameters).
void run_qfi_curve(const QfiCurveArgs& args, const std::filesystem::path& out, Manifest& manifest);
void run_sweep(const SweepArgs& args, const std::filesystem::path& out, Manifest& manifest);
void run_optimize_state(const OptimizeStateArgs& args, const std::filesystem::path& out, Manifest& manifest);

/// Writes the JSON report and returns true iff every check passed.
bool run_validate(const ValidateArgs& args, const std::filesystem::path& out, Manifest& manifest);

/// Validation suite body, without file output.
nlohmann::json validation_report(const std::string& suite, std::uint64_t seed);

}  // namespace spinsense::cli
