#pragma once

// Batch front end: file formats and the synth / detect / distance /
// experiment commands. The `cpd` executable is a thin flag parser over these.
//
// Exit codes: 0 ok, 1 unexpected failure, 2 unreadable input, 3 invalid or
// infeasible configuration, 4 no signal (every grid scored zero).

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cpd/changepoint.hpp"
#include "cpd/datagen.hpp"

namespace cpd::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kParseError = 2,
  kConfigError = 3,
  kNoSignal = 4,
};

/// text: one decimal real per line, optional `value` header line.
/// binary: consecutive little-endian IEEE-754 doubles.
enum class SeriesFormat { kText, kBinary };

SeriesFormat parse_format(const std::string& name);

/// Throws ParseError with the offending line on malformed or non-finite input.
std::vector<double> read_series(std::istream& in, SeriesFormat format);
std::vector<double> read_series(const std::filesystem::path& path, SeriesFormat format);

void write_series(std::ostream& out, std::span<const double> x, SeriesFormat format);
void write_series(const std::filesystem::path& path, std::span<const double> x, SeriesFormat format);

/// Affine map of the samples onto [0, 1]; constant series map to 0.
std::vector<double> rescale_unit(std::span<const double> x);

/// Key-value truth file: kappa, lambda_min, theta, change_point (floor(n theta)).
void write_truth(std::ostream& out, const ChangePointTruth& truth, std::size_t n);

/// Key-value report holding every EstimateReport field, one `grid` line per (j, t).
void write_report(std::ostream& out, const EstimateReport& report, std::optional<std::uint64_t> seed = std::nullopt);

/// Parses "a,b,c" (whitespace tolerated). Throws ParseError.
std::vector<long double> parse_real_list(const std::string& text);
std::vector<std::size_t> parse_size_list(const std::string& text);
/// Parses "lo:hi,lo:hi". Throws ParseError, or InvalidInput when lo >= hi.
std::vector<Interval> parse_interval_list(const std::string& text);

struct ProcessConfig {
  std::vector<long double> alphas;  ///< cycled when fewer than kappa+1 are given
  Interval u1{0.0, 0.7};
  Interval u2{0.3, 1.0};
  /// When nonempty, segment k is i.i.d. uniform on segment_laws[k mod size]
  /// in place of the u1/u2 switch.
  std::vector<Interval> segment_laws;

  /// Reference alphas near 0.12, 0.14, 0.16, 0.18.
  static ProcessConfig reference();
  std::vector<RotationProcessSpec> specs(std::size_t kappa) const;
};

struct SynthConfig {
  std::size_t n = 10000;
  std::size_t kappa = 3;
  double lambda_min = 0.1;
  ProcessConfig processes = ProcessConfig::reference();
  std::uint64_t seed = 1;
  std::filesystem::path out = "series.txt";
  std::filesystem::path truth = "truth.txt";
  SeriesFormat format = SeriesFormat::kText;
};

struct DetectConfig {
  std::filesystem::path input;
  std::size_t kappa = 1;
  SeriesFormat format = SeriesFormat::kText;
  bool rescale = false;
  DepthPolicy depths;
  std::optional<std::filesystem::path> out;  ///< stdout when unset
};

struct DistanceConfig {
  std::filesystem::path first;
  std::filesystem::path second;
  SeriesFormat format = SeriesFormat::kText;
  bool rescale = false;
  DepthPolicy depths;
};

struct ExperimentConfig {
  std::vector<std::size_t> ns{2000, 5000, 10000};
  std::size_t runs = 50;
  std::size_t kappa = 3;
  double lambda_min = 0.1;
  ProcessConfig processes = ProcessConfig::reference();
  std::uint64_t seed = 1;
  DepthPolicy depths;
  std::size_t threads = 1;
  std::optional<std::filesystem::path> out;  ///< stdout when unset
};

enum class RunStatus { kOk, kNoSignal, kError };

struct RunResult {
  std::size_t n = 0;
  std::size_t run = 0;
  RunStatus status = RunStatus::kOk;
  std::vector<double> theta_true;
  std::vector<double> theta_hat;  ///< empty unless status is kOk
  double total_error = 0.0;
};

/// Seed of cell (n, run) of an experiment.
std::uint64_t cell_seed(std::uint64_t master, std::size_t n, std::size_t run);

/// Runs every (n, run) cell; results are ordered by (n as listed, run)
/// whatever the thread count. Detection failures are flagged, not thrown.
std::vector<RunResult> run_experiment(const ExperimentConfig& config);

/// CSV with header n,run,k,theta_true,theta_hat,abs_error,total_error,status.
void write_experiment_csv(std::ostream& out, std::span<const RunResult> results);

int cmd_synth(const SynthConfig& config, std::ostream& log);
int cmd_detect(const DetectConfig& config, std::ostream& out, std::ostream& log);
int cmd_distance(const DistanceConfig& config, std::ostream& out, std::ostream& log);
int cmd_experiment(const ExperimentConfig& config, std::ostream& out, std::ostream& log);

}  // namespace cpd::cli
