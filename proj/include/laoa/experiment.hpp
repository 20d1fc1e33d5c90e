#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "laoa/array_model.hpp"
#include "laoa/error.hpp"
#include "laoa/estimator.hpp"
#include "laoa/linalg.hpp"
#include "laoa/synthesis.hpp"

namespace laoa {

struct ExperimentConfig {
  int m = 8;
  double spacing_ratio = 0.5;
  int M = 200;
  int q = 1;
  std::vector<DirectionPair> sources;
  SignalModel signal_model = SignalModel::UnitPowerRandomPhase;
  std::vector<double> snr_db_list;
  int trials = 100;
  std::uint64_t seed = 0;
  SolveMode mode = SolveMode::TruncatedSvd;
  std::string output_path;

  /// Throws Error(InvalidArgument) on any violated invariant.
  void validate() const;

  ArrayConfig array() const { return ArrayConfig(m, spacing_ratio); }
  SourceSet source_set() const;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Flat `key = value` text; '#' starts a comment. Keys: m, spacing_ratio, M,
/// q, sources (theta/phi pairs in degrees, comma separated), signal_model,
/// snr_db_list, trials, seed, mode, output_path.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string serialize_config(const ExperimentConfig& cfg);

std::string_view to_string(SignalModel model);
std::string_view to_string(SolveMode mode);
SignalModel parse_signal_model(std::string_view text);
SolveMode parse_solve_mode(std::string_view text);

/// splitmix64 finalizer.
std::uint64_t splitmix64(std::uint64_t z);

/// Seed of the random stream for one (snr index, trial index) cell:
///   s = splitmix64(seed + G * (snr_index + 1))
///   s = splitmix64(s + G * (trial_index + 1)),   G = 0x9E3779B97F4A7C15
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t snr_index, std::uint64_t trial_index);

/// Signed per-source errors against ground truth, or a failure record.
struct TrialResult {
  bool ok = false;
  std::vector<double> theta_error_deg;  // estimate - truth, indexed by truth source
  std::vector<double> phi_error_deg;
  std::optional<ErrorCode> failure;
  std::string failure_message;
  AoaEstimate estimate;
};

/// sigma^2 = power * 10^(-snr_db / 10).
double noise_variance(double power, double snr_db);

/// Estimate-to-truth assignment minimising the total |dtheta| + |dphi|.
/// Result[i] is the estimate index matched to truth source i.
std::vector<std::size_t> match_to_truth(const std::vector<SourceEstimate>& estimates,
                                        const std::vector<DirectionPair>& truth);

/// Runs one seeded trial. Estimator failures are returned as data.
TrialResult run_trial(const ExperimentConfig& cfg, std::size_t snr_index,
                      std::size_t trial_index);

struct ReportRow {
  double snr_db = 0.0;
  int source_index = 0;
  std::optional<double> rmse_theta_deg;
  std::optional<double> rmse_phi_deg;
  std::optional<double> bias_theta_deg;
  std::optional<double> bias_phi_deg;
  int failure_count = 0;
  int trials = 0;
};

struct MonteCarloReport {
  std::vector<ReportRow> rows;  // sorted by (snr_db, source_index)
};

/// Number of workers from AOA_THREADS, else hardware concurrency (>= 1).
unsigned default_workers();

/// Runs trials x |snr_db_list| trials on `workers` threads (0 picks
/// default_workers()). The report does not depend on the worker count.
MonteCarloReport monte_carlo(const ExperimentConfig& cfg, unsigned workers = 0);

inline constexpr std::string_view kCsvHeader =
    "snr_db,source_index,rmse_theta_deg,rmse_phi_deg,bias_theta_deg,bias_phi_deg,failure_count,"
    "trials";

std::string to_csv(const MonteCarloReport& report);

}  // namespace laoa
