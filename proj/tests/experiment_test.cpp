#include "laoa/experiment.hpp"

#include <cmath>
#include <cstdlib>

#include <gtest/gtest.h>

#include "laoa/error.hpp"

namespace laoa {
namespace {

ExperimentConfig base_config() {
  ExperimentConfig cfg;
  cfg.m = 8;
  cfg.spacing_ratio = 0.5;
  cfg.M = 200;
  cfg.q = 1;
  cfg.sources = {{60, 45}};
  cfg.snr_db_list = {20};
  cfg.trials = 10;
  cfg.seed = 42;
  cfg.mode = SolveMode::TruncatedSvd;
  return cfg;
}

TEST(Config, ParsesDocumentedKeys) {
  const auto cfg = parse_config(
      "# experiment\n"
      "m = 6\n"
      "spacing_ratio = 0.45\n"
      "M = 120   # snapshots\n"
      "q = 2\n"
      "sources = 30/40, 70/120\n"
      "signal_model = qpsk\n"
      "snr_db_list = 0, 10.5, -3\n"
      "trials = 7\n"
      "seed = 18446744073709551615\n"
      "mode = noiseless\n"
      "output_path = out/report.csv\n");
  EXPECT_EQ(cfg.m, 6);
  EXPECT_DOUBLE_EQ(cfg.spacing_ratio, 0.45);
  EXPECT_EQ(cfg.M, 120);
  EXPECT_EQ(cfg.q, 2);
  ASSERT_EQ(cfg.sources.size(), 2u);
  EXPECT_EQ(cfg.sources[1], DirectionPair(70, 120));
  EXPECT_EQ(cfg.signal_model, SignalModel::Qpsk);
  EXPECT_EQ(cfg.snr_db_list, (std::vector<double>{0, 10.5, -3}));
  EXPECT_EQ(cfg.trials, 7);
  EXPECT_EQ(cfg.seed, 18446744073709551615ULL);
  EXPECT_EQ(cfg.mode, SolveMode::PlainLeastSquares);
  EXPECT_EQ(cfg.output_path, "out/report.csv");
  EXPECT_NO_THROW(cfg.validate());
}

TEST(Config, SerializeParseRoundTrip) {
  ExperimentConfig cfg = base_config();
  cfg.sources = {{30.123456789012345, 40.1}, {70, 0}, {110.5, 180}};
  cfg.q = 3;
  cfg.snr_db_list = {-5.25, 0, 1.0 / 3.0, 300};
  cfg.spacing_ratio = 0.1 + 0.2;
  cfg.seed = 0xDEADBEEFCAFEF00DULL;
  cfg.signal_model = SignalModel::Qpsk;
  cfg.output_path = "report.csv";
  EXPECT_EQ(parse_config(serialize_config(cfg)), cfg);
  const ExperimentConfig defaults = base_config();
  EXPECT_EQ(parse_config(serialize_config(defaults)), defaults);
}

TEST(Config, InfersQFromSources) {
  EXPECT_EQ(parse_config("sources = 30/40, 70/120\n").q, 2);
}

TEST(Config, Rejections) {
  for (const char* text : {"bogus = 1\n", "m = 4\nm = 5\n", "m = four\n", "sources = 30-40\n",
                           "sources = 200/40\n", "mode = fast\n", "m 4\n", "seed = -1\n"}) {
    try {
      parse_config(text);
      ADD_FAILURE() << "accepted: " << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::ParseError) << text;
    }
  }
}

TEST(Config, ValidateChecksInvariants) {
  auto cfg = base_config();
  cfg.q = 2;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = base_config();
  cfg.trials = 0;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = base_config();
  cfg.snr_db_list.clear();
  EXPECT_THROW(cfg.validate(), Error);
  cfg = base_config();
  cfg.M = 5;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = base_config();
  cfg.m = 3;
  cfg.sources = {{60, 45}, {30, 120}};
  cfg.q = 2;
  EXPECT_THROW(cfg.validate(), Error);
}

TEST(Seeding, DocumentedMixingConstants) {
  // Reference values computed independently from the documented formula.
  EXPECT_EQ(splitmix64(1), 0x5692161D100B05E5ULL);
  EXPECT_EQ(trial_seed(42, 0, 0), 6332618229526065668ULL);
  EXPECT_EQ(trial_seed(42, 3, 17), 3173960945758669126ULL);
  EXPECT_EQ(trial_seed(0, 0, 0), 12035550249420947055ULL);
  EXPECT_NE(trial_seed(42, 0, 1), trial_seed(42, 1, 0));
}

TEST(NoiseVariance, FromSnr) {
  EXPECT_DOUBLE_EQ(noise_variance(1.0, 0.0), 1.0);
  EXPECT_NEAR(noise_variance(1.0, 20.0), 0.01, 1e-17);
  EXPECT_NEAR(noise_variance(2.0, -10.0), 20.0, 1e-12);
}

TEST(MatchToTruth, MinimisesTotalError) {
  std::vector<SourceEstimate> est(2);
  est[0].theta_deg = 70.1;
  est[0].phi_deg = 119.0;
  est[1].theta_deg = 30.2;
  est[1].phi_deg = 40.5;
  const std::vector<DirectionPair> truth{{30, 40}, {70, 120}};
  EXPECT_EQ(match_to_truth(est, truth), (std::vector<std::size_t>{1, 0}));
}

TEST(RunTrial, EffectivelyNoiseless) {
  auto cfg = base_config();
  cfg.snr_db_list = {300};
  const auto r = run_trial(cfg, 0, 0);
  ASSERT_TRUE(r.ok) << r.failure_message;
  EXPECT_LT(std::abs(r.theta_error_deg[0]), 1e-6);
  EXPECT_LT(std::abs(r.phi_error_deg[0]), 1e-6);
}

TEST(RunTrial, Deterministic) {
  auto cfg = base_config();
  const auto a = run_trial(cfg, 0, 5);
  const auto b = run_trial(cfg, 0, 5);
  ASSERT_TRUE(a.ok);
  EXPECT_EQ(a.theta_error_deg, b.theta_error_deg);
  EXPECT_EQ(a.phi_error_deg, b.phi_error_deg);
  const auto c = run_trial(cfg, 0, 6);
  EXPECT_NE(a.theta_error_deg, c.theta_error_deg);
}

TEST(RunTrial, OverwhelmingNoiseNeverCrashes) {
  auto cfg = base_config();
  cfg.snr_db_list = {-100};
  cfg.sources = {{60, 45}, {120, 100}};
  cfg.q = 2;
  for (std::size_t t = 0; t < 30; ++t) {
    const auto r = run_trial(cfg, 0, t);
    if (r.ok) {
      for (const auto& s : r.estimate.sources) {
        EXPECT_TRUE(s.theta_deg > 0 && s.theta_deg < 180);
        EXPECT_TRUE(s.phi_deg >= 0 && s.phi_deg <= 180);
      }
    } else {
      EXPECT_TRUE(r.failure.has_value());
      EXPECT_TRUE(r.theta_error_deg.empty());
    }
  }
}

TEST(MonteCarlo, SingleTrialStatistics) {
  auto cfg = base_config();
  cfg.trials = 1;
  cfg.snr_db_list = {300};
  const auto report = monte_carlo(cfg, 1);
  const auto r = run_trial(cfg, 0, 0);
  ASSERT_EQ(report.rows.size(), 1u);
  const auto& row = report.rows[0];
  EXPECT_DOUBLE_EQ(*row.rmse_theta_deg, std::abs(r.theta_error_deg[0]));
  EXPECT_DOUBLE_EQ(*row.rmse_phi_deg, std::abs(r.phi_error_deg[0]));
  EXPECT_DOUBLE_EQ(*row.bias_theta_deg, r.theta_error_deg[0]);
  EXPECT_EQ(row.failure_count, 0);
  EXPECT_EQ(row.trials, 1);
}

TEST(MonteCarlo, ReportInvariantsAndOrdering) {
  auto cfg = base_config();
  cfg.sources = {{50, 60}, {110, 130}};
  cfg.q = 2;
  cfg.snr_db_list = {30, -5, 10};
  cfg.trials = 40;
  const auto report = monte_carlo(cfg, 3);
  ASSERT_EQ(report.rows.size(), 6u);
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const auto& row = report.rows[i];
    EXPECT_EQ(row.snr_db, (std::vector<double>{-5, -5, 10, 10, 30, 30})[i]);
    EXPECT_EQ(row.source_index, static_cast<int>(i % 2));
    EXPECT_EQ(row.trials, 40);
    EXPECT_GE(row.failure_count, 0);
    EXPECT_LE(row.failure_count, 40);
    if (row.rmse_theta_deg) {
      EXPECT_GE(*row.rmse_theta_deg * (1 + 1e-12), std::abs(*row.bias_theta_deg));
      EXPECT_GE(*row.rmse_phi_deg * (1 + 1e-12), std::abs(*row.bias_phi_deg));
    } else {
      EXPECT_EQ(row.failure_count, row.trials);
    }
  }
}

TEST(MonteCarlo, IndependentOfWorkerCount) {
  auto cfg = base_config();
  cfg.snr_db_list = {0, 10, 20};
  cfg.trials = 30;
  const std::string one = to_csv(monte_carlo(cfg, 1));
  EXPECT_EQ(to_csv(monte_carlo(cfg, 4)), one);
  EXPECT_EQ(to_csv(monte_carlo(cfg, 13)), one);
}

TEST(MonteCarlo, AllTrialsFailedRowHasEmptyFields) {
  MonteCarloReport report;
  ReportRow row;
  row.snr_db = -10;
  row.failure_count = 5;
  row.trials = 5;
  report.rows.push_back(row);
  EXPECT_EQ(to_csv(report), std::string(kCsvHeader) + "\n-10,0,,,,,5,5\n");
}

TEST(Csv, HeaderSchema) {
  auto cfg = base_config();
  cfg.trials = 2;
  const std::string csv = to_csv(monte_carlo(cfg, 1));
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "snr_db,source_index,rmse_theta_deg,rmse_phi_deg,bias_theta_deg,bias_phi_deg,"
            "failure_count,trials");
}

TEST(Workers, FromEnvironment) {
  ::setenv("AOA_THREADS", "3", 1);
  EXPECT_EQ(default_workers(), 3u);
  ::setenv("AOA_THREADS", "zero", 1);
  EXPECT_GE(default_workers(), 1u);
  ::unsetenv("AOA_THREADS");
  EXPECT_GE(default_workers(), 1u);
}

}  // namespace
}  // namespace laoa
