// aoa: command-line front end for the L-shaped array angle-of-arrival
// estimator.
//
//   aoa simulate   [--config FILE] [overrides...]  one synthetic trial
//   aoa estimate   --z-file F --x-file F --q N --spacing-ratio R [--mode M]
//   aoa montecarlo --config FILE [--seed S] [--output FILE]
//
// Exit status: 0 success, 1 usage error, 2 data error.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "laoa/error.hpp"
#include "laoa/estimator.hpp"
#include "laoa/experiment.hpp"
#include "laoa/matrix_io.hpp"

namespace {

constexpr int kUsageError = 1;
constexpr int kDataError = 2;

void print_estimate(std::ostream& out, const laoa::AoaEstimate& est) {
  using laoa::format_double;
  out << "source,theta_deg,phi_deg,psi_hat,xi_hat,root_magnitude_z,root_magnitude_x\n";
  for (std::size_t i = 0; i < est.sources.size(); ++i) {
    const auto& s = est.sources[i];
    out << i << ',' << format_double(s.theta_deg) << ',' << format_double(s.phi_deg) << ','
        << format_double(s.psi_hat) << ',' << format_double(s.xi_hat) << ','
        << format_double(s.root_magnitude_z) << ',' << format_double(s.root_magnitude_x) << '\n';
  }
  out << "mode," << laoa::to_string(est.mode) << '\n';
  out << "pairing_residual," << format_double(est.pairing_residual) << '\n';
  if (est.sources.size() > 1) {
    out << "runner_up_residual," << format_double(est.runner_up_residual) << '\n';
  }
  if (est.pairing_ambiguous) out << "warning,PairingAmbiguous\n";
  if (est.rank_deficient) out << "warning,RankDeficiency\n";
}

std::vector<laoa::DirectionPair> parse_sources(const std::string& text) {
  // Reuse the config grammar so both entry points accept the same syntax.
  return laoa::parse_config("sources = " + text).sources;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-dimensional angle-of-arrival estimation on an L-shaped array"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "Synthesize one trial and print the estimates");
  std::string sim_config;
  std::optional<int> sim_m;
  std::optional<int> sim_snapshots;
  std::optional<double> sim_ratio;
  std::optional<double> sim_snr;
  std::optional<std::string> sim_sources;
  std::optional<std::string> sim_mode;
  std::optional<std::string> sim_model;
  std::optional<std::uint64_t> sim_seed;
  std::size_t sim_trial = 0;
  std::string sim_z_out;
  std::string sim_x_out;
  sim->add_option("--config", sim_config, "Experiment config file");
  sim->add_option("--m,--elements", sim_m, "Elements per subarray");
  sim->add_option("--M,--snapshots", sim_snapshots, "Snapshots");
  sim->add_option("--spacing-ratio", sim_ratio, "Element spacing in wavelengths");
  sim->add_option("--snr-db", sim_snr, "SNR in dB (default: first config SNR, else 20)");
  sim->add_option("--sources", sim_sources, "Sources as theta/phi pairs, e.g. 60/45,30/120");
  sim->add_option("--mode", sim_mode, "noiseless | tsvd");
  sim->add_option("--signal-model", sim_model, "unit_power_random_phase | qpsk");
  sim->add_option("--seed", sim_seed, "Master seed");
  sim->add_option("--trial-index", sim_trial, "Trial index fed to the seed mixer");
  sim->add_option("--z-out", sim_z_out, "Write the Z snapshot matrix here");
  sim->add_option("--x-out", sim_x_out, "Write the X snapshot matrix here");

  // estimate
  auto* est = app.add_subcommand("estimate", "Estimate directions from stored snapshot matrices");
  std::string z_file;
  std::string x_file;
  int est_q = 0;
  double est_ratio = 0.5;
  std::string est_mode = "tsvd";
  est->add_option("--z-file", z_file, "Z-subarray matrix file")->required();
  est->add_option("--x-file", x_file, "X-subarray matrix file")->required();
  est->add_option("--q", est_q, "Number of sources")->required();
  est->add_option("--spacing-ratio", est_ratio, "Element spacing in wavelengths")->required();
  est->add_option("--mode", est_mode, "noiseless | tsvd");

  // montecarlo
  auto* mc = app.add_subcommand("montecarlo", "Run a seeded Monte Carlo experiment");
  std::string mc_config;
  std::optional<std::uint64_t> mc_seed;
  std::optional<std::string> mc_output;
  mc->add_option("--config", mc_config, "Experiment config file")->required();
  mc->add_option("--seed", mc_seed, "Override the config seed");
  mc->add_option("--output", mc_output, "Override output_path ('-' for stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kUsageError;
  }

  try {
    if (*sim) {
      laoa::ExperimentConfig cfg;
      if (!sim_config.empty()) {
        cfg = laoa::load_config(sim_config);
      } else {
        cfg.sources = {laoa::DirectionPair(60.0, 45.0)};
        cfg.q = 1;
        cfg.snr_db_list = {20.0};
      }
      if (sim_m) cfg.m = *sim_m;
      if (sim_snapshots) cfg.M = *sim_snapshots;
      if (sim_ratio) cfg.spacing_ratio = *sim_ratio;
      if (sim_sources) {
        cfg.sources = parse_sources(*sim_sources);
        cfg.q = static_cast<int>(cfg.sources.size());
      }
      if (sim_mode) cfg.mode = laoa::parse_solve_mode(*sim_mode);
      if (sim_model) cfg.signal_model = laoa::parse_signal_model(*sim_model);
      if (sim_seed) cfg.seed = *sim_seed;
      if (sim_snr) cfg.snr_db_list = {*sim_snr};
      cfg.trials = 1;
      cfg.validate();

      const laoa::ArrayConfig arr = cfg.array();
      laoa::Rng rng(laoa::trial_seed(cfg.seed, 0, sim_trial));
      const double sigma2 = laoa::noise_variance(1.0, cfg.snr_db_list.front());
      const auto syn = laoa::synthesize(cfg.source_set(), arr, cfg.M, sigma2, rng);
      if (!sim_z_out.empty()) laoa::write_matrix_file(syn.z, sim_z_out);
      if (!sim_x_out.empty()) laoa::write_matrix_file(syn.x, sim_x_out);

      std::cout << "truth,theta_deg,phi_deg\n";
      for (std::size_t i = 0; i < cfg.sources.size(); ++i) {
        std::cout << i << ',' << laoa::format_double(cfg.sources[i].theta_deg()) << ','
                  << laoa::format_double(cfg.sources[i].phi_deg()) << '\n';
      }
      std::cout << "snr_db," << laoa::format_double(cfg.snr_db_list.front()) << '\n';
      print_estimate(std::cout, laoa::estimate_2d_aoa(syn.z, syn.x, cfg.q, arr, cfg.mode));
    } else if (*est) {
      const laoa::SnapshotMatrix z = laoa::read_matrix_file(z_file);
      const laoa::SnapshotMatrix x = laoa::read_matrix_file(x_file);
      if (z.subarray != laoa::Subarray::Z || x.subarray != laoa::Subarray::X) {
        throw laoa::Error(laoa::ErrorCode::DimensionMismatch,
                          "--z-file must hold a Z matrix and --x-file an X matrix");
      }
      const laoa::ArrayConfig arr(z.sensors(), est_ratio);
      print_estimate(std::cout,
                     laoa::estimate_2d_aoa(z, x, est_q, arr, laoa::parse_solve_mode(est_mode)));
    } else if (*mc) {
      laoa::ExperimentConfig cfg = laoa::load_config(mc_config);
      if (mc_seed) cfg.seed = *mc_seed;
      if (mc_output) cfg.output_path = *mc_output;
      const std::string csv = laoa::to_csv(laoa::monte_carlo(cfg));
      if (cfg.output_path.empty() || cfg.output_path == "-") {
        std::cout << csv;
      } else {
        std::ofstream out(cfg.output_path, std::ios::binary);
        if (!out) {
          throw laoa::Error(laoa::ErrorCode::IoError, "cannot write " + cfg.output_path);
        }
        out << csv;
      }
    }
  } catch (const laoa::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  }
  return 0;
}
