#include "laoa/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <thread>

#include "laoa/matrix_io.hpp"

namespace laoa {

// ---------------------------------------------------------------------------
// Names

std::string_view to_string(SignalModel model) {
  return model == SignalModel::Qpsk ? "qpsk" : "unit_power_random_phase";
}

std::string_view to_string(SolveMode mode) {
  return mode == SolveMode::PlainLeastSquares ? "noiseless" : "tsvd";
}

SignalModel parse_signal_model(std::string_view text) {
  if (text == "unit_power_random_phase" || text == "random_phase") {
    return SignalModel::UnitPowerRandomPhase;
  }
  if (text == "qpsk") return SignalModel::Qpsk;
  throw Error(ErrorCode::ParseError, "unknown signal model '" + std::string(text) + "'");
}

SolveMode parse_solve_mode(std::string_view text) {
  if (text == "noiseless" || text == "plain") return SolveMode::PlainLeastSquares;
  if (text == "tsvd" || text == "truncated_svd") return SolveMode::TruncatedSvd;
  throw Error(ErrorCode::ParseError, "unknown estimator mode '" + std::string(text) + "'");
}

// ---------------------------------------------------------------------------
// Config

void ExperimentConfig::validate() const {
  const ArrayConfig arr = array();
  if (M < 1) throw Error(ErrorCode::InvalidArgument, "M must be positive");
  if (trials < 1) throw Error(ErrorCode::InvalidArgument, "trials must be at least 1");
  if (snr_db_list.empty()) throw Error(ErrorCode::InvalidArgument, "snr_db_list is empty");
  for (double s : snr_db_list) {
    if (!std::isfinite(s)) throw Error(ErrorCode::InvalidArgument, "non-finite SNR value");
  }
  if (q != static_cast<int>(sources.size())) {
    throw Error(ErrorCode::InvalidArgument, "q = " + std::to_string(q) + " but " +
                                                std::to_string(sources.size()) +
                                                " sources are listed");
  }
  if (q < 1 || q > m - 2) {
    throw Error(ErrorCode::InvalidArgument,
                "q must lie in [1, m-2] = [1, " + std::to_string(m - 2) + "]");
  }
  if (M < q || M < m - 1) {
    throw Error(ErrorCode::InvalidArgument,
                "M must be at least max(q, m-1) = " + std::to_string(std::max(q, m - 1)));
  }
  validate_sources(source_set(), arr);
}

SourceSet ExperimentConfig::source_set() const {
  SourceSet s;
  s.directions = sources;
  s.signal_model = signal_model;
  return s;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && ws(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = s.find(',');
    out.push_back(trim(s.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

[[noreturn]] void config_error(std::size_t line, const std::string& msg) {
  throw Error(ErrorCode::ParseError, "config line " + std::to_string(line) + ": " + msg);
}

double to_double(std::string_view v, std::size_t line, std::string_view key) {
  double out = 0.0;
  if (!parse_double(v, out)) {
    config_error(line, std::string(key) + ": expected a number, got '" + std::string(v) + "'");
  }
  return out;
}

template <class Int>
Int to_integer(std::string_view v, std::size_t line, std::string_view key) {
  Int out{};
  const char* end = v.data() + v.size();
  const auto res = std::from_chars(v.data(), end, out);
  if (v.empty() || res.ec != std::errc() || res.ptr != end) {
    config_error(line, std::string(key) + ": expected an integer, got '" + std::string(v) + "'");
  }
  return out;
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  std::map<std::string, std::size_t, std::less<>> seen;
  std::size_t lineno = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) config_error(lineno, "expected 'key = value'");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (!seen.emplace(std::string(key), lineno).second) {
      config_error(lineno, "duplicate key '" + std::string(key) + "'");
    }

    try {
      if (key == "m") {
        cfg.m = to_integer<int>(value, lineno, key);
      } else if (key == "spacing_ratio") {
        cfg.spacing_ratio = to_double(value, lineno, key);
      } else if (key == "M") {
        cfg.M = to_integer<int>(value, lineno, key);
      } else if (key == "q") {
        cfg.q = to_integer<int>(value, lineno, key);
      } else if (key == "sources") {
        cfg.sources.clear();
        for (auto item : split_list(value)) {
          const auto slash = item.find('/');
          if (slash == std::string_view::npos) {
            config_error(lineno, "sources: expected theta/phi, got '" + std::string(item) + "'");
          }
          const double theta = to_double(trim(item.substr(0, slash)), lineno, key);
          const double phi = to_double(trim(item.substr(slash + 1)), lineno, key);
          cfg.sources.emplace_back(theta, phi);
        }
      } else if (key == "signal_model") {
        cfg.signal_model = parse_signal_model(value);
      } else if (key == "snr_db_list") {
        cfg.snr_db_list.clear();
        for (auto item : split_list(value)) cfg.snr_db_list.push_back(to_double(item, lineno, key));
      } else if (key == "trials") {
        cfg.trials = to_integer<int>(value, lineno, key);
      } else if (key == "seed") {
        cfg.seed = to_integer<std::uint64_t>(value, lineno, key);
      } else if (key == "mode") {
        cfg.mode = parse_solve_mode(value);
      } else if (key == "output_path") {
        cfg.output_path = std::string(value);
      } else {
        config_error(lineno, "unknown key '" + std::string(key) + "'");
      }
    } catch (const Error& e) {
      if (e.code() == ErrorCode::ParseError &&
          std::string_view(e.what()).find("config line") != std::string_view::npos) {
        throw;
      }
      config_error(lineno, e.what());
    }
  }
  if (!seen.contains("q")) cfg.q = static_cast<int>(cfg.sources.size());
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "m = " << cfg.m << '\n';
  out << "spacing_ratio = " << format_double(cfg.spacing_ratio) << '\n';
  out << "M = " << cfg.M << '\n';
  out << "q = " << cfg.q << '\n';
  out << "sources = ";
  for (std::size_t i = 0; i < cfg.sources.size(); ++i) {
    if (i > 0) out << ", ";
    out << format_double(cfg.sources[i].theta_deg()) << '/'
        << format_double(cfg.sources[i].phi_deg());
  }
  out << '\n';
  out << "signal_model = " << to_string(cfg.signal_model) << '\n';
  out << "snr_db_list = ";
  for (std::size_t i = 0; i < cfg.snr_db_list.size(); ++i) {
    if (i > 0) out << ", ";
    out << format_double(cfg.snr_db_list[i]);
  }
  out << '\n';
  out << "trials = " << cfg.trials << '\n';
  out << "seed = " << cfg.seed << '\n';
  out << "mode = " << to_string(cfg.mode) << '\n';
  out << "output_path = " << cfg.output_path << '\n';
  return out.str();
}

// ---------------------------------------------------------------------------
// Seeding

std::uint64_t splitmix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t snr_index, std::uint64_t trial_index) {
  constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
  std::uint64_t s = splitmix64(seed + kGolden * (snr_index + 1));
  return splitmix64(s + kGolden * (trial_index + 1));
}

// ---------------------------------------------------------------------------
// Trials

double noise_variance(double power, double snr_db) { return power * std::pow(10.0, -snr_db / 10.0); }

std::vector<std::size_t> match_to_truth(const std::vector<SourceEstimate>& estimates,
                                        const std::vector<DirectionPair>& truth) {
  if (estimates.size() != truth.size()) {
    throw Error(ErrorCode::DimensionMismatch, "estimate and truth counts differ");
  }
  std::vector<std::size_t> perm(truth.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::vector<std::size_t> best = perm;
  double best_cost = std::numeric_limits<double>::infinity();
  do {
    double cost = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
      cost += std::abs(estimates[perm[i]].theta_deg - truth[i].theta_deg()) +
              std::abs(estimates[perm[i]].phi_deg - truth[i].phi_deg());
    }
    if (cost < best_cost) {
      best_cost = cost;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

TrialResult run_trial(const ExperimentConfig& cfg, std::size_t snr_index, std::size_t trial_index) {
  TrialResult r;
  try {
    const ArrayConfig arr = cfg.array();
    const SourceSet src = cfg.source_set();
    Rng rng(trial_seed(cfg.seed, snr_index, trial_index));
    const double sigma2 = noise_variance(src.power, cfg.snr_db_list.at(snr_index));
    const Synthesis syn = synthesize(src, arr, cfg.M, sigma2, rng);
    r.estimate = estimate_2d_aoa(syn.z, syn.x, cfg.q, arr, cfg.mode);
    const auto match = match_to_truth(r.estimate.sources, cfg.sources);
    for (std::size_t i = 0; i < cfg.sources.size(); ++i) {
      const auto& e = r.estimate.sources[match[i]];
      r.theta_error_deg.push_back(e.theta_deg - cfg.sources[i].theta_deg());
      r.phi_error_deg.push_back(e.phi_deg - cfg.sources[i].phi_deg());
    }
    r.ok = true;
  } catch (const Error& e) {
    r.ok = false;
    r.failure = e.code();
    r.failure_message = e.what();
    r.theta_error_deg.clear();
    r.phi_error_deg.clear();
  }
  return r;
}

unsigned default_workers() {
  if (const char* env = std::getenv("AOA_THREADS")) {
    unsigned v = 0;
    const std::string_view s(env);
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec == std::errc() && res.ptr == s.data() + s.size() && v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

MonteCarloReport monte_carlo(const ExperimentConfig& cfg, unsigned workers) {
  cfg.validate();
  if (workers == 0) workers = default_workers();
  const std::size_t trials = static_cast<std::size_t>(cfg.trials);
  const std::size_t cells = cfg.snr_db_list.size() * trials;
  std::vector<TrialResult> results(cells);

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t c = next.fetch_add(1); c < cells; c = next.fetch_add(1)) {
      results[c] = run_trial(cfg, c / trials, c % trials);
    }
  };
  const unsigned n_threads = static_cast<unsigned>(std::min<std::size_t>(workers, cells));
  if (n_threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(work);
  }

  // Order the SNR points ascending; aggregation walks trials in index order
  // so floating-point sums do not depend on scheduling.
  std::vector<std::size_t> snr_order(cfg.snr_db_list.size());
  std::iota(snr_order.begin(), snr_order.end(), std::size_t{0});
  std::stable_sort(snr_order.begin(), snr_order.end(), [&](std::size_t a, std::size_t b) {
    return cfg.snr_db_list[a] < cfg.snr_db_list[b];
  });

  MonteCarloReport report;
  for (std::size_t si : snr_order) {
    for (int src = 0; src < cfg.q; ++src) {
      ReportRow row;
      row.snr_db = cfg.snr_db_list[si];
      row.source_index = src;
      row.trials = cfg.trials;
      double sum_t = 0.0, sum_p = 0.0, sq_t = 0.0, sq_p = 0.0;
      int ok = 0;
      for (std::size_t t = 0; t < trials; ++t) {
        const TrialResult& r = results[si * trials + t];
        if (!r.ok) {
          ++row.failure_count;
          continue;
        }
        const double et = r.theta_error_deg[static_cast<std::size_t>(src)];
        const double ep = r.phi_error_deg[static_cast<std::size_t>(src)];
        sum_t += et;
        sum_p += ep;
        sq_t += et * et;
        sq_p += ep * ep;
        ++ok;
      }
      if (ok > 0) {
        row.rmse_theta_deg = std::sqrt(sq_t / ok);
        row.rmse_phi_deg = std::sqrt(sq_p / ok);
        row.bias_theta_deg = sum_t / ok;
        row.bias_phi_deg = sum_p / ok;
      }
      report.rows.push_back(row);
    }
  }
  return report;
}

std::string to_csv(const MonteCarloReport& report) {
  std::string out(kCsvHeader);
  out += '\n';
  const auto field = [](const std::optional<double>& v) {
    return v ? format_double(*v) : std::string();
  };
  for (const auto& r : report.rows) {
    out += format_double(r.snr_db) + ',' + std::to_string(r.source_index) + ',' +
           field(r.rmse_theta_deg) + ',' + field(r.rmse_phi_deg) + ',' + field(r.bias_theta_deg) +
           ',' + field(r.bias_phi_deg) + ',' + std::to_string(r.failure_count) + ',' +
           std::to_string(r.trials) + '\n';
  }
  return out;
}

}  // namespace laoa
