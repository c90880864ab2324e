// corrfuse command-line interface.
//
// Exit codes: 0 success, 2 usage or configuration error, 3 I/O failure,
// 4 malformed data file.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "corrfuse/bandwidth.hpp"
#include "corrfuse/bench.hpp"
#include "corrfuse/config.hpp"
#include "corrfuse/correntropy.hpp"
#include "corrfuse/csv_io.hpp"
#include "corrfuse/doe_filter.hpp"
#include "corrfuse/gd_filter.hpp"
#include "corrfuse/log.hpp"
#include "corrfuse/metrics.hpp"
#include "corrfuse/simulator.hpp"

namespace {

using namespace corrfuse;

constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitData = 4;

struct SimulateArgs {
  std::string preset;
  std::uint64_t seed{1};
  std::string out_dir{"."};
  double noise_scale{1.0};
};

struct EstimateArgs {
  std::string algo;
  std::string input;
  std::string config;
  std::string out;
};

struct EvaluateArgs {
  std::vector<std::string> est;
  std::string truth;
  double skip_initial{0.0};
  std::string csv_out;
};

struct TuneArgs {
  std::string algo;
  std::string input;
  std::string truth;
  std::string config;
  bool robust{false};
  int bins{40};
  std::string hist_out;
};

struct LikelihoodArgs {
  std::vector<double> p_grid{0.0, 0.1, 0.2, 0.3};
  std::vector<double> sigma_grid{0.5, 1.0, 2.0, 5.0, 10.0, 100.0};
  std::size_t n{100000};
  std::uint64_t seed{1};
  double support{20.0};
  std::string out;
};

struct BenchArgs {
  std::string algo;
  std::size_t steps{200000};
  int repeats{5};
};

ConfigFile load_config_or_default(const std::string& path) {
  if (path.empty()) return ConfigFile{};
  return ConfigFile::parse_file(path);
}

std::vector<TimedQuaternion> with_timestamps(const std::vector<ImuSample>& samples,
                                             const std::vector<UnitQuaternion>& traj) {
  std::vector<TimedQuaternion> rows;
  rows.reserve(traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k) rows.push_back({samples[k].t, traj[k]});
  return rows;
}

int cmd_simulate(const SimulateArgs& a) {
  PresetExperiment preset = preset_by_name(a.preset);
  preset.disturbance.noise_std.gyro *= a.noise_scale;
  preset.disturbance.noise_std.accel *= a.noise_scale;
  preset.disturbance.noise_std.mag *= a.noise_scale;
  const SimulatedData data = generate(preset.trajectory, preset.disturbance, EarthField{},
                                      a.seed);
  std::error_code ec;
  std::filesystem::create_directories(a.out_dir, ec);
  const std::string imu_path = a.out_dir + "/imu.csv";
  const std::string truth_path = a.out_dir + "/truth.csv";
  save_imu_csv(imu_path, data.samples);
  save_trajectory_csv(truth_path, with_timestamps(data.samples, data.truth));
  std::cout << "wrote " << imu_path << " and " << truth_path << " (" << data.samples.size()
            << " rows)\n";
  return 0;
}

int cmd_estimate(const EstimateArgs& a) {
  const ConfigFile cfg = load_config_or_default(a.config);
  const std::vector<ImuSample> samples = load_imu_csv(a.input);
  const Algorithm algo = algorithm_from_name(a.algo);

  std::vector<UnitQuaternion> traj;
  const auto t0 = std::chrono::steady_clock::now();
  switch (algo) {
    case Algorithm::kGd: traj = run_gd(samples, cfg.make_gd_config()); break;
    case Algorithm::kCgd: traj = run_cgd(samples, cfg.make_gd_config()); break;
    case Algorithm::kDoe: traj = run_doe(samples, cfg.make_doe_config()).trajectory; break;
    case Algorithm::kCdoe: traj = run_cdoe(samples, cfg.make_doe_config()).trajectory; break;
  }
  const auto t1 = std::chrono::steady_clock::now();
  const double secs = std::chrono::duration<double>(t1 - t0).count();
  save_trajectory_csv(a.out, with_timestamps(samples, traj));
  std::printf("%zu steps in %.3f s (%.0f steps/s)\n", samples.size(), secs,
              secs > 0 ? static_cast<double>(samples.size()) / secs : 0.0);
  return 0;
}

std::vector<UnitQuaternion> quats_of(const std::vector<TimedQuaternion>& rows,
                                     std::size_t from) {
  std::vector<UnitQuaternion> qs;
  qs.reserve(rows.size() - from);
  for (std::size_t k = from; k < rows.size(); ++k) qs.push_back(rows[k].q);
  return qs;
}

int cmd_evaluate(const EvaluateArgs& a) {
  const auto truth_rows = load_trajectory_csv(a.truth);
  std::size_t skip_from = 0;
  const double t_cut = truth_rows.front().t + a.skip_initial;
  while (skip_from < truth_rows.size() && truth_rows[skip_from].t < t_cut) ++skip_from;
  if (skip_from >= truth_rows.size())
    throw DataFormatError("--skip-initial discards the whole stream", 0);

  std::vector<ErrorReport> reports;
  for (const auto& path : a.est) {
    const auto est_rows = load_trajectory_csv(path);
    if (est_rows.size() != truth_rows.size())
      throw DataFormatError("estimate/truth length mismatch for '" + path + "'",
                            est_rows.size() + 1);
    const auto errors =
        euler_errors(quats_of(est_rows, skip_from), quats_of(truth_rows, skip_from));
    const std::string name = std::filesystem::path(path).stem().string();
    reports.push_back(summarize(errors, name));
  }

  // Aligned table: RMSE block then ME block, one column per estimate.
  std::printf("%-8s", "axis");
  for (const auto& r : reports) std::printf(" %12s", (r.algorithm + " RMSE").c_str());
  for (const auto& r : reports) std::printf(" %12s", (r.algorithm + " ME").c_str());
  std::printf("\n");
  const char* axis_names[3] = {"yaw", "roll", "pitch"};
  for (int axis = 0; axis < 3; ++axis) {
    std::printf("%-8s", axis_names[axis]);
    auto pick = [&](const ErrorReport& r) {
      return axis == 0 ? r.yaw : axis == 1 ? r.roll : r.pitch;
    };
    for (const auto& r : reports) std::printf(" %12.4f", pick(r).rmse_deg);
    for (const auto& r : reports) std::printf(" %12.4f", pick(r).max_err_deg);
    std::printf("\n");
  }

  std::ostringstream csv;
  csv << "algorithm,axis,rmse_deg,me_deg\n";
  for (const auto& r : reports) {
    csv << r.algorithm << ",yaw," << format_double(r.yaw.rmse_deg) << ','
        << format_double(r.yaw.max_err_deg) << "\n";
    csv << r.algorithm << ",roll," << format_double(r.roll.rmse_deg) << ','
        << format_double(r.roll.max_err_deg) << "\n";
    csv << r.algorithm << ",pitch," << format_double(r.pitch.rmse_deg) << ','
        << format_double(r.pitch.max_err_deg) << "\n";
    csv << r.algorithm << ",total," << format_double(r.total.rmse_deg) << ','
        << format_double(r.total.max_err_deg) << "\n";
  }
  if (a.csv_out.empty()) {
    std::cout << "\n" << csv.str();
  } else {
    std::ofstream out(a.csv_out, std::ios::binary);
    if (!out) throw IoError("cannot open '" + a.csv_out + "' for writing");
    out << csv.str();
  }
  return 0;
}

int cmd_tune(const TuneArgs& a) {
  const ConfigFile cfg = load_config_or_default(a.config);
  const std::vector<ImuSample> samples = load_imu_csv(a.input);
  const bool gd_family = a.algo == "gd" || a.algo == "cgd";
  const EarthField earth = cfg.make_earth();

  std::vector<UnitQuaternion> traj;
  if (!a.truth.empty()) {
    const auto truth_rows = load_trajectory_csv(a.truth);
    if (truth_rows.size() != samples.size())
      throw DataFormatError("imu/truth length mismatch", truth_rows.size() + 1);
    traj = quats_of(truth_rows, 0);
  } else {
    traj = gd_family ? run_gd(samples, cfg.make_gd_config())
                     : run_doe(samples, cfg.make_doe_config()).trajectory;
  }

  const FilterFamily family =
      gd_family ? FilterFamily::kGradientDescent : FilterFamily::kDecoupled;
  const ResidualStats stats =
      collect_residuals(traj, samples, earth, family, ResidualOptions{a.robust});
  const BandwidthSuggestion s = suggest_bandwidths(stats);

  std::printf("residuals: n=%zu d_a=%s d_m=%s\n", stats.n, format_double(stats.d_a).c_str(),
              format_double(stats.d_m).c_str());
  if (s.ok_a) std::printf("sigma_a = %s\n", format_double(s.sigma_a).c_str());
  else std::printf("sigma_a: zero accel residuals, set manually\n");
  if (s.ok_m) std::printf("sigma_m = %s\n", format_double(s.sigma_m).c_str());
  else std::printf("sigma_m: zero mag residuals, set manually\n");

  const ResidualStreams streams = residual_streams(traj, samples, earth, family);
  std::ostringstream csv;
  csv << "sensor,bin_lo,bin_hi,count\n";
  for (const auto& [sensor, values] :
       {std::pair<const char*, const std::vector<double>&>{"accel", streams.accel},
        {"mag", streams.mag}}) {
    const ResidualHistogram h = histogram(values, a.bins);
    const double width = h.counts.empty() ? 0.0 : (h.hi - h.lo) / a.bins;
    for (std::size_t b = 0; b < h.counts.size(); ++b) {
      csv << sensor << ',' << format_double(h.lo + width * b) << ','
          << format_double(h.lo + width * (b + 1)) << ',' << h.counts[b] << "\n";
    }
  }
  if (a.hist_out.empty()) {
    std::cout << "\n" << csv.str();
  } else {
    std::ofstream out(a.hist_out, std::ios::binary);
    if (!out) throw IoError("cannot open '" + a.hist_out + "' for writing");
    out << csv.str();
  }
  return 0;
}

int cmd_likelihood(const LikelihoodArgs& a) {
  std::ostringstream csv;
  csv << "p,sigma,logl_cl,logl_ls\n";
  for (double p : a.p_grid) {
    const MixtureNoiseModel model(p);
    // One sample set per contamination level, shared across the sigma sweep.
    const std::vector<double> samples =
        sample_mixture(model, a.n, a.seed + static_cast<std::uint64_t>(p * 1000.0));
    for (double sigma : a.sigma_grid) {
      const auto [cl, ls] = loglik_compare(samples, sigma, a.support);
      csv << format_double(p) << ',' << format_double(sigma) << ',' << format_double(cl)
          << ',' << format_double(ls) << "\n";
    }
  }
  if (a.out.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream out(a.out, std::ios::binary);
    if (!out) throw IoError("cannot open '" + a.out + "' for writing");
    out << csv.str();
  }
  return 0;
}

int cmd_bench(const BenchArgs& a) {
  const Algorithm algo = algorithm_from_name(a.algo);
  const BenchResult r = bench_filter(algo, a.steps, a.repeats);
  const OperationProfile ops = operation_profile(algo);
  std::printf("%s: %.1f ns/step (%.0f steps/s), %zu steps x %d repeats\n",
              algorithm_name(algo).c_str(), r.ns_per_step, r.steps_per_sec, r.steps,
              r.repeats);
  std::printf("per-step ops: %d quaternion products, %d kernel evals, %d trig, %d sqrt\n",
              ops.quaternion_products, ops.kernel_evaluations, ops.trig_calls,
              ops.square_roots);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-kernel correntropy orientation estimation toolbox"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "synthesize an IMU log and ground truth");
  sim_cmd->add_option("--preset", sim.preset, "experiment preset (exp1..exp5)")->required();
  sim_cmd->add_option("--seed", sim.seed, "RNG seed");
  sim_cmd->add_option("--out-dir", sim.out_dir, "output directory");
  sim_cmd->add_option("--noise-scale", sim.noise_scale, "sensor noise multiplier (0 = none)")
      ->check(CLI::NonNegativeNumber);

  EstimateArgs est;
  auto* est_cmd = app.add_subcommand("estimate", "run a filter over an IMU log");
  est_cmd->add_option("--algo", est.algo, "gd|cgd|doe|cdoe")
      ->required()
      ->check(CLI::IsMember({"gd", "cgd", "doe", "cdoe"}));
  est_cmd->add_option("--input", est.input, "imu.csv path")->required();
  est_cmd->add_option("--config", est.config, "key = value config file");
  est_cmd->add_option("--out", est.out, "output trajectory csv")->required();

  EvaluateArgs ev;
  auto* ev_cmd = app.add_subcommand("evaluate", "per-axis RMSE/ME against ground truth");
  ev_cmd->add_option("--est", ev.est, "estimate csv (repeatable)")->required();
  ev_cmd->add_option("--truth", ev.truth, "truth csv")->required();
  ev_cmd->add_option("--skip-initial", ev.skip_initial, "seconds to drop from the start")
      ->check(CLI::NonNegativeNumber);
  ev_cmd->add_option("--csv", ev.csv_out, "write the machine-readable table here");

  TuneArgs tune;
  auto* tune_cmd = app.add_subcommand("tune", "suggest kernel bandwidths from residuals");
  tune_cmd->add_option("--algo", tune.algo, "filter family: gd|cgd|doe|cdoe")
      ->required()
      ->check(CLI::IsMember({"gd", "cgd", "doe", "cdoe"}));
  tune_cmd->add_option("--input", tune.input, "imu.csv path")->required();
  tune_cmd->add_option("--truth", tune.truth,
                       "truth csv; omitted: residuals against the filter's own run");
  tune_cmd->add_option("--config", tune.config, "config file");
  tune_cmd->add_flag("--robust", tune.robust, "median-absolute-deviation spread");
  tune_cmd->add_option("--bins", tune.bins, "histogram bins")->check(CLI::PositiveNumber);
  tune_cmd->add_option("--hist-out", tune.hist_out, "write residual histogram csv here");

  LikelihoodArgs lik;
  auto* lik_cmd = app.add_subcommand(
      "analyze-likelihood", "sweep kernel-induced vs Gaussian log-likelihood");
  lik_cmd->add_option("--p-grid", lik.p_grid, "contamination probabilities")
      ->delimiter(',');
  lik_cmd->add_option("--sigma-grid", lik.sigma_grid, "kernel bandwidths")->delimiter(',');
  lik_cmd->add_option("--n", lik.n, "samples per grid point")->check(CLI::PositiveNumber);
  lik_cmd->add_option("--seed", lik.seed, "RNG seed");
  lik_cmd->add_option("--support", lik.support, "density support bound")
      ->check(CLI::PositiveNumber);
  lik_cmd->add_option("--out", lik.out, "write csv here instead of stdout");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "per-step cost of one filter");
  bench_cmd->add_option("--algo", bench.algo, "gd|cgd|doe|cdoe")
      ->required()
      ->check(CLI::IsMember({"gd", "cgd", "doe", "cdoe"}));
  bench_cmd->add_option("--steps", bench.steps, "steps per repeat")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--repeats", bench.repeats, "timing repeats")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
    if (sim_cmd->parsed()) return cmd_simulate(sim);
    if (est_cmd->parsed()) return cmd_estimate(est);
    if (ev_cmd->parsed()) return cmd_evaluate(ev);
    if (tune_cmd->parsed()) return cmd_tune(tune);
    if (lik_cmd->parsed()) return cmd_likelihood(lik);
    if (bench_cmd->parsed()) return cmd_bench(bench);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  } catch (const DataFormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const NonMonotoneTime& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SpecValidation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
