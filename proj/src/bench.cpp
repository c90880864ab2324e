#include "corrfuse/bench.hpp"

#include <chrono>
#include <random>
#include <stdexcept>

#include "corrfuse/doe_filter.hpp"
#include "corrfuse/gd_filter.hpp"
#include "corrfuse/simulator.hpp"

namespace corrfuse {

namespace {

std::vector<ImuSample> random_walk_stream(std::size_t steps, std::uint64_t seed) {
  // Smooth random angular-velocity script, one keyframe per ~0.5 s.
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> rate(-1.5, 1.5);
  const double rate_hz = 400.0;
  const double duration = static_cast<double>(steps) / rate_hz;
  std::vector<TrajectorySpec::Keyframe> keys;
  for (double t = 0.0; t < duration; t += 0.5)
    keys.push_back({t, {rate(rng), rate(rng), rate(rng)}});
  const auto spec = TrajectorySpec::scripted(std::move(keys), duration, rate_hz);
  DisturbanceSpec dist;
  return generate(spec, dist, EarthField{}, seed).samples;
}

template <typename Run>
double time_run_ns(Run run, std::size_t steps, int repeats) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    run();
    const auto t1 = std::chrono::steady_clock::now();
    const double ns =
        std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count() /
        static_cast<double>(steps);
    best = std::min(best, ns);
  }
  return best;
}

}  // namespace

Algorithm algorithm_from_name(const std::string& name) {
  if (name == "gd") return Algorithm::kGd;
  if (name == "cgd") return Algorithm::kCgd;
  if (name == "doe") return Algorithm::kDoe;
  if (name == "cdoe") return Algorithm::kCdoe;
  throw std::invalid_argument("unknown algorithm '" + name + "' (expected gd|cgd|doe|cdoe)");
}

std::string algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::kGd: return "gd";
    case Algorithm::kCgd: return "cgd";
    case Algorithm::kDoe: return "doe";
    case Algorithm::kCdoe: return "cdoe";
  }
  return "?";
}

BenchResult bench_filter(Algorithm algo, std::size_t steps, int repeats,
                         std::uint64_t seed) {
  if (steps == 0) throw std::invalid_argument("bench: steps must be positive");
  if (repeats < 1) throw std::invalid_argument("bench: repeats must be positive");
  const auto samples = random_walk_stream(steps + 1, seed);
  const GdConfig gd_cfg;
  const DoeConfig doe_cfg;

  double ns = 0.0;
  switch (algo) {
    case Algorithm::kGd:
      ns = time_run_ns([&] { run_gd(samples, gd_cfg); }, steps, repeats);
      break;
    case Algorithm::kCgd:
      ns = time_run_ns([&] { run_cgd(samples, gd_cfg); }, steps, repeats);
      break;
    case Algorithm::kDoe:
      ns = time_run_ns([&] { run_doe(samples, doe_cfg); }, steps, repeats);
      break;
    case Algorithm::kCdoe:
      ns = time_run_ns([&] { run_cdoe(samples, doe_cfg); }, steps, repeats);
      break;
  }
  BenchResult r;
  r.ns_per_step = ns;
  r.steps_per_sec = ns > 0.0 ? 1e9 / ns : 0.0;
  r.steps = steps;
  r.repeats = repeats;
  return r;
}

OperationProfile operation_profile(Algorithm a) {
  switch (a) {
    case Algorithm::kGd:
      return {1, 0, 0, 5};  // propagate; accel/mag/gradient norms; renorm
    case Algorithm::kCgd:
      return {1, 6, 0, 5};  // plus one kernel per live error channel
    case Algorithm::kDoe:
      return {3, 0, 4, 8};  // propagate + 2 corrections; 2 acos + 2 sincos
    case Algorithm::kCdoe:
      return {3, 2, 4, 8};  // plus one kernel per correction angle
  }
  return {};
}

}  // namespace corrfuse
