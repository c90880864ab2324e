// Line-oriented "key = value" configuration for the CLI. Unknown keys are
// rejected; values are validated against the filter invariants at load.
#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "corrfuse/doe_filter.hpp"
#include "corrfuse/gd_filter.hpp"

namespace corrfuse {

struct ConfigFile {
  // Filter gains
  std::optional<double> lambda;
  std::optional<double> k_a, k_m, k_ba, k_bm;
  // Kernel bandwidths; family defaults differ, hence optional here
  std::optional<double> sigma_a, sigma_m;
  // Earth field
  std::optional<double> m_x, m_z, gravity;
  // Sampling and evaluation flags
  std::optional<double> rate;
  std::optional<std::string> normalize_by;  // "unweighted" | "weighted"
  std::optional<double> skip_initial;       // seconds

  static ConfigFile parse_file(const std::string& path);
  static ConfigFile parse_text(const std::string& text);

  /// Defaults applied where the file is silent; validated.
  GdConfig make_gd_config() const;
  DoeConfig make_doe_config() const;
  EarthField make_earth() const;
  double sample_rate() const { return rate.value_or(400.0); }
  double skip_initial_s() const { return skip_initial.value_or(0.0); }
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace corrfuse
