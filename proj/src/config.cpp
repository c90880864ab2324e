#include "corrfuse/config.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace corrfuse {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& key, const std::string& value) {
  const char* begin = value.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || errno == ERANGE)
    throw ConfigError("config: invalid number for '" + key + "': '" + value + "'");
  return v;
}

}  // namespace

ConfigFile ConfigFile::parse_text(const std::string& text) {
  ConfigFile cfg;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: expected 'key = value' at line " + std::to_string(line_no));
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("config: empty key or value at line " + std::to_string(line_no));

    if (key == "lambda") cfg.lambda = parse_number(key, value);
    else if (key == "k_a") cfg.k_a = parse_number(key, value);
    else if (key == "k_m") cfg.k_m = parse_number(key, value);
    else if (key == "k_ba") cfg.k_ba = parse_number(key, value);
    else if (key == "k_bm") cfg.k_bm = parse_number(key, value);
    else if (key == "sigma_a") cfg.sigma_a = parse_number(key, value);
    else if (key == "sigma_m") cfg.sigma_m = parse_number(key, value);
    else if (key == "m_x") cfg.m_x = parse_number(key, value);
    else if (key == "m_z") cfg.m_z = parse_number(key, value);
    else if (key == "gravity") cfg.gravity = parse_number(key, value);
    else if (key == "rate") cfg.rate = parse_number(key, value);
    else if (key == "skip_initial") cfg.skip_initial = parse_number(key, value);
    else if (key == "normalize_by") {
      if (value != "unweighted" && value != "weighted")
        throw ConfigError("config: normalize_by must be 'unweighted' or 'weighted'");
      cfg.normalize_by = value;
    } else {
      throw ConfigError("config: unknown key '" + key + "' at line " +
                        std::to_string(line_no));
    }
  }
  if (cfg.skip_initial && *cfg.skip_initial < 0.0)
    throw ConfigError("config: skip_initial must be nonnegative");
  if (cfg.rate && !(*cfg.rate > 0.0)) throw ConfigError("config: rate must be positive");
  return cfg;
}

ConfigFile ConfigFile::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_text(buf.str());
}

EarthField ConfigFile::make_earth() const {
  EarthField defaults;
  const double mx = m_x.value_or(defaults.m_x);
  const double mz = m_z.value_or(defaults.m_z);
  const double g = gravity.value_or(defaults.gravity_mag);
  try {
    return EarthField(g, mx, mz);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

GdConfig ConfigFile::make_gd_config() const {
  GdConfig cfg;
  cfg.earth = make_earth();
  cfg.dt = 1.0 / sample_rate();
  if (lambda) cfg.lambda = *lambda;
  if (sigma_a) cfg.sigma_a = *sigma_a;
  if (sigma_m) cfg.sigma_m = *sigma_m;
  if (normalize_by)
    cfg.normalize_by = *normalize_by == "weighted" ? GradientNorm::kWeighted
                                                   : GradientNorm::kUnweighted;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return cfg;
}

DoeConfig ConfigFile::make_doe_config() const {
  DoeConfig cfg;
  cfg.earth = make_earth();
  cfg.dt = 1.0 / sample_rate();
  if (k_a) cfg.k_a = *k_a;
  if (k_m) cfg.k_m = *k_m;
  if (k_ba) cfg.k_ba = *k_ba;
  if (k_bm) cfg.k_bm = *k_bm;
  if (sigma_a) cfg.sigma_a = *sigma_a;
  if (sigma_m) cfg.sigma_m = *sigma_m;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return cfg;
}

}  // namespace corrfuse
