#include "corrfuse/csv_io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace corrfuse {

namespace {

constexpr const char* kImuHeader = "t,gx,gy,gz,ax,ay,az,mx,my,mz";
constexpr const char* kQuatHeader = "t,qw,qx,qy,qz";

std::vector<double> parse_row(const std::string& line, std::size_t expected,
                              std::size_t line_no) {
  std::vector<double> vals;
  vals.reserve(expected);
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = line.find(',', pos);
    const std::string field = line.substr(pos, comma == std::string::npos
                                                   ? std::string::npos
                                                   : comma - pos);
    const char* begin = field.c_str();
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || errno == ERANGE || !std::isfinite(v))
      throw DataFormatError("invalid numeric field '" + field + "'", line_no);
    vals.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (vals.size() != expected)
    throw DataFormatError("expected " + std::to_string(expected) + " columns, got " +
                              std::to_string(vals.size()),
                          line_no);
  return vals;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return in;
}

void read_header(std::ifstream& in, const char* expected, const std::string& path) {
  std::string header;
  if (!std::getline(in, header)) throw DataFormatError("empty file '" + path + "'", 1);
  if (!header.empty() && header.back() == '\r') header.pop_back();
  if (header != expected)
    throw DataFormatError("bad header, expected '" + std::string(expected) + "'", 1);
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::vector<ImuSample> load_imu_csv(const std::string& path) {
  std::ifstream in = open_input(path);
  read_header(in, kImuHeader, path);
  std::vector<ImuSample> samples;
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto v = parse_row(line, 10, line_no);
    ImuSample s;
    s.t = v[0];
    s.gyro = {v[1], v[2], v[3]};
    s.accel = {v[4], v[5], v[6]};
    s.mag = {v[7], v[8], v[9]};
    if (!samples.empty() && !(s.t > samples.back().t))
      throw DataFormatError("non-monotone timestamp " + format_double(s.t), line_no);
    samples.push_back(s);
  }
  if (samples.empty()) throw DataFormatError("no data rows in '" + path + "'", line_no);
  return samples;
}

void save_imu_csv(const std::string& path, std::span<const ImuSample> samples) {
  std::ofstream out(path, std::ios::binary);  // binary: keep LF on every platform
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << kImuHeader << "\n";
  for (const auto& s : samples) {
    out << format_double(s.t) << ',' << format_double(s.gyro.x) << ','
        << format_double(s.gyro.y) << ',' << format_double(s.gyro.z) << ','
        << format_double(s.accel.x) << ',' << format_double(s.accel.y) << ','
        << format_double(s.accel.z) << ',' << format_double(s.mag.x) << ','
        << format_double(s.mag.y) << ',' << format_double(s.mag.z) << "\n";
  }
  if (!out) throw IoError("write failure on '" + path + "'");
}

std::vector<TimedQuaternion> load_trajectory_csv(const std::string& path) {
  std::ifstream in = open_input(path);
  read_header(in, kQuatHeader, path);
  std::vector<TimedQuaternion> rows;
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto v = parse_row(line, 5, line_no);
    const double norm = std::sqrt(v[1] * v[1] + v[2] * v[2] + v[3] * v[3] + v[4] * v[4]);
    if (std::abs(norm - 1.0) > 1e-3)
      throw DataFormatError("quaternion norm " + format_double(norm) + " out of tolerance",
                            line_no);
    TimedQuaternion r;
    r.t = v[0];
    r.q = UnitQuaternion(v[1], v[2], v[3], v[4]);
    if (!rows.empty() && !(r.t > rows.back().t))
      throw DataFormatError("non-monotone timestamp " + format_double(r.t), line_no);
    rows.push_back(r);
  }
  if (rows.empty()) throw DataFormatError("no data rows in '" + path + "'", line_no);
  return rows;
}

void save_trajectory_csv(const std::string& path, std::span<const TimedQuaternion> rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << kQuatHeader << "\n";
  for (const auto& r : rows) {
    out << format_double(r.t) << ',' << format_double(r.q.w) << ',' << format_double(r.q.x)
        << ',' << format_double(r.q.y) << ',' << format_double(r.q.z) << "\n";
  }
  if (!out) throw IoError("write failure on '" + path + "'");
}

}  // namespace corrfuse
