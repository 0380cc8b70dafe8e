#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace sedvel::site {

inline constexpr double kGravity = 9.81;  ///< m/s^2

/// Uniformly sampled acceleration time series.
struct MotionRecord {
  std::string label;
  std::string units = "g";  ///< "g" or "m/s2"
  double dt = 0.0;          ///< s
  std::vector<double> acc;

  /// Throws DomainError unless dt > 0, units are known, samples are finite
  /// and there are at least 256 of them.
  void validate() const;
  double duration() const { return dt * static_cast<double>(acc.size()); }
  /// Factor converting `acc` to m/s^2.
  double to_si() const;
};

/// Text format: "# label=<label> units=<units> dt=<dt>" then one "t,acc" row
/// per sample.
MotionRecord parse_motion(const std::string& text, const std::string& source = "<memory>");
MotionRecord read_motion(const std::filesystem::path& path);
std::string format_motion(const MotionRecord& m);
void write_motion(const MotionRecord& m, const std::filesystem::path& path);

}  // namespace sedvel::site
