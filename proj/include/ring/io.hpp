#pragma once

#include <iosfwd>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ring/trajectory.hpp"

namespace ring {

/// A configuration problem, located by line and/or field name.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& message, int line = 0, std::string field = {});
  int line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  int line_;
  std::string field_;
};

/// Flat `key = value` text. `#` starts a comment; blank lines are ignored;
/// duplicate keys are errors.
class KeyValueConfig {
 public:
  struct Entry {
    std::string value;
    int line = 0;
  };

  static KeyValueConfig parse(std::istream& in);
  static KeyValueConfig parse_file(const std::string& path);

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  void set(const std::string& key, const std::string& value);

  std::string text(const std::string& key) const;
  std::string text(const std::string& key, const std::string& fallback) const;
  double number(const std::string& key) const;
  double number(const std::string& key, double fallback) const;
  long integer(const std::string& key, long fallback) const;
  /// Comma-separated list of numbers.
  std::vector<double> numbers(const std::string& key) const;

  /// Throws ConfigError naming the first key not in `allowed`.
  void reject_unknown(const std::set<std::string>& allowed) const;

 private:
  const Entry& entry(const std::string& key) const;
  std::map<std::string, Entry> entries_;
};

/// Column order of trajectory files.
inline const std::vector<std::string> kTrajectoryColumns = {
    "t", "x", "y", "z", "px", "py", "pz", "rho", "phi_unwrapped", "r", "theta",
    "I1", "I2", "I3", "I4"};

/// 17 significant digits, enough to round-trip any double.
std::string format_double(double value);

void write_trajectory_csv(std::ostream& out, const Trajectory& traj, std::size_t stride = 1);
Trajectory read_trajectory_csv(std::istream& in, const SystemParams& params);

nlohmann::ordered_json trajectory_to_json(const Trajectory& traj, std::size_t stride = 1);
Trajectory trajectory_from_json(const nlohmann::json& doc, const SystemParams& params);

/// Reads CSV or JSON, chosen by file extension.
Trajectory read_trajectory_file(const std::string& path, const SystemParams& params);

}  // namespace ring
