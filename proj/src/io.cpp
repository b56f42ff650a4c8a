#include "ring/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace ring {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& text, int line, const std::string& field) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ConfigError("'" + text + "' is not a number", line, field);
  }
  if (used != text.size() || !std::isfinite(v))
    throw ConfigError("'" + text + "' is not a finite number", line, field);
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

}  // namespace

ConfigError::ConfigError(const std::string& message, int line, std::string field)
    : std::runtime_error((line > 0 ? "line " + std::to_string(line) + ": " : std::string()) +
                         (field.empty() ? std::string() : "'" + field + "': ") + message),
      line_(line),
      field_(std::move(field)) {}

KeyValueConfig KeyValueConfig::parse(std::istream& in) {
  KeyValueConfig cfg;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string content = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line);
    const std::string key = trim(content.substr(0, eq));
    const std::string value = trim(content.substr(eq + 1));
    if (key.empty()) throw ConfigError("empty key", line);
    if (value.empty()) throw ConfigError("empty value", line, key);
    if (cfg.entries_.count(key))
      throw ConfigError("duplicate key (first set on line " +
                            std::to_string(cfg.entries_[key].line) + ")",
                        line, key);
    cfg.entries_[key] = {value, line};
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  return parse(in);
}

void KeyValueConfig::set(const std::string& key, const std::string& value) {
  entries_[key] = {value, 0};
}

const KeyValueConfig::Entry& KeyValueConfig::entry(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError("missing required key", 0, key);
  return it->second;
}

std::string KeyValueConfig::text(const std::string& key) const { return entry(key).value; }

std::string KeyValueConfig::text(const std::string& key, const std::string& fallback) const {
  return has(key) ? text(key) : fallback;
}

double KeyValueConfig::number(const std::string& key) const {
  const auto& e = entry(key);
  return parse_number(e.value, e.line, key);
}

double KeyValueConfig::number(const std::string& key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

long KeyValueConfig::integer(const std::string& key, long fallback) const {
  if (!has(key)) return fallback;
  const auto& e = entry(key);
  const double v = parse_number(e.value, e.line, key);
  if (v != std::floor(v) || std::abs(v) > 9e15)
    throw ConfigError("'" + e.value + "' is not an integer", e.line, key);
  return static_cast<long>(v);
}

std::vector<double> KeyValueConfig::numbers(const std::string& key) const {
  const auto& e = entry(key);
  std::vector<double> out;
  for (const auto& part : split(e.value, ',')) {
    if (part.empty()) throw ConfigError("empty list element", e.line, key);
    out.push_back(parse_number(part, e.line, key));
  }
  return out;
}

void KeyValueConfig::reject_unknown(const std::set<std::string>& allowed) const {
  for (const auto& [key, e] : entries_)
    if (!allowed.count(key)) throw ConfigError("unknown key", e.line, key);
}

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

namespace {

std::array<double, 15> row_of(const Sample& s) {
  return {s.t,   s.state.q.x(), s.state.q.y(), s.state.q.z(), s.state.p.x(),
          s.state.p.y(), s.state.p.z(), s.rho, s.phi, s.r,
          s.theta, s.integrals[0], s.integrals[1], s.integrals[2], s.integrals[3]};
}

Sample sample_of(const std::array<double, 15>& v) {
  Sample s;
  s.t = v[0];
  s.state = PhasePointd(Vec3d(v[1], v[2], v[3]), Vec3d(v[4], v[5], v[6]));
  s.rho = v[7];
  s.phi = v[8];
  s.r = v[9];
  s.theta = v[10];
  s.integrals = {v[11], v[12], v[13], v[14]};
  return s;
}

std::size_t checked_stride(std::size_t stride) {
  if (stride == 0) throw std::invalid_argument("output stride must be >= 1");
  return stride;
}

template <typename Fn>
void for_each_written(const Trajectory& traj, std::size_t stride, Fn&& fn) {
  checked_stride(stride);
  for (std::size_t i = 0; i < traj.size(); i += stride) fn(traj[i]);
  // The final sample is always written.
  if (!traj.empty() && (traj.size() - 1) % stride != 0) fn(traj.back());
}

}  // namespace

void write_trajectory_csv(std::ostream& out, const Trajectory& traj, std::size_t stride) {
  for (std::size_t i = 0; i < kTrajectoryColumns.size(); ++i)
    out << (i ? "," : "") << kTrajectoryColumns[i];
  out << '\n';
  for_each_written(traj, stride, [&](const Sample& s) {
    const auto row = row_of(s);
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
    out << '\n';
  });
}

Trajectory read_trajectory_csv(std::istream& in, const SystemParams& params) {
  Trajectory traj(params);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("empty trajectory file");
  const auto header = split(trim(line), ',');
  if (header != kTrajectoryColumns) throw ConfigError("unexpected trajectory header", 1);
  int number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (trim(line).empty()) continue;
    const auto cells = split(trim(line), ',');
    if (cells.size() != kTrajectoryColumns.size())
      throw ConfigError("expected " + std::to_string(kTrajectoryColumns.size()) + " columns",
                        number);
    std::array<double, 15> v{};
    for (std::size_t i = 0; i < v.size(); ++i)
      v[i] = parse_number(cells[i], number, kTrajectoryColumns[i]);
    try {
      traj.append_raw(sample_of(v));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what(), number);
    }
  }
  return traj;
}

nlohmann::ordered_json trajectory_to_json(const Trajectory& traj, std::size_t stride) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for_each_written(traj, stride, [&](const Sample& s) {
    const auto row = row_of(s);
    nlohmann::ordered_json obj;
    for (std::size_t i = 0; i < row.size(); ++i) obj[kTrajectoryColumns[i]] = row[i];
    rows.push_back(std::move(obj));
  });
  return rows;
}

Trajectory trajectory_from_json(const nlohmann::json& doc, const SystemParams& params) {
  const nlohmann::json& rows = doc.is_object() && doc.contains("samples") ? doc["samples"] : doc;
  if (!rows.is_array()) throw ConfigError("trajectory JSON must be an array of samples");
  Trajectory traj(params);
  for (std::size_t n = 0; n < rows.size(); ++n) {
    std::array<double, 15> v{};
    for (std::size_t i = 0; i < v.size(); ++i) {
      const auto& cell = rows[n].find(kTrajectoryColumns[i]);
      if (cell == rows[n].end() || !cell->is_number())
        throw ConfigError("sample " + std::to_string(n) + " lacks a numeric field", 0,
                          kTrajectoryColumns[i]);
      v[i] = cell->get<double>();
    }
    traj.append_raw(sample_of(v));
  }
  return traj;
}

Trajectory read_trajectory_file(const std::string& path, const SystemParams& params) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open trajectory file " + path);
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("invalid trajectory JSON: ") + e.what());
    }
    return trajectory_from_json(doc, params);
  }
  return read_trajectory_csv(in, params);
}

}  // namespace ring
