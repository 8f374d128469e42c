#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "sobtri/analysis.hpp"
#include "sobtri/boundary.hpp"
#include "sobtri/packets.hpp"

namespace sobtri {

/// Flat key=value run configuration. Unknown keys, malformed values and
/// duplicate keys are rejected with the line (or override) that caused them.
/// `#` starts a comment; blank lines are ignored.
class RunConfig {
 public:
  /// All recognised keys with their defaults.
  static const std::map<std::string, std::string>& defaults();

  RunConfig();
  static RunConfig parse(std::string_view text, std::string_view source = "config");
  static RunConfig load(const std::string& path);

  /// `key=value` override; same validation as a config line.
  void set(std::string_view assignment, std::string_view source = "--set");

  /// Canonical text: every key in sorted order, one `key=value` per line.
  std::string serialize() const;
  const std::map<std::string, std::string>& values() const { return values_; }
  const std::string& raw(const std::string& key) const;

  // Typed accessors; ValidationError names the key on a bad value.
  double real(const std::string& key) const;
  int integer(const std::string& key) const;
  std::uint64_t seed() const;
  std::vector<double> reals(const std::string& key) const;
  std::vector<int> integers(const std::string& key) const;

  TriangleDomain domain() const;
  BoundaryProfile theta1() const;
  BoundaryProfile theta2() const;
  /// Packet components selected by `branch` (u, v or both); windows set to
  /// `none` are skipped. ValidationError when a window sits on the wrong branch.
  std::vector<PacketComponent> components(int which) const;
  QuadraturePlan plan() const;
  GridOptions grid() const;
  std::vector<double> times() const;

 private:
  void assign(std::string key, std::string value, const std::string& where);
  std::map<std::string, std::string> values_;
};

}  // namespace sobtri
