#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rotorlab {

/// Flat key = value run description. Blank lines and lines starting with '#'
/// are ignored; unknown keys are an error.
struct RunConfig {
  std::string command = "aggregate";
  int d = 2;
  std::uint64_t n = 1000;
  /// Comma-separated checkpoint list, or "log" for half-decade spacing from
  /// 100 up to n.
  std::string checkpoints = "log";
  /// Rotor policy descriptor; "auto" is nesw in d = 2 and default elsewhere.
  std::string policy = "auto";
  std::uint64_t seed = 1;
  double tol = 1e-10;
  double lebesgue_tol = 1e-6;
  std::uint64_t trials = 100000;
  int k = 1;
  int r = 9;
  bool ball = false;
  bool exhaustive = false;
  std::string region;  // row-string shape for `exit`
  std::string csv;
  std::string render;
  std::string snapshot;
  std::uint64_t snapshot_every = 0;
  std::string resume;
  std::uint64_t fault_skip = 0;

  static RunConfig parse(const std::string& text);
  static RunConfig load(const std::string& path);
  std::string serialize() const;
  /// Throws std::invalid_argument on out-of-range values.
  void validate() const;
  /// Sets one key from its text form; throws on unknown keys or bad values.
  void set(const std::string& key, const std::string& value);

  std::string resolved_policy() const;
  std::vector<std::uint64_t> checkpoint_list() const;

  bool operator==(const RunConfig&) const = default;
};

/// round(10^{j/2}) for j = 4, 5, ... while <= n, followed by n itself.
std::vector<std::uint64_t> log_checkpoints(std::uint64_t n);

}  // namespace rotorlab
