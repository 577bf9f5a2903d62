#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rotorlab/engine.hpp"

namespace rotorlab {

class SnapshotError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Little-endian layout:
//   "RRL1" | u32 d | u64 n | u64 T_n | u32 len | policy descriptor (len bytes)
//   | n sites as d x i32 in adjunction order
//   | u64 count | count x (d x i32 site, u64 visits)
//   | u32 CRC-32 of everything before it
std::vector<std::uint8_t> encode_snapshot(const AggState& s);
AggState decode_snapshot(std::span<const std::uint8_t> bytes);

/// Written to `path + ".tmp"` then renamed, so a crash never leaves a
/// truncated snapshot behind.
void write_snapshot(const AggState& s, const std::string& path);
AggState read_snapshot(const std::string& path);

}  // namespace rotorlab
