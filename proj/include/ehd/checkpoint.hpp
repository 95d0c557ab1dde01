#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ehd/solver.hpp"

namespace ehd {

/// Binary layout (little-endian):
///   "EHDS" | u32 version | u32 n | f64 t | u64 step_index |
///   u1, u2, u3, v, w as n^3 f64 each, x-fastest | u32 CRC32 of all preceding bytes
inline constexpr std::uint32_t kCheckpointVersion = 1;

std::vector<unsigned char> encode_checkpoint(const State& s);
/// Throws Checkpoint on bad magic, version, size or CRC.
State decode_checkpoint(const std::vector<unsigned char>& bytes);

void write_checkpoint(const std::filesystem::path& path, const State& s);
State read_checkpoint(const std::filesystem::path& path);

/// CRC32 of the encoded payload (without the trailing CRC itself).
std::uint32_t state_checksum(const State& s);

}  // namespace ehd
