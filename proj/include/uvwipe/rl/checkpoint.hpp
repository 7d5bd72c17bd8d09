#pragma once

#include "uvwipe/rl/sac.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>

namespace uvwipe::rl {

// Layout (little-endian):
//   char[8]  magic "UVWSACK1"
//   u32      format version
//   u64      config hash
//   u64      training step
//   u32      tensor count
//   per tensor: u32 name length, name bytes, u32 rows, u32 cols,
//               rows * cols float32 values in column-major order
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct CheckpointHeader {
    std::uint32_t version = kCheckpointVersion;
    std::uint64_t config_hash = 0;
    std::uint64_t step = 0;
};

void write_checkpoint(std::ostream& out, SacAgent<float>& agent, const CheckpointHeader& header);
// Loads tensors into `agent` by name; every stored tensor must exist in the
// agent with the same shape. A given expected hash must match.
CheckpointHeader read_checkpoint(std::istream& in, SacAgent<float>& agent,
                                 std::optional<std::uint64_t> expected_hash = std::nullopt);
CheckpointHeader read_checkpoint_header(std::istream& in);

void save_checkpoint(const std::filesystem::path& path, SacAgent<float>& agent,
                     const CheckpointHeader& header);
CheckpointHeader load_checkpoint(const std::filesystem::path& path, SacAgent<float>& agent,
                                 std::optional<std::uint64_t> expected_hash = std::nullopt);

}  // namespace uvwipe::rl
