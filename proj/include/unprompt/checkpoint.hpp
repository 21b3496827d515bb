#pragma once

#include <cstdint>
#include <string>

#include "unprompt/denoiser.hpp"
#include "unprompt/diffusion.hpp"

namespace unprompt {

// Model checkpoint on disk, version 1. Fixed little-endian layout:
//   8 bytes  magic "UNPRMDL1"
//   u32      format version
//   u32      activation tag
//   u32      embed dim
//   u32      layer-size count, then that many u32 widths (input..output)
//   u64      schedule fingerprint
//   u64      master seed of the producing run
//   u64      optimizer step counter
//   u64      parameter count
//   f64[n]   weights, then f64[n] first moments, then f64[n] second moments
struct CheckpointMeta {
    std::uint64_t schedule_hash = 0;
    std::uint64_t seed = 0;
};

void save_checkpoint(const std::string& path, const DenoiserParams& p,
                     std::uint64_t schedule_hash, std::uint64_t seed);

struct LoadedCheckpoint {
    DenoiserParams params;
    CheckpointMeta meta;
};

// Throws MissingCheckpoint when the file does not exist, IoFailure with the
// byte offset when it is truncated or corrupt, VersionMismatch on an
// unsupported format version.
LoadedCheckpoint load_checkpoint(const std::string& path);

// load_checkpoint plus a fingerprint comparison against the schedule the
// caller is about to use; throws ScheduleMismatch when they differ.
LoadedCheckpoint load_checkpoint_for(const std::string& path, const NoiseSchedule& sched);

}  // namespace unprompt
