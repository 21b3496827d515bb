#pragma once

#include "unprompt/denoiser.hpp"
#include "unprompt/diffusion.hpp"

namespace unprompt {

// Deterministic probe-flow sampler (no fresh noise after the start point).
// Each update predicts the noise at the current timestep, reconstructs the
// clean estimate, and re-corrupts it to the next grid timestep with that same
// predicted noise. The final grid point is 0, where the clean estimate is
// returned as-is.

// Run the sampler from an arbitrary corrupted state x_t at timestep t_start.
// `steps` grid points are spread uniformly over [0, t_start]; steps is
// clamped to [1, t_start] so every grid point is a distinct timestep.
Sample ddim_sample_from(const DenoiserParams& p, const Sample& x_t, int t_start,
                        const NoiseSchedule& sched, int steps);

// Full generation: start from x_init at the terminal timestep.
Sample ddim_sample(const DenoiserParams& p, const Sample& x_init,
                   const NoiseSchedule& sched, int steps);

}  // namespace unprompt
