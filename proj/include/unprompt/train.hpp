#pragma once

#include <cstdint>
#include <vector>

#include "unprompt/denoiser.hpp"
#include "unprompt/diffusion.hpp"
#include "unprompt/rng.hpp"

namespace unprompt {

// Named random streams used by training loops. Keeping index draws, timestep
// draws and noise draws on separate counters means any one consumer can be
// audited (or replayed) without disturbing the others.
struct TrainStreams {
    StreamRng data;  // dataset index draws
    StreamRng t;     // timestep draws
    StreamRng eps;   // unit-normal noise draws

    static TrainStreams make(std::uint64_t master_seed) {
        return TrainStreams{StreamRng(master_seed, "data"), StreamRng(master_seed, "t"),
                            StreamRng(master_seed, "eps")};
    }
};

struct TrainStepResult {
    double loss = 0.0;
    DenseVector grad;
};

// One denoising-objective step over a batch: every item gets its own
// t ~ Uniform{1..t_max} and its own unit-normal noise; the loss is the batch
// mean of the squared noise-prediction residual. Draws happen in item order,
// so a given stream state fixes the step outcome exactly. The parameter
// update itself is left to the caller.
TrainStepResult train_step(const DenoiserParams& p, const std::vector<Sample>& batch,
                           const NoiseSchedule& sched, TrainStreams& rng);

// Deterministic Monte Carlo estimate of the denoising loss on a fixed sample
// set: `draws` (t, eps) pairs per sample from a stream derived from `seed`.
// Used to compare models on the same probe set.
double estimate_loss(const DenoiserParams& p, const std::vector<Sample>& samples,
                     const NoiseSchedule& sched, std::uint64_t seed, int draws);

}  // namespace unprompt
