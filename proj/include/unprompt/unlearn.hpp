#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "unprompt/denoiser.hpp"
#include "unprompt/diffusion.hpp"
#include "unprompt/train.hpp"

namespace unprompt {

// Forget/remember balance across timesteps. Timestep-aware weighting leans
// on the forget objective only at high noise levels, where coarse structure
// is decided, and protects fine detail near t=0. The constant mode exists for
// ablations.
enum class WeightMode { kTimestepAware, kConstant };

// What to do when the remember and forget gradients pull against each other.
enum class SurgeryMode { kNone, kProjectForget, kProjectBoth };

struct UnlearnTask {
    // Instances to erase, their stand-ins (parallel array), and the data whose
    // behaviour must be preserved.
    std::vector<Sample> forget;
    std::vector<Sample> surrogates;
    std::vector<Sample> remember;

    NoiseSchedule sched;

    int iters = 240;          // optimizer steps per forget target
    double lr = 2.5e-4;
    int remember_batch = 8;

    WeightMode weight_mode = WeightMode::kTimestepAware;
    double weight_slope = 5e-5;   // per reference timestep; see timestep_weight
    double lambda_const = 0.95;   // WeightMode::kConstant only
    int t_ref = 1000;             // reference scale the slope is quoted in

    SurgeryMode surgery = SurgeryMode::kProjectForget;

    int snapshot_every = 40;      // 0 disables periodic snapshots
    bool reset_moments_between_targets = false;
};

// One record per optimizer step; the ablation tooling consumes these.
struct SurgeryTrace {
    int iteration = 0;      // global step index, 1-based across targets
    int target = 0;         // forget-set index the step worked on
    int t = 0;              // drawn timestep
    double lambda = 0.0;    // remember weight at t
    double dot = 0.0;       // weighted-gradient inner product
    bool conflicted = false;
    bool degenerate = false;  // remember gradient vanished; projection skipped
    double g_r_norm = 0.0;
    double g_f_norm = 0.0;     // pre-surgery forget-gradient norm
    double g_f_out_norm = 0.0; // post-surgery forget-gradient norm
    double loss_r = 0.0;
    double loss_f = 0.0;
};

std::string trace_csv_header();
std::string trace_csv_line(const SurgeryTrace& tr);

// The noise target that retrains the model's step at x_t away from the forget
// instance: the unique eps' for which the forward corruption of the surrogate
// at timestep t lands exactly on x_t.
DenseVector modified_noise(const Sample& x_t_f, const Sample& x0_surrogate, int t,
                           const NoiseSchedule& sched);

// Remember weight at timestep t: 1 - slope * (t * t_ref / t_max), clamped to
// [0,1]. The slope is quoted against a reference horizon of t_ref steps so
// configs stay meaningful when t_max changes.
double timestep_weight(int t, double slope, int t_max, int t_ref = 1000);

struct SurgeryResult {
    DenseVector g_f_out;
    SurgeryTrace trace;  // dot/conflicted/degenerate/norm fields filled in
};

// Conflict-aware combination: when the forget gradient opposes the remember
// gradient, its component along the remember direction is removed; otherwise
// it passes through untouched (bit-identical). A vanishing remember gradient
// is flagged degenerate and skips the projection.
SurgeryResult gradient_surgery(const DenseVector& g_r, const DenseVector& g_f);

struct UnlearnStepResult {
    SurgeryTrace trace;
};

// One optimizer step of the unlearning objective. Draws, in order: the
// remember batch indices, one timestep, one unit-normal noise vector. That
// single noise draw corrupts both the remember batch and the forget target,
// which is what makes the two losses comparable pointwise. Updates p in
// place via Adam.
UnlearnStepResult unlearn_step(DenoiserParams& p, const UnlearnTask& task,
                               std::size_t target_index, TrainStreams& rng,
                               int iteration);

// Called on periodic snapshots and on the diagnostic snapshot taken right
// before a numerical abort.
using SnapshotFn = std::function<void(int iteration, const DenoiserParams& p, bool diagnostic)>;

struct UnlearnRunResult {
    std::vector<SurgeryTrace> traces;
};

// Process every forget target in order, task.iters steps each. Adam moments
// are cleared once at run start (a fresh optimizer session over the
// pretrained weights) and between targets only when the task asks for it.
// An empty forget set returns immediately with p untouched.
UnlearnRunResult unlearn_run(DenoiserParams& p, const UnlearnTask& task,
                             std::uint64_t seed, const SnapshotFn& snapshot = nullptr);

void validate(const UnlearnTask& task);

}  // namespace unprompt
