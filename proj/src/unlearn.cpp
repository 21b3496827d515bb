#include "unprompt/unlearn.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "unprompt/autodiff.hpp"

namespace unprompt {

namespace {

constexpr double kDegenerateNormSq = 1e-24;  // |g_r| < 1e-12

// Loss and parameter gradient of the noise-prediction residual for one
// corrupted sample against an arbitrary noise target.
std::pair<double, DenseVector> residual_grad(const DenoiserParams& p, const Sample& x_t,
                                             int t, const DenseVector& target) {
    Tape tape(&p.theta);
    const Tape::NodeId pred = predict_noise_node(tape, p, x_t, t);
    const Tape::NodeId tgt = tape.input(target);
    const Tape::NodeId loss = tape.squared_norm(tape.sub(tgt, pred));
    return {tape.value(loss)[0], tape.backward_gradient(loss)};
}

}  // namespace

std::string trace_csv_header() {
    return "iteration,target,t,lambda,dot,conflicted,degenerate,"
           "g_r_norm,g_f_norm,g_f_out_norm,loss_r,loss_f";
}

std::string trace_csv_line(const SurgeryTrace& tr) {
    char buf[320];
    std::snprintf(buf, sizeof(buf), "%d,%d,%d,%.17g,%.17g,%d,%d,%.17g,%.17g,%.17g,%.17g,%.17g",
                  tr.iteration, tr.target, tr.t, tr.lambda, tr.dot, tr.conflicted ? 1 : 0,
                  tr.degenerate ? 1 : 0, tr.g_r_norm, tr.g_f_norm, tr.g_f_out_norm, tr.loss_r,
                  tr.loss_f);
    return buf;
}

DenseVector modified_noise(const Sample& x_t_f, const Sample& x0_surrogate, int t,
                           const NoiseSchedule& sched) {
    // Exactly the corruption inverse, with the surrogate standing in for the
    // clean sample that x_t_f actually came from.
    return noise_from(x_t_f, x0_surrogate, t, sched);
}

double timestep_weight(int t, double slope, int t_max, int t_ref) {
    if (t_max < 1) throw InvalidRange("timestep_weight: t_max must be >= 1");
    if (slope < 0.0) throw InvalidRange("timestep_weight: slope must be >= 0");
    const double t_scaled =
        static_cast<double>(t) * static_cast<double>(t_ref) / static_cast<double>(t_max);
    return std::clamp(1.0 - slope * t_scaled, 0.0, 1.0);
}

SurgeryResult gradient_surgery(const DenseVector& g_r, const DenseVector& g_f) {
    if (g_r.size() != g_f.size()) {
        throw DimensionMismatch("gradient_surgery: gradient sizes differ");
    }
    SurgeryResult out;
    out.trace.dot = dot(g_r, g_f);
    out.trace.g_r_norm = norm2(g_r);
    out.trace.g_f_norm = norm2(g_f);

    const double g_r_sq = out.trace.g_r_norm * out.trace.g_r_norm;
    if (g_r_sq < kDegenerateNormSq) {
        // Nothing to project against; pass the forget gradient through.
        out.trace.degenerate = true;
        out.trace.conflicted = false;
        out.g_f_out = g_f;
        out.trace.g_f_out_norm = out.trace.g_f_norm;
        return out;
    }

    if (out.trace.dot < 0.0) {
        out.trace.conflicted = true;
        out.g_f_out = g_f;
        axpy(-out.trace.dot / g_r_sq, g_r, out.g_f_out);
        out.trace.g_f_out_norm = norm2(out.g_f_out);
    } else {
        out.trace.conflicted = false;
        out.g_f_out = g_f;  // untouched, bit-identical
        out.trace.g_f_out_norm = out.trace.g_f_norm;
    }
    return out;
}

void validate(const UnlearnTask& task) {
    if (task.surrogates.size() != task.forget.size()) {
        throw DimensionMismatch("unlearn: " + std::to_string(task.forget.size()) +
                                " forget targets vs " + std::to_string(task.surrogates.size()) +
                                " surrogates");
    }
    if (task.remember.empty()) throw InvalidRange("unlearn: remember set is empty");
    for (std::size_t i = 0; i < task.forget.size(); ++i) {
        if (!task.forget[i].same_shape(task.remember[0]) ||
            !task.surrogates[i].same_shape(task.forget[i])) {
            throw DimensionMismatch("unlearn: sample shapes disagree at target " +
                                    std::to_string(i));
        }
    }
    if (task.iters < 0) throw InvalidRange("unlearn: iters must be >= 0");
    if (!(task.lr > 0.0)) throw InvalidRange("unlearn: lr must be positive");
    if (task.remember_batch < 1) throw InvalidRange("unlearn: remember_batch must be >= 1");
    if (task.weight_slope < 0.0) throw InvalidRange("unlearn: weight_slope must be >= 0");
    if (task.lambda_const < 0.0 || task.lambda_const > 1.0) {
        throw InvalidRange("unlearn: lambda_const must lie in [0,1]");
    }
    if (task.t_ref < 1) throw InvalidRange("unlearn: t_ref must be >= 1");
    if (task.snapshot_every < 0) throw InvalidRange("unlearn: snapshot_every must be >= 0");
}

UnlearnStepResult unlearn_step(DenoiserParams& p, const UnlearnTask& task,
                               std::size_t target_index, TrainStreams& rng, int iteration) {
    if (target_index >= task.forget.size()) {
        throw DimensionMismatch("unlearn_step: target index out of range");
    }
    const Sample& x0_f = task.forget[target_index];
    const Sample& x0_s = task.surrogates[target_index];
    const std::size_t dim = x0_f.dim();

    // Draw order is part of the step contract: batch indices, then the
    // timestep, then one shared noise vector.
    std::vector<std::size_t> batch_idx(static_cast<std::size_t>(task.remember_batch));
    for (auto& bi : batch_idx) {
        bi = static_cast<std::size_t>(
            rng.data.uniform_int(0, static_cast<std::int64_t>(task.remember.size()) - 1));
    }
    const int t = static_cast<int>(rng.t.uniform_int(1, task.sched.t_max));
    DenseVector eps(dim);
    for (double& e : eps) e = rng.eps.normal();

    // Remember loss: batch mean of the plain denoising residual, every item
    // corrupted with the same eps.
    Tape r_tape(&p.theta);
    std::vector<Tape::NodeId> items;
    items.reserve(batch_idx.size());
    for (std::size_t bi : batch_idx) {
        const Sample x_t_r = forward_noise(task.remember[bi], t, eps, task.sched);
        const Tape::NodeId pred = predict_noise_node(r_tape, p, x_t_r, t);
        const Tape::NodeId tgt = r_tape.input(eps);
        items.push_back(r_tape.squared_norm(r_tape.sub(tgt, pred)));
    }
    const Tape::NodeId r_loss_node = items.size() == 1 ? items[0] : r_tape.mean_of(items);
    const double loss_r = r_tape.value(r_loss_node)[0];

    // Forget loss: same eps corrupts the target, but the regression target is
    // the noise that would have produced x_t from the surrogate.
    const Sample x_t_f = forward_noise(x0_f, t, eps, task.sched);
    const DenseVector eps_mod = modified_noise(x_t_f, x0_s, t, task.sched);
    auto [loss_f, g_f_raw] = residual_grad(p, x_t_f, t, eps_mod);

    if (!std::isfinite(loss_r) || !std::isfinite(loss_f)) {
        throw NonFiniteLoss("unlearn_step: iteration " + std::to_string(iteration) +
                            " produced losses " + std::to_string(loss_r) + " / " +
                            std::to_string(loss_f));
    }

    const double lambda = task.weight_mode == WeightMode::kConstant
                              ? task.lambda_const
                              : timestep_weight(t, task.weight_slope, task.sched.t_max,
                                                task.t_ref);

    DenseVector g_r = r_tape.backward_gradient(r_loss_node);
    for (double& v : g_r) v *= lambda;
    DenseVector g_f = std::move(g_f_raw);
    for (double& v : g_f) v *= (1.0 - lambda);

    UnlearnStepResult out;
    DenseVector combined;
    switch (task.surgery) {
        case SurgeryMode::kNone: {
            out.trace.dot = dot(g_r, g_f);
            out.trace.conflicted = out.trace.dot < 0.0;
            out.trace.g_r_norm = norm2(g_r);
            out.trace.g_f_norm = norm2(g_f);
            out.trace.g_f_out_norm = out.trace.g_f_norm;
            combined = vadd(g_r, g_f);
            break;
        }
        case SurgeryMode::kProjectForget: {
            SurgeryResult sr = gradient_surgery(g_r, g_f);
            out.trace = sr.trace;
            combined = vadd(g_r, sr.g_f_out);
            break;
        }
        case SurgeryMode::kProjectBoth: {
            // Symmetric variant: each side loses its component along the
            // other's original direction.
            SurgeryResult sf = gradient_surgery(g_r, g_f);
            SurgeryResult sr = gradient_surgery(g_f, g_r);
            out.trace = sf.trace;
            combined = vadd(sr.g_f_out, sf.g_f_out);
            break;
        }
    }
    out.trace.iteration = iteration;
    out.trace.target = static_cast<int>(target_index);
    out.trace.t = t;
    out.trace.lambda = lambda;
    out.trace.loss_r = loss_r;
    out.trace.loss_f = loss_f;

    adam_update(p, combined, task.lr);
    return out;
}

UnlearnRunResult unlearn_run(DenoiserParams& p, const UnlearnTask& task, std::uint64_t seed,
                             const SnapshotFn& snapshot) {
    validate(task);
    UnlearnRunResult result;
    if (task.forget.empty() || task.iters == 0) return result;

    TrainStreams rng = TrainStreams::make(seed);
    result.traces.reserve(task.forget.size() * static_cast<std::size_t>(task.iters));

    // Fresh optimizer session over the incoming (typically pretrained) weights.
    p.opt.m.assign(p.theta.size(), 0.0);
    p.opt.v.assign(p.theta.size(), 0.0);
    p.opt.step = 0;

    int iteration = 0;
    for (std::size_t target = 0; target < task.forget.size(); ++target) {
        if (target > 0 && task.reset_moments_between_targets) {
            p.opt.m.assign(p.theta.size(), 0.0);
            p.opt.v.assign(p.theta.size(), 0.0);
            p.opt.step = 0;
        }
        for (int k = 0; k < task.iters; ++k) {
            ++iteration;
            try {
                UnlearnStepResult step = unlearn_step(p, task, target, rng, iteration);
                result.traces.push_back(step.trace);
            } catch (const NonFiniteLoss&) {
                if (snapshot) snapshot(iteration, p, /*diagnostic=*/true);
                throw;
            }
            if (snapshot && task.snapshot_every > 0 && iteration % task.snapshot_every == 0) {
                snapshot(iteration, p, /*diagnostic=*/false);
            }
        }
    }
    return result;
}

}  // namespace unprompt
