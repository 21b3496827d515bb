#include "unprompt/train.hpp"

#include <cmath>
#include <string>

#include "unprompt/autodiff.hpp"

namespace unprompt {

TrainStepResult train_step(const DenoiserParams& p, const std::vector<Sample>& batch,
                           const NoiseSchedule& sched, TrainStreams& rng) {
    if (batch.empty()) throw DimensionMismatch("train_step: empty batch");

    // All draws happen up front, in item order.
    const std::size_t dim = batch[0].dim();
    std::vector<int> ts(batch.size());
    std::vector<DenseVector> noises(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) {
        ts[i] = static_cast<int>(rng.t.uniform_int(1, sched.t_max));
        noises[i].resize(dim);
        for (std::size_t k = 0; k < dim; ++k) noises[i][k] = rng.eps.normal();
    }

    Tape tape(&p.theta);
    std::vector<Tape::NodeId> item_losses;
    item_losses.reserve(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const Sample x_t = forward_noise(batch[i], ts[i], noises[i], sched);
        const Tape::NodeId pred = predict_noise_node(tape, p, x_t, ts[i]);
        const Tape::NodeId target = tape.input(noises[i]);
        item_losses.push_back(tape.squared_norm(tape.sub(target, pred)));
    }
    const Tape::NodeId loss_node =
        batch.size() == 1 ? item_losses[0] : tape.mean_of(item_losses);

    TrainStepResult out;
    out.loss = tape.value(loss_node)[0];
    if (!std::isfinite(out.loss)) {
        throw NonFiniteLoss("train_step: loss is " + std::to_string(out.loss));
    }
    out.grad = tape.backward_gradient(loss_node);
    return out;
}

double estimate_loss(const DenoiserParams& p, const std::vector<Sample>& samples,
                     const NoiseSchedule& sched, std::uint64_t seed, int draws) {
    if (samples.empty() || draws < 1) {
        throw DimensionMismatch("estimate_loss: need samples and draws >= 1");
    }
    StreamRng t_stream(seed, "loss-probe-t");
    StreamRng eps_stream(seed, "loss-probe-eps");

    double total = 0.0;
    for (const Sample& s : samples) {
        for (int k = 0; k < draws; ++k) {
            const int t = static_cast<int>(t_stream.uniform_int(1, sched.t_max));
            DenseVector eps(s.dim());
            for (double& e : eps) e = eps_stream.normal();
            const Sample x_t = forward_noise(s, t, eps, sched);
            const DenseVector pred = predict_noise(p, x_t, t);
            double r2 = 0.0;
            for (std::size_t i = 0; i < eps.size(); ++i) {
                const double r = eps[i] - pred[i];
                r2 += r * r;
            }
            total += r2;
        }
    }
    return total / (static_cast<double>(samples.size()) * static_cast<double>(draws));
}

}  // namespace unprompt
