#include "unprompt/diffusion.hpp"

#include <cmath>
#include <string>

#include "unprompt/rng.hpp"

namespace unprompt {

namespace {

void require_timestep(int t, const NoiseSchedule& sched, const char* who) {
    if (t < 1 || t > sched.t_max) {
        throw TimestepOutOfRange(std::string(who) + ": t=" + std::to_string(t) +
                                 " outside [1, " + std::to_string(sched.t_max) + "]");
    }
}

}  // namespace

double NoiseSchedule::cum_keep_at(int t) const {
    if (t < 1 || t > t_max) {
        throw TimestepOutOfRange("cum_keep_at: t=" + std::to_string(t) + " outside [1, " +
                                 std::to_string(t_max) + "]");
    }
    return cum_keep[static_cast<std::size_t>(t - 1)];
}

double NoiseSchedule::step_keep_at(int t) const {
    if (t < 1 || t > t_max) {
        throw TimestepOutOfRange("step_keep_at: t=" + std::to_string(t) + " outside [1, " +
                                 std::to_string(t_max) + "]");
    }
    return step_keep[static_cast<std::size_t>(t - 1)];
}

std::uint64_t NoiseSchedule::hash() const {
    std::uint64_t h = fnv1a64("noise-schedule-v1");
    h = fnv1a64(&t_max, sizeof(t_max), h);
    h = fnv1a64(&beta_min, sizeof(beta_min), h);
    h = fnv1a64(&beta_max, sizeof(beta_max), h);
    h = fnv1a64(step_keep.data(), step_keep.size() * sizeof(double), h);
    return h;
}

NoiseSchedule make_schedule(int t_max, double beta_min, double beta_max) {
    if (t_max < 2) {
        throw InvalidRange("make_schedule: t_max must be >= 2, got " + std::to_string(t_max));
    }
    if (!(beta_min > 0.0) || !(beta_min <= beta_max) || !(beta_max < 1.0)) {
        throw InvalidRange("make_schedule: need 0 < beta_min <= beta_max < 1, got [" +
                           std::to_string(beta_min) + ", " + std::to_string(beta_max) + "]");
    }
    NoiseSchedule s;
    s.t_max = t_max;
    s.beta_min = beta_min;
    s.beta_max = beta_max;
    s.step_keep.resize(static_cast<std::size_t>(t_max));
    s.cum_keep.resize(static_cast<std::size_t>(t_max));
    double running = 1.0;
    for (int step = 1; step <= t_max; ++step) {
        const double rate =
            beta_min + (beta_max - beta_min) * static_cast<double>(step - 1) /
                           static_cast<double>(t_max - 1);
        const double keep = 1.0 - rate;
        running *= keep;
        s.step_keep[static_cast<std::size_t>(step - 1)] = keep;
        s.cum_keep[static_cast<std::size_t>(step - 1)] = running;
    }
    return s;
}

Sample forward_noise(const Sample& x0, int t, const DenseVector& eps,
                     const NoiseSchedule& sched) {
    require_timestep(t, sched, "forward_noise");
    if (eps.size() != x0.dim()) {
        throw DimensionMismatch("forward_noise: eps size " + std::to_string(eps.size()) +
                                " vs sample dim " + std::to_string(x0.dim()));
    }
    const double keep = sched.cum_keep_at(t);
    const double signal = std::sqrt(keep);
    const double noise = std::sqrt(1.0 - keep);

    Sample out = x0;
    for (std::size_t i = 0; i < out.data.size(); ++i) {
        out.data[i] = signal * x0.data[i] + noise * eps[i];
    }
    return out;
}

DenseVector noise_from(const Sample& x_t, const Sample& x0, int t, const NoiseSchedule& sched) {
    require_timestep(t, sched, "noise_from");
    if (!x_t.same_shape(x0) || x_t.dim() != x0.dim()) {
        throw DimensionMismatch("noise_from: sample shapes differ");
    }
    const double keep = sched.cum_keep_at(t);
    const double signal = std::sqrt(keep);
    const double noise = std::sqrt(1.0 - keep);

    DenseVector eps(x0.dim());
    for (std::size_t i = 0; i < eps.size(); ++i) {
        eps[i] = (x_t.data[i] - signal * x0.data[i]) / noise;
    }
    return eps;
}

}  // namespace unprompt
