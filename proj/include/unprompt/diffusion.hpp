#pragma once

#include <cstdint>
#include <vector>

#include "unprompt/tensor.hpp"

namespace unprompt {

// One data point: a flat value vector plus its 2-D shape. Planar points use
// shape 1 x dim; images use rows x cols.
struct Sample {
    DenseVector data;
    int rows = 1;
    int cols = 1;

    std::size_t dim() const { return data.size(); }
    bool same_shape(const Sample& o) const { return rows == o.rows && cols == o.cols; }
};

// Variance schedule for the forward corruption process. step_keep[s-1] is the
// per-step signal retention at timestep s (1-based); cum_keep[s-1] is the
// running product, i.e. how much of the clean signal survives to step s.
struct NoiseSchedule {
    int t_max = 0;
    double beta_min = 0.0;
    double beta_max = 0.0;
    std::vector<double> step_keep;  // length t_max
    std::vector<double> cum_keep;   // length t_max

    double cum_keep_at(int t) const;   // t in [1, t_max]
    double step_keep_at(int t) const;  // t in [1, t_max]

    // Fingerprint of (t_max, bounds, per-step values); checkpoints carry it so
    // a model is never resumed or evaluated under a different schedule.
    std::uint64_t hash() const;
};

// Linear schedule: per-step noise rate runs from beta_min to beta_max across
// [1, t_max]. Requires t_max >= 2 and 0 < beta_min <= beta_max < 1.
NoiseSchedule make_schedule(int t_max, double beta_min, double beta_max);

// Corrupt a clean sample to timestep t with the given unit-normal draw:
//   x_t = sqrt(cum_keep[t]) * x0 + sqrt(1 - cum_keep[t]) * eps
Sample forward_noise(const Sample& x0, int t, const DenseVector& eps,
                     const NoiseSchedule& sched);

// Invert the corruption: recover the noise that maps x0 to x_t at timestep t.
DenseVector noise_from(const Sample& x_t, const Sample& x0, int t,
                       const NoiseSchedule& sched);

}  // namespace unprompt
