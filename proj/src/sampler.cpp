#include "unprompt/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace unprompt {

Sample ddim_sample_from(const DenoiserParams& p, const Sample& x_t, int t_start,
                        const NoiseSchedule& sched, int steps) {
    if (t_start < 1 || t_start > sched.t_max) {
        throw TimestepOutOfRange("ddim_sample_from: t_start=" + std::to_string(t_start) +
                                 " outside [1, " + std::to_string(sched.t_max) + "]");
    }
    steps = std::clamp(steps, 1, t_start);

    Sample x = x_t;
    int t = t_start;
    for (int k = 1; k <= steps; ++k) {
        // Next grid point; ceil keeps the grid strictly decreasing and the
        // last point exactly 0.
        const int t_next = static_cast<int>(
            (static_cast<long long>(t_start) * (steps - k) + steps - 1) / steps);

        const DenseVector eps_hat = predict_noise(p, x, t);
        const double keep = sched.cum_keep_at(t);
        const double sig = std::sqrt(keep);
        const double noi = std::sqrt(1.0 - keep);

        DenseVector x0_hat(x.dim());
        for (std::size_t i = 0; i < x0_hat.size(); ++i) {
            x0_hat[i] = (x.data[i] - noi * eps_hat[i]) / sig;
        }

        if (t_next == 0) {
            x.data = std::move(x0_hat);
        } else {
            const double keep_n = sched.cum_keep_at(t_next);
            const double sig_n = std::sqrt(keep_n);
            const double noi_n = std::sqrt(1.0 - keep_n);
            for (std::size_t i = 0; i < x.data.size(); ++i) {
                x.data[i] = sig_n * x0_hat[i] + noi_n * eps_hat[i];
            }
        }
        t = t_next;
    }
    return x;
}

Sample ddim_sample(const DenoiserParams& p, const Sample& x_init, const NoiseSchedule& sched,
                   int steps) {
    return ddim_sample_from(p, x_init, sched.t_max, sched, steps);
}

}  // namespace unprompt
