#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "unprompt/denoiser.hpp"
#include "unprompt/diffusion.hpp"

namespace unprompt {

// Network-free evaluation of an unlearning run. All three views are cheap
// analogues of the usual learned-feature metrics: reconstruction similarity
// instead of an embedding-space copy detector, a single-window structural
// score instead of per-patch SSIM, and a moment-matching distance on raw
// sample vectors instead of one on pooled features.

struct MetricReport {
    double forgetting_similarity = 0.0;  // pre/post reconstruction agreement on the target
    bool forgotten = false;              // similarity under the configured threshold
    double per_seed_l2 = 0.0;            // mean per-seed output drift, dimension-normalized
    double ssim = 0.0;                   // mean per-seed structural agreement
    double frechet_pre = 0.0;            // post-model samples vs pre-model samples
    double frechet_real = 0.0;           // post-model samples vs dataset samples
    int n_seeds = 0;
    std::string config_hash;
};

// Cosine similarity of mean-centered flattened vectors. Returns 1 for equal
// near-constant inputs, 0 for differing near-constant inputs.
double centered_cosine(const DenseVector& a, const DenseVector& b);

// Corrupt the forget target to t_mid with noise drawn from eps_seed, denoise
// it fully under both models, and report the centered cosine of the two
// reconstructions. Both models must share an architecture.
double forgetting_similarity(const DenoiserParams& pre, const DenoiserParams& post,
                             const Sample& x0_forget, int t_mid, const NoiseSchedule& sched,
                             std::uint64_t eps_seed);

// Single-window structural similarity over the whole image: means, variances
// and covariance are taken across all pixels at once. Symmetric; equals 1 iff
// the images match. c1/c2 are the usual stabilizers for a unit value range.
double ssim_global(const Sample& a, const Sample& b, double c1 = 1e-4, double c2 = 9e-4);

struct DriftResult {
    double mean_l2 = 0.0;    // mean over seeds of |y_pre - y_post| / sqrt(dim)
    double mean_ssim = 0.0;  // mean over seeds of ssim_global(y_pre, y_post)
};

// Generate from both models with identical start noise per seed and measure
// how far the outputs moved. `clamp_range`, when set, clips outputs before
// the structural score (generated images can leave the data range slightly).
DriftResult per_seed_drift(const DenoiserParams& pre, const DenoiserParams& post,
                           const std::vector<std::uint64_t>& seeds, int rows, int cols,
                           const NoiseSchedule& sched, int sample_steps,
                           std::optional<std::pair<double, double>> clamp_range);

// Squared moment-matching distance between two sample sets:
//   |mu_a - mu_b|^2 + tr(Sa + Sb - 2 (Sa Sb)^(1/2))
// with the matrix square root taken through the symmetrized product. Small
// sets (fewer than 2*dim samples) get a diagonal shrinkage of 1e-6 on both
// covariances. Needs at least 2 samples per side.
double frechet_distance(const std::vector<Sample>& a, const std::vector<Sample>& b);

}  // namespace unprompt
