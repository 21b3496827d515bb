#include "unprompt/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "unprompt/parallel.hpp"
#include "unprompt/rng.hpp"
#include "unprompt/sampler.hpp"

namespace unprompt {

namespace {

constexpr double kConstantNorm = 1e-12;  // below this a centered vector counts as constant

void require_same_arch(const DenoiserParams& pre, const DenoiserParams& post) {
    if (!(pre.arch == post.arch)) {
        throw ArchMismatch("metrics: pre/post models have different architectures");
    }
}

// Mean and (unbiased) covariance of a sample set.
void moments(const std::vector<Sample>& set, DenseVector& mu, DenseMatrix& cov) {
    const std::size_t n = set.size();
    const std::size_t d = set[0].dim();
    mu.assign(d, 0.0);
    for (const Sample& s : set) {
        for (std::size_t i = 0; i < d; ++i) mu[i] += s.data[i];
    }
    for (double& v : mu) v /= static_cast<double>(n);

    cov = DenseMatrix(d, d);
    DenseVector c(d);
    for (const Sample& s : set) {
        for (std::size_t i = 0; i < d; ++i) c[i] = s.data[i] - mu[i];
        for (std::size_t i = 0; i < d; ++i) {
            const double ci = c[i];
            if (ci == 0.0) continue;
            double* row = cov.data.data() + i * d;
            for (std::size_t j = i; j < d; ++j) row[j] += ci * c[j];
        }
    }
    const double scale = 1.0 / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = i; j < d; ++j) {
            const double v = cov.at(i, j) * scale;
            cov.at(i, j) = v;
            cov.at(j, i) = v;
        }
    }
}

// Symmetric PSD square root via eigendecomposition; negative eigenvalues from
// roundoff are clamped to zero.
DenseMatrix sqrtm_psd(const DenseMatrix& a) {
    DenseVector vals;
    DenseMatrix vecs;
    jacobi_eigen_sym(a, vals, &vecs);
    const std::size_t n = a.rows;
    DenseMatrix r(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const double s = std::sqrt(std::max(vals[k], 0.0));
        if (s == 0.0) continue;
        for (std::size_t i = 0; i < n; ++i) {
            const double vis = vecs.at(i, k) * s;
            if (vis == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) r.at(i, j) += vis * vecs.at(j, k);
        }
    }
    return r;
}

}  // namespace

double centered_cosine(const DenseVector& a, const DenseVector& b) {
    if (a.size() != b.size()) {
        throw DimensionMismatch("centered_cosine: vector sizes differ");
    }
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= static_cast<double>(a.size());
    mb /= static_cast<double>(b.size());

    double num = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double ca = a[i] - ma;
        const double cb = b[i] - mb;
        num += ca * cb;
        na += ca * ca;
        nb += cb * cb;
    }
    if (na < kConstantNorm * kConstantNorm || nb < kConstantNorm * kConstantNorm) {
        // Constant images carry no pattern; identical ones count as agreeing.
        double gap = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) gap += (a[i] - b[i]) * (a[i] - b[i]);
        return gap < kConstantNorm ? 1.0 : 0.0;
    }
    return num / (std::sqrt(na) * std::sqrt(nb));
}

double forgetting_similarity(const DenoiserParams& pre, const DenoiserParams& post,
                             const Sample& x0_forget, int t_mid, const NoiseSchedule& sched,
                             std::uint64_t eps_seed) {
    require_same_arch(pre, post);
    StreamRng rng(eps_seed, "similarity-eps");
    DenseVector eps(x0_forget.dim());
    for (double& e : eps) e = rng.normal();

    const Sample x_t = forward_noise(x0_forget, t_mid, eps, sched);
    // Full-stride denoising: one model call per remaining timestep.
    const Sample y_pre = ddim_sample_from(pre, x_t, t_mid, sched, t_mid);
    const Sample y_post = ddim_sample_from(post, x_t, t_mid, sched, t_mid);
    return centered_cosine(y_pre.data, y_post.data);
}

double ssim_global(const Sample& a, const Sample& b, double c1, double c2) {
    if (!a.same_shape(b) || a.dim() != b.dim()) {
        throw DimensionMismatch("ssim_global: image shapes differ");
    }
    if (!(c1 > 0.0) || !(c2 > 0.0)) {
        throw InvalidRange("ssim_global: stabilizers must be positive");
    }
    const std::size_t n = a.dim();
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        ma += a.data[i];
        mb += b.data[i];
    }
    ma /= static_cast<double>(n);
    mb /= static_cast<double>(n);

    double va = 0.0, vb = 0.0, vab = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double da = a.data[i] - ma;
        const double db = b.data[i] - mb;
        va += da * da;
        vb += db * db;
        vab += da * db;
    }
    va /= static_cast<double>(n);
    vb /= static_cast<double>(n);
    vab /= static_cast<double>(n);

    return ((2.0 * ma * mb + c1) * (2.0 * vab + c2)) /
           ((ma * ma + mb * mb + c1) * (va + vb + c2));
}

DriftResult per_seed_drift(const DenoiserParams& pre, const DenoiserParams& post,
                           const std::vector<std::uint64_t>& seeds, int rows, int cols,
                           const NoiseSchedule& sched, int sample_steps,
                           std::optional<std::pair<double, double>> clamp_range) {
    require_same_arch(pre, post);
    if (seeds.empty()) throw InvalidRange("per_seed_drift: no seeds");
    const std::size_t dim = static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
    if (static_cast<int>(dim) != pre.arch.data_dim) {
        throw DimensionMismatch("per_seed_drift: shape does not match the model");
    }

    std::vector<double> l2(seeds.size());
    std::vector<double> ss(seeds.size());
    parallel_for(seeds.size(), [&](std::size_t k) {
        StreamRng rng(seeds[k], "drift-start");
        Sample x_init;
        x_init.rows = rows;
        x_init.cols = cols;
        x_init.data.resize(dim);
        for (double& v : x_init.data) v = rng.normal();

        Sample y_pre = ddim_sample(pre, x_init, sched, sample_steps);
        Sample y_post = ddim_sample(post, x_init, sched, sample_steps);

        l2[k] = norm2(vsub(y_pre.data, y_post.data)) / std::sqrt(static_cast<double>(dim));

        if (clamp_range) {
            const auto [lo, hi] = *clamp_range;
            for (double& v : y_pre.data) v = std::clamp(v, lo, hi);
            for (double& v : y_post.data) v = std::clamp(v, lo, hi);
        }
        ss[k] = ssim_global(y_pre, y_post);
    });

    DriftResult out;
    for (std::size_t k = 0; k < seeds.size(); ++k) {
        out.mean_l2 += l2[k];
        out.mean_ssim += ss[k];
    }
    out.mean_l2 /= static_cast<double>(seeds.size());
    out.mean_ssim /= static_cast<double>(seeds.size());
    return out;
}

double frechet_distance(const std::vector<Sample>& a, const std::vector<Sample>& b) {
    if (a.size() < 2 || b.size() < 2) {
        throw InvalidRange("frechet_distance: need at least 2 samples per set");
    }
    const std::size_t d = a[0].dim();
    for (const auto* set : {&a, &b}) {
        for (const Sample& s : *set) {
            if (s.dim() != d) throw DimensionMismatch("frechet_distance: mixed dimensions");
        }
    }

    DenseVector mu_a, mu_b;
    DenseMatrix cov_a, cov_b;
    moments(a, mu_a, cov_a);
    moments(b, mu_b, cov_b);

    // Small sets give rank-deficient covariances; nudge them SPD-ward.
    if (a.size() < 2 * d || b.size() < 2 * d) {
        for (std::size_t i = 0; i < d; ++i) {
            cov_a.at(i, i) += 1e-6;
            cov_b.at(i, i) += 1e-6;
        }
    }

    double mean_gap = 0.0, tr_a = 0.0, tr_b = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        const double dm = mu_a[i] - mu_b[i];
        mean_gap += dm * dm;
        tr_a += cov_a.at(i, i);
        tr_b += cov_b.at(i, i);
    }

    const DenseMatrix root_a = sqrtm_psd(cov_a);
    DenseMatrix inner = matmul(matmul(root_a, cov_b), root_a);
    // Kill roundoff asymmetry before the eigensolve.
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = i + 1; j < d; ++j) {
            const double v = 0.5 * (inner.at(i, j) + inner.at(j, i));
            inner.at(i, j) = v;
            inner.at(j, i) = v;
        }
    }
    DenseVector vals;
    jacobi_eigen_sym(inner, vals, nullptr);
    double tr_root = 0.0;
    for (double v : vals) tr_root += std::sqrt(std::max(v, 0.0));

    const double d2 = mean_gap + tr_a + tr_b - 2.0 * tr_root;
    if (d2 < -1e-8) {
        throw CovarianceFailure("frechet_distance: squared distance " + std::to_string(d2) +
                                " is negative beyond tolerance");
    }
    return std::max(d2, 0.0);
}

}  // namespace unprompt
