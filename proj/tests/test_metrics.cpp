#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstddef>
#include <vector>

#include "unprompt/denoiser.hpp"
#include "unprompt/diffusion.hpp"
#include "unprompt/errors.hpp"
#include "unprompt/metrics.hpp"
#include "unprompt/rng.hpp"
#include "unprompt/sampler.hpp"

using namespace unprompt;

namespace {

Sample image(int rows, int cols, const DenseVector& values) {
    Sample s;
    s.rows = rows;
    s.cols = cols;
    s.data = values;
    return s;
}

Sample random_image(int rows, int cols, StreamRng& rng, double lo = 0.0, double hi = 1.0) {
    Sample s;
    s.rows = rows;
    s.cols = cols;
    s.data.resize(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols));
    for (double& v : s.data) v = lo + (hi - lo) * rng.uniform();
    return s;
}

// Reference structural-similarity score, transcribed from the standard
// formula along a different arithmetic route: raw moments first, central
// moments derived from them afterwards.
double ssim_reference(const Sample& a, const Sample& b, double c1, double c2) {
    const std::size_t n = a.dim();
    double sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = a.data[i];
        const double y = b.data[i];
        sx += x;
        sy += y;
        sxx += x * x;
        syy += y * y;
        sxy += x * y;
    }
    const double nd = static_cast<double>(n);
    const double mx = sx / nd;
    const double my = sy / nd;
    const double vx = sxx / nd - mx * mx;
    const double vy = syy / nd - my * my;
    const double cxy = sxy / nd - mx * my;
    return ((2.0 * mx * my + c1) * (2.0 * cxy + c2)) /
           ((mx * mx + my * my + c1) * (vx + vy + c2));
}

DenoiserParams tiny_net(int data_dim, std::uint64_t seed) {
    Arch arch;
    arch.data_dim = data_dim;
    arch.hidden = {12};
    arch.embed_dim = 4;
    return init_params(arch, seed);
}

// A model that predicts one fixed noise vector regardless of input: zero
// weights everywhere, the output bias carries the vector.
DenoiserParams constant_net(int data_dim, const DenseVector& prediction) {
    Arch arch;
    arch.data_dim = data_dim;
    arch.hidden = {12};
    arch.embed_dim = 4;
    DenoiserParams p = init_params(arch, 1);
    for (double& v : p.theta) v = 0.0;
    const std::size_t out_bias_at = p.theta.size() - static_cast<std::size_t>(data_dim);
    for (int i = 0; i < data_dim; ++i) {
        p.theta[out_bias_at + static_cast<std::size_t>(i)] = prediction[static_cast<std::size_t>(i)];
    }
    return p;
}

}  // namespace

TEST_CASE("centered cosine recognizes equality, negation, and orthogonality") {
    const DenseVector a = {1.0, 2.0, 4.0, -1.0};
    DenseVector neg(a.size());
    const double mean = (1.0 + 2.0 + 4.0 - 1.0) / 4.0;
    for (std::size_t i = 0; i < a.size(); ++i) neg[i] = mean - (a[i] - mean);

    CHECK(centered_cosine(a, a) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(centered_cosine(a, neg) == doctest::Approx(-1.0).epsilon(1e-12));

    // Centered patterns (1,-1,1,-1) and (1,1,-1,-1) are orthogonal.
    const DenseVector p1 = {1.0, -1.0, 1.0, -1.0};
    const DenseVector p2 = {1.0, 1.0, -1.0, -1.0};
    CHECK(centered_cosine(p1, p2) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("centered cosine ignores shifts and positive scales") {
    StreamRng rng(3, "cosine-invariance");
    for (int rep = 0; rep < 30; ++rep) {
        DenseVector a(9), b(9);
        for (double& v : a) v = rng.normal();
        for (double& v : b) v = rng.normal();
        const double base = centered_cosine(a, b);

        DenseVector shifted = a;
        for (double& v : shifted) v += 3.7;
        CHECK(centered_cosine(shifted, b) == doctest::Approx(base).epsilon(1e-10));

        DenseVector scaled = a;
        for (double& v : scaled) v *= 2.5;
        CHECK(centered_cosine(scaled, b) == doctest::Approx(base).epsilon(1e-10));

        DenseVector flipped = a;
        for (double& v : flipped) v *= -1.0;
        CHECK(centered_cosine(flipped, b) == doctest::Approx(-base).epsilon(1e-10));
    }
}

TEST_CASE("centered cosine treats constant images specially") {
    const DenseVector c0(5, 0.7);
    const DenseVector c1(5, 0.2);
    CHECK(centered_cosine(c0, c0) == 1.0);
    CHECK(centered_cosine(c0, c1) == 0.0);
    CHECK_THROWS_AS(centered_cosine(DenseVector(3, 0.0), DenseVector(4, 0.0)),
                    DimensionMismatch);
}

TEST_CASE("forgetting similarity is one when nothing changed") {
    const NoiseSchedule sched = make_schedule(20, 1e-2, 0.25);
    const DenoiserParams p = tiny_net(6, 77);
    StreamRng rng(5, "target");
    const Sample x0 = random_image(2, 3, rng);
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        const double sim = forgetting_similarity(p, p, x0, 10, sched, seed);
        CHECK(std::fabs(sim - 1.0) < 1e-9);
    }
}

TEST_CASE("forgetting similarity is deterministic in the noise seed") {
    const NoiseSchedule sched = make_schedule(20, 1e-2, 0.25);
    const DenoiserParams pre = tiny_net(6, 77);
    const DenoiserParams post = tiny_net(6, 78);
    StreamRng rng(6, "target");
    const Sample x0 = random_image(2, 3, rng);

    const double s1 = forgetting_similarity(pre, post, x0, 10, sched, 42);
    const double s2 = forgetting_similarity(pre, post, x0, 10, sched, 42);
    CHECK(s1 == s2);
    const double s3 = forgetting_similarity(pre, post, x0, 10, sched, 43);
    CHECK(s1 != s3);
}

TEST_CASE("forgetting similarity rejects mismatched architectures") {
    const NoiseSchedule sched = make_schedule(20, 1e-2, 0.25);
    const DenoiserParams pre = tiny_net(6, 77);
    Arch other;
    other.data_dim = 6;
    other.hidden = {8};
    other.embed_dim = 4;
    const DenoiserParams post = init_params(other, 1);
    StreamRng rng(7, "target");
    const Sample x0 = random_image(2, 3, rng);
    CHECK_THROWS_AS(forgetting_similarity(pre, post, x0, 10, sched, 1), ArchMismatch);
}

TEST_CASE("a negated reconstruction scores minus one") {
    // The pre model's own output, negated around its mean, is the reference
    // stub for "maximally changed": the cosine must be exactly -1.
    const NoiseSchedule sched = make_schedule(20, 1e-2, 0.25);
    const DenoiserParams pre = tiny_net(6, 77);
    StreamRng rng(8, "target");
    const Sample x0 = random_image(2, 3, rng);
    StreamRng erng(9, "eps");
    DenseVector eps(x0.dim());
    for (double& e : eps) e = erng.normal();
    const Sample x_t = forward_noise(x0, 10, eps, sched);
    const Sample y = ddim_sample_from(pre, x_t, 10, sched, 10);

    DenseVector negated = y.data;
    for (double& v : negated) v = -v;
    CHECK(centered_cosine(y.data, negated) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("structural score is one for identical images") {
    StreamRng rng(11, "ssim-id");
    for (int rep = 0; rep < 10; ++rep) {
        const Sample a = random_image(3, 4, rng);
        CHECK(ssim_global(a, a) == 1.0);
    }
}

TEST_CASE("structural score of flat black versus flat white is the closed form") {
    const Sample black = image(2, 3, DenseVector(6, 0.0));
    const Sample white = image(2, 3, DenseVector(6, 1.0));
    const double c1 = 1e-4;
    const double got = ssim_global(black, white, c1, 9e-4);
    CHECK(got == doctest::Approx(c1 / (1.0 + c1)).epsilon(1e-12));
}

TEST_CASE("structural score matches an independently transcribed reference") {
    StreamRng rng(12, "ssim-ref");
    for (int rep = 0; rep < 50; ++rep) {
        const Sample a = random_image(4, 4, rng);
        const Sample b = random_image(4, 4, rng);
        const double got = ssim_global(a, b, 1e-4, 9e-4);
        const double want = ssim_reference(a, b, 1e-4, 9e-4);
        CHECK(got == doctest::Approx(want).epsilon(1e-10));
    }
}

TEST_CASE("structural score is symmetric and bounded") {
    StreamRng rng(13, "ssim-sym");
    for (int rep = 0; rep < 30; ++rep) {
        const Sample a = random_image(3, 5, rng, -0.5, 1.5);
        const Sample b = random_image(3, 5, rng, -0.5, 1.5);
        CHECK(ssim_global(a, b) == ssim_global(b, a));
        CHECK(std::fabs(ssim_global(a, b)) <= 1.0 + 1e-12);
    }
}

TEST_CASE("structural score rejects bad inputs") {
    const Sample a = image(2, 2, DenseVector(4, 0.5));
    const Sample b = image(1, 4, DenseVector(4, 0.5));
    CHECK_THROWS_AS(ssim_global(a, b), DimensionMismatch);
    CHECK_THROWS_AS(ssim_global(a, a, 0.0, 9e-4), InvalidRange);
    CHECK_THROWS_AS(ssim_global(a, a, 1e-4, -1.0), InvalidRange);
}

TEST_CASE("per-seed drift vanishes when the models are the same") {
    const NoiseSchedule sched = make_schedule(20, 1e-2, 0.25);
    const DenoiserParams p = tiny_net(6, 31);
    const DriftResult r = per_seed_drift(p, p, {1, 2, 3, 4}, 2, 3, sched, 10, std::nullopt);
    CHECK(r.mean_l2 == 0.0);
    CHECK(r.mean_ssim == 1.0);
}

TEST_CASE("per-seed drift of a constant-prediction stub has a closed form") {
    // A model that always predicts delta*e0 against one that predicts zero.
    // A constant prediction is self-consistent under the sampler, so the
    // output gap telescopes to (sqrt(1-abar_T)/sqrt(abar_T))*delta*e0 no
    // matter how many grid points are used.
    const NoiseSchedule sched = make_schedule(16, 1e-2, 0.2);
    const int dim = 6;
    const double delta = 0.35;
    DenseVector pred(static_cast<std::size_t>(dim), 0.0);
    pred[0] = delta;
    const DenoiserParams zero = constant_net(dim, DenseVector(static_cast<std::size_t>(dim), 0.0));
    const DenoiserParams stub = constant_net(dim, pred);

    const double abar = sched.cum_keep_at(sched.t_max);
    const double want =
        (std::sqrt(1.0 - abar) / std::sqrt(abar)) * delta / std::sqrt(static_cast<double>(dim));

    for (int steps : {1, 4, 16}) {
        const DriftResult r =
            per_seed_drift(zero, stub, {5, 6, 7}, 2, 3, sched, steps, std::nullopt);
        CHECK(r.mean_l2 == doctest::Approx(want).epsilon(1e-10));
    }

    // Doubling the stub doubles the drift: the sampler is linear in the
    // prediction for fixed start noise.
    DenseVector pred2 = pred;
    pred2[0] = 2.0 * delta;
    const DenoiserParams stub2 = constant_net(dim, pred2);
    const DriftResult r1 = per_seed_drift(zero, stub, {5}, 2, 3, sched, 8, std::nullopt);
    const DriftResult r2 = per_seed_drift(zero, stub2, {5}, 2, 3, sched, 8, std::nullopt);
    CHECK(r2.mean_l2 == doctest::Approx(2.0 * r1.mean_l2).epsilon(1e-10));
}

TEST_CASE("per-seed drift clamps before the structural score when asked") {
    const NoiseSchedule sched = make_schedule(16, 1e-2, 0.2);
    const int dim = 6;
    DenseVector pred(static_cast<std::size_t>(dim), 0.0);
    pred[0] = 40.0;  // large enough that outputs leave [0,1] by a wide margin
    const DenoiserParams zero = constant_net(dim, DenseVector(static_cast<std::size_t>(dim), 0.0));
    const DenoiserParams stub = constant_net(dim, pred);

    const DriftResult raw = per_seed_drift(zero, stub, {9, 10}, 2, 3, sched, 8, std::nullopt);
    const DriftResult clamped =
        per_seed_drift(zero, stub, {9, 10}, 2, 3, sched, 8, std::make_pair(0.0, 1.0));
    CHECK(raw.mean_ssim != clamped.mean_ssim);
    CHECK(raw.mean_l2 == clamped.mean_l2);  // the drift norm itself stays unclamped
}

TEST_CASE("per-seed drift validates its inputs") {
    const NoiseSchedule sched = make_schedule(16, 1e-2, 0.2);
    const DenoiserParams p = tiny_net(6, 31);
    CHECK_THROWS_AS(per_seed_drift(p, p, {}, 2, 3, sched, 8, std::nullopt), InvalidRange);
    CHECK_THROWS_AS(per_seed_drift(p, p, {1}, 3, 3, sched, 8, std::nullopt), DimensionMismatch);
}

TEST_CASE("moment-matching distance of a set against itself is zero") {
    StreamRng rng(41, "frechet-id");
    std::vector<Sample> a;
    for (int i = 0; i < 40; ++i) a.push_back(random_image(2, 2, rng));
    CHECK(frechet_distance(a, a) <= 1e-8);
}

TEST_CASE("moment-matching distance of point masses is the squared mean gap") {
    const DenseVector p = {0.1, 0.7, 0.3, 0.9};
    const DenseVector q = {0.5, 0.2, 0.4, 0.1};
    std::vector<Sample> a(3, image(2, 2, p));
    std::vector<Sample> b(3, image(2, 2, q));
    double gap = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) gap += (p[i] - q[i]) * (p[i] - q[i]);
    CHECK(frechet_distance(a, b) == doctest::Approx(gap).epsilon(1e-9));
}

TEST_CASE("moment-matching distance approaches the Gaussian closed form") {
    // N(0, I) against N(mu, sigma^2 I) in four dimensions has distance
    // |mu|^2 + d*(1-sigma)^2; sampled estimates must land within 5%.
    const std::size_t n = 6000;
    const DenseVector mu = {1.0, 0.5, 0.0, -1.0};
    const double sigma = 1.5;
    StreamRng rng(55, "frechet-gauss");
    std::vector<Sample> a, b;
    a.reserve(n);
    b.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        DenseVector va(4), vb(4);
        for (double& v : va) v = rng.normal();
        for (std::size_t k = 0; k < 4; ++k) vb[k] = mu[k] + sigma * rng.normal();
        a.push_back(image(2, 2, va));
        b.push_back(image(2, 2, vb));
    }
    const double want = (1.0 + 0.25 + 0.0 + 1.0) + 4.0 * (1.0 - sigma) * (1.0 - sigma);
    const double got = frechet_distance(a, b);
    CHECK(got == doctest::Approx(want).epsilon(0.05));
}

TEST_CASE("moment-matching distance is symmetric and sane on small sets") {
    StreamRng rng(66, "frechet-sym");
    std::vector<Sample> a, b;
    for (int i = 0; i < 5; ++i) {  // fewer than 2*dim, exercising shrinkage
        a.push_back(random_image(2, 2, rng));
        b.push_back(random_image(2, 2, rng, 0.5, 2.0));
    }
    const double ab = frechet_distance(a, b);
    const double ba = frechet_distance(b, a);
    CHECK(ab >= 0.0);
    CHECK(ab == doctest::Approx(ba).epsilon(1e-8));
}

TEST_CASE("moment-matching distance grows when one set shifts away") {
    StreamRng rng(67, "frechet-shift");
    std::vector<Sample> a, near, far;
    for (int i = 0; i < 64; ++i) {
        const Sample s = random_image(2, 2, rng);
        a.push_back(s);
        Sample n2 = s;
        for (double& v : n2.data) v += 0.05;
        Sample f2 = s;
        for (double& v : f2.data) v += 1.0;
        near.push_back(n2);
        far.push_back(f2);
    }
    CHECK(frechet_distance(a, near) < frechet_distance(a, far));
}

TEST_CASE("moment-matching distance validates inputs") {
    std::vector<Sample> one = {image(2, 2, DenseVector(4, 0.0))};
    std::vector<Sample> two = {image(2, 2, DenseVector(4, 0.0)),
                               image(2, 2, DenseVector(4, 1.0))};
    CHECK_THROWS_AS(frechet_distance(one, two), InvalidRange);

    std::vector<Sample> mixed = {image(2, 2, DenseVector(4, 0.0)),
                                 image(1, 3, DenseVector(3, 0.0))};
    CHECK_THROWS_AS(frechet_distance(mixed, two), DimensionMismatch);
}
