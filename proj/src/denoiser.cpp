#include "unprompt/denoiser.hpp"

#include <cmath>
#include <string>

#include "unprompt/rng.hpp"

namespace unprompt {

namespace {

constexpr double kAdamBeta1 = 0.9;
constexpr double kAdamBeta2 = 0.999;
constexpr double kAdamEps = 1e-8;

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

void validate(const Arch& arch) {
    if (arch.data_dim < 1) throw InvalidArch("arch: data_dim must be >= 1");
    if (arch.embed_dim < 2 || arch.embed_dim % 2 != 0) {
        throw InvalidArch("arch: embed_dim must be a positive even number, got " +
                          std::to_string(arch.embed_dim));
    }
    for (int h : arch.hidden) {
        if (h < 1) throw InvalidArch("arch: hidden width must be >= 1");
    }
}

}  // namespace

std::vector<int> Arch::layer_sizes() const {
    std::vector<int> sizes;
    sizes.push_back(data_dim + embed_dim);
    for (int h : hidden) sizes.push_back(h);
    sizes.push_back(data_dim);
    return sizes;
}

std::size_t Arch::param_count() const {
    const std::vector<int> sizes = layer_sizes();
    std::size_t n = 0;
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
        n += static_cast<std::size_t>(sizes[l + 1]) * static_cast<std::size_t>(sizes[l]);
        n += static_cast<std::size_t>(sizes[l + 1]);
    }
    return n;
}

bool Arch::operator==(const Arch& o) const {
    return data_dim == o.data_dim && hidden == o.hidden && embed_dim == o.embed_dim &&
           act == o.act;
}

DenseVector time_embedding(int t, int dim) {
    if (dim < 2 || dim % 2 != 0) {
        throw InvalidArch("time_embedding: dim must be a positive even number");
    }
    DenseVector emb(static_cast<std::size_t>(dim));
    const int half = dim / 2;
    for (int k = 0; k < half; ++k) {
        const double freq =
            std::exp(-std::log(10000.0) * static_cast<double>(k) / static_cast<double>(half));
        const double angle = static_cast<double>(t) * freq;
        emb[static_cast<std::size_t>(2 * k)] = std::sin(angle);
        emb[static_cast<std::size_t>(2 * k + 1)] = std::cos(angle);
    }
    return emb;
}

DenoiserParams init_params(const Arch& arch, std::uint64_t seed) {
    validate(arch);
    DenoiserParams p;
    p.arch = arch;
    p.theta.assign(arch.param_count(), 0.0);
    p.opt.m.assign(p.theta.size(), 0.0);
    p.opt.v.assign(p.theta.size(), 0.0);
    p.opt.step = 0;

    StreamRng rng(seed, "init");
    const std::vector<int> sizes = arch.layer_sizes();
    std::size_t off = 0;
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
        const auto fan_in = static_cast<std::size_t>(sizes[l]);
        const auto fan_out = static_cast<std::size_t>(sizes[l + 1]);
        const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
        for (std::size_t k = 0; k < fan_out * fan_in; ++k) {
            p.theta[off + k] = (2.0 * rng.uniform() - 1.0) * bound;
        }
        off += fan_out * fan_in;
        off += fan_out;  // biases stay zero
    }
    return p;
}

DenseVector predict_noise(const DenoiserParams& p, const Sample& x_t, int t) {
    if (static_cast<int>(x_t.dim()) != p.arch.data_dim) {
        throw DimensionMismatch("predict_noise: sample dim " + std::to_string(x_t.dim()) +
                                " vs arch data_dim " + std::to_string(p.arch.data_dim));
    }
    const DenseVector emb = time_embedding(t, p.arch.embed_dim);
    DenseVector h;
    h.reserve(x_t.dim() + emb.size());
    h.insert(h.end(), x_t.data.begin(), x_t.data.end());
    h.insert(h.end(), emb.begin(), emb.end());

    const std::vector<int> sizes = p.arch.layer_sizes();
    std::size_t off = 0;
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
        const auto in_dim = static_cast<std::size_t>(sizes[l]);
        const auto out_dim = static_cast<std::size_t>(sizes[l + 1]);
        const double* w = p.theta.data() + off;
        const double* b = p.theta.data() + off + out_dim * in_dim;

        // Same arithmetic order as the tape path: matvec first, bias second,
        // so the two implementations agree bit for bit.
        DenseVector z(out_dim, 0.0);
        for (std::size_t r = 0; r < out_dim; ++r) {
            const double* wr = w + r * in_dim;
            double s = 0.0;
            for (std::size_t c = 0; c < in_dim; ++c) s += wr[c] * h[c];
            z[r] = s;
        }
        for (std::size_t r = 0; r < out_dim; ++r) z[r] = z[r] + b[r];

        const bool last = (l + 2 == sizes.size());
        if (!last) {
            for (std::size_t r = 0; r < out_dim; ++r) z[r] = z[r] * sigmoid(z[r]);
        }
        h = std::move(z);
        off += out_dim * in_dim + out_dim;
    }
    return h;
}

Tape::NodeId predict_noise_node(Tape& tape, const DenoiserParams& p, const Sample& x_t, int t) {
    if (static_cast<int>(x_t.dim()) != p.arch.data_dim) {
        throw DimensionMismatch("predict_noise_node: sample dim " + std::to_string(x_t.dim()) +
                                " vs arch data_dim " + std::to_string(p.arch.data_dim));
    }
    const DenseVector emb = time_embedding(t, p.arch.embed_dim);
    DenseVector in;
    in.reserve(x_t.dim() + emb.size());
    in.insert(in.end(), x_t.data.begin(), x_t.data.end());
    in.insert(in.end(), emb.begin(), emb.end());

    Tape::NodeId h = tape.input(std::move(in));
    const std::vector<int> sizes = p.arch.layer_sizes();
    std::size_t off = 0;
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
        const auto in_dim = static_cast<std::size_t>(sizes[l]);
        const auto out_dim = static_cast<std::size_t>(sizes[l + 1]);

        const Tape::NodeId w = tape.param_segment(off, out_dim * in_dim);
        const Tape::NodeId b = tape.param_segment(off + out_dim * in_dim, out_dim);
        Tape::NodeId z = tape.add(tape.matvec_node(w, out_dim, in_dim, h), b);

        const bool last = (l + 2 == sizes.size());
        h = last ? z : tape.silu(z);
        off += out_dim * in_dim + out_dim;
    }
    return h;
}

void adam_update(DenoiserParams& p, const DenseVector& g, double lr) {
    if (g.size() != p.theta.size()) {
        throw DimensionMismatch("adam_update: gradient size " + std::to_string(g.size()) +
                                " vs parameter size " + std::to_string(p.theta.size()));
    }
    if (!(lr > 0.0)) throw InvalidRange("adam_update: lr must be positive");

    p.opt.step += 1;
    const double b1c = 1.0 - std::pow(kAdamBeta1, static_cast<double>(p.opt.step));
    const double b2c = 1.0 - std::pow(kAdamBeta2, static_cast<double>(p.opt.step));
    for (std::size_t i = 0; i < p.theta.size(); ++i) {
        p.opt.m[i] = kAdamBeta1 * p.opt.m[i] + (1.0 - kAdamBeta1) * g[i];
        p.opt.v[i] = kAdamBeta2 * p.opt.v[i] + (1.0 - kAdamBeta2) * g[i] * g[i];
        const double mhat = p.opt.m[i] / b1c;
        const double vhat = p.opt.v[i] / b2c;
        p.theta[i] -= lr * mhat / (std::sqrt(vhat) + kAdamEps);
    }
}

}  // namespace unprompt
