#pragma once

#include <cstdint>
#include <vector>

#include "unprompt/autodiff.hpp"
#include "unprompt/diffusion.hpp"
#include "unprompt/tensor.hpp"

namespace unprompt {

enum class Activation : std::uint32_t { kSilu = 0 };

// Fully connected noise predictor: the flattened sample is concatenated with a
// sinusoidal embedding of the timestep and pushed through hidden layers.
struct Arch {
    int data_dim = 0;
    std::vector<int> hidden;  // e.g. {128, 128}
    int embed_dim = 32;
    Activation act = Activation::kSilu;

    // Layer widths from input to output: [data_dim + embed_dim, hidden..., data_dim].
    std::vector<int> layer_sizes() const;
    std::size_t param_count() const;
    bool operator==(const Arch& o) const;
};

struct AdamState {
    DenseVector m;  // first-moment accumulator
    DenseVector v;  // second-moment accumulator
    std::uint64_t step = 0;
};

struct DenoiserParams {
    Arch arch;
    DenseVector theta;  // weights and biases, layer by layer (W then b)
    AdamState opt;
};

// Sinusoidal position code of an integer timestep; dim must be even.
DenseVector time_embedding(int t, int dim);

// Seeded init: each weight is uniform on +-1/sqrt(fan_in), biases start at
// zero, Adam moments at zero.
DenoiserParams init_params(const Arch& arch, std::uint64_t seed);

// Plain forward pass (no tape). x_t shape must match arch.data_dim.
DenseVector predict_noise(const DenoiserParams& p, const Sample& x_t, int t);

// Tape-recorded forward pass over the same arithmetic, for training. The tape
// must have been constructed over p.theta. Returns the output node.
Tape::NodeId predict_noise_node(Tape& tape, const DenoiserParams& p, const Sample& x_t, int t);

// In-place Adam step on p.theta with gradient g. Standard bias-corrected
// update with beta1=0.9, beta2=0.999, eps=1e-8.
void adam_update(DenoiserParams& p, const DenseVector& g, double lr);

}  // namespace unprompt
