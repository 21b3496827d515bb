#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "unprompt/dataset.hpp"
#include "unprompt/surrogate.hpp"
#include "unprompt/unlearn.hpp"

namespace unprompt {

// Experiment configuration. On disk this is a line-oriented key-value file:
//
//   # comment
//   dataset.kind = glyphs
//   unlearn.iters = 240
//
// Unknown keys and duplicate keys are hard errors. A `preset` key applies a
// named bundle of values first; explicit keys then override it.
struct ExperimentConfig {
    std::uint64_t seed = 7;
    std::string out_dir = "runs";

    // dataset.*
    DatasetKind dataset_kind = DatasetKind::kGlyphs;
    int dataset_size = 192;
    std::uint64_t dataset_seed = 1;
    int dataset_modes = 8;        // mixture only
    double dataset_radius = 2.0;  // mixture only
    double dataset_sigma = 0.25;  // mixture only

    // schedule.*
    int schedule_t_max = 100;
    double schedule_beta_min = 1e-3;
    double schedule_beta_max = 0.2;

    // model.*
    std::vector<int> model_hidden = {128, 128};
    int model_embed_dim = 32;

    // pretrain.*
    int pretrain_steps = 6000;
    double pretrain_lr = 1e-3;
    int pretrain_batch = 16;

    // unlearn.*
    int unlearn_iters = 240;
    double unlearn_lr = 2.5e-4;
    WeightMode unlearn_weight_mode = WeightMode::kTimestepAware;
    double unlearn_weight_slope = 5e-5;
    double unlearn_lambda_const = 0.95;
    int unlearn_t_ref = 1000;
    SurgeryMode unlearn_surgery = SurgeryMode::kProjectForget;
    int unlearn_remember_batch = 8;
    int unlearn_snapshot_every = 40;
    bool unlearn_reset_moments = false;
    std::vector<int> unlearn_forget_indices = {0};
    std::string unlearn_init_checkpoint;

    // surrogate.*
    SurrogateStrategy surrogate_strategy = SurrogateStrategy::kAttributeEdit;
    double surrogate_sigma = 50.0 / 255.0;
    std::string surrogate_attribute = "hue";
    int surrogate_value = 5;
    std::uint64_t surrogate_seed = 9;
    std::vector<int> surrogate_sweep_values;  // ablation magnitude sweep

    // eval.*
    int eval_sim_seeds = 16;
    int eval_drift_seeds = 64;
    int eval_t_mid = 50;
    double eval_threshold = 0.4;
    int eval_sample_steps = 20;
    int eval_frechet_samples = 1000;
    std::string eval_pre_checkpoint;
    std::string eval_post_checkpoint;

    // ridge.* (demo command)
    std::vector<double> ridge_xs = {1.0, 2.0};
    std::vector<double> ridge_ys = {1.0, 3.0};
    double ridge_penalty = 0.1;
    int ridge_row = 1;
    double ridge_sweep_halfwidth = 2.0;
    int ridge_sweep_count = 81;
};

// Parse from file contents; `origin` names the source in error messages.
ExperimentConfig parse_config(const std::string& text, const std::string& origin = "config");
ExperimentConfig load_config_file(const std::string& path);

// Set one key exactly as the parser would; unknown keys and bad values throw
// ConfigInvalid. Backs the command-line override flags.
void set_config_key(ExperimentConfig& cfg, const std::string& key, const std::string& value,
                    const std::string& origin = "override");

// Named value bundles mirroring the two reference training setups, rescaled
// to desk size. Throws ConfigInvalid for unknown names.
void apply_preset(ExperimentConfig& cfg, const std::string& name);

// Every key in a fixed order with normalized number formatting. Two configs
// that parse to the same values serialize identically, regardless of key
// order or formatting in the source file.
std::string canonical_text(const ExperimentConfig& cfg);

// FNV-1a over canonical_text, as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

// Range and cross-field checks shared by every command. Throws ConfigInvalid.
void validate_config(const ExperimentConfig& cfg);

}  // namespace unprompt
