#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "unprompt/checkpoint.hpp"
#include "unprompt/config.hpp"
#include "unprompt/dataset.hpp"
#include "unprompt/denoiser.hpp"
#include "unprompt/metrics.hpp"
#include "unprompt/unlearn.hpp"

namespace unprompt {

// Experiment orchestration: dataset/model construction from a config,
// the pretraining loop, evaluation of a pre/post model pair, report export,
// and the command dispatcher behind the command-line tool.

// Seed for a named phase of a run. Distinct phases of the same master seed
// get unrelated draw sequences, so adding draws to one phase never shifts
// another.
std::uint64_t phase_seed(std::uint64_t master, std::string_view phase);

Dataset make_dataset(const ExperimentConfig& cfg);
NoiseSchedule make_schedule_for(const ExperimentConfig& cfg);
Arch make_arch(const ExperimentConfig& cfg, int data_dim);

using ProgressFn = std::function<void(int step, double loss)>;

// Train a fresh denoiser on the dataset with the config's optimizer settings.
// Fully determined by (cfg, dataset); progress, when given, is called every
// few hundred steps with a smoothed loss.
DenoiserParams pretrain_model(const ExperimentConfig& cfg, const Dataset& ds,
                              const NoiseSchedule& sched,
                              const ProgressFn& progress = nullptr);

// Assemble the forget/surrogate/remember sets and hyperparameters for the
// config's forget indices. The remember set is every sample not being
// forgotten.
UnlearnTask make_unlearn_task(const ExperimentConfig& cfg, const Dataset& ds,
                              const NoiseSchedule& sched);

// Draw `count` fresh generations from a model: per-sample start noise from a
// stream derived from (master, phase, sample index), then the deterministic
// sampler at the given stride.
std::vector<Sample> sample_set(const DenoiserParams& p, const NoiseSchedule& sched, int count,
                               int rows, int cols, int steps, std::uint64_t master,
                               std::string_view phase);

struct EvalSummary {
    std::vector<double> per_target_similarity;  // one mean per forget target
    double mean_similarity = 0.0;
    double forgotten_fraction = 0.0;  // targets whose mean fell under the threshold
    double mean_l2 = 0.0;
    double mean_ssim = 0.0;
    double frechet_pre = 0.0;       // post-model draw vs pre-model draw
    double frechet_baseline = 0.0;  // two disjoint pre-model draws
    double frechet_real = 0.0;      // post-model draw vs the dataset itself
};

// Full evaluation pass over a pre/post pair: reconstruction similarity on
// each forget target, same-noise drift over fresh seeds, and the three
// distribution distances.
EvalSummary evaluate_models(const ExperimentConfig& cfg, const Dataset& ds,
                            const NoiseSchedule& sched, const DenoiserParams& pre,
                            const DenoiserParams& post);

MetricReport to_report(const EvalSummary& s, const ExperimentConfig& cfg);

// Report export: fixed column order, six significant digits, one row (csv)
// or one block (kv-text) per report. fmt is "csv" or "kv-text".
std::string report_csv(const std::vector<MetricReport>& reports);
std::string report_kv(const std::vector<MetricReport>& reports);
void export_report(const std::vector<MetricReport>& reports, const std::string& fmt,
                   const std::string& path);

// Create <out>/run-<confighash8>-<timestamp>/ (suffixed on collision) and
// drop the canonical config, plus the original text when provided, inside it.
std::string make_run_dir(const ExperimentConfig& cfg, const std::string& original_text);

// Dispatch one of: pretrain, unlearn, eval, ablate-timestep, ablate-surgery,
// ablate-surrogate, ridge-demo. Writes artifacts into a fresh run directory
// under cfg.out_dir and returns the process exit status (0 on success).
// Configuration and artifact problems surface as exceptions for the caller
// to map onto exit codes.
int run_command(const std::string& cmd, const ExperimentConfig& cfg,
                const std::string& original_config_text = "");

}  // namespace unprompt
