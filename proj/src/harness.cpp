#include "unprompt/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <string>

#include "unprompt/parallel.hpp"
#include "unprompt/ridge.hpp"
#include "unprompt/rng.hpp"
#include "unprompt/sampler.hpp"
#include "unprompt/surrogate.hpp"
#include "unprompt/train.hpp"

namespace unprompt {

namespace fs = std::filesystem;

namespace {

double mean_of(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

std::string g6(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoFailure("cannot open '" + path.string() + "' for writing");
    out << text;
    out.flush();
    if (!out) throw IoFailure("write failed for '" + path.string() + "'");
}

}  // namespace

std::uint64_t phase_seed(std::uint64_t master, std::string_view phase) {
    return fnv1a64(phase.data(), phase.size(), master ^ 0x243F6A8885A308D3ull);
}

Dataset make_dataset(const ExperimentConfig& cfg) {
    if (cfg.dataset_kind == DatasetKind::kMixture2d) {
        return make_mixture2d(cfg.dataset_size, cfg.dataset_modes, cfg.dataset_radius,
                              cfg.dataset_sigma, cfg.dataset_seed);
    }
    return make_glyphs(cfg.dataset_size, cfg.dataset_seed);
}

NoiseSchedule make_schedule_for(const ExperimentConfig& cfg) {
    return make_schedule(cfg.schedule_t_max, cfg.schedule_beta_min, cfg.schedule_beta_max);
}

Arch make_arch(const ExperimentConfig& cfg, int data_dim) {
    Arch arch;
    arch.data_dim = data_dim;
    arch.hidden = cfg.model_hidden;
    arch.embed_dim = cfg.model_embed_dim;
    arch.act = Activation::kSilu;
    return arch;
}

DenoiserParams pretrain_model(const ExperimentConfig& cfg, const Dataset& ds,
                              const NoiseSchedule& sched, const ProgressFn& progress) {
    const int d = static_cast<int>(ds.samples.at(0).dim());
    DenoiserParams p = init_params(make_arch(cfg, d), phase_seed(cfg.seed, "pretrain-init"));
    TrainStreams rng = TrainStreams::make(phase_seed(cfg.seed, "pretrain"));

    const auto n = static_cast<std::int64_t>(ds.samples.size());
    double smooth = 0.0;
    bool have_smooth = false;
    for (int step = 0; step < cfg.pretrain_steps; ++step) {
        std::vector<Sample> batch;
        batch.reserve(static_cast<std::size_t>(cfg.pretrain_batch));
        for (int b = 0; b < cfg.pretrain_batch; ++b) {
            batch.push_back(ds.samples[static_cast<std::size_t>(rng.data.uniform_int(0, n - 1))]);
        }
        TrainStepResult r = train_step(p, batch, sched, rng);
        // Two-phase rate: full speed for the first 80%, then a 10x cooldown
        // so the parameters settle instead of jittering around the optimum.
        const bool cooldown = step >= cfg.pretrain_steps * 4 / 5;
        adam_update(p, r.grad, cooldown ? cfg.pretrain_lr * 0.1 : cfg.pretrain_lr);
        smooth = have_smooth ? 0.98 * smooth + 0.02 * r.loss : r.loss;
        have_smooth = true;
        if (progress && ((step + 1) % 500 == 0 || step + 1 == cfg.pretrain_steps)) {
            progress(step + 1, smooth);
        }
    }
    return p;
}

UnlearnTask make_unlearn_task(const ExperimentConfig& cfg, const Dataset& ds,
                              const NoiseSchedule& sched) {
    UnlearnTask task;
    task.sched = sched;

    SurrogateSpec spec;
    spec.strategy = cfg.surrogate_strategy;
    spec.sigma = cfg.surrogate_sigma;
    if (cfg.surrogate_strategy == SurrogateStrategy::kAttributeEdit) {
        spec.attribute = glyph_attribute_from_name(cfg.surrogate_attribute);
    }
    spec.new_value = cfg.surrogate_value;
    spec.seed = cfg.surrogate_seed;

    std::vector<char> is_forget(ds.samples.size(), 0);
    for (int idx : cfg.unlearn_forget_indices) {
        const auto u = static_cast<std::size_t>(idx);
        task.forget.push_back(ds.samples.at(u));
        task.surrogates.push_back(make_surrogate(ds, u, spec));
        is_forget.at(u) = 1;
    }
    for (std::size_t i = 0; i < ds.samples.size(); ++i) {
        if (!is_forget[i]) task.remember.push_back(ds.samples[i]);
    }

    task.iters = cfg.unlearn_iters;
    task.lr = cfg.unlearn_lr;
    task.remember_batch = cfg.unlearn_remember_batch;
    task.weight_mode = cfg.unlearn_weight_mode;
    task.weight_slope = cfg.unlearn_weight_slope;
    task.lambda_const = cfg.unlearn_lambda_const;
    task.t_ref = cfg.unlearn_t_ref;
    task.surgery = cfg.unlearn_surgery;
    task.snapshot_every = cfg.unlearn_snapshot_every;
    task.reset_moments_between_targets = cfg.unlearn_reset_moments;
    return task;
}

std::vector<Sample> sample_set(const DenoiserParams& p, const NoiseSchedule& sched, int count,
                               int rows, int cols, int steps, std::uint64_t master,
                               std::string_view phase) {
    const std::uint64_t base = phase_seed(master, phase);
    std::vector<Sample> out(static_cast<std::size_t>(count));
    parallel_for(out.size(), [&](std::size_t j) {
        StreamRng rng(base + j, "sample-start");
        Sample x;
        x.rows = rows;
        x.cols = cols;
        x.data.resize(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols));
        for (double& v : x.data) v = rng.normal();
        out[j] = ddim_sample(p, x, sched, steps);
    });
    return out;
}

EvalSummary evaluate_models(const ExperimentConfig& cfg, const Dataset& ds,
                            const NoiseSchedule& sched, const DenoiserParams& pre,
                            const DenoiserParams& post) {
    EvalSummary s;
    const int rows = ds.samples.at(0).rows;
    const int cols = ds.samples.at(0).cols;

    for (std::size_t k = 0; k < cfg.unlearn_forget_indices.size(); ++k) {
        const Sample& target =
            ds.samples.at(static_cast<std::size_t>(cfg.unlearn_forget_indices[k]));
        const std::uint64_t base = phase_seed(cfg.seed, "eval-sim-" + std::to_string(k));
        std::vector<double> sims(static_cast<std::size_t>(cfg.eval_sim_seeds));
        parallel_for(sims.size(), [&](std::size_t j) {
            sims[j] = forgetting_similarity(pre, post, target, cfg.eval_t_mid, sched, base + j);
        });
        s.per_target_similarity.push_back(mean_of(sims));
    }
    if (s.per_target_similarity.empty()) {
        // Nothing was asked to be forgotten; report the neutral value.
        s.mean_similarity = 1.0;
        s.forgotten_fraction = 0.0;
    } else {
        s.mean_similarity = mean_of(s.per_target_similarity);
        int under = 0;
        for (double v : s.per_target_similarity) {
            if (v < cfg.eval_threshold) ++under;
        }
        s.forgotten_fraction =
            static_cast<double>(under) / static_cast<double>(s.per_target_similarity.size());
    }

    std::vector<std::uint64_t> seeds(static_cast<std::size_t>(cfg.eval_drift_seeds));
    const std::uint64_t drift_base = phase_seed(cfg.seed, "eval-drift");
    for (std::size_t j = 0; j < seeds.size(); ++j) seeds[j] = drift_base + j;
    const DriftResult dr = per_seed_drift(pre, post, seeds, rows, cols, sched,
                                          cfg.eval_sample_steps, ds.value_range);
    s.mean_l2 = dr.mean_l2;
    s.mean_ssim = dr.mean_ssim;

    const int m = cfg.eval_frechet_samples;
    const int steps = cfg.eval_sample_steps;
    const auto pre_a = sample_set(pre, sched, m, rows, cols, steps, cfg.seed, "frechet-pre-a");
    const auto pre_b = sample_set(pre, sched, m, rows, cols, steps, cfg.seed, "frechet-pre-b");
    const auto post_a = sample_set(post, sched, m, rows, cols, steps, cfg.seed, "frechet-post");
    s.frechet_pre = frechet_distance(post_a, pre_a);
    s.frechet_baseline = frechet_distance(pre_a, pre_b);
    s.frechet_real = frechet_distance(post_a, ds.samples);
    return s;
}

MetricReport to_report(const EvalSummary& s, const ExperimentConfig& cfg) {
    MetricReport r;
    r.forgetting_similarity = s.mean_similarity;
    r.forgotten = s.mean_similarity < cfg.eval_threshold;
    r.per_seed_l2 = s.mean_l2;
    r.ssim = s.mean_ssim;
    r.frechet_pre = s.frechet_pre;
    r.frechet_real = s.frechet_real;
    r.n_seeds = cfg.eval_drift_seeds;
    r.config_hash = config_hash(cfg);
    return r;
}

std::string report_csv(const std::vector<MetricReport>& reports) {
    std::string out =
        "config_hash,forgetting_similarity,forgotten,per_seed_l2,ssim,frechet_pre,"
        "frechet_real,n_seeds\n";
    for (const MetricReport& r : reports) {
        out += r.config_hash;
        out += ",";
        out += g6(r.forgetting_similarity);
        out += ",";
        out += r.forgotten ? "1" : "0";
        out += ",";
        out += g6(r.per_seed_l2);
        out += ",";
        out += g6(r.ssim);
        out += ",";
        out += g6(r.frechet_pre);
        out += ",";
        out += g6(r.frechet_real);
        out += ",";
        out += std::to_string(r.n_seeds);
        out += "\n";
    }
    return out;
}

std::string report_kv(const std::vector<MetricReport>& reports) {
    std::string out;
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const MetricReport& r = reports[i];
        if (i) out += "\n";
        out += "config_hash = " + r.config_hash + "\n";
        out += "forgetting_similarity = " + g6(r.forgetting_similarity) + "\n";
        out += std::string("forgotten = ") + (r.forgotten ? "true" : "false") + "\n";
        out += "per_seed_l2 = " + g6(r.per_seed_l2) + "\n";
        out += "ssim = " + g6(r.ssim) + "\n";
        out += "frechet_pre = " + g6(r.frechet_pre) + "\n";
        out += "frechet_real = " + g6(r.frechet_real) + "\n";
        out += "n_seeds = " + std::to_string(r.n_seeds) + "\n";
    }
    return out;
}

void export_report(const std::vector<MetricReport>& reports, const std::string& fmt,
                   const std::string& path) {
    if (reports.empty()) throw InvalidRange("export_report: no reports to export");
    std::string text;
    if (fmt == "csv") {
        text = report_csv(reports);
    } else if (fmt == "kv-text") {
        text = report_kv(reports);
    } else {
        throw InvalidRange("export_report: unknown format '" + fmt + "' (csv or kv-text)");
    }
    write_text(path, text);
}

std::string make_run_dir(const ExperimentConfig& cfg, const std::string& original_text) {
    const std::string hash8 = config_hash(cfg).substr(0, 8);
    const std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    char stamp[32];
    std::strftime(stamp, sizeof(stamp), "%Y%m%d-%H%M%S", &tm_utc);

    const fs::path base(cfg.out_dir);
    std::error_code ec;
    fs::create_directories(base, ec);
    if (ec) {
        throw IoFailure("cannot create output directory '" + cfg.out_dir + "': " + ec.message());
    }
    fs::path dir;
    for (int k = 0;; ++k) {
        std::string name = std::string("run-") + hash8 + "-" + stamp;
        if (k > 0) name += "-" + std::to_string(k + 1);
        dir = base / name;
        if (!fs::exists(dir)) break;
    }
    fs::create_directories(dir, ec);
    if (ec) throw IoFailure("cannot create run directory '" + dir.string() + "': " + ec.message());

    write_text(dir / "config-canonical.txt", canonical_text(cfg));
    if (!original_text.empty()) write_text(dir / "config.txt", original_text);
    return dir.string();
}

namespace {

void print_progress(int step, double loss) {
    std::printf("  step %6d  smoothed loss %.6f\n", step, loss);
    std::fflush(stdout);
}

DenoiserParams load_required(const std::string& key_name, const std::string& path,
                             const NoiseSchedule& sched) {
    if (path.empty()) {
        throw ConfigInvalid("this command needs '" + key_name +
                            "' to point at an existing checkpoint");
    }
    return load_checkpoint_for(path, sched).params;
}

DenoiserParams obtain_pretrained(const ExperimentConfig& cfg, const Dataset& ds,
                                 const NoiseSchedule& sched) {
    if (!cfg.unlearn_init_checkpoint.empty()) {
        return load_checkpoint_for(cfg.unlearn_init_checkpoint, sched).params;
    }
    std::printf("no unlearn.init_checkpoint set; pretraining inline (%d steps)\n",
                cfg.pretrain_steps);
    std::fflush(stdout);
    return pretrain_model(cfg, ds, sched, print_progress);
}

int cmd_pretrain(const ExperimentConfig& cfg, const std::string& dir, const Dataset& ds,
                 const NoiseSchedule& sched) {
    DenoiserParams p = pretrain_model(cfg, ds, sched, print_progress);
    const std::string path = dir + "/pretrained.ckpt";
    save_checkpoint(path, p, sched.hash(), cfg.seed);

    std::vector<Sample> probe(ds.samples.begin(),
                              ds.samples.begin() +
                                  static_cast<std::ptrdiff_t>(std::min<std::size_t>(
                                      ds.samples.size(), 32)));
    const double loss =
        estimate_loss(p, probe, sched, phase_seed(cfg.seed, "loss-probe"), 4);
    std::printf("pretrained checkpoint: %s\n", path.c_str());
    std::printf("probe loss: %.6f over %zu samples\n", loss, probe.size());
    return 0;
}

int cmd_unlearn(const ExperimentConfig& cfg, const std::string& dir, const Dataset& ds,
                const NoiseSchedule& sched) {
    DenoiserParams p = load_required("unlearn.init_checkpoint", cfg.unlearn_init_checkpoint,
                                     sched);
    const UnlearnTask task = make_unlearn_task(cfg, ds, sched);
    const SnapshotFn snap = [&](int iter, const DenoiserParams& sp, bool diagnostic) {
        char name[64];
        std::snprintf(name, sizeof(name), diagnostic ? "snapshot-%05d-diag.ckpt"
                                                     : "snapshot-%05d.ckpt", iter);
        save_checkpoint(dir + "/" + name, sp, sched.hash(), cfg.seed);
    };

    const UnlearnRunResult rr = unlearn_run(p, task, phase_seed(cfg.seed, "unlearn"), snap);

    std::string traces = trace_csv_header() + "\n";
    int conflicted = 0;
    for (const SurgeryTrace& tr : rr.traces) {
        traces += trace_csv_line(tr) + "\n";
        if (tr.conflicted) ++conflicted;
    }
    write_text(fs::path(dir) / "traces.csv", traces);

    const std::string post_path = dir + "/post.ckpt";
    save_checkpoint(post_path, p, sched.hash(), cfg.seed);
    std::printf("unlearned checkpoint: %s\n", post_path.c_str());
    std::printf("steps: %zu, conflicted: %d (%.1f%%)\n", rr.traces.size(), conflicted,
                rr.traces.empty() ? 0.0
                                  : 100.0 * conflicted / static_cast<double>(rr.traces.size()));
    return 0;
}

void print_eval(const EvalSummary& s) {
    std::printf("forgetting similarity: %.6f (forgotten fraction %.2f)\n", s.mean_similarity,
                s.forgotten_fraction);
    for (std::size_t k = 0; k < s.per_target_similarity.size(); ++k) {
        std::printf("  target %zu: %.6f\n", k, s.per_target_similarity[k]);
    }
    std::printf("per-seed drift: l2 %.6f, structural %.6f\n", s.mean_l2, s.mean_ssim);
    std::printf("distribution distances: pre %.6f (baseline %.6f), data %.6f\n", s.frechet_pre,
                s.frechet_baseline, s.frechet_real);
    std::fflush(stdout);
}

int cmd_eval(const ExperimentConfig& cfg, const std::string& dir, const Dataset& ds,
             const NoiseSchedule& sched) {
    const DenoiserParams pre = load_required("eval.pre_checkpoint", cfg.eval_pre_checkpoint,
                                             sched);
    const DenoiserParams post = load_required("eval.post_checkpoint", cfg.eval_post_checkpoint,
                                              sched);
    const EvalSummary s = evaluate_models(cfg, ds, sched, pre, post);
    const MetricReport rep = to_report(s, cfg);
    export_report({rep}, "csv", dir + "/report.csv");
    export_report({rep}, "kv-text", dir + "/report.txt");

    std::string extras = "frechet_baseline = " + g6(s.frechet_baseline) + "\n";
    for (std::size_t k = 0; k < s.per_target_similarity.size(); ++k) {
        extras += "target_" + std::to_string(k) +
                  "_similarity = " + g6(s.per_target_similarity[k]) + "\n";
    }
    write_text(fs::path(dir) / "eval-extras.txt", extras);

    print_eval(s);
    std::printf("report: %s\n", (dir + "/report.csv").c_str());
    return 0;
}

struct AblationRow {
    std::string variant;
    EvalSummary eval;
    MetricReport report;
};

EvalSummary run_variant(const ExperimentConfig& cfg, const Dataset& ds,
                        const NoiseSchedule& sched, const DenoiserParams& pre) {
    DenoiserParams p = pre;
    const UnlearnTask task = make_unlearn_task(cfg, ds, sched);
    unlearn_run(p, task, phase_seed(cfg.seed, "unlearn"));
    return evaluate_models(cfg, ds, sched, pre, p);
}

void write_ablation(const std::string& dir, const std::vector<AblationRow>& rows) {
    std::string csv =
        "variant,similarity,forgotten_fraction,per_seed_l2,ssim,frechet_pre,"
        "frechet_baseline,frechet_real\n";
    std::vector<MetricReport> reports;
    for (const AblationRow& r : rows) {
        csv += r.variant + "," + g6(r.eval.mean_similarity) + "," +
               g6(r.eval.forgotten_fraction) + "," + g6(r.eval.mean_l2) + "," +
               g6(r.eval.mean_ssim) + "," + g6(r.eval.frechet_pre) + "," +
               g6(r.eval.frechet_baseline) + "," + g6(r.eval.frechet_real) + "\n";
        reports.push_back(r.report);
    }
    write_text(fs::path(dir) / "ablation.csv", csv);
    export_report(reports, "csv", dir + "/report.csv");
    std::printf("%s", csv.c_str());
    std::fflush(stdout);
}

int cmd_ablate_timestep(const ExperimentConfig& cfg, const std::string& dir, const Dataset& ds,
                        const NoiseSchedule& sched) {
    const DenoiserParams pre = obtain_pretrained(cfg, ds, sched);
    std::vector<AblationRow> rows;

    ExperimentConfig aware = cfg;
    aware.unlearn_weight_mode = WeightMode::kTimestepAware;
    rows.push_back({"timestep-aware", run_variant(aware, ds, sched, pre), {}});
    rows.back().report = to_report(rows.back().eval, aware);

    ExperimentConfig constant = cfg;
    constant.unlearn_weight_mode = WeightMode::kConstant;
    rows.push_back({"constant", run_variant(constant, ds, sched, pre), {}});
    rows.back().report = to_report(rows.back().eval, constant);

    write_ablation(dir, rows);
    return 0;
}

int cmd_ablate_surgery(const ExperimentConfig& cfg, const std::string& dir, const Dataset& ds,
                       const NoiseSchedule& sched) {
    const DenoiserParams pre = obtain_pretrained(cfg, ds, sched);
    const std::pair<const char*, SurgeryMode> variants[] = {
        {"none", SurgeryMode::kNone},
        {"project-forget", SurgeryMode::kProjectForget},
        {"project-both", SurgeryMode::kProjectBoth},
    };
    std::vector<AblationRow> rows;
    for (const auto& [name, mode] : variants) {
        ExperimentConfig v = cfg;
        v.unlearn_surgery = mode;
        rows.push_back({name, run_variant(v, ds, sched, pre), {}});
        rows.back().report = to_report(rows.back().eval, v);
    }
    write_ablation(dir, rows);
    return 0;
}

int cmd_ablate_surrogate(const ExperimentConfig& cfg, const std::string& dir, const Dataset& ds,
                         const NoiseSchedule& sched) {
    if (cfg.surrogate_sweep_values.empty()) {
        throw ConfigInvalid("ablate-surrogate needs surrogate.sweep_values (a comma list of "
                            "attribute values to sweep)");
    }
    const DenoiserParams pre = obtain_pretrained(cfg, ds, sched);

    // Order the sweep by how far each value moves the first target's
    // attribute, so the emitted rows trace the trade-off curve left to right.
    std::vector<int> values = cfg.surrogate_sweep_values;
    if (cfg.dataset_kind == DatasetKind::kGlyphs &&
        cfg.surrogate_strategy == SurrogateStrategy::kAttributeEdit &&
        !cfg.unlearn_forget_indices.empty()) {
        const GlyphAttrs& a =
            ds.attrs.at(static_cast<std::size_t>(cfg.unlearn_forget_indices.front()));
        const int current = glyph_attr_value(a, glyph_attribute_from_name(cfg.surrogate_attribute));
        std::stable_sort(values.begin(), values.end(), [&](int l, int r) {
            return std::abs(l - current) < std::abs(r - current);
        });
    }

    std::vector<AblationRow> rows;
    for (int v : values) {
        ExperimentConfig variant = cfg;
        variant.surrogate_value = v;
        const std::string label = cfg.surrogate_attribute + "=" + std::to_string(v);
        rows.push_back({label, run_variant(variant, ds, sched, pre), {}});
        rows.back().report = to_report(rows.back().eval, variant);
    }
    write_ablation(dir, rows);
    return 0;
}

int cmd_ridge_demo(const ExperimentConfig& cfg, const std::string& dir) {
    const std::size_t n = cfg.ridge_xs.size();
    RidgeProblem p;
    p.x = DenseMatrix(n, 1);
    for (std::size_t i = 0; i < n; ++i) p.x.at(i, 0) = cfg.ridge_xs[i];
    p.y = cfg.ridge_ys;
    p.penalty = cfg.ridge_penalty;

    const auto row = static_cast<std::size_t>(cfg.ridge_row);
    const double y_i = p.y[row];
    DenseVector grid(static_cast<std::size_t>(cfg.ridge_sweep_count));
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double f = static_cast<double>(k) / static_cast<double>(grid.size() - 1);
        grid[k] = y_i - cfg.ridge_sweep_halfwidth + 2.0 * cfg.ridge_sweep_halfwidth * f;
    }

    const std::vector<RidgeDemoRow> sweep = ridge_demo_sweep(p, row, grid);
    std::string csv = "y_new,exact_shift,surrogate_shift,ratio\n";
    const RidgeDemoRow* best = nullptr;
    for (const RidgeDemoRow& r : sweep) {
        csv += g6(r.y_new) + "," + g6(r.exact_shift) + "," + g6(r.surrogate_shift) + "," +
               g6(r.ratio) + "\n";
        // The no-op grid point (y_new equal to the current label) moves the
        // solution zero by construction; only genuine relabelings count.
        if (r.surrogate_shift > 0.0 && r.surrogate_shift < r.exact_shift &&
            (!best || r.ratio > best->ratio)) {
            best = &r;
        }
    }
    write_text(fs::path(dir) / "ridge-demo.csv", csv);
    std::printf("sweep written: %s (%zu rows)\n", (dir + "/ridge-demo.csv").c_str(),
                sweep.size());

    if (!best) {
        std::printf("no relabeling in the sweep moved the solution less than deletion did\n");
        return 4;
    }
    std::printf("best relabeling: y_new=%.6g moves the solution %.6g vs %.6g for deletion "
                "(ratio %.6g)\n",
                best->y_new, best->surrogate_shift, best->exact_shift, best->ratio);
    return 0;
}

}  // namespace

int run_command(const std::string& cmd, const ExperimentConfig& cfg,
                const std::string& original_config_text) {
    validate_config(cfg);
    const std::string dir = make_run_dir(cfg, original_config_text);
    std::printf("run directory: %s\n", dir.c_str());
    std::fflush(stdout);

    if (cmd == "ridge-demo") return cmd_ridge_demo(cfg, dir);

    const Dataset ds = make_dataset(cfg);
    const NoiseSchedule sched = make_schedule_for(cfg);
    if (cmd == "pretrain") return cmd_pretrain(cfg, dir, ds, sched);
    if (cmd == "unlearn") return cmd_unlearn(cfg, dir, ds, sched);
    if (cmd == "eval") return cmd_eval(cfg, dir, ds, sched);
    if (cmd == "ablate-timestep") return cmd_ablate_timestep(cfg, dir, ds, sched);
    if (cmd == "ablate-surgery") return cmd_ablate_surgery(cfg, dir, ds, sched);
    if (cmd == "ablate-surrogate") return cmd_ablate_surrogate(cfg, dir, ds, sched);
    throw ConfigInvalid("unknown command '" + cmd +
                        "'; expected pretrain, unlearn, eval, ablate-timestep, "
                        "ablate-surgery, ablate-surrogate or ridge-demo");
}

}  // namespace unprompt
