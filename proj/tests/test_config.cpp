#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <string>

#include "unprompt/config.hpp"
#include "unprompt/errors.hpp"

using namespace unprompt;

TEST_CASE("empty config yields the documented defaults") {
    const ExperimentConfig cfg = parse_config("");
    CHECK(cfg.seed == 7);
    CHECK(cfg.dataset_kind == DatasetKind::kGlyphs);
    CHECK(cfg.dataset_size == 192);
    CHECK(cfg.schedule_t_max == 100);
    CHECK(cfg.schedule_beta_min == 1e-3);
    CHECK(cfg.schedule_beta_max == 0.2);
    CHECK(cfg.model_hidden == std::vector<int>{128, 128});
    CHECK(cfg.unlearn_weight_mode == WeightMode::kTimestepAware);
    CHECK(cfg.unlearn_surgery == SurgeryMode::kProjectForget);
    CHECK(cfg.surrogate_strategy == SurrogateStrategy::kAttributeEdit);
    CHECK(cfg.eval_t_mid == 50);
    CHECK(cfg.eval_threshold == 0.4);
}

TEST_CASE("comments, blank lines, and spacing are ignored") {
    const std::string text =
        "# a full-line comment\n"
        "\n"
        "  seed=41   \n"
        "unlearn.iters = 12  # trailing comment\n"
        "\t\n";
    const ExperimentConfig cfg = parse_config(text);
    CHECK(cfg.seed == 41);
    CHECK(cfg.unlearn_iters == 12);
}

TEST_CASE("key order and number formatting do not change the hash") {
    const ExperimentConfig a = parse_config("unlearn.lr = 2.5e-4\nseed = 9\n");
    const ExperimentConfig b = parse_config("seed = 9\nunlearn.lr = 0.00025\n");
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash(a).size() == 16);

    const ExperimentConfig c = parse_config("seed = 10\nunlearn.lr = 2.5e-4\n");
    CHECK(config_hash(a) != config_hash(c));
}

TEST_CASE("canonical text is a fixed point under reparsing") {
    ExperimentConfig cfg = parse_config("");
    set_config_key(cfg, "model.hidden", "192, 96");
    set_config_key(cfg, "dataset.sigma", "0.3");
    set_config_key(cfg, "unlearn.forget_indices", "3,1,4");
    const std::string canon = canonical_text(cfg);
    const ExperimentConfig again = parse_config(canon);
    CHECK(canonical_text(again) == canon);
    CHECK(config_hash(again) == config_hash(cfg));
}

TEST_CASE("integer lists accept spaces and empty lists") {
    const ExperimentConfig cfg =
        parse_config("model.hidden = 64 , 32\nsurrogate.sweep_values =\n");
    CHECK(cfg.model_hidden == std::vector<int>{64, 32});
    CHECK(cfg.surrogate_sweep_values.empty());
}

TEST_CASE("malformed lines are rejected with their line number") {
    CHECK_THROWS_AS(parse_config("seed = 1\nnot a key value line\n"), ConfigInvalid);
    try {
        parse_config("seed = 1\nnot a key value line\n", "somefile");
    } catch (const ConfigInvalid& e) {
        const std::string msg = e.what();
        CHECK(msg.find("somefile") != std::string::npos);
        CHECK(msg.find("line 2") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config("= 3\n"), ConfigInvalid);
}

TEST_CASE("unknown and duplicate keys are hard errors") {
    CHECK_THROWS_AS(parse_config("dataset.sice = 10\n"), ConfigInvalid);
    CHECK_THROWS_AS(parse_config("seed = 1\nseed = 2\n"), ConfigInvalid);
}

TEST_CASE("value conversion failures are hard errors") {
    CHECK_THROWS_AS(parse_config("unlearn.iters = twelve\n"), ConfigInvalid);
    CHECK_THROWS_AS(parse_config("unlearn.lr = 1e\n"), ConfigInvalid);
    CHECK_THROWS_AS(parse_config("unlearn.iters = 12x\n"), ConfigInvalid);
    CHECK_THROWS_AS(parse_config("unlearn.reset_moments = yes\n"), ConfigInvalid);
    CHECK_THROWS_AS(parse_config("dataset.kind = emnist\n"), ConfigInvalid);
    CHECK_THROWS_AS(parse_config("unlearn.weight_mode = linear\n"), ConfigInvalid);
    CHECK_THROWS_AS(parse_config("unlearn.surgery = project\n"), ConfigInvalid);
    CHECK_THROWS_AS(parse_config("surrogate.strategy = swap\n"), ConfigInvalid);
}

TEST_CASE("presets load a bundle and explicit keys override it") {
    const ExperimentConfig base = parse_config("preset = paper-ddpm-analogue\n");
    CHECK(base.unlearn_iters == 240);
    CHECK(base.unlearn_lr == 2.5e-4);
    CHECK(base.unlearn_weight_slope == 5e-5);

    // Explicit keys win no matter where the preset line sits in the file.
    const ExperimentConfig before =
        parse_config("unlearn.iters = 7\npreset = paper-ddpm-analogue\n");
    const ExperimentConfig after =
        parse_config("preset = paper-ddpm-analogue\nunlearn.iters = 7\n");
    CHECK(before.unlearn_iters == 7);
    CHECK(after.unlearn_iters == 7);
    CHECK(before.unlearn_lr == 2.5e-4);

    const ExperimentConfig sd3 = parse_config("preset = paper-sd3-analogue\n");
    CHECK(sd3.unlearn_iters == 100);
    CHECK(sd3.unlearn_lr == 5e-4);
    CHECK(sd3.unlearn_weight_slope == 2e-4);

    CHECK_THROWS_AS(parse_config("preset = warp-speed\n"), ConfigInvalid);
}

TEST_CASE("set_config_key matches the parser and rejects unknown keys") {
    ExperimentConfig cfg = parse_config("");
    set_config_key(cfg, "eval.threshold", "0.25");
    CHECK(cfg.eval_threshold == 0.25);
    set_config_key(cfg, "preset", "paper-sd3-analogue");
    CHECK(cfg.unlearn_iters == 100);
    CHECK_THROWS_AS(set_config_key(cfg, "eval.treshold", "0.25"), ConfigInvalid);
    CHECK_THROWS_AS(set_config_key(cfg, "eval.threshold", "often"), ConfigInvalid);
}

TEST_CASE("cross-field validation rejects inconsistent configs") {
    CHECK_THROWS_AS(parse_config("dataset.size = 0\n"), ConfigInvalid);
    CHECK_THROWS_AS(parse_config("model.embed_dim = 7\n"), ConfigInvalid);
    CHECK_THROWS_AS(parse_config("model.hidden =\n"), ConfigInvalid);
    CHECK_THROWS_AS(parse_config("schedule.beta_max = 1.5\n"), ConfigInvalid);
    CHECK_THROWS_AS(parse_config("eval.t_mid = 101\n"), ConfigInvalid);
    CHECK_THROWS_AS(parse_config("unlearn.lambda_const = 1.5\n"), ConfigInvalid);
    CHECK_THROWS_AS(parse_config("unlearn.forget_indices = 192\n"), ConfigInvalid);
    CHECK_THROWS_AS(parse_config("surrogate.attribute = texture\n"), ConfigInvalid);
    CHECK_THROWS_AS(
        parse_config("surrogate.strategy = add-noise\nsurrogate.sigma = 0\n"),
        ConfigInvalid);
    CHECK_THROWS_AS(parse_config("ridge.xs = 1,2\nridge.ys = 1\n"), ConfigInvalid);
    CHECK_THROWS_AS(parse_config("ridge.row = 5\n"), ConfigInvalid);
}

TEST_CASE("config files load from disk and missing files throw") {
    const std::string path = "/tmp/unprompt_test_config.cfg";
    {
        std::ofstream out(path);
        out << "seed = 123\nunlearn.iters = 5\n";
    }
    const ExperimentConfig cfg = load_config_file(path);
    CHECK(cfg.seed == 123);
    CHECK(cfg.unlearn_iters == 5);
    std::remove(path.c_str());
    CHECK_THROWS_AS(load_config_file("/tmp/unprompt_no_such_file.cfg"), ConfigInvalid);
}
