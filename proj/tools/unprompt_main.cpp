#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "unprompt/config.hpp"
#include "unprompt/errors.hpp"
#include "unprompt/harness.hpp"

namespace {

// Exit codes: 0 success, 2 configuration problem, 3 missing or unusable
// artifact, 4 numerical failure.
constexpr int kExitConfig = 2;
constexpr int kExitArtifact = 3;
constexpr int kExitNumerical = 4;

int report(const char* kind, const std::exception& e, int code) {
    std::fprintf(stderr, "error (%s): %s\n", kind, e.what());
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"prompt-free instance unlearning for small diffusion models"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    std::string dataset_kind;
    std::uint64_t dataset_seed = 0;
    int dataset_size = 0;
    int threads = 0;
    std::vector<std::string> overrides;

    const std::pair<const char*, const char*> commands[] = {
        {"pretrain", "train a fresh model and write its checkpoint"},
        {"unlearn", "run the unlearning loop from a pretrained checkpoint"},
        {"eval", "score a pre/post checkpoint pair"},
        {"ablate-timestep", "compare timestep-aware vs constant loss weighting"},
        {"ablate-surgery", "compare gradient projection variants"},
        {"ablate-surrogate", "sweep surrogate edit magnitudes"},
        {"ridge-demo", "closed-form unlearning comparison on a small regression"},
    };
    for (const auto& [name, desc] : commands) {
        CLI::App* sub = app.add_subcommand(name, desc);
        sub->add_option("--config", config_path, "config file (key = value lines)");
        sub->add_option("--seed", seed, "master seed override");
        sub->add_option("--out", out_dir, "output directory override");
        sub->add_option("--dataset", dataset_kind, "dataset kind override (glyphs|mixture2d)");
        sub->add_option("--dataset-seed", dataset_seed, "dataset seed override");
        sub->add_option("--dataset-size", dataset_size, "dataset size override");
        sub->add_option("--threads", threads, "worker cap (same as UNPROMPT_THREADS)");
        sub->add_option("--set", overrides, "extra 'key=value' overrides, applied last")
            ->take_all();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    const CLI::App* sub = app.get_subcommands().front();
    const std::string cmd = sub->get_name();

    try {
        unprompt::ExperimentConfig cfg;
        std::string original_text;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw unprompt::ConfigInvalid("cannot open config file '" + config_path + "'");
            std::stringstream buf;
            buf << in.rdbuf();
            original_text = buf.str();
            cfg = unprompt::parse_config(original_text, config_path);
        }

        if (sub->count("--seed")) {
            unprompt::set_config_key(cfg, "seed", std::to_string(seed), "--seed");
        }
        if (sub->count("--out")) cfg.out_dir = out_dir;
        if (sub->count("--dataset")) {
            unprompt::set_config_key(cfg, "dataset.kind", dataset_kind, "--dataset");
        }
        if (sub->count("--dataset-seed")) {
            unprompt::set_config_key(cfg, "dataset.seed", std::to_string(dataset_seed),
                                     "--dataset-seed");
        }
        if (sub->count("--dataset-size")) {
            unprompt::set_config_key(cfg, "dataset.size", std::to_string(dataset_size),
                                     "--dataset-size");
        }
        for (const std::string& kv : overrides) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) {
                throw unprompt::ConfigInvalid("--set expects key=value, got '" + kv + "'");
            }
            unprompt::set_config_key(cfg, kv.substr(0, eq), kv.substr(eq + 1), "--set");
        }
        if (sub->count("--threads")) {
            if (threads < 1) throw unprompt::ConfigInvalid("--threads must be >= 1");
            setenv("UNPROMPT_THREADS", std::to_string(threads).c_str(), 1);
        }

        return unprompt::run_command(cmd, cfg, original_text);
    } catch (const unprompt::ConfigInvalid& e) {
        return report("config", e, kExitConfig);
    } catch (const unprompt::InvalidRange& e) {
        return report("config", e, kExitConfig);
    } catch (const unprompt::InvalidArch& e) {
        return report("config", e, kExitConfig);
    } catch (const unprompt::StrategyDatasetMismatch& e) {
        return report("config", e, kExitConfig);
    } catch (const unprompt::DegenerateEdit& e) {
        return report("config", e, kExitConfig);
    } catch (const unprompt::TimestepOutOfRange& e) {
        return report("config", e, kExitConfig);
    } catch (const unprompt::MissingCheckpoint& e) {
        return report("artifact", e, kExitArtifact);
    } catch (const unprompt::IoFailure& e) {
        return report("artifact", e, kExitArtifact);
    } catch (const unprompt::VersionMismatch& e) {
        return report("artifact", e, kExitArtifact);
    } catch (const unprompt::ScheduleMismatch& e) {
        return report("artifact", e, kExitArtifact);
    } catch (const unprompt::ArchMismatch& e) {
        return report("artifact", e, kExitArtifact);
    } catch (const std::exception& e) {
        return report("numerical", e, kExitNumerical);
    }
}
