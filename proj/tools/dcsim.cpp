// dcsim: distance-coupled localization and control experiments.

#include "dcl/config.hpp"
#include "dcl/coupling.hpp"
#include "dcl/formation.hpp"
#include "dcl/runner.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"Distance-coupled localization and control simulator"};
    app.require_subcommand(1);

    std::string config_path;
    dcl::ConfigOverrides overrides;
    bool print_config = false;

    const std::vector<std::pair<const char*, const char*>> commands{
        {"recover", "Recover positions from anchor distances"},
        {"home", "Drive one agent to its goal using anchor distances"},
        {"formation", "Drive agents into the desired formation from perturbed starts"},
        {"sweep-rotation", "Divergence ratio of homing vs anchor rotation"},
        {"sweep-rotation-formation", "Divergence ratio of the formation controller vs rotation"},
        {"noise", "Homing under uniform measurement noise"},
        {"offset", "Two formation runs whose starts differ by a translation"},
    };
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "Flat key = value config file");
        sub->add_option("--seed", overrides.seed, "Root random seed");
        sub->add_option("--out", overrides.output_dir, "Output directory");
        sub->add_option("--alpha", overrides.alpha, "Gain, C = alpha I");
        sub->add_option("--dt", overrides.dt, "Euler step [s]");
        sub->add_option("--tmax", overrides.t_max, "Simulated time limit [s]");
        sub->add_option("--epsilon", overrides.epsilon, "Noise / perturbation magnitude");
        sub->add_option("--theta", overrides.theta, "Anchor rotation [rad]");
        sub->add_option("--trials", overrides.trials, "Trials or random starts");
        sub->add_flag("--print-config", print_config, "Print the resolved config and exit");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : dcl::kExitConfig;
    }

    const std::string mode_name = app.get_subcommands().front()->get_name();
    const dcl::Mode mode = *dcl::parse_mode(mode_name);

    dcl::ExperimentConfig config;
    try {
        std::vector<std::string> keys;
        dcl::ExperimentConfig raw = config_path.empty()
                                        ? dcl::parse_config_text("", mode, &keys)
                                        : dcl::load_config(config_path, mode, &keys);
        raw.mode = mode;
        config = dcl::finalize(std::move(raw), keys, overrides);
    } catch (const dcl::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return dcl::kExitConfig;
    } catch (const dcl::UsageError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return dcl::kExitConfig;
    }

    if (print_config) {
        std::cout << dcl::serialize(config);
        return dcl::kExitOk;
    }

    try {
        const dcl::RunReport report = dcl::run(config);
        for (const auto& [key, value] : report.summary) std::cout << key << " = " << value << '\n';
        std::cout << "wrote " << report.files.size() << " files to " << config.output_dir << '\n';
    } catch (const dcl::IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return dcl::kExitIo;
    } catch (const dcl::DegenerateAnchors& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return dcl::kExitNumerical;
    } catch (const dcl::DegenerateConfiguration& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return dcl::kExitNumerical;
    } catch (const dcl::UsageError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return dcl::kExitConfig;
    }
    return dcl::kExitOk;
}
