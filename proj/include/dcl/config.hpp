#pragma once

#include "dcl/core.hpp"
#include "dcl/sim.hpp"

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dcl {

enum class Mode { Recover, Home, Formation, SweepRotation, SweepRotationFormation, Noise, Offset };

const char* to_string(Mode mode);
std::optional<Mode> parse_mode(const std::string& text);

/// Invalid configuration; `field()` names the offending key.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& message)
        : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

/// Fully resolved experiment description. Every field has a value after
/// parsing; mode-dependent defaults are filled by `finalize`.
struct ExperimentConfig {
    Mode mode = Mode::Home;
    /// Anchor set for homing modes, desired formation for formation modes.
    std::vector<Vector> anchors;
    double alpha = -5.0;
    Vector goal;
    double epsilon = 0.0;
    double theta = 0.0;
    Vector r;
    double dt = 0.01;
    double t_max = 50.0;
    double conv_tol = 1e-6;
    double div_tol = 1e6;
    std::uint64_t seed = 0;
    int trials = 0;
    int n_theta = 100;
    std::vector<double> noise_levels;
    std::vector<Vector> starts;
    std::string output_dir = "out";

    int dim() const { return anchors.empty() ? 2 : static_cast<int>(anchors.front().size()); }
    SimConfig sim() const;
    AnchorSet anchor_set() const { return AnchorSet(anchors); }
};

/// Raw key/value overrides, as given on the command line. Unset entries keep
/// the file (or default) value.
struct ConfigOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::string> output_dir;
    std::optional<double> alpha;
    std::optional<double> dt;
    std::optional<double> t_max;
    std::optional<double> epsilon;
    std::optional<double> theta;
    std::optional<int> trials;
};

/// Default anchors for homing modes: a right triangle with 10-unit legs.
std::vector<Vector> default_homing_anchors();
/// Default desired formation for formation modes: an irregular quadrilateral.
std::vector<Vector> default_formation();

/// Parses flat `key = value` text. Coordinate keys (`anchor`, `start`) and
/// `noise_level` repeat; `#` starts a comment. Unset keys keep their defaults
/// unless listed in `explicit_keys`. Does not validate; see `finalize`.
ExperimentConfig parse_config_text(const std::string& text, Mode fallback_mode,
                                   std::vector<std::string>* explicit_keys = nullptr);

ExperimentConfig load_config(const std::filesystem::path& path, Mode fallback_mode,
                             std::vector<std::string>* explicit_keys = nullptr);

/// Applies overrides, fills mode-dependent defaults for keys absent from
/// `explicit_keys`, then validates. Throws ConfigError naming the field.
ExperimentConfig finalize(ExperimentConfig config, const std::vector<std::string>& explicit_keys,
                          const ConfigOverrides& overrides = {});

/// Parse + finalize in one go.
ExperimentConfig parse_config(const std::string& text, Mode fallback_mode,
                              const ConfigOverrides& overrides = {});

/// Canonical text form; parse_config(serialize(c)) reproduces c exactly.
std::string serialize(const ExperimentConfig& config);

/// Shortest decimal text that reads back to the same double.
std::string format_number(double value);

}  // namespace dcl
