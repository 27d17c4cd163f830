#include "dcl/config.hpp"

#include "dcl/coupling.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace dcl {

namespace {

constexpr std::array<std::pair<Mode, const char*>, 7> kModeNames{{
    {Mode::Recover, "recover"},
    {Mode::Home, "home"},
    {Mode::Formation, "formation"},
    {Mode::SweepRotation, "sweep-rotation"},
    {Mode::SweepRotationFormation, "sweep-rotation-formation"},
    {Mode::Noise, "noise"},
    {Mode::Offset, "offset"},
}};

bool is_formation_mode(Mode m) {
    return m == Mode::Formation || m == Mode::SweepRotationFormation || m == Mode::Offset;
}

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

double parse_double(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    double value = 0.0;
    const char* begin = t.data();
    const char* end = t.data() + t.size();
    if (!t.empty() && *begin == '+') ++begin;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (t.empty() || ec != std::errc() || ptr != end || !std::isfinite(value)) {
        throw ConfigError(key, "malformed number '" + t + "'");
    }
    return value;
}

template <typename Int>
Int parse_integer(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    Int value{};
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
        throw ConfigError(key, "malformed integer '" + t + "'");
    }
    return value;
}

Vector parse_coords(const std::string& key, const std::string& text) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) values.push_back(parse_double(key, item));
    if (values.size() < 2) throw ConfigError(key, "expected at least 2 comma-separated coordinates");
    return Eigen::Map<Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

std::string format_coords(const Vector& v) {
    std::string out;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += format_number(v[i]);
    }
    return out;
}

Vector point2(double x, double y) {
    Vector v(2);
    v << x, y;
    return v;
}

bool has(const std::vector<std::string>& keys, const char* key) {
    return std::find(keys.begin(), keys.end(), key) != keys.end();
}

}  // namespace

const char* to_string(Mode mode) {
    for (const auto& [m, name] : kModeNames) {
        if (m == mode) return name;
    }
    return "unknown";
}

std::optional<Mode> parse_mode(const std::string& text) {
    for (const auto& [m, name] : kModeNames) {
        if (text == name) return m;
    }
    return std::nullopt;
}

SimConfig ExperimentConfig::sim() const {
    SimConfig c;
    c.dt = dt;
    c.t_max = t_max;
    c.conv_tol = conv_tol;
    c.div_tol = div_tol;
    c.seed = seed;
    return c;
}

std::vector<Vector> default_homing_anchors() {
    return {point2(0, 0), point2(10, 0), point2(0, 10)};
}

std::vector<Vector> default_formation() {
    return {point2(-30, -15), point2(30, -15), point2(24, 21), point2(-18, 27)};
}

std::string format_number(double value) {
    if (value == 0.0) return "0";  // folds -0
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), ptr);
}

ExperimentConfig parse_config_text(const std::string& text, Mode fallback_mode,
                                   std::vector<std::string>* explicit_keys) {
    ExperimentConfig c;
    c.mode = fallback_mode;
    std::vector<std::string> seen;

    std::stringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no), "expected 'key = value'");
        }
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        seen.push_back(key);

        if (key == "mode") {
            const auto m = parse_mode(value);
            if (!m) throw ConfigError(key, "unknown mode '" + value + "'");
            c.mode = *m;
        } else if (key == "anchor") {
            c.anchors.push_back(parse_coords(key, value));
        } else if (key == "alpha") {
            c.alpha = parse_double(key, value);
        } else if (key == "goal") {
            c.goal = parse_coords(key, value);
        } else if (key == "epsilon") {
            c.epsilon = parse_double(key, value);
        } else if (key == "theta") {
            c.theta = parse_double(key, value);
        } else if (key == "r") {
            c.r = parse_coords(key, value);
        } else if (key == "dt") {
            c.dt = parse_double(key, value);
        } else if (key == "t_max") {
            c.t_max = parse_double(key, value);
        } else if (key == "conv_tol") {
            c.conv_tol = parse_double(key, value);
        } else if (key == "div_tol") {
            c.div_tol = parse_double(key, value);
        } else if (key == "seed") {
            c.seed = parse_integer<std::uint64_t>(key, value);
        } else if (key == "trials") {
            c.trials = parse_integer<int>(key, value);
        } else if (key == "n_theta") {
            c.n_theta = parse_integer<int>(key, value);
        } else if (key == "noise_level") {
            c.noise_levels.push_back(parse_double(key, value));
        } else if (key == "start") {
            c.starts.push_back(parse_coords(key, value));
        } else if (key == "output_dir") {
            c.output_dir = value;
        } else {
            throw ConfigError(key, "unknown key");
        }
    }
    if (explicit_keys) *explicit_keys = std::move(seen);
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path, Mode fallback_mode,
                             std::vector<std::string>* explicit_keys) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot read '" + path.string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), fallback_mode, explicit_keys);
}

ExperimentConfig finalize(ExperimentConfig c, const std::vector<std::string>& keys,
                          const ConfigOverrides& o) {
    if (o.seed) c.seed = *o.seed;
    if (o.output_dir) c.output_dir = *o.output_dir;
    if (o.alpha) c.alpha = *o.alpha;
    if (o.dt) c.dt = *o.dt;
    if (o.t_max) c.t_max = *o.t_max;
    if (o.epsilon) c.epsilon = *o.epsilon;
    if (o.theta) c.theta = *o.theta;
    if (o.trials) c.trials = *o.trials;

    const bool formation = is_formation_mode(c.mode);
    if (c.anchors.empty()) c.anchors = formation ? default_formation() : default_homing_anchors();

    const int n = static_cast<int>(c.anchors.front().size());
    for (const auto& a : c.anchors) {
        if (a.size() != n) throw ConfigError("anchor", "all anchors must share one dimension");
    }
    if (static_cast<int>(c.anchors.size()) < n + 1) {
        throw ConfigError("anchor", "degenerate anchors: need at least " + std::to_string(n + 1) +
                                        " anchors in " + std::to_string(n) + " dimensions");
    }
    try {
        (void)build_components(AnchorSet(c.anchors));
    } catch (const DegenerateAnchors& e) {
        throw ConfigError("anchor", e.what());
    }

    if (c.goal.size() == 0) c.goal = Vector::Zero(n);
    if (c.r.size() == 0) c.r = c.mode == Mode::Offset ? Vector::Constant(n, 10.0) : Vector::Zero(n);

    if (!has(keys, "epsilon") && !o.epsilon) {
        switch (c.mode) {
            case Mode::Formation:
            case Mode::Offset: c.epsilon = 10.0; break;
            case Mode::SweepRotation: c.epsilon = 0.001; break;
            case Mode::SweepRotationFormation: c.epsilon = 0.1; break;
            default: c.epsilon = 0.0; break;
        }
    }
    if (!has(keys, "trials") && !o.trials) {
        switch (c.mode) {
            case Mode::SweepRotation:
            case Mode::SweepRotationFormation: c.trials = 100; break;
            case Mode::Formation: c.trials = 20; break;
            case Mode::Offset: c.trials = 1; break;
            default: c.trials = c.starts.empty() ? 10 : static_cast<int>(c.starts.size()); break;
        }
    }
    if (c.mode == Mode::Noise && c.noise_levels.empty()) c.noise_levels = {0.0, 5.0, 10.0};

    if (c.goal.size() != n) throw ConfigError("goal", "dimension must match anchors");
    if (c.r.size() != n) throw ConfigError("r", "dimension must match anchors");
    if (!(c.alpha < 0.0)) throw ConfigError("alpha", "gain must be negative for a stable loop");
    if (!(c.epsilon >= 0.0)) throw ConfigError("epsilon", "must be nonnegative");
    for (double e : c.noise_levels) {
        if (!(e >= 0.0)) throw ConfigError("noise_level", "must be nonnegative");
    }
    if (c.trials < 1) throw ConfigError("trials", "must be at least 1");
    if (c.n_theta < 1) throw ConfigError("n_theta", "must be at least 1");
    if (c.theta != 0.0 && n != 2) throw ConfigError("theta", "rotations are planar (n = 2)");
    if ((c.mode == Mode::SweepRotation || c.mode == Mode::SweepRotationFormation) && n != 2) {
        throw ConfigError("anchor", "rotation sweeps need planar anchors");
    }
    if (c.output_dir.empty()) throw ConfigError("output_dir", "must not be empty");
    try {
        c.sim().validate();
    } catch (const UsageError& e) {
        const std::string msg = e.what();
        const std::string field = msg.rfind("dt", 0) == 0      ? "dt"
                                  : msg.rfind("t_max", 0) == 0 ? "t_max"
                                                               : "conv_tol";
        throw ConfigError(field, msg);
    }

    const bool uses_starts = c.mode == Mode::Recover || c.mode == Mode::Home || c.mode == Mode::Noise;
    if (uses_starts && c.starts.empty()) c.starts = random_starts(c.trials, n, 20.0, c.seed);
    for (const auto& s : c.starts) {
        if (s.size() != n) throw ConfigError("start", "dimension must match anchors");
    }
    return c;
}

ExperimentConfig parse_config(const std::string& text, Mode fallback_mode,
                              const ConfigOverrides& overrides) {
    std::vector<std::string> keys;
    ExperimentConfig c = parse_config_text(text, fallback_mode, &keys);
    return finalize(std::move(c), keys, overrides);
}

std::string serialize(const ExperimentConfig& c) {
    std::ostringstream out;
    out << "mode = " << to_string(c.mode) << '\n';
    for (const auto& a : c.anchors) out << "anchor = " << format_coords(a) << '\n';
    out << "alpha = " << format_number(c.alpha) << '\n';
    out << "goal = " << format_coords(c.goal) << '\n';
    out << "epsilon = " << format_number(c.epsilon) << '\n';
    out << "theta = " << format_number(c.theta) << '\n';
    out << "r = " << format_coords(c.r) << '\n';
    out << "dt = " << format_number(c.dt) << '\n';
    out << "t_max = " << format_number(c.t_max) << '\n';
    out << "conv_tol = " << format_number(c.conv_tol) << '\n';
    out << "div_tol = " << format_number(c.div_tol) << '\n';
    out << "seed = " << c.seed << '\n';
    out << "trials = " << c.trials << '\n';
    out << "n_theta = " << c.n_theta << '\n';
    for (double e : c.noise_levels) out << "noise_level = " << format_number(e) << '\n';
    for (const auto& s : c.starts) out << "start = " << format_coords(s) << '\n';
    out << "output_dir = " << c.output_dir << '\n';
    return out.str();
}

}  // namespace dcl
