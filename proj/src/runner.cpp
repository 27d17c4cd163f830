#include "dcl/runner.hpp"

#include "dcl/plot.hpp"
#include "dcl/sim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace dcl {

const std::string* RunReport::find(const std::string& key) const {
    for (const auto& [k, v] : summary) {
        if (k == key) return &v;
    }
    return nullptr;
}

namespace {

namespace fs = std::filesystem;

std::string coord_header(const std::string& prefix, int n) {
    std::string out;
    for (int i = 1; i <= n; ++i) out += "," + prefix + std::to_string(i) + "[u]";
    return out;
}

std::string coords(const Vector& v) {
    std::string out;
    for (Eigen::Index i = 0; i < v.size(); ++i) out += "," + format_number(v[i]);
    return out;
}

class Artifacts {
public:
    Artifacts(const ExperimentConfig& config, RunReport& report)
        : dir_(config.output_dir), report_(report) {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec || !fs::is_directory(dir_)) {
            throw IoError("cannot create output directory '" + dir_.string() + "'" +
                          (ec ? ": " + ec.message() : ""));
        }
    }

    void write(const std::string& name, const std::string& content) {
        const fs::path path = dir_ / name;
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out << content;
        out.close();
        if (!out) throw IoError("cannot write '" + path.string() + "'");
        report_.files.push_back(path);
    }

private:
    fs::path dir_;
    RunReport& report_;
};

void put(RunReport& r, std::string key, std::string value) {
    r.summary.emplace_back(std::move(key), std::move(value));
}

const char* overall(const std::vector<Outcome>& outcomes) {
    if (std::any_of(outcomes.begin(), outcomes.end(), [](Outcome o) { return o == Outcome::Diverged; })) {
        return to_string(Outcome::Diverged);
    }
    if (std::all_of(outcomes.begin(), outcomes.end(), [](Outcome o) { return o == Outcome::Converged; })) {
        return to_string(Outcome::Converged);
    }
    return to_string(Outcome::Timeout);
}

void put_counts(RunReport& r, const std::vector<Outcome>& outcomes) {
    auto count = [&](Outcome o) { return std::count(outcomes.begin(), outcomes.end(), o); };
    put(r, "verdict", overall(outcomes));
    put(r, "runs", std::to_string(outcomes.size()));
    put(r, "converged", std::to_string(count(Outcome::Converged)));
    put(r, "diverged", std::to_string(count(Outcome::Diverged)));
    put(r, "timeout", std::to_string(count(Outcome::Timeout)));
}

RigidTransform anchor_transform(const ExperimentConfig& c) {
    const int n = c.dim();
    Matrix R = n == 2 ? rotation2d(c.theta).R() : Matrix::Identity(n, n);
    return RigidTransform(std::move(R), c.r);
}

// Appends rows "run,t,agent,coords...,metric" for one recorded trial.
void append_trajectory(std::ostringstream& csv, int run, const TrialVerdict& v, double dt) {
    for (std::size_t s = 0; s < v.trajectory.size(); ++s) {
        const Matrix& state = v.trajectory[s];
        const std::string t = format_number(static_cast<double>(s) * dt);
        for (Eigen::Index k = 0; k < state.cols(); ++k) {
            csv << run << ',' << t << ',' << k << coords(state.col(k)) << ','
                << format_number(v.metric_history[s]) << '\n';
        }
    }
}

Series metric_series(const std::string& name, const TrialVerdict& v, double dt) {
    Series s{name, {}, {}};
    for (std::size_t i = 0; i < v.metric_history.size(); ++i) {
        s.x.push_back(static_cast<double>(i) * dt);
        s.y.push_back(v.metric_history[i]);
    }
    return s;
}

Series path_series(const std::string& name, const TrialVerdict& v, Eigen::Index agent) {
    Series s{name, {}, {}};
    for (const Matrix& state : v.trajectory) {
        s.x.push_back(state(0, agent));
        s.y.push_back(state(1, agent));
    }
    return s;
}

double max_metric_gap(const TrialVerdict& a, const TrialVerdict& b) {
    const std::size_t len = std::min(a.metric_history.size(), b.metric_history.size());
    double gap = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
        gap = std::max(gap, std::abs(a.metric_history[i] - b.metric_history[i]));
    }
    return gap;
}

void run_recover(const ExperimentConfig& c, RunReport& report, Artifacts& out) {
    const AnchorSet frame = c.anchor_set();
    const CouplingComponents comp = build_components(frame);
    const RigidTransform t = anchor_transform(c);
    const AnchorSet world = transform_anchors(frame, t);
    const int n = c.dim();

    std::ostringstream csv;
    csv << "point" << coord_header("x", n) << coord_header("estimate_x", n) << ",error[u]\n";
    Series truth{"true position", {}, {}, true};
    Series estimate{"estimate", {}, {}, true};
    double max_err = 0.0, sum_err = 0.0;
    for (std::size_t i = 0; i < c.starts.size(); ++i) {
        const Vector& x = c.starts[i];
        NoiseSource noise = trial_stream(c.seed, c.epsilon, 0, i);
        const Vector est = estimate_position(measure_all(x, world, noise), comp);
        // with moved anchors the estimate lives in the anchor frame: R^T (x - r)
        const double err = (est - t.R().transpose() * (x - t.r())).norm();
        max_err = std::max(max_err, err);
        sum_err += err;
        csv << i << coords(x) << coords(est) << ',' << format_number(err) << '\n';
        truth.x.push_back(x[0]);
        truth.y.push_back(x[1]);
        estimate.x.push_back(est[0]);
        estimate.y.push_back(est[1]);
    }
    out.write("recover.csv", csv.str());
    out.write("plot.svg", emit_plot({truth, estimate}, PlotKind::Trajectory,
                                    {"Distance-coupled position estimates", "x1 [u]", "x2 [u]"}));
    put(report, "verdict", "Recovered");
    put(report, "points", std::to_string(c.starts.size()));
    put(report, "max_error", format_number(max_err));
    put(report, "mean_error", format_number(sum_err / static_cast<double>(c.starts.size())));
}

void run_home(const ExperimentConfig& c, RunReport& report, Artifacts& out) {
    const AnchorSet frame = c.anchor_set();
    const HomingPolicy policy = HomingPolicy::scalar(build_components(frame), c.alpha, c.goal);
    const RigidTransform t = anchor_transform(c);
    const HomingSetup setup = make_homing_setup(policy, frame, t, c.epsilon);
    const SimConfig sim = c.sim();

    std::ostringstream csv;
    csv << "run,t[s],agent" << coord_header("x", c.dim()) << ",metric[u^2]\n";
    std::vector<Outcome> outcomes;
    std::vector<Series> paths, metrics;
    double worst_final = 0.0;
    long max_steps = 0;
    for (std::size_t i = 0; i < c.starts.size(); ++i) {
        NoiseSource noise = trial_stream(c.seed, c.epsilon, 0, i);
        const TrialVerdict v = run_trial(c.starts[i], setup, sim, noise, {.record_trajectory = true});
        append_trajectory(csv, static_cast<int>(i), v, c.dt);
        outcomes.push_back(v.outcome);
        worst_final = std::max(worst_final, v.final_metric());
        max_steps = std::max(max_steps, v.steps);
        paths.push_back(path_series("run " + std::to_string(i), v, 0));
        metrics.push_back(metric_series("run " + std::to_string(i), v, c.dt));
    }
    const Vector eq = predicted_equilibrium(t, c.goal);
    paths.push_back(Series{"equilibrium", {eq[0]}, {eq[1]}, true});

    out.write("trajectory.csv", csv.str());
    out.write("plot.svg", emit_plot(paths, PlotKind::Trajectory,
                                    {"Homing trajectories", "x1 [u]", "x2 [u]"}));
    out.write("metric.svg", emit_plot(metrics, PlotKind::MetricVsTime,
                                      {"Lyapunov function", "t [s]", "V [u^2]"}));
    put_counts(report, outcomes);
    put(report, "final_metric_max", format_number(worst_final));
    put(report, "steps_max", std::to_string(max_steps));
    put(report, "equilibrium", coords(eq).substr(1));
}

void run_formation(const ExperimentConfig& c, RunReport& report, Artifacts& out) {
    const AnchorSet desired = c.anchor_set();
    const FormationSetup setup{FormationPolicy(desired, c.alpha), 0.0};
    const SimConfig sim = c.sim();

    std::ostringstream csv;
    csv << "run,t[s],agent" << coord_header("x", c.dim()) << ",metric[u]\n";
    std::vector<Outcome> outcomes;
    std::vector<Series> metrics, paths;
    double worst_final = 0.0;
    for (int i = 0; i < c.trials; ++i) {
        NoiseSource init = trial_stream(c.seed, c.epsilon, 1, i);
        Matrix X0 = desired.positions();
        for (Eigen::Index k = 0; k < X0.cols(); ++k) X0.col(k) += init.sample_vector(c.dim());
        NoiseSource quiet(0.0, 0);
        const TrialVerdict v =
            run_trial(AgentEnsemble(X0), setup, sim, quiet, {.record_trajectory = true});
        append_trajectory(csv, i, v, c.dt);
        outcomes.push_back(v.outcome);
        worst_final = std::max(worst_final, v.final_metric());
        metrics.push_back(metric_series("run " + std::to_string(i), v, c.dt));
        if (i == 0) {
            for (Eigen::Index k = 0; k < X0.cols(); ++k) {
                paths.push_back(path_series("agent " + std::to_string(k), v, k));
            }
        }
    }
    out.write("trajectory.csv", csv.str());
    out.write("plot.svg", emit_plot(metrics, PlotKind::MetricVsTime,
                                    {"Formation error", "t [s]", "W [u]"}));
    out.write("trajectory.svg", emit_plot(paths, PlotKind::Trajectory,
                                          {"Formation trajectories (run 0)", "x1 [u]", "x2 [u]"}));
    put_counts(report, outcomes);
    put(report, "final_metric_max", format_number(worst_final));
}

void write_sweep(const SweepResult& r, const std::string& title,
                 RunReport& report, Artifacts& out) {
    std::ostringstream csv;
    csv << "theta[rad],divergence_ratio[-],diverged,converged,timeout\n";
    for (std::size_t g = 0; g < r.grid.size(); ++g) {
        csv << format_number(r.grid[g]) << ',' << format_number(r.divergence_ratio[g]) << ','
            << r.diverged[g] << ',' << r.converged[g] << ',' << r.timed_out[g] << '\n';
    }
    out.write("sweep.csv", csv.str());
    out.write("plot.svg", emit_plot({Series{"divergence ratio", r.grid, r.divergence_ratio}},
                                    PlotKind::RatioVsTheta,
                                    {title, "theta [rad]", "diverged / trials"}));
    int diverged = 0, total = 0;
    for (std::size_t g = 0; g < r.grid.size(); ++g) {
        diverged += r.diverged[g];
        total += r.trials_per_point;
    }
    put(report, "verdict", "Swept");
    put(report, "grid_points", std::to_string(r.grid.size()));
    put(report, "trials_per_point", std::to_string(r.trials_per_point));
    put(report, "diverged_total", std::to_string(diverged));
    put(report, "trials_total", std::to_string(total));
}

SweepSpec sweep_spec(const ExperimentConfig& c) {
    SweepSpec spec;
    spec.n_theta = c.n_theta;
    spec.trials = c.trials;
    spec.epsilon = c.epsilon;
    spec.alpha = c.alpha;
    spec.sim = SweepSpec::relative_config();
    spec.sim.dt = c.dt;
    spec.sim.t_max = c.t_max;
    spec.sim.div_tol = c.div_tol;
    spec.sim.seed = c.seed;
    return spec;
}

void run_noise(const ExperimentConfig& c, RunReport& report, Artifacts& out) {
    const AnchorSet anchors = c.anchor_set();
    const auto runs = noise_experiment(anchors, c.goal, c.noise_levels, c.starts, c.alpha, c.sim());
    const int n = c.dim();

    std::ostringstream csv;
    csv << "run,epsilon[u],t[s],agent" << coord_header("x", n) << coord_header("estimate_x", n)
        << ",metric[u^2]\n";
    std::vector<Outcome> outcomes;
    std::vector<Series> metrics;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const auto& run = runs[i];
        const auto& v = run.verdict;
        const std::string eps = format_number(run.epsilon);
        for (std::size_t s = 0; s < v.trajectory.size(); ++s) {
            // the estimate that drove step s; the final state has none
            const std::string est = s < v.estimates.size() ? coords(v.estimates[s])
                                                           : std::string(static_cast<std::size_t>(n), ',');
            csv << i << ',' << eps << ',' << format_number(static_cast<double>(s) * c.dt) << ",0"
                << coords(v.trajectory[s].col(0)) << est << ','
                << format_number(v.metric_history[s]) << '\n';
        }
        outcomes.push_back(v.outcome);
        if (run.start_index == 0) metrics.push_back(metric_series("eps " + eps, v, c.dt));
    }
    put_counts(report, outcomes);
    for (double level : c.noise_levels) {
        double worst = 0.0, gap = 0.0;
        int diverged = 0;
        for (const auto& run : runs) {
            if (run.epsilon != level) continue;
            worst = std::max(worst, std::sqrt(run.verdict.final_metric()));
            diverged += run.verdict.outcome == Outcome::Diverged;
            for (std::size_t s = 0; s < run.verdict.estimates.size(); ++s) {
                gap = std::max(gap, (run.verdict.estimates[s] - run.verdict.trajectory[s].col(0)).norm());
            }
        }
        const std::string key = "eps_" + format_number(level);
        put(report, key + ".final_distance_max", format_number(worst));
        put(report, key + ".estimate_gap_max", format_number(gap));
        put(report, key + ".diverged", std::to_string(diverged));
    }
    out.write("trajectory.csv", csv.str());
    out.write("plot.svg", emit_plot(metrics, PlotKind::MetricVsTime,
                                    {"Lyapunov function under measurement noise", "t [s]", "V [u^2]"}));
}

void run_offset(const ExperimentConfig& c, RunReport& report, Artifacts& out) {
    const OffsetRuns runs =
        offset_experiment_formation(c.anchor_set(), c.r, c.epsilon, c.alpha, c.sim());
    std::ostringstream csv;
    csv << "run,t[s],agent" << coord_header("x", c.dim()) << ",metric[u]\n";
    append_trajectory(csv, 0, runs.first, c.dt);
    append_trajectory(csv, 1, runs.second, c.dt);
    out.write("trajectory.csv", csv.str());

    std::vector<Series> paths;
    for (Eigen::Index k = 0; k < runs.initial_first.cols(); ++k) {
        paths.push_back(path_series("set 1 agent " + std::to_string(k), runs.first, k));
        paths.push_back(path_series("set 2 agent " + std::to_string(k), runs.second, k));
    }
    out.write("plot.svg", emit_plot(paths, PlotKind::Trajectory,
                                    {"Translated formation pair", "x1 [u]", "x2 [u]"}));
    out.write("metric.svg", emit_plot({metric_series("set 1", runs.first, c.dt),
                                       metric_series("set 2", runs.second, c.dt)},
                                      PlotKind::MetricVsTime, {"Formation error", "t [s]", "W [u]"}));

    const Vector centroid_gap = runs.second.final_state.rowwise().mean() -
                                runs.first.final_state.rowwise().mean();
    put_counts(report, {runs.first.outcome, runs.second.outcome});
    put(report, "centroid_difference", coords(centroid_gap).substr(1));
    put(report, "centroid_error", format_number((centroid_gap - c.r).norm()));
    put(report, "metric_history_gap", format_number(max_metric_gap(runs.first, runs.second)));
}

}  // namespace

RunReport run(const ExperimentConfig& config) {
    RunReport report;
    Artifacts out(config, report);
    put(report, "mode", to_string(config.mode));
    put(report, "seed", std::to_string(config.seed));

    switch (config.mode) {
        case Mode::Recover: run_recover(config, report, out); break;
        case Mode::Home: run_home(config, report, out); break;
        case Mode::Formation: run_formation(config, report, out); break;
        case Mode::SweepRotation:
            write_sweep(rotation_sweep_homing(config.anchor_set(), config.goal, sweep_spec(config)),
                        "Homing divergence ratio vs anchor rotation", report, out);
            break;
        case Mode::SweepRotationFormation:
            write_sweep(rotation_sweep_formation(config.anchor_set(), sweep_spec(config)),
                        "Formation divergence ratio vs rotation", report, out);
            break;
        case Mode::Noise: run_noise(config, report, out); break;
        case Mode::Offset: run_offset(config, report, out); break;
    }

    std::ostringstream summary;
    for (const auto& [k, v] : report.summary) summary << k << " = " << v << '\n';
    summary << "\n# resolved config\n";
    std::istringstream cfg(serialize(config));
    for (std::string line; std::getline(cfg, line);) summary << "config." << line << '\n';
    out.write("summary.txt", summary.str());
    out.write("config.txt", serialize(config));
    return report;
}

}  // namespace dcl
