#include "dcl/sim.hpp"

#include <atomic>
#include <cmath>
#include <functional>
#include <thread>

namespace dcl {

const char* to_string(Outcome outcome) {
    switch (outcome) {
        case Outcome::Converged: return "Converged";
        case Outcome::Diverged: return "Diverged";
        case Outcome::Timeout: return "Timeout";
    }
    return "Unknown";
}

void SimConfig::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw UsageError("dt must be positive");
    if (!(t_max > 0.0) || !std::isfinite(t_max)) throw UsageError("t_max must be positive");
    if (!(conv_tol >= 0.0) || !(conv_tol < div_tol)) {
        throw UsageError("conv_tol must be nonnegative and below div_tol");
    }
    if (thresholds == ThresholdMode::RelativeToStart &&
        (!(conv_ratio > 0.0) || !(conv_ratio < 1.0) || !(div_ratio > 1.0))) {
        throw UsageError("relative thresholds need 0 < conv_ratio < 1 < div_ratio");
    }
}

long SimConfig::max_steps() const {
    return static_cast<long>(std::ceil(t_max / dt - 1e-9));
}

HomingSetup make_homing_setup(const HomingPolicy& policy, const AnchorSet& anchors_frame,
                              const RigidTransform& t, double epsilon) {
    return HomingSetup{policy, transform_anchors(anchors_frame, t),
                       predicted_equilibrium(t, policy.goal()), epsilon};
}

Vector step_homing(const Vector& x, const HomingPolicy& policy, const AnchorSet& anchors_world,
                   NoiseSource& noise, double dt) {
    if (!(dt > 0.0)) throw UsageError("step_homing: dt must be positive");
    return x + dt * control(measure_all(x, anchors_world, noise), policy);
}

Matrix step_formation(const AgentEnsemble& X, const FormationPolicy& policy, NoiseSource& noise,
                      double dt) {
    if (!(dt > 0.0)) throw UsageError("step_formation: dt must be positive");
    return X.positions() + dt * formation_control(X, policy, noise);
}

namespace {

// Shared verdict loop. `metric` evaluates a finite state, `rhs` returns the
// state derivative (control) at a state.
TrialVerdict integrate(Matrix state, const SimConfig& config, const TrialOptions& options,
                       const std::function<double(const Matrix&)>& metric,
                       const std::function<Matrix(const Matrix&)>& rhs) {
    config.validate();
    TrialVerdict v;
    const long max_steps = config.max_steps();
    const double dt = config.dt;
    if (options.record_trajectory) v.trajectory.reserve(static_cast<std::size_t>(max_steps) + 1);

    for (long step = 0;; ++step) {
        const bool finite = state.allFinite();
        const double m = finite ? metric(state) : std::numeric_limits<double>::infinity();
        v.metric_history.push_back(m);
        if (options.record_trajectory) v.trajectory.push_back(state);

        if (step == 0) {
            if (config.thresholds == ThresholdMode::RelativeToStart && std::isfinite(m)) {
                v.conv_threshold = config.conv_ratio * m;
                v.div_threshold = std::min(config.div_tol, config.div_ratio * m);
            } else {
                v.conv_threshold = config.conv_tol;
                v.div_threshold = config.div_tol;
            }
        }

        v.steps = step;
        if (!std::isfinite(m)) {
            v.outcome = Outcome::Diverged;
            break;
        }
        if (m <= v.conv_threshold) {
            v.outcome = Outcome::Converged;
            break;
        }
        if (m >= v.div_threshold) {
            v.outcome = Outcome::Diverged;
            break;
        }
        if (step >= max_steps) {
            v.outcome = Outcome::Timeout;
            break;
        }

        // A stage that has already blown up poisons the step instead of
        // reaching the measurement model; the next check reports Diverged.
        auto eval = [&](const Matrix& s) -> Matrix {
            if (!s.allFinite()) return Matrix::Constant(s.rows(), s.cols(), NAN);
            return rhs(s);
        };
        if (config.integrator == Integrator::Euler) {
            state += dt * eval(state);
        } else {
            const Matrix k1 = eval(state);
            const Matrix k2 = eval(state + 0.5 * dt * k1);
            const Matrix k3 = eval(state + 0.5 * dt * k2);
            const Matrix k4 = eval(state + dt * k3);
            state += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
    }
    v.final_state = std::move(state);
    return v;
}

}  // namespace

TrialVerdict run_trial(const Vector& x0, const HomingSetup& setup, const SimConfig& config,
                       NoiseSource& measurement_noise, TrialOptions options) {
    require_point(x0, "initial position");
    if (x0.size() != setup.policy.dim()) throw UsageError("initial position dimension mismatch");

    std::vector<Vector> estimates;
    auto metric = [&](const Matrix& s) { return lyapunov(s.col(0), setup.target); };
    // Only the first evaluation per step is a real measurement; RK4 stages
    // reuse the same call but are not recorded as estimates.
    int stage = 0;
    const int stages = config.integrator == Integrator::Euler ? 1 : 4;
    auto rhs = [&](const Matrix& s) -> Matrix {
        const Vector est =
            estimate_position(measure_all(s.col(0), setup.anchors_world, measurement_noise),
                              setup.policy.components());
        if (options.record_trajectory && stage == 0) estimates.push_back(est);
        stage = (stage + 1) % stages;
        return setup.policy.gain() * (est - setup.policy.goal());
    };
    TrialVerdict v = integrate(Matrix(x0), config, options, metric, rhs);
    v.estimates = std::move(estimates);
    return v;
}

TrialVerdict run_trial(const AgentEnsemble& X0, const FormationSetup& setup,
                       const SimConfig& config, NoiseSource& measurement_noise,
                       TrialOptions options) {
    if (X0.size() != setup.policy.agents() || X0.dim() != setup.policy.dim()) {
        throw UsageError("initial ensemble does not match the desired formation");
    }
    const Matrix& desired = setup.policy.desired();
    auto metric = [&](const Matrix& s) {
        // A collapsed ensemble has no defined alignment; report its residual spread.
        try {
            return formation_error(s, desired);
        } catch (const DegenerateConfiguration&) {
            return (desired.colwise() - desired.rowwise().mean()).colwise().norm().sum();
        }
    };
    auto rhs = [&](const Matrix& s) -> Matrix {
        return formation_control(AgentEnsemble(s), setup.policy, measurement_noise);
    };
    return integrate(X0.positions(), config, options, metric, rhs);
}

NoiseSource trial_stream(std::uint64_t seed, double epsilon, std::uint64_t a, std::uint64_t b) {
    return NoiseSource(epsilon, derive_seed(seed, a, b));
}

std::vector<double> linspace(double lo, double hi, int n) {
    if (n < 1) throw UsageError("linspace: need at least one point");
    std::vector<double> out(static_cast<std::size_t>(n));
    if (n == 1) {
        out[0] = lo;
        return out;
    }
    const double step = (hi - lo) / (n - 1);
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = lo + step * i;
    out.back() = hi;
    return out;
}

namespace {

// Runs trial(grid_index, trial_index) over the whole grid on `workers` threads.
// Each trial writes only its own slot, so the reduction is order-free.
SweepResult run_sweep(const SweepSpec& spec,
                      const std::function<Outcome(int, int)>& trial) {
    spec.sim.validate();
    if (spec.n_theta < 1 || spec.trials < 1) throw UsageError("sweep needs points and trials");

    SweepResult result;
    result.grid = linspace(-2.0 * M_PI, 2.0 * M_PI, spec.n_theta);
    result.trials_per_point = spec.trials;

    const std::size_t total = static_cast<std::size_t>(spec.n_theta) * spec.trials;
    std::vector<Outcome> outcomes(total, Outcome::Timeout);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t idx = next++; idx < total; idx = next++) {
            outcomes[idx] = trial(static_cast<int>(idx / spec.trials),
                                  static_cast<int>(idx % spec.trials));
        }
    };

    unsigned workers = spec.workers ? spec.workers : std::thread::hardware_concurrency();
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(total)));
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }

    const auto points = static_cast<std::size_t>(spec.n_theta);
    result.diverged.assign(points, 0);
    result.converged.assign(points, 0);
    result.timed_out.assign(points, 0);
    result.divergence_ratio.assign(points, 0.0);
    for (std::size_t idx = 0; idx < total; ++idx) {
        const std::size_t g = idx / spec.trials;
        switch (outcomes[idx]) {
            case Outcome::Diverged: ++result.diverged[g]; break;
            case Outcome::Converged: ++result.converged[g]; break;
            case Outcome::Timeout: ++result.timed_out[g]; break;
        }
    }
    for (std::size_t g = 0; g < points; ++g) {
        result.divergence_ratio[g] = static_cast<double>(result.diverged[g]) / spec.trials;
    }
    return result;
}

}  // namespace

SweepResult rotation_sweep_homing(const AnchorSet& anchors, const Vector& goal,
                                  const SweepSpec& spec) {
    if (anchors.dim() != 2) throw UsageError("rotation sweep is planar");
    const HomingPolicy policy =
        HomingPolicy::scalar(build_components(anchors), spec.alpha, goal);
    const auto grid = linspace(-2.0 * M_PI, 2.0 * M_PI, spec.n_theta);

    std::vector<HomingSetup> setups;
    setups.reserve(grid.size());
    for (double theta : grid) setups.push_back(make_homing_setup(policy, anchors, rotation2d(theta)));

    return run_sweep(spec, [&](int g, int t) {
        NoiseSource init = trial_stream(spec.sim.seed, spec.epsilon, g, t);
        const Vector x0 = goal + init.sample_vector(static_cast<int>(goal.size()));
        NoiseSource quiet(0.0, 0);
        return run_trial(x0, setups[static_cast<std::size_t>(g)], spec.sim, quiet).outcome;
    });
}

SweepResult rotation_sweep_formation(const AnchorSet& desired, const SweepSpec& spec) {
    if (desired.dim() != 2) throw UsageError("rotation sweep is planar");
    const FormationSetup setup{FormationPolicy(desired, spec.alpha), 0.0};
    const auto grid = linspace(-2.0 * M_PI, 2.0 * M_PI, spec.n_theta);
    const Matrix& Xeq = desired.positions();

    return run_sweep(spec, [&](int g, int t) {
        NoiseSource init = trial_stream(spec.sim.seed, spec.epsilon, g, t);
        Matrix perturbed = Xeq;
        for (Eigen::Index k = 0; k < perturbed.cols(); ++k) {
            perturbed.col(k) += init.sample_vector(static_cast<int>(perturbed.rows()));
        }
        const AgentEnsemble X0(rotation2d(grid[static_cast<std::size_t>(g)]).R() * perturbed);
        NoiseSource quiet(0.0, 0);
        return run_trial(X0, setup, spec.sim, quiet).outcome;
    });
}

std::vector<Vector> random_starts(int count, int dim, double box, std::uint64_t seed) {
    NoiseSource src(box, derive_seed(seed, 0x5747ULL));
    std::vector<Vector> out;
    for (int i = 0; i < count; ++i) out.push_back(src.sample_vector(dim));
    return out;
}

std::vector<NoiseRun> noise_experiment(const AnchorSet& anchors, const Vector& goal,
                                       const std::vector<double>& eps_list,
                                       const std::vector<Vector>& starts, double alpha,
                                       const SimConfig& config) {
    const HomingPolicy policy = HomingPolicy::scalar(build_components(anchors), alpha, goal);
    std::vector<NoiseRun> runs;
    for (std::size_t e = 0; e < eps_list.size(); ++e) {
        const HomingSetup setup{policy, anchors, goal, eps_list[e]};
        for (std::size_t s = 0; s < starts.size(); ++s) {
            NoiseSource noise = trial_stream(config.seed, eps_list[e], e, s);
            NoiseRun run{eps_list[e], static_cast<int>(s), starts[s], {}};
            run.verdict = run_trial(starts[s], setup, config, noise, {.record_trajectory = true});
            runs.push_back(std::move(run));
        }
    }
    return runs;
}

OffsetRuns offset_experiment_formation(const AnchorSet& desired, const Vector& r, double epsilon,
                                       double alpha, const SimConfig& config) {
    if (r.size() != desired.dim()) throw UsageError("offset dimension mismatch");
    const FormationSetup setup{FormationPolicy(desired, alpha), 0.0};

    NoiseSource init = trial_stream(config.seed, epsilon, 0, 0);
    Matrix X1 = desired.positions();
    for (Eigen::Index k = 0; k < X1.cols(); ++k) {
        X1.col(k) += init.sample_vector(static_cast<int>(X1.rows()));
    }
    Matrix X2 = X1.colwise() + r;

    OffsetRuns out;
    out.initial_first = X1;
    out.initial_second = X2;
    NoiseSource m1 = trial_stream(config.seed, 0.0, 1, 0);
    NoiseSource m2 = trial_stream(config.seed, 0.0, 1, 0);
    out.first = run_trial(AgentEnsemble(X1), setup, config, m1, {.record_trajectory = true});
    out.second = run_trial(AgentEnsemble(X2), setup, config, m2, {.record_trajectory = true});
    return out;
}

}  // namespace dcl
