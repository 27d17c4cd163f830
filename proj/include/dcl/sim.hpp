#pragma once

#include "dcl/formation.hpp"
#include "dcl/homing.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace dcl {

enum class Outcome { Converged, Diverged, Timeout };

const char* to_string(Outcome outcome);

/// How verdict thresholds are interpreted.
enum class ThresholdMode {
    /// metric <= conv_tol converges, metric >= div_tol diverges.
    Absolute,
    /// Thresholds scale with the starting metric m0: converge at conv_ratio * m0,
    /// diverge at min(div_tol, div_ratio * m0). For sweeps that start a hair
    /// away from equilibrium.
    RelativeToStart,
};

enum class Integrator { Euler, RK4 };

struct SimConfig {
    double dt = 0.01;
    double t_max = 50.0;
    double conv_tol = 1e-6;
    double div_tol = 1e6;
    std::uint64_t seed = 0;
    ThresholdMode thresholds = ThresholdMode::Absolute;
    double conv_ratio = 1e-6;
    double div_ratio = 1e6;
    Integrator integrator = Integrator::Euler;

    /// Throws UsageError on dt <= 0, t_max <= 0, conv_tol >= div_tol or bad ratios.
    void validate() const;
    long max_steps() const;
};

struct TrialOptions {
    bool record_trajectory = false;
};

/// Outcome of one simulated run.
struct TrialVerdict {
    Outcome outcome = Outcome::Timeout;
    /// V (homing) or W (formation) at every visited state, starting at t = 0.
    std::vector<double> metric_history;
    /// Visited states (n x m each), only when recording is enabled.
    std::vector<Matrix> trajectory;
    /// Anchor-frame position estimates per state (homing only, when recording).
    std::vector<Vector> estimates;
    Matrix final_state;
    long steps = 0;
    double conv_threshold = 0.0;
    double div_threshold = 0.0;

    double final_metric() const {
        return metric_history.empty() ? 0.0 : metric_history.back();
    }
};

/// Homing closed loop: the policy is built in the anchor frame, the agent
/// measures distances to `anchors_world`, and V is taken about `target`.
struct HomingSetup {
    HomingPolicy policy;
    AnchorSet anchors_world;
    Vector target;
    double epsilon = 0.0;
};

/// Closed loop with anchors moved by `t` after the policy was built; the
/// V target is the predicted equilibrium R goal + r.
HomingSetup make_homing_setup(const HomingPolicy& policy, const AnchorSet& anchors_frame,
                              const RigidTransform& t, double epsilon = 0.0);

struct FormationSetup {
    FormationPolicy policy;
    double epsilon = 0.0;
};

/// One explicit Euler step of x' = u with distance-coupled control.
Vector step_homing(const Vector& x, const HomingPolicy& policy, const AnchorSet& anchors_world,
                   NoiseSource& noise, double dt);

/// One explicit Euler step of X' = U(X). Returns raw positions, which may be
/// non-finite once a run blows up.
Matrix step_formation(const AgentEnsemble& X, const FormationPolicy& policy, NoiseSource& noise,
                      double dt);

TrialVerdict run_trial(const Vector& x0, const HomingSetup& setup, const SimConfig& config,
                       NoiseSource& measurement_noise, TrialOptions options = {});

TrialVerdict run_trial(const AgentEnsemble& X0, const FormationSetup& setup,
                       const SimConfig& config, NoiseSource& measurement_noise,
                       TrialOptions options = {});

/// Measurement noise stream for trial (a, b) under the root seed.
NoiseSource trial_stream(std::uint64_t seed, double epsilon, std::uint64_t a, std::uint64_t b);

/// n evenly spaced values on [lo, hi], endpoints included.
std::vector<double> linspace(double lo, double hi, int n);

struct SweepResult {
    std::vector<double> grid;
    std::vector<double> divergence_ratio;
    std::vector<int> diverged;
    std::vector<int> converged;
    std::vector<int> timed_out;
    int trials_per_point = 0;
};

/// Shared settings for the anchor-rotation sweeps over theta in [-2 pi, 2 pi].
struct SweepSpec {
    int n_theta = 100;
    int trials = 100;
    double epsilon = 0.001;
    double alpha = kDefaultAlpha;
    SimConfig sim = relative_config();
    /// 0 picks std::thread::hardware_concurrency().
    unsigned workers = 0;

    static SimConfig relative_config() {
        SimConfig c;
        c.thresholds = ThresholdMode::RelativeToStart;
        return c;
    }
};

/// For each theta, world anchors are R(theta) a~ (components not rebuilt) and
/// each trial starts at goal + omega_eps with exact measurements.
SweepResult rotation_sweep_homing(const AnchorSet& anchors, const Vector& goal,
                                  const SweepSpec& spec);

/// Formation analog: X0 = R(theta) (X_eq + omega_eps), exact measurements.
SweepResult rotation_sweep_formation(const AnchorSet& desired, const SweepSpec& spec);

struct NoiseRun {
    double epsilon = 0.0;
    int start_index = 0;
    Vector start;
    TrialVerdict verdict;
};

/// Homing from each start for each noise level, trajectories recorded.
std::vector<NoiseRun> noise_experiment(const AnchorSet& anchors, const Vector& goal,
                                       const std::vector<double>& eps_list,
                                       const std::vector<Vector>& starts, double alpha,
                                       const SimConfig& config);

/// `count` uniform draws in [-box, box]^dim.
std::vector<Vector> random_starts(int count, int dim, double box, std::uint64_t seed);

struct OffsetRuns {
    TrialVerdict first;
    TrialVerdict second;
    Matrix initial_first;
    Matrix initial_second;
};

/// Two ensembles, X2(0) = X1(0) + r with X1(0) = X_eq + omega_eps, run with
/// the same measurement stream.
OffsetRuns offset_experiment_formation(const AnchorSet& desired, const Vector& r, double epsilon,
                                       double alpha, const SimConfig& config);

}  // namespace dcl
