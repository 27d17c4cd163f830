#pragma once

#include "dcl/coupling.hpp"

namespace dcl {

/// Default homing gain, C = alpha * I.
inline constexpr double kDefaultAlpha = -5.0;

/// Gain matrix rejected because C is not negative definite.
class UnstableGain : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// True when the symmetric part of M is negative definite.
bool is_negative_definite(const Matrix& M);

/// Coupling components, gain C and goal x_eq: everything needed to turn
/// a distance vector into a velocity command.
class HomingPolicy {
public:
    /// Throws UnstableGain unless C is negative definite or `allow_unstable` is set.
    HomingPolicy(CouplingComponents components, Matrix gain, Vector goal,
                 bool allow_unstable = false);

    static HomingPolicy scalar(CouplingComponents components, double alpha, Vector goal,
                               bool allow_unstable = false);

    const CouplingComponents& components() const { return components_; }
    const Matrix& gain() const { return gain_; }
    const Vector& goal() const { return goal_; }
    int dim() const { return static_cast<int>(goal_.size()); }

private:
    CouplingComponents components_;
    Matrix gain_;
    Vector goal_;
};

/// Rigid motion x -> R x + r with R a proper rotation.
class RigidTransform {
public:
    /// Throws UsageError unless R^T R = I to 1e-12 and det R = +1.
    RigidTransform(Matrix R, Vector r);

    static RigidTransform identity(int n);

    const Matrix& R() const { return R_; }
    const Vector& r() const { return r_; }
    int dim() const { return static_cast<int>(r_.size()); }

    Vector apply(const Vector& x) const { return R_ * x + r_; }

private:
    Matrix R_;
    Vector r_;
};

/// C (x - goal).
Vector ideal_control(const Vector& x, const Matrix& C, const Vector& goal);

/// C (K (h(d) - b) - goal).
Vector control(const DistanceSet& d, const HomingPolicy& policy);

/// Anchor-frame position estimate K (h(d) - b).
Vector estimate_position(const DistanceSet& d, const CouplingComponents& c);

/// Lyapunov candidate V = (x - goal)^T (x - goal).
double lyapunov(const Vector& x, const Vector& goal);

AnchorSet transform_anchors(const AnchorSet& anchors, const RigidTransform& t);

/// Planar rotation by theta with zero offset.
RigidTransform rotation2d(double theta);

/// Closed-loop equilibrium R goal + r when anchors are moved by `t` and the
/// coupling components are left as built.
Vector predicted_equilibrium(const RigidTransform& t, const Vector& goal);

/// Planar stability band: the rotated closed loop converges iff cos(theta) > 0.
bool rotation_is_stable(double theta);

/// Linearized closed-loop matrix R^T C of the homing loop with moved anchors.
Matrix closed_loop_matrix(const Matrix& R, const Matrix& C);

/// General-dimension test: R^T C has negative definite symmetric part.
bool transform_is_stable(const Matrix& R, const Matrix& C);

}  // namespace dcl
