#include "dcl/homing.hpp"

#include <cmath>

namespace dcl {

bool is_negative_definite(const Matrix& M) {
    if (M.rows() != M.cols() || M.rows() == 0) return false;
    const Matrix sym = 0.5 * (M + M.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> eig(sym, Eigen::EigenvaluesOnly);
    return eig.eigenvalues().maxCoeff() < 0.0;
}

HomingPolicy::HomingPolicy(CouplingComponents components, Matrix gain, Vector goal,
                           bool allow_unstable)
    : components_(std::move(components)), gain_(std::move(gain)), goal_(std::move(goal)) {
    const int n = components_.dim();
    require_point(goal_, "goal");
    if (goal_.size() != n) {
        throw UsageError("goal dimension does not match anchors");
    }
    if (gain_.rows() != n || gain_.cols() != n || !gain_.allFinite()) {
        throw UsageError("gain must be a finite " + std::to_string(n) + "x" +
                         std::to_string(n) + " matrix");
    }
    if (!allow_unstable && !is_negative_definite(gain_)) {
        throw UnstableGain("gain is not negative definite; set allow_unstable to run it anyway");
    }
}

HomingPolicy HomingPolicy::scalar(CouplingComponents components, double alpha, Vector goal,
                                  bool allow_unstable) {
    const int n = components.dim();
    return HomingPolicy(std::move(components), alpha * Matrix::Identity(n, n), std::move(goal),
                        allow_unstable);
}

RigidTransform::RigidTransform(Matrix R, Vector r) : R_(std::move(R)), r_(std::move(r)) {
    if (R_.rows() != r_.size() || !is_rotation(R_, 1e-12)) {
        throw UsageError("rigid transform needs a proper rotation matching the offset dimension");
    }
    if (!r_.allFinite()) {
        throw UsageError("rigid transform offset is not finite");
    }
}

RigidTransform RigidTransform::identity(int n) {
    return RigidTransform(Matrix::Identity(n, n), Vector::Zero(n));
}

Vector ideal_control(const Vector& x, const Matrix& C, const Vector& goal) {
    if (x.size() != goal.size() || C.cols() != x.size()) {
        throw UsageError("ideal_control: dimension mismatch");
    }
    return C * (x - goal);
}

Vector estimate_position(const DistanceSet& d, const CouplingComponents& c) {
    if (d.size() != c.anchor_count) {
        throw UsageError("distance set has " + std::to_string(d.size()) + " entries, expected " +
                         std::to_string(c.anchor_count));
    }
    return recover_position(c, coupled_measurements(d, c.pairs));
}

Vector control(const DistanceSet& d, const HomingPolicy& policy) {
    return policy.gain() * (estimate_position(d, policy.components()) - policy.goal());
}

double lyapunov(const Vector& x, const Vector& goal) {
    if (x.size() != goal.size()) {
        throw UsageError("lyapunov: dimension mismatch");
    }
    return (x - goal).squaredNorm();
}

AnchorSet transform_anchors(const AnchorSet& anchors, const RigidTransform& t) {
    if (anchors.dim() != t.dim()) {
        throw UsageError("transform_anchors: dimension mismatch");
    }
    Matrix moved = t.R() * anchors.positions();
    moved.colwise() += t.r();
    return AnchorSet(std::move(moved));
}

RigidTransform rotation2d(double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    Matrix R(2, 2);
    R << c, -s, s, c;
    return RigidTransform(std::move(R), Vector::Zero(2));
}

Vector predicted_equilibrium(const RigidTransform& t, const Vector& goal) {
    if (goal.size() != t.dim()) {
        throw UsageError("predicted_equilibrium: dimension mismatch");
    }
    return t.apply(goal);
}

// Reduced-angle form of cos(theta) > 0; cos(pi/2) rounds to +6e-17, which
// would put the open band edge inside the band.
bool rotation_is_stable(double theta) {
    const double wrapped = std::remainder(theta, 2.0 * M_PI);
    return std::abs(wrapped) < 0.5 * M_PI;
}

Matrix closed_loop_matrix(const Matrix& R, const Matrix& C) {
    if (R.rows() != C.rows() || R.cols() != C.cols()) {
        throw UsageError("closed_loop_matrix: dimension mismatch");
    }
    return R.transpose() * C;
}

bool transform_is_stable(const Matrix& R, const Matrix& C) {
    return is_negative_definite(closed_loop_matrix(R, C));
}

}  // namespace dcl
