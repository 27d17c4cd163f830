#include "dcl/formation.hpp"

#include <cmath>

namespace dcl {

AgentEnsemble::AgentEnsemble(Matrix positions) : positions_(std::move(positions)) {
    if (positions_.rows() < 2 || positions_.cols() < 1) {
        throw UsageError("agent ensemble needs dimension >= 2 and at least one agent");
    }
    if (!positions_.allFinite()) {
        throw UsageError("agent ensemble has non-finite coordinates");
    }
}

FormationPolicy::FormationPolicy(const AnchorSet& desired, Matrix gain)
    : components_(build_components(desired)),
      gain_(std::move(gain)),
      desired_(desired.positions()),
      offsets_(components_.b * Eigen::RowVectorXd::Ones(desired.size())) {
    const int n = desired.dim();
    if (gain_.rows() != n || gain_.cols() != n || !gain_.allFinite()) {
        throw UsageError("formation gain must be a finite " + std::to_string(n) + "x" +
                         std::to_string(n) + " matrix");
    }
}

FormationPolicy::FormationPolicy(const AnchorSet& desired, double alpha)
    : FormationPolicy(desired, alpha * Matrix::Identity(desired.dim(), desired.dim())) {}

namespace {

Vector agent_distances(const Matrix& X, int k, NoiseSource* noise) {
    const int m = static_cast<int>(X.cols());
    Vector d(m);
    for (int i = 0; i < m; ++i) {
        if (i == k) {
            d[i] = 0.0;
            continue;
        }
        d[i] = (X.col(k) - X.col(i)).norm();
        if (noise) d[i] += noise->sample();
    }
    return d;
}

void check_agent(const AgentEnsemble& X, int k, const PairIndexSet& pairs) {
    if (k < 0 || k >= X.size()) {
        throw UsageError("agent index " + std::to_string(k) + " out of range [0, " +
                         std::to_string(X.size()) + ")");
    }
    for (const auto& [i, j] : pairs) {
        if (j >= X.size()) throw UsageError("pair index exceeds agent count");
    }
}

}  // namespace

Vector agent_coupled_measurements(const AgentEnsemble& X, int k, const PairIndexSet& pairs,
                                  NoiseSource& noise) {
    check_agent(X, k, pairs);
    return coupled_measurements(agent_distances(X.positions(), k, &noise), pairs);
}

Vector agent_coupled_measurements(const AgentEnsemble& X, int k, const PairIndexSet& pairs) {
    check_agent(X, k, pairs);
    return coupled_measurements(agent_distances(X.positions(), k, nullptr), pairs);
}

Matrix measurement_matrix(const AgentEnsemble& X, const PairIndexSet& pairs, NoiseSource& noise) {
    Matrix H(static_cast<Eigen::Index>(pairs.size()), X.size());
    for (int k = 0; k < X.size(); ++k) H.col(k) = agent_coupled_measurements(X, k, pairs, noise);
    return H;
}

Matrix measurement_matrix(const AgentEnsemble& X, const PairIndexSet& pairs) {
    Matrix H(static_cast<Eigen::Index>(pairs.size()), X.size());
    for (int k = 0; k < X.size(); ++k) H.col(k) = agent_coupled_measurements(X, k, pairs);
    return H;
}

Matrix formation_estimate(const AgentEnsemble& X, const FormationPolicy& policy,
                          NoiseSource& noise) {
    if (X.size() != policy.agents() || X.dim() != policy.dim()) {
        throw UsageError("ensemble shape does not match the desired formation");
    }
    const auto& c = policy.components();
    return c.K * (measurement_matrix(X, c.pairs, noise) - policy.offsets());
}

Matrix formation_control(const AgentEnsemble& X, const FormationPolicy& policy,
                         NoiseSource& noise) {
    return policy.gain() * (formation_estimate(X, policy, noise) - policy.desired());
}

Matrix formation_control(const AgentEnsemble& X, const FormationPolicy& policy) {
    NoiseSource quiet(0.0, 0);
    return formation_control(X, policy, quiet);
}

Alignment kabsch_align(const Matrix& X, const Matrix& Y) {
    if (X.rows() != Y.rows() || X.cols() != Y.cols() || X.cols() == 0) {
        throw UsageError("kabsch_align: point sets must have the same shape");
    }
    const Eigen::Index n = X.rows();
    const Vector cx = X.rowwise().mean();
    const Vector cy = Y.rowwise().mean();
    const Matrix Xc = X.colwise() - cx;
    const Matrix Yc = Y.colwise() - cy;

    const double spread_x = Xc.norm();
    const double spread_y = Yc.norm();
    const double scale = std::max({spread_x, spread_y, cx.norm(), cy.norm(), 1.0});
    if (spread_x <= 1e-14 * scale || spread_y <= 1e-14 * scale) {
        throw DegenerateConfiguration("degenerate configuration: all points coincide");
    }

    // Cross-covariance mapping X onto Y.
    const Matrix cov = Yc * Xc.transpose();
    Eigen::JacobiSVD<Matrix> svd(cov, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Matrix& U = svd.matrixU();
    const Matrix& V = svd.matrixV();

    Vector signs = Vector::Ones(n);
    if ((U * V.transpose()).determinant() < 0.0) signs[n - 1] = -1.0;

    Alignment out;
    out.Psi = U * signs.asDiagonal() * V.transpose();
    out.psi = cy - out.Psi * cx;
    return out;
}

double formation_error(const Matrix& X, const Matrix& desired, AlignmentDirection direction) {
    if (X.rows() != desired.rows() || X.cols() != desired.cols()) {
        throw UsageError("formation_error: configuration shape mismatch");
    }
    if (direction == AlignmentDirection::WorldOntoDesired) {
        const Alignment a = kabsch_align(X, desired);
        return (a.apply(X) - desired).colwise().norm().sum();
    }
    const Alignment a = kabsch_align(desired, X);
    return (a.apply(desired) - X).colwise().norm().sum();
}

}  // namespace dcl
