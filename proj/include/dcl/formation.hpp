#pragma once

#include "dcl/coupling.hpp"

namespace dcl {

/// Positions of m agents, column k = agent k.
class AgentEnsemble {
public:
    AgentEnsemble() = default;
    explicit AgentEnsemble(Matrix positions);

    int dim() const { return static_cast<int>(positions_.rows()); }
    int size() const { return static_cast<int>(positions_.cols()); }
    Vector agent(int k) const { return positions_.col(k); }
    const Matrix& positions() const { return positions_; }
    Vector centroid() const { return positions_.rowwise().mean(); }

private:
    Matrix positions_;
};

/// Configuration spans no direction (all points coincide), so no rotation is defined.
class DegenerateConfiguration : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Controller for m = p agents in which every agent serves as an anchor for
/// the others. The desired formation doubles as the anchor set.
class FormationPolicy {
public:
    /// Throws DegenerateAnchors if the desired formation fails the rank test.
    FormationPolicy(const AnchorSet& desired, Matrix gain);
    FormationPolicy(const AnchorSet& desired, double alpha);

    const CouplingComponents& components() const { return components_; }
    const Matrix& gain() const { return gain_; }
    /// X_eq, n x m.
    const Matrix& desired() const { return desired_; }
    /// b 1^T, |I| x m.
    const Matrix& offsets() const { return offsets_; }
    int agents() const { return static_cast<int>(desired_.cols()); }
    int dim() const { return static_cast<int>(desired_.rows()); }

private:
    CouplingComponents components_;
    Matrix gain_;
    Matrix desired_;
    Matrix offsets_;
};

/// Proper rotation Psi and translation psi with X ~ Psi Y + psi.
struct Alignment {
    Matrix Psi;
    Vector psi;

    Matrix apply(const Matrix& points) const {
        Matrix out = Psi * points;
        out.colwise() += psi;
        return out;
    }
};

/// Pairwise squared-distance differences as seen from agent k (0-based).
/// Self-distance is exactly zero; every other distance gets one noise draw.
Vector agent_coupled_measurements(const AgentEnsemble& X, int k, const PairIndexSet& pairs,
                                  NoiseSource& noise);
Vector agent_coupled_measurements(const AgentEnsemble& X, int k, const PairIndexSet& pairs);

/// H(X), column k = agent_coupled_measurements(X, k).
Matrix measurement_matrix(const AgentEnsemble& X, const PairIndexSet& pairs, NoiseSource& noise);
Matrix measurement_matrix(const AgentEnsemble& X, const PairIndexSet& pairs);

/// Per-agent anchor-frame estimates K (H(X) - B).
Matrix formation_estimate(const AgentEnsemble& X, const FormationPolicy& policy,
                          NoiseSource& noise);

/// U(X) = C (K (H(X) - B) - X_eq).
Matrix formation_control(const AgentEnsemble& X, const FormationPolicy& policy,
                         NoiseSource& noise);
Matrix formation_control(const AgentEnsemble& X, const FormationPolicy& policy);

/// Kabsch: proper rotation and translation minimizing sum_k |Psi x_k + psi - y_k|^2.
Alignment kabsch_align(const Matrix& X, const Matrix& Y);

enum class AlignmentDirection {
    /// Align the current configuration onto the desired one (W as written).
    WorldOntoDesired,
    /// Align the desired configuration onto the current one and sum residuals there.
    DesiredOntoWorld,
};

/// W(X): sum of per-agent residual norms after rigid alignment.
double formation_error(const Matrix& X, const Matrix& desired,
                       AlignmentDirection direction = AlignmentDirection::WorldOntoDesired);

}  // namespace dcl
