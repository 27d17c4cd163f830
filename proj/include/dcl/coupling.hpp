#pragma once

#include "dcl/core.hpp"

#include <stdexcept>

namespace dcl {

/// Anchors do not span the space: A lacks full column rank.
class DegenerateAnchors : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Linear system obtained by differencing squared anchor distances pairwise.
///
/// For pair (i, j) the squared distances satisfy
///   d_i^2 - d_j^2 = -2 (a_i - a_j)^T x + a_i^T a_i - a_j^T a_j,
/// so stacking all pairs gives A x = h - b, and K is the left inverse of A.
struct CouplingComponents {
    Matrix A;           ///< |I| x n
    Vector b;           ///< |I|
    Matrix K;           ///< n x |I|
    PairIndexSet pairs;
    int anchor_count = 0;

    int dim() const { return static_cast<int>(A.cols()); }
};

/// Relative singular-value cutoff below which A is treated as rank deficient.
inline constexpr double kRankTolerance = 1e-10;

/// Builds A, b and K from `anchors`. K is the pseudo-inverse from an SVD of A.
/// Throws DegenerateAnchors when rank(A) < n.
CouplingComponents build_components(const AnchorSet& anchors);

/// h with entry d_i^2 - d_j^2 per pair.
Vector coupled_measurements(const DistanceSet& d, const PairIndexSet& pairs);

/// Position estimate K (h - b) in the anchor frame.
Vector recover_position(const CouplingComponents& c, const Vector& h);

/// (A^T A)^{-1} A^T via a Cholesky solve of the normal equations. Used only to
/// cross-check the SVD route on well-conditioned inputs.
Matrix normal_equations_inverse(const Matrix& A);

}  // namespace dcl
