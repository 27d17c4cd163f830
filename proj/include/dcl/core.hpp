#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace dcl {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Bad arguments: dimension mismatch, out-of-range index, invalid counts.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Throws UsageError unless `x` has at least two entries, all finite.
void require_point(const Vector& x, const char* what);

/// Ordered set of anchor positions, stored column-wise (n x p).
/// The order given at construction is the index order used everywhere else.
class AnchorSet {
public:
    AnchorSet() = default;
    explicit AnchorSet(const std::vector<Vector>& anchors);
    explicit AnchorSet(Matrix columns);

    int dim() const { return static_cast<int>(positions_.rows()); }
    int size() const { return static_cast<int>(positions_.cols()); }

    Vector operator[](int i) const { return positions_.col(i); }
    const Matrix& positions() const { return positions_; }

private:
    Matrix positions_;
};

/// 0-based anchor index pair with first < second.
struct IndexPair {
    int first;
    int second;

    friend bool operator==(const IndexPair&, const IndexPair&) = default;
};

using PairIndexSet = std::vector<IndexPair>;

/// Distances from one point to each anchor, in anchor order.
using DistanceSet = Vector;

/// Uniform measurement noise on [-epsilon, epsilon].
struct NoiseSpec {
    double epsilon = 0.0;
    std::uint64_t seed = 0;
};

/// Mixes a root seed with stream coordinates (splitmix64 finalizer), so every
/// (seed, a, b) triple gets an independent, order-free stream.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

/// Deterministic source of uniform noise samples. Not shared between trials.
class NoiseSource {
public:
    explicit NoiseSource(NoiseSpec spec);
    NoiseSource(double epsilon, std::uint64_t seed) : NoiseSource(NoiseSpec{epsilon, seed}) {}

    double epsilon() const { return epsilon_; }

    /// Uniform sample in [0, 1) built from the top 53 bits of the engine,
    /// independent of the standard library's distribution implementation.
    double unit();

    /// Uniform sample in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

    /// One draw of omega_eps, uniform on [-eps, eps]. Exactly 0 when eps = 0.
    double sample() { return epsilon_ * (2.0 * unit() - 1.0); }

    /// Vector of independent omega_eps draws.
    Vector sample_vector(int n);

private:
    double epsilon_;
    std::mt19937_64 engine_;
};

double distance(const Vector& x, const Vector& a);

/// d_i(x) + omega_eps for every anchor, one noise draw per anchor in order.
DistanceSet measure_all(const Vector& x, const AnchorSet& anchors, NoiseSource& noise);

/// Exact distances; equivalent to measure_all with epsilon = 0.
DistanceSet measure_all(const Vector& x, const AnchorSet& anchors);

/// All pairs i < j over p indices, lexicographic. Throws UsageError for p < 2.
PairIndexSet make_pairs(int p);

/// n x n rotation matrix check: R^T R = I within tol and det(R) = +1.
bool is_rotation(const Matrix& R, double tol = 1e-12);

}  // namespace dcl
