#include "dcl/core.hpp"

#include <cmath>

namespace dcl {

void require_point(const Vector& x, const char* what) {
    if (x.size() < 2) {
        throw UsageError(std::string(what) + ": dimension must be at least 2");
    }
    if (!x.allFinite()) {
        throw UsageError(std::string(what) + ": non-finite coordinate");
    }
}

AnchorSet::AnchorSet(const std::vector<Vector>& anchors) {
    if (anchors.empty()) {
        throw UsageError("anchor set is empty");
    }
    const auto n = anchors.front().size();
    positions_.resize(n, static_cast<Eigen::Index>(anchors.size()));
    for (std::size_t i = 0; i < anchors.size(); ++i) {
        if (anchors[i].size() != n) {
            throw UsageError("anchor " + std::to_string(i) + " has mismatched dimension");
        }
        require_point(anchors[i], "anchor");
        positions_.col(static_cast<Eigen::Index>(i)) = anchors[i];
    }
}

AnchorSet::AnchorSet(Matrix columns) : positions_(std::move(columns)) {
    if (positions_.cols() == 0) {
        throw UsageError("anchor set is empty");
    }
    if (positions_.rows() < 2) {
        throw UsageError("anchor: dimension must be at least 2");
    }
    if (!positions_.allFinite()) {
        throw UsageError("anchor: non-finite coordinate");
    }
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    return mix(mix(mix(seed) ^ a) ^ b);
}

NoiseSource::NoiseSource(NoiseSpec spec) : epsilon_(spec.epsilon), engine_(spec.seed) {
    if (!(spec.epsilon >= 0.0) || !std::isfinite(spec.epsilon)) {
        throw UsageError("noise epsilon must be finite and nonnegative");
    }
}

double NoiseSource::unit() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

Vector NoiseSource::sample_vector(int n) {
    Vector out(n);
    for (int i = 0; i < n; ++i) out[i] = sample();
    return out;
}

double distance(const Vector& x, const Vector& a) {
    if (x.size() != a.size()) {
        throw UsageError("distance: dimension mismatch");
    }
    return (x - a).norm();
}

DistanceSet measure_all(const Vector& x, const AnchorSet& anchors, NoiseSource& noise) {
    if (x.size() != anchors.dim()) {
        throw UsageError("measure_all: dimension mismatch");
    }
    DistanceSet d(anchors.size());
    for (int i = 0; i < anchors.size(); ++i) {
        d[i] = (x - anchors.positions().col(i)).norm() + noise.sample();
    }
    return d;
}

DistanceSet measure_all(const Vector& x, const AnchorSet& anchors) {
    if (x.size() != anchors.dim()) {
        throw UsageError("measure_all: dimension mismatch");
    }
    DistanceSet d(anchors.size());
    for (int i = 0; i < anchors.size(); ++i) {
        d[i] = (x - anchors.positions().col(i)).norm();
    }
    return d;
}

PairIndexSet make_pairs(int p) {
    if (p < 2) {
        throw UsageError("make_pairs: need at least 2 indices, got " + std::to_string(p));
    }
    PairIndexSet pairs;
    pairs.reserve(static_cast<std::size_t>(p * (p - 1) / 2));
    for (int i = 0; i < p; ++i) {
        for (int j = i + 1; j < p; ++j) pairs.push_back({i, j});
    }
    return pairs;
}

bool is_rotation(const Matrix& R, double tol) {
    if (R.rows() != R.cols() || R.rows() == 0) return false;
    const auto n = R.rows();
    if ((R.transpose() * R - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() > tol) return false;
    return R.determinant() > 0.0;
}

}  // namespace dcl
