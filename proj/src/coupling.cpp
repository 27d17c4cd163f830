#include "dcl/coupling.hpp"

#include <cmath>
#include <sstream>

namespace dcl {

CouplingComponents build_components(const AnchorSet& anchors) {
    const int p = anchors.size();
    const int n = anchors.dim();
    if (p < 2) {
        throw DegenerateAnchors("degenerate anchors: need at least 2 anchors, got " +
                                std::to_string(p));
    }

    CouplingComponents c;
    c.pairs = make_pairs(p);
    c.anchor_count = p;
    const auto rows = static_cast<Eigen::Index>(c.pairs.size());
    c.A.resize(rows, n);
    c.b.resize(rows);

    const Matrix& a = anchors.positions();
    for (Eigen::Index r = 0; r < rows; ++r) {
        const auto [i, j] = c.pairs[static_cast<std::size_t>(r)];
        c.A.row(r) = -2.0 * (a.col(i) - a.col(j)).transpose();
        c.b[r] = a.col(i).squaredNorm() - a.col(j).squaredNorm();
    }

    Eigen::JacobiSVD<Matrix> svd(c.A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vector& s = svd.singularValues();
    const double smax = s.size() > 0 ? s[0] : 0.0;
    const double smin = s.size() == n ? s[n - 1] : 0.0;
    if (s.size() < n || !(smax > 0.0) || smin < kRankTolerance * smax) {
        std::ostringstream msg;
        msg << "degenerate anchors: coupling matrix has rank below " << n
            << " (smallest/largest singular value = " << (smax > 0.0 ? smin / smax : 0.0)
            << "); anchors must include " << n + 1 << " positions not on a common hyperplane";
        throw DegenerateAnchors(msg.str());
    }

    c.K = svd.matrixV() * s.cwiseInverse().asDiagonal() * svd.matrixU().transpose();
    return c;
}

Vector coupled_measurements(const DistanceSet& d, const PairIndexSet& pairs) {
    Vector h(static_cast<Eigen::Index>(pairs.size()));
    for (std::size_t r = 0; r < pairs.size(); ++r) {
        const auto [i, j] = pairs[r];
        if (j >= d.size()) {
            throw UsageError("coupled_measurements: pair index exceeds distance count");
        }
        h[static_cast<Eigen::Index>(r)] = d[i] * d[i] - d[j] * d[j];
    }
    return h;
}

Vector recover_position(const CouplingComponents& c, const Vector& h) {
    if (h.size() != c.b.size()) {
        throw UsageError("recover_position: measurement vector has length " +
                         std::to_string(h.size()) + ", expected " +
                         std::to_string(c.b.size()));
    }
    return c.K * (h - c.b);
}

Matrix normal_equations_inverse(const Matrix& A) {
    const Matrix gram = A.transpose() * A;
    return gram.llt().solve(A.transpose());
}

}  // namespace dcl
