#include "dcl/coupling.hpp"
#include "dcl/homing.hpp"

#include "test_util.hpp"

#include <gtest/gtest.h>

using namespace dcl;
using dcl::testing::P;

namespace {

const AnchorSet kUnit({P(0, 0), P(1, 0), P(0, 1)});

}  // namespace

TEST(BuildComponents, HandExpandedExample) {
    const CouplingComponents c = build_components(kUnit);
    // pair (0,1): -2((0,0)-(1,0)) = (2,0),  0 - 1 = -1
    // pair (0,2): -2((0,0)-(0,1)) = (0,2),  0 - 1 = -1
    // pair (1,2): -2((1,0)-(0,1)) = (-2,2), 1 - 1 =  0
    Matrix A(3, 2);
    A << 2, 0, 0, 2, -2, 2;
    Vector b(3);
    b << -1, -1, 0;
    EXPECT_EQ(c.A, A);
    EXPECT_EQ(c.b, b);
    EXPECT_EQ(c.anchor_count, 3);
    EXPECT_EQ(c.pairs.size(), 3u);
}

TEST(BuildComponents, CollinearAnchorsAreDegenerate) {
    EXPECT_THROW(build_components(AnchorSet({P(0, 0), P(1, 0), P(2, 0)})), DegenerateAnchors);
    try {
        build_components(AnchorSet({P(0, 0), P(1, 0), P(2, 0)}));
    } catch (const DegenerateAnchors& e) {
        EXPECT_NE(std::string(e.what()).find("degenerate"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("rank"), std::string::npos);
    }
}

TEST(BuildComponents, TooFewAnchorsAreDegenerate) {
    EXPECT_THROW(build_components(AnchorSet(std::vector<Vector>{P(0, 0), P(1, 0)})), DegenerateAnchors);
    EXPECT_THROW(build_components(AnchorSet({P(0, 0, 0), P(1, 0, 0), P(0, 1, 0)})),
                 DegenerateAnchors);
    // coplanar 3-D anchors
    EXPECT_THROW(build_components(AnchorSet({P(0, 0, 1), P(1, 0, 1), P(0, 1, 1), P(1, 1, 1)})),
                 DegenerateAnchors);
}

TEST(BuildComponents, NearlyCollinearCaughtByRelativeThreshold) {
    EXPECT_THROW(build_components(AnchorSet({P(0, 0), P(1e6, 0), P(2e6, 1e-6)})),
                 DegenerateAnchors);
}

TEST(BuildComponents, LeftInverseIdentity) {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + trial % 2;
        const int p = n + 1 + trial % 4;
        const auto c = build_components(AnchorSet(dcl::testing::random_anchors(rng, n, p, 50)));
        EXPECT_LE((c.K * c.A - Matrix::Identity(n, n)).cwiseAbs().maxCoeff(), 1e-9);
    }
}

TEST(BuildComponents, SvdMatchesNormalEquations) {
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + trial % 2;
        const int p = n + 1 + trial % 4;
        const auto c = build_components(AnchorSet(dcl::testing::random_anchors(rng, n, p, 20)));
        const Matrix K_normal = normal_equations_inverse(c.A);
        EXPECT_LE((c.K - K_normal).cwiseAbs().maxCoeff(), 1e-9);
    }
}

TEST(CoupledMeasurements, Examples) {
    const auto pairs = make_pairs(3);
    Vector d(3);
    d << 0, 1, 1;
    Vector h = coupled_measurements(d, pairs);
    EXPECT_EQ(h, P(-1, -1, 0));

    d << 4, 4, 4;
    EXPECT_EQ(coupled_measurements(d, pairs), Vector::Zero(3));

    // x = (2,3): squared distances by hand 4+9, 1+9, 4+4
    d << std::sqrt(13.0), std::sqrt(10.0), std::sqrt(8.0);
    h = coupled_measurements(d, pairs);
    EXPECT_NEAR(h[0], 3.0, 1e-12);
    EXPECT_NEAR(h[1], 5.0, 1e-12);
    EXPECT_NEAR(h[2], 2.0, 1e-12);
}

TEST(CoupledMeasurements, ShortDistanceSetIsUsageError) {
    EXPECT_THROW(coupled_measurements(P(1, 2), make_pairs(3)), UsageError);
}

TEST(RecoverPosition, Examples) {
    const auto c = build_components(kUnit);
    const Vector h = coupled_measurements(measure_all(P(2, 3), kUnit), c.pairs);
    // A (2,3) = (4, 6, 2) = h - b
    EXPECT_LE((c.A * P(2, 3) - (h - c.b)).norm(), 1e-12);
    EXPECT_LE((recover_position(c, h) - P(2, 3)).norm(), 1e-9);

    EXPECT_LE(recover_position(c, c.b).norm(), 1e-15);
}

TEST(RecoverPosition, RotatedAnchorsGiveAnchorFrameCoordinates) {
    const auto c = build_components(kUnit);
    const RigidTransform t = rotation2d(M_PI / 4);
    const AnchorSet world = transform_anchors(kUnit, t);
    for (const Vector& x : {P(2, 3), P(-5, 1), P(0.5, -7)}) {
        const Vector h = coupled_measurements(measure_all(x, world), c.pairs);
        const Vector expected = t.R().transpose() * x;
        EXPECT_LE((recover_position(c, h) - expected).norm(), 1e-9);
    }
}

TEST(RecoverPosition, WrongLengthIsUsageError) {
    const auto c = build_components(kUnit);
    EXPECT_THROW(recover_position(c, P(1, 2)), UsageError);
}

TEST(RecoverPosition, RoundTripProperty) {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 2 + trial % 2;
        const int p = 3 + trial % 4;
        if (p < n + 1) continue;
        const AnchorSet anchors(dcl::testing::random_anchors(rng, n, p, 100));
        const auto c = build_components(anchors);
        const Vector x = dcl::testing::random_vector(rng, n, 100);
        const Vector est = recover_position(c, coupled_measurements(measure_all(x, anchors), c.pairs));
        EXPECT_LE((est - x).norm(), 1e-9 * (1 + x.norm()));
    }
}

TEST(RecoverPosition, ShiftedFrameIdentity) {
    std::mt19937_64 rng(24);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 2 + trial % 2;
        const AnchorSet frame(dcl::testing::random_anchors(rng, n, n + 2, 30));
        const auto c = build_components(frame);
        const RigidTransform t(dcl::testing::random_rotation(rng, n),
                               dcl::testing::random_vector(rng, n, 20));
        const AnchorSet world = transform_anchors(frame, t);
        const Vector x = dcl::testing::random_vector(rng, n, 50);
        const Vector est = recover_position(c, coupled_measurements(measure_all(x, world), c.pairs));
        EXPECT_LE((est - t.R().transpose() * (x - t.r())).norm(), 1e-9 * (1 + x.norm()));
    }
}

TEST(RecoverPosition, AffineInMeasurements) {
    std::mt19937_64 rng(25);
    const auto c = build_components(AnchorSet(dcl::testing::random_anchors(rng, 2, 5, 30)));
    const auto m = static_cast<int>(c.b.size());
    for (int trial = 0; trial < 100; ++trial) {
        const Vector h1 = dcl::testing::random_vector(rng, m, 500);
        const Vector h2 = dcl::testing::random_vector(rng, m, 500);
        const double a = std::uniform_real_distribution<double>(-2, 2)(rng);
        const Vector lhs = recover_position(c, a * h1 + (1 - a) * h2);
        const Vector rhs = a * recover_position(c, h1) + (1 - a) * recover_position(c, h2);
        EXPECT_LE((lhs - rhs).norm(), 1e-9 * (1 + h1.norm() + h2.norm()));
    }
}

TEST(RecoverPosition, NoisyEstimateIsFiniteAndContinuous) {
    const auto c = build_components(kUnit);
    const Vector x = P(4, -2);
    NoiseSource noise(1.0, 3);
    const DistanceSet exact = measure_all(x, kUnit);
    for (int trial = 0; trial < 100; ++trial) {
        const DistanceSet noisy = measure_all(x, kUnit, noise);
        const Vector est = recover_position(c, coupled_measurements(noisy, c.pairs));
        EXPECT_TRUE(est.allFinite());
        // shrinking the same perturbation shrinks the error
        const DistanceSet half = exact + 1e-6 * (noisy - exact);
        const Vector est_half = recover_position(c, coupled_measurements(half, c.pairs));
        EXPECT_LE((est_half - x).norm(), 1e-3);
    }
}
