#include "dcl/core.hpp"

#include "test_util.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace dcl;
using dcl::testing::P;

TEST(Distance, Examples) {
    EXPECT_EQ(distance(P(0, 0), P(0, 0)), 0.0);
    EXPECT_DOUBLE_EQ(distance(P(3, 4), P(0, 0)), 5.0);
    // (2-1)^2 + (3-0)^2 = 10
    EXPECT_NEAR(distance(P(2, 3), P(1, 0)), 3.16227766016838, 1e-12);
}

TEST(Distance, DimensionMismatchIsUsageError) {
    EXPECT_THROW(distance(P(0, 0), P(0, 0, 0)), UsageError);
}

TEST(Distance, SymmetricAndRigidInvariant) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 500; ++trial) {
        const int n = 2 + trial % 2;
        const Vector x = dcl::testing::random_vector(rng, n, 100);
        const Vector y = dcl::testing::random_vector(rng, n, 100);
        const Matrix R = dcl::testing::random_rotation(rng, n);
        const Vector r = dcl::testing::random_vector(rng, n, 50);
        EXPECT_EQ(distance(x, y), distance(y, x));
        EXPECT_NEAR(distance(R * x + r, R * y + r), distance(x, y), 1e-12 * (1 + distance(x, y)));
    }
}

TEST(AnchorSet, RejectsBadInput) {
    EXPECT_THROW(AnchorSet(std::vector<Vector>{}), UsageError);
    EXPECT_THROW(AnchorSet(std::vector<Vector>{P(0, 0), P(1, 0, 0)}), UsageError);
    Vector bad = P(0, 0);
    bad[1] = std::nan("");
    EXPECT_THROW(AnchorSet(std::vector<Vector>{P(0, 0), bad}), UsageError);
    Vector one(1);
    one << 1.0;
    EXPECT_THROW(AnchorSet(std::vector<Vector>{one}), UsageError);
}

TEST(AnchorSet, KeepsOrder) {
    const AnchorSet a({P(5, 1), P(-2, 3), P(0, 0)});
    ASSERT_EQ(a.size(), 3);
    EXPECT_EQ(a[0], P(5, 1));
    EXPECT_EQ(a[1], P(-2, 3));
    EXPECT_EQ(a[2], P(0, 0));
}

TEST(MeasureAll, NoiselessDistances) {
    const AnchorSet anchors({P(1, 0), P(0, 1), P(-1, -1)});
    NoiseSource noise(0.0, 42);
    const DistanceSet d = measure_all(P(0, 0), anchors, noise);
    EXPECT_DOUBLE_EQ(d[0], 1.0);
    EXPECT_DOUBLE_EQ(d[1], 1.0);
    EXPECT_DOUBLE_EQ(d[2], std::sqrt(2.0));
}

TEST(MeasureAll, ZeroEpsilonIsBitExact) {
    std::mt19937_64 rng(3);
    const AnchorSet anchors(dcl::testing::random_anchors(rng, 2, 5, 30));
    for (int i = 0; i < 100; ++i) {
        const Vector x = dcl::testing::random_vector(rng, 2, 50);
        NoiseSource noise(0.0, static_cast<std::uint64_t>(i));
        const DistanceSet noisy = measure_all(x, anchors, noise);
        const DistanceSet exact = measure_all(x, anchors);
        for (int k = 0; k < anchors.size(); ++k) EXPECT_EQ(noisy[k], exact[k]);
    }
}

TEST(MeasureAll, NoiseStaysWithinEpsilon) {
    std::mt19937_64 rng(5);
    const AnchorSet anchors(dcl::testing::random_anchors(rng, 2, 4, 30));
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        NoiseSource noise(5.0, seed);
        const Vector x = dcl::testing::random_vector(rng, 2, 40);
        const DistanceSet d = measure_all(x, anchors, noise);
        for (int i = 0; i < anchors.size(); ++i) {
            EXPECT_LE(std::abs(d[i] - distance(x, anchors[i])), 5.0);
        }
    }
}

TEST(MeasureAll, SameSeedReplays) {
    const AnchorSet anchors({P(1, 0), P(0, 1), P(-1, -1)});
    NoiseSource a(2.5, 99), b(2.5, 99);
    for (int i = 0; i < 10; ++i) {
        const DistanceSet da = measure_all(P(3, -2), anchors, a);
        const DistanceSet db = measure_all(P(3, -2), anchors, b);
        EXPECT_EQ(da, db);
    }
}

TEST(NoiseSource, UniformOnSymmetricInterval) {
    NoiseSource noise(1.0, 7);
    double lo = 1.0, hi = -1.0, sum = 0.0;
    constexpr int kDraws = 200000;
    for (int i = 0; i < kDraws; ++i) {
        const double w = noise.sample();
        lo = std::min(lo, w);
        hi = std::max(hi, w);
        sum += w;
    }
    EXPECT_GE(lo, -1.0);
    EXPECT_LE(hi, 1.0);
    EXPECT_LT(lo, -0.999);
    EXPECT_GT(hi, 0.999);
    EXPECT_NEAR(sum / kDraws, 0.0, 0.01);
}

TEST(NoiseSource, RejectsNegativeEpsilon) { EXPECT_THROW(NoiseSource(-1.0, 0), UsageError); }

TEST(DeriveSeed, DistinctStreams) {
    std::set<std::uint64_t> seen;
    for (std::uint64_t a = 0; a < 50; ++a)
        for (std::uint64_t b = 0; b < 50; ++b) seen.insert(derive_seed(1, a, b));
    EXPECT_EQ(seen.size(), 2500u);
    EXPECT_NE(derive_seed(1, 2, 3), derive_seed(1, 3, 2));
}

TEST(MakePairs, Examples) {
    EXPECT_EQ(make_pairs(2), (PairIndexSet{{0, 1}}));
    EXPECT_EQ(make_pairs(3), (PairIndexSet{{0, 1}, {0, 2}, {1, 2}}));
    const auto four = make_pairs(4);
    ASSERT_EQ(four.size(), 6u);
    EXPECT_EQ(four.back(), (IndexPair{2, 3}));
}

TEST(MakePairs, CountAndUniqueness) {
    for (int p = 2; p <= 12; ++p) {
        const auto pairs = make_pairs(p);
        EXPECT_EQ(static_cast<int>(pairs.size()), p * (p - 1) / 2);
        std::set<std::pair<int, int>> unique;
        for (const auto& [i, j] : pairs) {
            EXPECT_LT(i, j);
            unique.insert({i, j});
        }
        EXPECT_EQ(unique.size(), pairs.size());
        EXPECT_TRUE(std::is_sorted(pairs.begin(), pairs.end(), [](auto a, auto b) {
            return std::pair(a.first, a.second) < std::pair(b.first, b.second);
        }));
    }
}

TEST(MakePairs, TooFewIsUsageError) {
    EXPECT_THROW(make_pairs(1), UsageError);
    EXPECT_THROW(make_pairs(0), UsageError);
}
