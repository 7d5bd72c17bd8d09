#include "support/world_fixtures.hpp"

#include "uvwipe/raster.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace uvwipe;

TEST(TotalVariation, EmptyIsZero) {
    EXPECT_EQ(total_variation(BinaryMap(16, 16)), 0.0);
}

TEST(TotalVariation, SinglePixel) {
    BinaryMap m(8, 8);
    m(3, 4) = 1;
    // Own pixel sqrt(2), left neighbour 1, upper neighbour 1.
    EXPECT_DOUBLE_EQ(total_variation(m), std::sqrt(2.0) + 2.0);
}

TEST(TotalVariation, AllOnes) {
    const BinaryMap m(8, 8, 1);
    // 7 pixels on the last column and 7 on the last row see one zero each,
    // the corner sees two.
    EXPECT_DOUBLE_EQ(total_variation(m), 14.0 + std::sqrt(2.0));
}

TEST(TotalVariation, MatchesOracleExactly) {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        for (int n : {8, 64}) {
            const BinaryMap m = fixtures::random_map(n, rng, 0.1 + 0.008 * trial);
            EXPECT_EQ(total_variation(m), fixtures::tv_oracle(m));
        }
    }
}

TEST(TotalVariation, NonSquare) {
    std::mt19937_64 rng(5);
    std::bernoulli_distribution bit(0.5);
    BinaryMap m(5, 11);
    for (auto& x : m.data()) x = bit(rng);
    EXPECT_EQ(total_variation(m), fixtures::tv_oracle(m));
}

TEST(Frontier, RingAroundCoveredPixel) {
    BinaryMap cov(5, 5);
    const BinaryMap border(5, 5, 1);
    cov(2, 2) = 1;
    const BinaryMap f = compute_frontier(cov, border);
    EXPECT_EQ(count_ones(f), 8u);
    EXPECT_EQ(f(2, 2), 0);
    EXPECT_EQ(f(1, 1), 1);
    EXPECT_EQ(f(3, 3), 1);
    EXPECT_EQ(f(0, 0), 0);
}

TEST(Frontier, RespectsBorderAndEdges) {
    BinaryMap cov(4, 4);
    BinaryMap border(4, 4, 1);
    cov(0, 0) = 1;
    border(1, 1) = 0;
    const BinaryMap f = compute_frontier(cov, border);
    EXPECT_EQ(count_ones(f), 2u);
    EXPECT_EQ(f(0, 1), 1);
    EXPECT_EQ(f(1, 0), 1);
}

TEST(Frontier, MatchesNeighbourhoodDefinition) {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 20; ++trial) {
        const BinaryMap cov = fixtures::random_map(32, rng, 0.2);
        const BinaryMap border = fixtures::random_map(32, rng, 0.8);
        const BinaryMap f = compute_frontier(cov, border);
        for (int r = 0; r < 32; ++r) {
            for (int c = 0; c < 32; ++c) {
                bool near = false;
                for (int dr = -1; dr <= 1; ++dr) {
                    for (int dc = -1; dc <= 1; ++dc) {
                        if ((dr || dc) && cov.in_bounds(r + dr, c + dc) && cov(r + dr, c + dc)) {
                            near = true;
                        }
                    }
                }
                const bool expected = near && !cov(r, c) && border(r, c);
                EXPECT_EQ(f(r, c), expected ? 1 : 0);
            }
        }
    }
}
