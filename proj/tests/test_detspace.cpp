// Copyright 2026 The ccwp Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file test_detspace.cpp
 * @brief Determinant bitstrings, excitation operators with phases and space builders.
 */

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <random>

namespace ccwp {
namespace {

TEST(Reference, Masks) {
    EXPECT_EQ(reference_determinant(2, 4), Det{0b0011});
    EXPECT_EQ(reference_determinant(6, 6), Det{0b111111});
    EXPECT_EQ(reference_determinant(10, 14), Det{0x3FF});
    EXPECT_EQ(reference_determinant(64, 64), ~Det{0});
    EXPECT_THROW(reference_determinant(5, 4), Error);
    EXPECT_THROW(reference_determinant(2, 65), Error);
}

TEST(Excitation, SingleExcitationPhase) {
    // a+_2 a_0 on |0 1>: the creator passes one occupied orbital.
    const auto r = apply_excitation({{0}, {2}}, 0b0011);
    ASSERT_TRUE(r);
    EXPECT_EQ(r->det, Det{0b0110});
    EXPECT_EQ(r->phase, -1);
    const auto s = apply_excitation({{1}, {2}}, 0b0011);
    ASSERT_TRUE(s);
    EXPECT_EQ(s->det, Det{0b0101});
    EXPECT_EQ(s->phase, 1);
}

TEST(Excitation, DoubleExcitationPhase) {
    // a+_2 a+_3 a_1 a_0 |0 1> = |2 3> with no sign change.
    const auto r = apply_excitation({{0, 1}, {2, 3}}, 0b0011);
    ASSERT_TRUE(r);
    EXPECT_EQ(r->det, Det{0b1100});
    EXPECT_EQ(r->phase, 1);
}

TEST(Excitation, BlockingRules) {
    EXPECT_FALSE(apply_excitation({{0}, {2}}, 0b0110));
    EXPECT_FALSE(apply_excitation({{0}, {2}}, 0b0101));
    EXPECT_FALSE(apply_deexcitation({{0}, {2}}, 0b0011));
    EXPECT_FALSE(apply_deexcitation({{0}, {2}}, 0b0111));
}

TEST(Excitation, DeexcitationReversesExcitation) {
    const DeterminantSpace full = build_space(4, 12, kFullRank);
    for (const auto& mu : full.excitations) {
        const auto up = apply_excitation(mu, full.reference);
        ASSERT_TRUE(up);
        const auto down = apply_deexcitation(mu, up->det);
        ASSERT_TRUE(down);
        EXPECT_EQ(down->det, full.reference);
        EXPECT_EQ(down->phase * up->phase, 1);
    }
}

TEST(Excitation, CommutativityExhaustive) {
    for (auto [n, k] : {std::pair{2, 4}, std::pair{2, 8}, std::pair{4, 8}, std::pair{2, 12}}) {
        const auto r = test::check_commutativity(n, k);
        EXPECT_TRUE(r.ok()) << n << "/" << k << ": " << r.failures << " of " << r.cases;
    }
}

TEST(Excitation, AdjointnessExhaustive) {
    for (auto [n, k] : {std::pair{2, 4}, std::pair{4, 8}, std::pair{4, 12}, std::pair{6, 12}}) {
        const auto r = test::check_adjointness(n, k);
        EXPECT_TRUE(r.ok()) << n << "/" << k << ": " << r.failures << " of " << r.cases;
    }
}

TEST(Excitation, AdjointInnerProductsOnRandomPairs) {
    const DeterminantSpace full = build_space(10, 14, kFullRank);
    std::mt19937 gen(11);
    std::uniform_int_distribution<std::size_t> pick_det(0, full.size() - 1);
    std::uniform_int_distribution<std::size_t> pick_mu(0, full.excitations.size() - 1);
    int nonzero = 0;
    for (int n = 0; n < 100; ++n) {
        const Det phi = full.dets[pick_det(gen)];
        const auto& mu = full.excitations[pick_mu(gen)];
        const auto image = apply_excitation(mu, phi);
        // choose psi = image when possible so that the pair is informative
        const Det psi = image ? image->det : full.dets[pick_det(gen)];
        const int lhs = image && image->det == psi ? image->phase : 0;
        const auto back = apply_deexcitation(mu, psi);
        const int rhs = back && back->det == phi ? back->phase : 0;
        EXPECT_EQ(lhs, rhs);
        nonzero += lhs != 0;
    }
    EXPECT_GT(nonzero, 0);
}

TEST(Replacement, IdentityAndBlocking) {
    const auto id = apply_orbital_replacement({0, 1}, {0, 1}, 0b1011);
    ASSERT_TRUE(id);
    EXPECT_EQ(id->det, Det{0b1011});
    EXPECT_EQ(id->phase, 1);
    EXPECT_FALSE(apply_orbital_replacement({0, 2}, {0, 2}, 0b1011));
    EXPECT_FALSE(apply_orbital_replacement({2}, {1}, 0b0011));
    EXPECT_THROW(apply_orbital_replacement({0, 1}, {1, 2}, 0b0011), Error);
    EXPECT_THROW(apply_orbital_replacement({0}, {1, 2}, 0b0011), Error);
}

TEST(Replacement, AgreesWithExcitationOperators) {
    const DeterminantSpace full = build_space(4, 10, kFullRank);
    for (const auto& mu : full.excitations) {
        for (Det d : full.dets) {
            EXPECT_EQ(apply_orbital_replacement(mu.holes, mu.particles, d), apply_excitation(mu, d));
            EXPECT_EQ(apply_orbital_replacement(mu.particles, mu.holes, d), apply_deexcitation(mu, d));
        }
    }
}

TEST(Replacement, FactorizationExhaustive) {
    for (auto [n, k] : {std::pair{2, 4}, std::pair{2, 8}, std::pair{4, 8}, std::pair{4, 10}}) {
        const auto r = test::check_replacement_factorization(n, k);
        EXPECT_TRUE(r.ok()) << n << "/" << k << ": " << r.failures << " of " << r.cases;
    }
}

TEST(Enumeration, H2Singles) {
    const auto ex = enumerate_excitations(2, 4, 1);
    ASSERT_EQ(ex.size(), 2u);
    EXPECT_EQ(ex[0], (ExcitationIndex{{0}, {2}}));
    EXPECT_EQ(ex[1], (ExcitationIndex{{1}, {3}}));
}

TEST(Enumeration, OrderingIsRankMajorThenLexicographic) {
    const auto ex = enumerate_excitations(6, 14, kFullRank);
    for (std::size_t i = 1; i < ex.size(); ++i) {
        const auto& a = ex[i - 1];
        const auto& b = ex[i];
        const bool ordered = a.rank() < b.rank() ||
                             (a.rank() == b.rank() && (a.holes < b.holes || (a.holes == b.holes && a.particles < b.particles)));
        ASSERT_TRUE(ordered) << i;
    }
    EXPECT_EQ(ex, enumerate_excitations(6, 14, kFullRank));
}

TEST(Enumeration, H2ORankTwoCountMatchesBruteForce) {
    const int n = 10, k = 14;
    const Det ref = reference_determinant(n, k);
    std::size_t count = 0;
    for (Det d = 0; d < (Det{1} << k); ++d) {
        if (popcount(d) != n || d == ref) continue;
        const int na = popcount(d & 0x1555), nb = popcount(d & 0x2AAA);
        if (na != nb) continue;
        if (popcount(d ^ ref) <= 4) ++count;
    }
    EXPECT_EQ(enumerate_excitations(n, k, 2).size(), count);
}

TEST(Space, FullCountsAndAlignment) {
    const auto h2 = build_space(2, 4, kFullRank);
    EXPECT_EQ(h2.size(), 4u);
    const auto full = build_space(10, 14, kFullRank);
    EXPECT_EQ(full.size(), 441u);
    EXPECT_EQ(full.size(), full.excitations.size() + 1);
    EXPECT_TRUE(full.full);
    EXPECT_EQ(full.dets[0], full.reference);
    for (std::size_t i = 1; i < full.size(); ++i) {
        const auto img = apply_excitation(full.excitations[i - 1], full.reference);
        ASSERT_TRUE(img);
        EXPECT_EQ(img->det, full.dets[i]);
        EXPECT_EQ(excitation_rank(full.dets[i], full.reference), full.excitations[i - 1].rank());
        EXPECT_EQ(full.find(full.dets[i]), i);
    }
    EXPECT_EQ(full.find(Det{1}), DeterminantSpace::npos);
}

TEST(Space, TruncatedSpacesArePrefixes) {
    const auto s1 = build_space(6, 14, 1);
    const auto s2 = build_space(6, 14, 2);
    const auto full = build_space(6, 14, kFullRank);
    ASSERT_LT(s1.size(), s2.size());
    ASSERT_LT(s2.size(), full.size());
    for (std::size_t i = 0; i < s1.size(); ++i) EXPECT_EQ(s1.dets[i], s2.dets[i]);
    for (std::size_t i = 0; i < s2.size(); ++i) EXPECT_EQ(s2.dets[i], full.dets[i]);
    EXPECT_EQ(full.excitation_count(2), s2.excitations.size());
    EXPECT_EQ(s2.max_rank, 2);
}

TEST(ExcitationRank, Examples) {
    EXPECT_EQ(excitation_rank(0b0011, 0b0011), 0);
    EXPECT_EQ(excitation_rank(0b0110, 0b0011), 1);
    EXPECT_EQ(excitation_rank(0b1100, 0b0011), 2);
    EXPECT_THROW(excitation_rank(0b0111, 0b0011), Error);
}

TEST(Strings, GridSpaceMatchesDeterminantCount) {
    const auto s = build_strings(7, 5);
    EXPECT_EQ(s.size(), 21u);
    EXPECT_EQ(s.strings[0], 0b11111u);
    EXPECT_EQ(s.max_rank(), 2);
    const auto links = build_string_links(s);
    EXPECT_EQ(links.by_target_offset.size(), s.size() + 1);
    EXPECT_EQ(links.by_source_offset.size(), s.size() + 1);
}

}  // namespace
}  // namespace ccwp
