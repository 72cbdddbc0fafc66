// Copyright 2026 The ccwp Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file test_solver.cpp
 * @brief FCI eigensolvers, the quasi-Newton CC solver and the a-posteriori bound.
 */

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace ccwp {
namespace {

const std::vector<std::string>& moderate_fixtures() {
    static const std::vector<std::string> names = {"h2_sto6g", "lih_631g", "beh2_sto6g", "bh3_sto6g",
                                                   "h2o_sto6g", "nh3_sto6g", "n2_sto6g",  "co_sto6g"};
    return names;
}

/// ||x||_F with the mean-field weights of the excitations.
double f_norm(const Vec& x, const Vec& host_weights) {
    return std::sqrt((x.array().square() * host_weights.tail(x.size()).array()).sum());
}

TEST(Fci, OneDimensionalSpace) {
    const auto s = build_space(4, 4, kFullRank);
    ASSERT_EQ(s.size(), 1u);
    Mat h(1, 1);
    h << -2.5;
    const auto r = solve_fci(s, h);
    EXPECT_EQ(r.energy, -2.5);
    EXPECT_EQ(r.psi(0), 1.0);
    EXPECT_TRUE(std::isinf(r.gap));
}

TEST(Fci, DegenerateGroundStateIsRejected) {
    const auto s = build_space(2, 4, kFullRank);
    Mat h = Mat::Identity(4, 4);
    h(3, 3) = 2.0;
    EXPECT_THROW(solve_fci(s, h), Error);
}

TEST(Fci, H2MatchesOracleWithPositiveReference) {
    const auto& d = test::dense("h2_sto6g");
    const auto& o = test::oracle("h2_sto6g");
    EXPECT_NEAR(d.fci.energy, o["e_fci"].get<double>(), 1e-12);
    EXPECT_NEAR(d.fci.gap, o["fci_gap"].get<double>(), 1e-10);
    EXPECT_GT(d.fci.psi(0), 0.0);
    EXPECT_NEAR(d.fci.psi.norm(), 1.0, 1e-14);
}

TEST(Fci, GridSolveMatchesOracle) {
    for (const auto& name : moderate_fixtures()) {
        const auto& gs = test::ground(name);
        const auto& o = test::oracle(name);
        EXPECT_NEAR(gs.energy, o["e_fci"].get<double>(), 1e-9) << name;
        EXPECT_NEAR(gs.gap, o["fci_gap"].get<double>(), 1e-6) << name;
        EXPECT_GT(gs.psi_grid(0), 0.0) << name;
    }
}

TEST(Fci, GridSolveMatchesDenseSolve) {
    for (const auto& name : {"h2o_sto6g", "beh2_sto6g"}) {
        const auto& d = test::dense(name);
        const Model& m = test::model(name);
        const auto r = solve_fci(m);
        EXPECT_NEAR(r.energy, d.fci.energy, 1e-10) << name;
        EXPECT_LT((r.psi - d.fci.psi).cwiseAbs().maxCoeff(), 1e-8) << name;
    }
}

TEST(Cc, FirstIterationGivesFirstOrderAmplitudes) {
    const auto& d = test::dense("h2_sto6g");
    CcOptions o;
    o.max_iter = 1;
    const auto r = solve_cc(d.full, d.full, d.h, d.weights, o);
    const auto r0 = cc_residual(d.full, Vec::Zero(3), d.full, d.h).residual;
    for (Eigen::Index i = 0; i < 3; ++i) EXPECT_NEAR(r.t(i), -r0(i) / d.weights(i + 1), 1e-15);
    EXPECT_EQ(r.iterations, 1);
}

TEST(Cc, DenseFullRankEqualsFci) {
    for (const auto& name : {"h2_sto6g", "h2o_sto6g"}) {
        const auto& d = test::dense(name);
        const auto r = solve_cc(d.full, d.full, d.h, d.weights);
        ASSERT_TRUE(r.converged) << name;
        EXPECT_NEAR(r.energy, d.fci.energy, 1e-9) << name;
        EXPECT_LT((r.t - amplitudes_from_ci(d.full, d.fci.psi)).cwiseAbs().maxCoeff(), 1e-8) << name;
    }
}

TEST(Cc, GridFullRankEqualsFci) {
    for (const auto& name : moderate_fixtures()) {
        const auto r = solve_cc(test::model(name), kFullRank);
        ASSERT_TRUE(r.converged) << name;
        EXPECT_NEAR(r.energy, test::ground(name).energy, 1e-9) << name;
    }
}

TEST(Cc, GridAndDenseCcsdAgree) {
    const auto& d = test::dense("h2o_sto6g");
    const Model& m = test::model("h2o_sto6g");
    const auto amp = build_space(m.nelec, 2 * m.norb, 2);
    const auto dense_r = solve_cc(amp, d.full, d.h, d.weights);
    const auto grid_r = solve_cc(m, 2);
    ASSERT_TRUE(dense_r.converged);
    ASSERT_TRUE(grid_r.converged);
    EXPECT_NEAR(dense_r.energy, grid_r.energy, 1e-10);
    EXPECT_LT((dense_r.t - grid_r.t).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Cc, CcsdEnergiesMatchOracle) {
    for (const auto& name : moderate_fixtures()) {
        const auto& o = test::oracle(name);
        if (!o.contains("e_ccsd")) continue;
        const auto r = solve_cc(test::model(name), 2);
        ASSERT_TRUE(r.converged) << name;
        EXPECT_NEAR(r.energy, o["e_ccsd"].get<double>(), 1e-8) << name;
    }
}

TEST(Cc, RestartFromSolutionIsAFixedPoint) {
    const Model& m = test::model("h2o_sto6g");
    const auto r = solve_cc(m, 2);
    const auto again = solve_cc(m, 2, {}, &r.tau);
    EXPECT_TRUE(again.converged);
    EXPECT_LE(again.iterations, 2);
    EXPECT_NEAR(again.energy, r.energy, 1e-12);
}

TEST(Cc, NonConvergenceAndDivergenceAreFlagged) {
    const Model& m = test::model("h2o_sto6g");
    CcOptions o;
    o.max_iter = 2;
    const auto r = solve_cc(m, 2, o);
    EXPECT_FALSE(r.converged);
    EXPECT_FALSE(r.diverged);
    CcOptions tiny;
    tiny.divergence = 1e-3;
    const auto dv = solve_cc(m, 2, tiny);
    EXPECT_FALSE(dv.converged);
    EXPECT_TRUE(dv.diverged);
    EXPECT_THROW(solve_cc(m, 0), Error);
    EXPECT_THROW(solve_cc(m, m.nelec + 1), Error);
}

TEST(Cc, LevelShiftReachesTheSameSolution) {
    const Model& m = test::model("co_sto6g");
    CcOptions o;
    o.level_shift = 0.2;
    const auto shifted = solve_cc(m, 2, o);
    const auto plain = solve_cc(m, 2);
    ASSERT_TRUE(shifted.converged);
    ASSERT_TRUE(plain.converged);
    EXPECT_NEAR(shifted.energy, plain.energy, 1e-9);
}

TEST(Aposteriori, VanishesAtFullCcZero) {
    const auto& d = test::dense("h2o_sto6g");
    const Vec t = amplitudes_from_ci(d.full, d.fci.psi);
    EXPECT_LT(aposteriori_bound(d.full, t, d.h, d.weights, d.fci.energy), 1e-8);
}

TEST(Aposteriori, DominatesCcsdErrorDense) {
    const auto& d = test::dense("h2o_sto6g");
    const auto amp = build_space(d.full.nelec, d.full.n_spin, 2);
    const auto cc = solve_cc(amp, d.full, d.h, d.weights);
    ASSERT_TRUE(cc.converged);
    Vec padded = Vec::Zero(static_cast<Eigen::Index>(d.full.excitations.size()));
    padded.head(cc.t.size()) = cc.t;
    const Vec exact = amplitudes_from_ci(d.full, d.fci.psi);
    const double bound = aposteriori_bound(d.full, padded, d.h, d.weights, cc.energy);
    const double error = f_norm(padded - exact, d.weights);
    EXPECT_GE(bound, error);

    const Vec w = d.weights.tail(padded.size());
    const auto cr = cc_residual(d.full, padded, d.full, d.h);
    const Mat j = cc_jacobian(d.full, padded, d.full, d.h, cc.energy);
    const double manual =
        2.0 * cr.residual.cwiseQuotient(w.cwiseSqrt()).norm() / jacobian_inverse_norm(j, w);
    EXPECT_NEAR(bound, manual, 1e-10 * manual);
    EXPECT_NEAR(2.0 * (2.0 * cr.residual).cwiseQuotient(w.cwiseSqrt()).norm() / jacobian_inverse_norm(j, w),
                2.0 * manual, 1e-10 * manual);
}

TEST(Aposteriori, GridMatchesDense) {
    const auto& d = test::dense("h2o_sto6g");
    const Model& m = test::model("h2o_sto6g");
    const auto cc = solve_cc(m, 2);
    ASSERT_TRUE(cc.converged);
    Vec padded = Vec::Zero(static_cast<Eigen::Index>(d.full.excitations.size()));
    padded.head(cc.t.size()) = cc.t;
    EXPECT_NEAR(aposteriori_bound(m, cc.tau, cc.energy), aposteriori_bound(d.full, padded, d.h, d.weights, cc.energy),
                1e-8);
}

}  // namespace
}  // namespace ccwp
