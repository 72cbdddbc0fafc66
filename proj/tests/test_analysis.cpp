// Copyright 2026 The ccwp Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file test_analysis.cpp
 * @brief Well-posedness constants against frozen oracle values and their
 *        structural identities.
 */

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>

namespace ccwp {
namespace {

constexpr double kTol = 1e-6;

struct FullConstants {
    double lambda0;
    MonotonicityTerms mono;
    InfSupTerms infsup;
    double jac;
};

const FullConstants& full_constants(const std::string& name) {
    static std::map<std::string, FullConstants> cache;
    auto it = cache.find(name);
    if (it == cache.end()) {
        const Model& m = test::model(name);
        const GroundState& gs = test::ground(name);
        FullConstants c;
        c.lambda0 = coercivity_constant(m, gs);
        c.mono = monotonicity_constant(m, gs, gs.tau, c.lambda0);
        c.infsup = continuous_infsup_constant(m, gs.tau, c.lambda0);
        c.jac = jacobian_inverse_norm(m, gs.tau, gs.energy, -1);
        it = cache.emplace(name, c).first;
    }
    return it->second;
}

TEST(Overlap, Examples) {
    Vec ref = Vec::Unit(4, 0);
    EXPECT_EQ(reference_overlap(ref, ref), 1.0);
    EXPECT_EQ(reference_overlap(Vec::Unit(4, 2), ref), 0.0);
    const double o = test::ground("h2o_sto6g").overlap;
    EXPECT_GT(o, 0.9);
    EXPECT_LT(o, 1.0);
    EXPECT_NEAR(o, test::oracle("h2o_sto6g")["overlap"].get<double>(), 1e-9);
}

TEST(GroundState, AmplitudesReproduceTheState) {
    const Model& m = test::model("h2o_sto6g");
    const GroundState& gs = test::ground("h2o_sto6g");
    const Vec phi = m.engine->exp_ref(gs.tau);
    EXPECT_LT((phi - gs.psi_grid / gs.psi_grid(0)).cwiseAbs().maxCoeff(), 1e-10);
    const auto r = grid_residual(m, gs.tau);
    EXPECT_LT(r.residual.cwiseAbs().maxCoeff(), 1e-9);
}

class FullSpaceConstants : public ::testing::TestWithParam<std::string> {};

TEST_P(FullSpaceConstants, MatchOracle) {
    const std::string name = GetParam();
    const auto& o = test::oracle(name)["full"];
    const auto& c = full_constants(name);
    EXPECT_NEAR(c.lambda0, o["lambda0"].get<double>(), kTol);
    EXPECT_NEAR(c.mono.h_norm, o["hnorm"].get<double>(), kTol);
    EXPECT_NEAR(c.mono.t_norm, o["tnorm"].get<double>(), kTol);
    EXPECT_NEAR(c.mono.gamma, o["gamma_monotone"].get<double>(), kTol);
    EXPECT_NEAR(c.infsup.beta, o["beta"].get<double>(), kTol);
    EXPECT_NEAR(c.infsup.value, o["infsup_continuous"].get<double>(), kTol);
    EXPECT_NEAR(c.jac, o["jac_inv_norm"].get<double>(), kTol);
    EXPECT_EQ(c.mono.gamma, c.lambda0 - c.mono.h_norm * c.mono.t_norm);
    EXPECT_EQ(c.infsup.value, c.infsup.lambda_star / c.infsup.beta);
}

INSTANTIATE_TEST_SUITE_P(Fixtures, FullSpaceConstants,
                         ::testing::Values("h2_sto6g", "lih_631g", "beh2_sto6g", "bh3_sto6g", "h2o_sto6g",
                                           "nh3_sto6g", "n2_sto6g", "co_sto6g"));

TEST(Constants, ZeroAmplitudesReduceToSpectralConstants) {
    const Model& m = test::model("h2o_sto6g");
    const GroundState& gs = test::ground("h2o_sto6g");
    const double l0 = full_constants("h2o_sto6g").lambda0;
    const Vec zero = Vec::Zero(static_cast<Eigen::Index>(m.dim()));
    const auto mono = monotonicity_constant(m, gs, zero, l0);
    EXPECT_EQ(mono.gamma, l0);
    EXPECT_EQ(mono.t_norm, 0.0);
    const auto is = continuous_infsup_constant(m, zero, l0);
    EXPECT_NEAR(is.beta, 1.0, 1e-12);
    EXPECT_NEAR(is.value, is.lambda_star, 1e-12);
}

TEST(Constants, RemainderIsReportedOnRequest) {
    const Model& m = test::model("h2o_sto6g");
    const GroundState& gs = test::ground("h2o_sto6g");
    const auto& c = full_constants("h2o_sto6g");
    const auto with = monotonicity_constant(m, gs, gs.tau, c.lambda0, true);
    EXPECT_GT(with.remainder, 0.0);
    EXPECT_EQ(with.gamma, c.mono.gamma);
}

TEST(Constants, LowerBoundsDoNotExceedJacobianSigmaMin) {
    for (const auto& name : {"h2_sto6g", "beh2_sto6g", "h2o_sto6g", "nh3_sto6g"}) {
        const auto& c = full_constants(name);
        EXPECT_LE(c.mono.gamma, c.jac + 1e-9) << name;
        EXPECT_LE(c.infsup.value, c.jac + 1e-9) << name;
        EXPECT_GT(c.lambda0, 0.0) << name;
    }
}

TEST(Constants, GridJacobianNormMatchesDenseJacobian) {
    const auto& d = test::dense("h2o_sto6g");
    const Vec t = amplitudes_from_ci(d.full, d.fci.psi);
    const Mat j = cc_jacobian(d.full, t, d.full, d.h, d.fci.energy);
    const Vec w = d.weights.tail(j.rows());
    EXPECT_NEAR(jacobian_inverse_norm(j, w), full_constants("h2o_sto6g").jac, 1e-8);
    EXPECT_NEAR(jacobian_inverse_norm(Mat::Identity(5, 5), Vec::Ones(5)), 1.0, 1e-14);
}

TEST(LambdaMin, HandExample) {
    Vec eps(4);
    eps << -1.0, -0.5, 0.3, 0.8;
    EXPECT_NEAR(lambda_min_formula(eps, 4, 1), 1.6, 1e-15);
    // lowest rank-3 weight: holes at -0.5, -0.5, -1.0 and particles at 0.3, 0.3, 0.8
    EXPECT_NEAR(lambda_min_formula(eps, 4, 2), 3.4, 1e-15);
}

TEST(Truncation, ZeroesHigherRanks) {
    const Model& m = test::model("h2o_sto6g");
    const Vec& tau = test::ground("h2o_sto6g").tau;
    const Vec t2 = truncate_amplitudes(m, tau, 2);
    for (std::size_t g = 0; g < m.dim(); ++g) {
        const auto i = static_cast<Eigen::Index>(g);
        EXPECT_EQ(t2(i), m.engine->rank()[g] <= 2 ? tau(i) : 0.0);
    }
}

class TruncatedConstants : public ::testing::TestWithParam<std::string> {};

TEST_P(TruncatedConstants, MatchOracle) {
    const std::string name = GetParam();
    const Model& m = test::model(name);
    const GroundState& gs = test::ground(name);
    const auto& c = full_constants(name);
    for (const auto& row : test::oracle(name)["truncated"]) {
        const int q = row["rank"].get<int>();
        if (q >= m.engine->max_rank()) continue;
        const auto st = structure_b2_terms(m, gs, q, c.lambda0);
        EXPECT_NEAR(st.lambda_min, row["lambda_min"].get<double>(), 1e-7) << name << " Q" << q;
        EXPECT_NEAR(st.beta_k, row["beta_k"].get<double>(), kTol) << name << " Q" << q;
        EXPECT_NEAR(st.coupling_norm, row["coupling_norm"].get<double>(), kTol) << name << " Q" << q;
        if (row["beta_k"].get<double>() < 1e-12) {
            // symmetry-forbidden coupling: beta_k is roundoff and the bound is effectively infinite
            EXPECT_LT(st.beta_k, 1e-12) << name << " Q" << q;
            EXPECT_GT(st.smallness_rhs, 1e12) << name << " Q" << q;
        } else {
            EXPECT_NEAR(st.smallness_rhs, row["smallness_rhs"].get<double>(), 1e-5 * st.smallness_rhs)
                << name << " Q" << q;
        }
        EXPECT_EQ(st.smallness_ok, row["smallness_ok"].get<bool>()) << name << " Q" << q;
        EXPECT_EQ(st.smallness_ok, st.coupling_norm < st.smallness_rhs);
        EXPECT_EQ(st.gamma_gs, c.lambda0);
        const auto dg = discrete_infsup_gamma(m, gs, st);
        EXPECT_NEAR(dg.dagger_norm, row["denom_dagger"].get<double>(), kTol) << name << " Q" << q;
        EXPECT_NEAR(dg.minus_norm, row["denom_minus"].get<double>(), kTol) << name << " Q" << q;
        EXPECT_NEAR(dg.r3_reference, row["r3_reference"].get<double>(), kTol) << name << " Q" << q;
        EXPECT_NEAR(dg.r3_truncated, row["r3_truncated"].get<double>(), kTol) << name << " Q" << q;
        EXPECT_NEAR(dg.value, row["gamma_discrete"].get<double>(), kTol) << name << " Q" << q;
        const double jac = jacobian_inverse_norm(m, truncate_amplitudes(m, gs.tau, q), gs.energy, q);
        EXPECT_NEAR(jac, row["jac_inv_norm"].get<double>(), kTol) << name << " Q" << q;
    }
}

INSTANTIATE_TEST_SUITE_P(Fixtures, TruncatedConstants,
                         ::testing::Values("h2_sto6g", "beh2_sto6g", "h2o_sto6g", "lih_631g", "n2_sto6g", "co_sto6g"));

TEST(Structure, RankRangeIsValidated) {
    const Model& m = test::model("h2o_sto6g");
    const GroundState& gs = test::ground("h2o_sto6g");
    EXPECT_THROW(structure_b2_terms(m, gs, 0, 0.3), Error);
    EXPECT_THROW(structure_b2_terms(m, gs, m.engine->max_rank(), 0.3), Error);
}

}  // namespace
}  // namespace ccwp
