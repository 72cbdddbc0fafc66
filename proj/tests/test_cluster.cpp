// Copyright 2026 The ccwp Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file test_cluster.cpp
 * @brief Cluster operators: action, adjoint, exponential and logarithm, the
 *        CC residual and Jacobian, and agreement of the string-grid engine
 *        with the determinant-space layer.
 */

#include "test_support.hpp"

#include <gtest/gtest.h>

namespace ccwp {
namespace {

const DeterminantSpace& h2o_full() { return test::dense("h2o_sto6g").full; }

Vec unit_ref(const DeterminantSpace& s) { return Vec::Unit(static_cast<Eigen::Index>(s.size()), 0); }

Eigen::Index n_exc(const DeterminantSpace& s) { return static_cast<Eigen::Index>(s.excitations.size()); }

TEST(ClusterApply, ZeroAmplitudesGiveZero) {
    const auto& s = h2o_full();
    const Vec psi = test::random_vec(static_cast<Eigen::Index>(s.size()), 1);
    EXPECT_EQ(cluster_apply(s, Vec::Zero(n_exc(s)), s, psi), Vec::Zero(psi.size()));
}

TEST(ClusterApply, AdjointInnerProducts) {
    const auto& s = h2o_full();
    const auto n = static_cast<Eigen::Index>(s.size());
    const Vec t = test::random_vec(n - 1, 2);
    const Vec psi = test::random_vec(n, 3), phi = test::random_vec(n, 4);
    const double lhs = cluster_apply(s, t, s, psi).dot(phi);
    const double rhs = psi.dot(cluster_apply(s, t, s, phi, true));
    EXPECT_NEAR(lhs, rhs, 1e-12 * std::max(1.0, std::abs(lhs)));
}

TEST(ClusterApply, UnitAmplitudeGivesExcitedDeterminant) {
    const auto& s = h2o_full();
    for (std::size_t mu : {std::size_t{0}, std::size_t{17}, s.excitations.size() - 1}) {
        Vec t = Vec::Zero(n_exc(s));
        t(static_cast<Eigen::Index>(mu)) = 1.0;
        const Vec out = cluster_apply(s, t, s, unit_ref(s));
        const auto img = apply_excitation(s.excitations[mu], s.reference);
        Vec expected = Vec::Zero(out.size());
        expected(static_cast<Eigen::Index>(mu + 1)) = img->phase;
        EXPECT_EQ(out, expected);
    }
}

TEST(ClusterApply, ImageOutsideHostThrows) {
    const auto full = build_space(4, 8, kFullRank);
    const auto sub = build_space(4, 8, 1);
    const Vec t = Vec::Ones(n_exc(full));
    EXPECT_THROW(cluster_apply(full, t, sub, unit_ref(sub)), Error);
}

TEST(ClusterApply, OperatorsCommute) {
    const auto& s = h2o_full();
    const auto n = static_cast<Eigen::Index>(s.size());
    const Vec t1 = test::random_vec(n - 1, 5), t2 = test::random_vec(n - 1, 6);
    const Vec psi = test::random_vec(n, 7);
    const Vec a = cluster_apply(s, t1, s, cluster_apply(s, t2, s, psi));
    const Vec b = cluster_apply(s, t2, s, cluster_apply(s, t1, s, psi));
    EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ClusterApply, Nilpotency) {
    for (auto [n, k] : {std::pair{2, 4}, std::pair{4, 8}, std::pair{6, 12}, std::pair{10, 14}}) {
        const auto r = test::check_nilpotency(n, k, 9);
        EXPECT_TRUE(r.ok()) << n << "/" << k;
    }
}

TEST(Exponential, IdentityAndInverse) {
    const auto& s = h2o_full();
    const auto n = static_cast<Eigen::Index>(s.size());
    const Vec psi = test::random_vec(n, 8);
    EXPECT_EQ(exp_cluster_apply(s, Vec::Zero(n - 1), s, psi), psi);
    const Vec t = test::random_vec(n - 1, 9, 0.3);
    const Vec back = exp_cluster_apply(s, t, s, exp_cluster_apply(s, t, s, psi, 1), -1);
    EXPECT_LT((back - psi).cwiseAbs().maxCoeff(), 1e-12);
    const Vec back_adj = exp_cluster_apply(s, t, s, exp_cluster_apply(s, t, s, psi, 1, true), -1, true);
    EXPECT_LT((back_adj - psi).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Exponential, ExtraTaylorTermVanishes) {
    const auto& s = h2o_full();
    const auto n = static_cast<Eigen::Index>(s.size());
    const Vec t = test::random_vec(n - 1, 10, 0.5);
    Vec term = unit_ref(s);
    Vec sum = term;
    for (int k = 1; k <= s.nelec; ++k) {
        term = cluster_apply(s, t, s, term) / k;
        sum += term;
    }
    const Vec extra = cluster_apply(s, t, s, term) / (s.nelec + 1);
    EXPECT_EQ(extra, Vec::Zero(n));
    EXPECT_LT((sum - exp_cluster_apply(s, t, s, unit_ref(s))).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Logarithm, Examples) {
    const auto& s = h2o_full();
    const auto n = static_cast<Eigen::Index>(s.size());
    EXPECT_EQ(log_cluster(s, unit_ref(s)), Vec::Zero(n - 1));
    const std::size_t mu = 5;
    Vec phi = unit_ref(s);
    const int ph = apply_excitation(s.excitations[mu], s.reference)->phase;
    phi(static_cast<Eigen::Index>(mu + 1)) = ph;
    Vec expected = Vec::Zero(n - 1);
    expected(static_cast<Eigen::Index>(mu)) = 1.0;
    EXPECT_LT((log_cluster(s, phi) - expected).cwiseAbs().maxCoeff(), 1e-15);
    phi(0) = 1e-13;
    EXPECT_THROW(log_cluster(s, phi), Error);
}

TEST(Logarithm, RoundTrips) {
    for (auto [n, k] : {std::pair{2, 4}, std::pair{10, 14}}) {
        const auto r = test::check_exp_log(n, k, 21, 20);
        EXPECT_TRUE(r.ok()) << n << "/" << k << " max error " << r.max_error;
    }
}

TEST(Residual, ZeroAmplitudes) {
    const auto& d = test::dense("h2o_sto6g");
    const auto& s = d.full;
    const auto cr = cc_residual(s, Vec::Zero(n_exc(s)), s, d.h);
    EXPECT_NEAR(cr.energy, d.h(0, 0), 1e-12);
    for (Eigen::Index i = 0; i < n_exc(s); ++i) {
        const int ph = apply_excitation(s.excitations[i], s.reference)->phase;
        EXPECT_NEAR(cr.residual(i), ph * d.h(i + 1, 0), 1e-12);
    }
}

TEST(Residual, FciAmplitudesAreAZero) {
    for (const auto& name : {"h2_sto6g", "h2o_sto6g", "beh2_sto6g"}) {
        const auto& d = test::dense(name);
        const Vec t = amplitudes_from_ci(d.full, d.fci.psi);
        const auto cr = cc_residual(d.full, t, d.full, d.h);
        EXPECT_LT(cr.residual.cwiseAbs().maxCoeff(), 1e-10) << name;
        EXPECT_NEAR(cr.energy, d.fci.energy, 1e-9) << name;
        const Vec phi = exp_cluster_apply(d.full, t, d.full, unit_ref(d.full));
        EXPECT_LT((phi - d.fci.psi / d.fci.psi(0)).cwiseAbs().maxCoeff(), 1e-10) << name;
    }
}

TEST(Residual, SimilarityTransformPairing) {
    const auto& d = test::dense("h2_sto6g");
    const auto& s = d.full;
    const auto n = static_cast<Eigen::Index>(s.size());
    const Vec t = test::random_vec(n - 1, 12, 0.2);
    const auto cr = cc_residual(s, t, s, d.h);
    const Vec chi = test::random_vec(n, 13);
    double pairing = cr.energy * chi(0);
    for (Eigen::Index i = 0; i < n - 1; ++i) {
        pairing += apply_excitation(s.excitations[i], s.reference)->phase * chi(i + 1) * cr.residual(i);
    }
    const Vec phi = exp_cluster_apply(s, t, s, chi, -1, true);
    const double direct = phi.dot(d.h * exp_cluster_apply(s, t, s, unit_ref(s)));
    EXPECT_NEAR(pairing, direct, 1e-12);
}

TEST(AmplitudesFromCi, ReferenceAndSignInvariance) {
    const auto& d = test::dense("h2o_sto6g");
    EXPECT_EQ(amplitudes_from_ci(d.full, unit_ref(d.full)), Vec::Zero(n_exc(d.full)));
    const Vec a = amplitudes_from_ci(d.full, d.fci.psi);
    const Vec b = amplitudes_from_ci(d.full, -d.fci.psi);
    EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-15);
    Vec orth = d.fci.psi;
    orth(0) = 0.0;
    EXPECT_THROW(amplitudes_from_ci(d.full, orth), Error);
}

TEST(Jacobian, ZeroAmplitudesGiveShiftedHamiltonianBlock) {
    const auto& d = test::dense("h2o_sto6g");
    const auto& s = d.full;
    const auto amp = build_space(s.nelec, s.n_spin, 2);
    const double e0 = d.h(0, 0);
    const Mat j = cc_jacobian(amp, Vec::Zero(n_exc(amp)), s, d.h, e0);
    for (Eigen::Index a = 0; a < n_exc(amp); ++a) {
        const int pa = apply_excitation(amp.excitations[a], s.reference)->phase;
        for (Eigen::Index b = 0; b < n_exc(amp); ++b) {
            const int pb = apply_excitation(amp.excitations[b], s.reference)->phase;
            const double expected = pa * pb * (d.h(a + 1, b + 1) - (a == b ? e0 : 0.0));
            ASSERT_NEAR(j(a, b), expected, 1e-12);
        }
    }
}

TEST(Jacobian, CentralDifferencesH2ORankTwo) {
    const auto r = test::check_jacobian_fd("h2o_sto6g", 2, 10);
    EXPECT_TRUE(r.ok()) << "max relative error " << r.max_error;
}

TEST(Jacobian, CentralDifferencesH2Full) {
    const auto r = test::check_jacobian_fd("h2_sto6g", kFullRank, 10);
    EXPECT_TRUE(r.ok()) << "max relative error " << r.max_error;
}

TEST(GridEngine, MatchesDeterminantLayer) {
    for (const auto& name : {"h2_sto6g", "h2o_sto6g", "beh2_sto6g"}) {
        const Model& m = test::model(name);
        const auto& d = test::dense(name);
        const auto& s = d.full;
        const auto n = static_cast<Eigen::Index>(s.size());
        const Vec t = test::random_vec(n - 1, 30, 0.3);
        const Vec tau = m.map.amplitudes_to_grid(t);
        EXPECT_EQ(tau(0), 0.0);
        EXPECT_EQ(m.map.amplitudes_from_grid(tau, s.excitations.size()), t) << name;
        const Vec x = test::random_vec(n, 31);
        EXPECT_EQ(m.map.wavefunction_from_grid(m.map.wavefunction_to_grid(x)), x) << name;

        Vec y;
        m.engine->apply(tau, m.map.wavefunction_to_grid(x), y);
        EXPECT_LT((m.map.wavefunction_from_grid(y) - cluster_apply(s, t, s, x)).cwiseAbs().maxCoeff(), 1e-12) << name;
        m.engine->apply(tau, m.map.wavefunction_to_grid(x), y, true);
        EXPECT_LT((m.map.wavefunction_from_grid(y) - cluster_apply(s, t, s, x, true)).cwiseAbs().maxCoeff(), 1e-12)
            << name;

        const Vec e_plus = exp_cluster_apply(s, t, s, unit_ref(s));
        EXPECT_LT((m.map.wavefunction_from_grid(m.engine->exp_ref(tau)) - e_plus).cwiseAbs().maxCoeff(), 1e-12) << name;
        EXPECT_LT((m.engine->log_ref(m.engine->exp_ref(tau)) - tau).cwiseAbs().maxCoeff(), 1e-12) << name;

        const Vec plus = m.engine->exp_amplitudes(tau, 1.0), minus = m.engine->exp_amplitudes(tau, -1.0);
        EXPECT_LT((m.map.wavefunction_from_grid(apply_exp(m, plus, m.map.wavefunction_to_grid(x))) -
                   exp_cluster_apply(s, t, s, x, 1))
                      .cwiseAbs()
                      .maxCoeff(),
                  1e-12)
            << name;
        EXPECT_LT((m.map.wavefunction_from_grid(apply_exp(m, minus, m.map.wavefunction_to_grid(x), true)) -
                   exp_cluster_apply(s, t, s, x, -1, true))
                      .cwiseAbs()
                      .maxCoeff(),
                  1e-12)
            << name;

        const auto cr = cc_residual(s, t, s, d.h);
        const auto gr = grid_residual(m, tau);
        EXPECT_NEAR(gr.energy, cr.energy, 1e-11) << name;
        EXPECT_LT((m.map.amplitudes_from_grid(gr.residual, s.excitations.size()) - cr.residual).cwiseAbs().maxCoeff(),
                  1e-11)
            << name;
    }
}

TEST(GridEngine, TruncatedResidualAndJacobian) {
    const Model& m = test::model("h2o_sto6g");
    const auto& d = test::dense("h2o_sto6g");
    const auto amp = build_space(m.nelec, 2 * m.norb, 2);
    const Vec t = test::random_vec(n_exc(amp), 40, 0.2);
    const Vec tau = m.map.amplitudes_to_grid(t);
    const auto cr = cc_residual(amp, t, d.full, d.h);
    const auto gr = grid_residual(m, tau, 2);
    EXPECT_NEAR(gr.energy, cr.energy, 1e-11);
    EXPECT_LT((m.map.amplitudes_from_grid(gr.residual, amp.excitations.size()) - cr.residual).cwiseAbs().maxCoeff(),
              1e-11);
    for (std::size_t g = 0; g < m.dim(); ++g) {
        if (m.engine->rank()[g] > 2 || g == 0) ASSERT_EQ(gr.residual(static_cast<Eigen::Index>(g)), 0.0);
    }

    const double e = cr.energy;
    const Mat jd = cc_jacobian(amp, t, d.full, d.h, e);
    const GridJacobian jg(m, tau, e, grid_indices(m, 2));
    const Mat jg_dense = assemble([&](const Vec& x, Vec& y) { jg.apply(x, y); }, jg.size(), jg.size());
    const Mat jgt_dense =
        assemble([&](const Vec& x, Vec& y) { jg.apply_transpose(x, y); }, jg.size(), jg.size());
    EXPECT_LT((jg_dense.transpose() - jgt_dense).cwiseAbs().maxCoeff(), 1e-11);
    EXPECT_NEAR(sigma_min(jd), sigma_min(jg_dense), 1e-11);
    EXPECT_NEAR(sigma_max(jd), sigma_max(jg_dense), 1e-11);
}

}  // namespace
}  // namespace ccwp
