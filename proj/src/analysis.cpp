// Copyright 2026 The ccwp Authors
// SPDX-License-Identifier: Apache-2.0

#include "ccwp/analysis.hpp"

#include "ccwp/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ccwp {

namespace {

Eigen::Index dim_of(const Model& m) { return static_cast<Eigen::Index>(m.dim()); }

/// 1 on grid positions of rank <= q, 0 elsewhere.
Vec rank_mask(const Model& m, int q) {
    const auto& rk = m.engine->rank();
    Vec mask(dim_of(m));
    for (std::size_t g = 0; g < rk.size(); ++g) mask(static_cast<Eigen::Index>(g)) = rk[g] <= q ? 1.0 : 0.0;
    return mask;
}

/**
 * sigma_max of x -> left .* op(right .* x) with transpose
 * y -> right .* op_t(left .* y), all on the grid.
 */
double scaled_norm(const Model& m, const LinearMap& op, const LinearMap& op_t, const Vec& left, const Vec& right) {
    LinearMap a = [&](const Vec& x, Vec& y) {
        op(right.cwiseProduct(x), y);
        y = left.cwiseProduct(y);
    };
    LinearMap at = [&](const Vec& x, Vec& y) {
        op_t(left.cwiseProduct(x), y);
        y = right.cwiseProduct(y);
    };
    return sigma_max(a, at, dim_of(m), dim_of(m));
}

/// x -> exp(sign T) x (adjoint: exp(sign T^dagger) x) for precomputed exp amplitudes.
LinearMap exp_map(const Model& m, const Vec& amps, bool adjoint) {
    return [&m, &amps, adjoint](const Vec& x, Vec& y) { y = apply_exp(m, amps, x, adjoint); };
}

/// Residual-type norm ||(H - E) v||_{F^-1}.
double dual_norm(const Model& m, const Vec& v, double e) {
    Vec hv;
    m.sigma(v, hv, e);
    return std::sqrt(hv.cwiseAbs2().cwiseQuotient(m.weights).sum());
}

}  // namespace

GroundState ground_state(const Model& m) {
    const FciResult fr = solve_fci(m);
    GroundState gs;
    gs.energy = fr.energy;
    gs.gap = fr.gap;
    gs.psi_grid = fr.psi_grid;
    gs.overlap = reference_overlap(fr.psi_grid, Vec::Unit(dim_of(m), 0));
    gs.tau = m.engine->log_ref(fr.psi_grid / fr.psi_grid(0));
    return gs;
}

double reference_overlap(const Vec& psi_star, const Vec& ref) {
    if (psi_star.size() != ref.size()) throw Error("reference_overlap: dimension mismatch");
    return ref.dot(psi_star);
}

double coercivity_constant(const Model& m, const GroundState& gs) {
    const Vec sw = m.weights.cwiseSqrt();
    Vec u = gs.psi_grid.cwiseQuotient(sw);
    u /= u.norm();
    // The Psi* direction is moved to eigenvalue 5, above the target.
    const double lift = 5.0;
    LinearMap a = [&](const Vec& x0, Vec& y) {
        const double c0 = u.dot(x0);
        const Vec x = x0 - c0 * u;
        Vec hx;
        m.sigma(x.cwiseQuotient(sw), hx, gs.energy);
        y = hx.cwiseQuotient(sw);
        y -= u.dot(y) * u;
        y += lift * c0 * u;
    };
    return extreme_eigenpair(a, dim_of(m), Extremum::Smallest).value;
}

MonotonicityTerms monotonicity_constant(const Model& m, const GroundState& gs, const Vec& tau, double lambda0,
                                        bool with_remainder) {
    const Vec sw = m.weights.cwiseSqrt();
    const Vec isw = sw.cwiseInverse();
    MonotonicityTerms out;
    out.lambda0 = lambda0;
    LinearMap h = [&](const Vec& x, Vec& y) {
        m.sigma(x.cwiseProduct(isw), y, gs.energy);
        y = y.cwiseProduct(isw);
    };
    out.h_norm = std::abs(extreme_eigenpair(h, dim_of(m), Extremum::Magnitude).value);
    if (tau.cwiseAbs().maxCoeff() == 0.0) {
        out.gamma = lambda0;
        return out;
    }
    const ClusterEngine& eng = *m.engine;
    LinearMap skew = [&](const Vec& x, Vec& y) {
        Vec z;
        eng.apply(tau, x, y, false);
        eng.apply(tau, x, z, true);
        y -= z;
    };
    LinearMap skew_t = [&](const Vec& x, Vec& y) {
        skew(x, y);
        y = -y;
    };
    out.t_norm = scaled_norm(m, skew, skew_t, sw, isw);
    out.gamma = lambda0 - out.h_norm * out.t_norm;
    if (!with_remainder) return out;
    LinearMap t = [&](const Vec& x, Vec& y) { eng.apply(tau, x, y, false); };
    LinearMap td = [&](const Vec& x, Vec& y) { eng.apply(tau, x, y, true); };
    const double xnorm = scaled_norm(m, t, td, sw, isw) + scaled_norm(m, td, t, sw, isw);
    out.remainder = out.h_norm * (std::expm1(xnorm) - xnorm);
    return out;
}

InfSupTerms continuous_infsup_constant(const Model& m, const Vec& tau, double lambda0) {
    const Vec sw = m.weights.cwiseSqrt();
    const Vec isw = sw.cwiseInverse();
    Vec p0sw = sw;
    p0sw(0) = 0.0;
    const Vec plus = m.engine->exp_amplitudes(tau, 1.0);
    const Vec minus = m.engine->exp_amplitudes(tau, -1.0);
    InfSupTerms out;
    out.lambda_star = lambda0;
    out.minus_norm = scaled_norm(m, exp_map(m, minus, false), exp_map(m, minus, true), p0sw, isw);
    out.dagger_norm = scaled_norm(m, exp_map(m, plus, true), exp_map(m, plus, false), sw, isw);
    out.beta = out.minus_norm * out.dagger_norm;
    out.value = lambda0 / out.beta;
    return out;
}

double jacobian_inverse_norm(const Mat& jacobian, const Vec& weights) {
    if (jacobian.rows() != jacobian.cols() || jacobian.rows() != weights.size()) {
        throw Error("jacobian_inverse_norm: dimension mismatch");
    }
    const Vec iw = weights.cwiseSqrt().cwiseInverse();
    return sigma_min(iw.asDiagonal() * jacobian * iw.asDiagonal());
}

double jacobian_inverse_norm(const Model& m, const Vec& tau, double e_shift, int q) {
    GridJacobian jac(m, tau, e_shift, grid_indices(m, q));
    const Eigen::Index n = jac.size();
    Vec iw(n);
    for (Eigen::Index i = 0; i < n; ++i) iw(i) = 1.0 / std::sqrt(m.weights(jac.indices()[i]));
    LinearMap a = [&](const Vec& x, Vec& y) {
        jac.apply(iw.cwiseProduct(x), y);
        y = iw.cwiseProduct(y);
    };
    LinearMap at = [&](const Vec& x, Vec& y) {
        jac.apply_transpose(iw.cwiseProduct(x), y);
        y = iw.cwiseProduct(y);
    };
    return sigma_min(a, at, n);
}

double lambda_min_formula(const Vec& orbital_energies, int nelec, int q) {
    const int nspin = 2 * static_cast<int>(orbital_energies.size());
    if (q < 0 || q + 1 > nelec || nelec + q + 1 > nspin) throw Error("lambda_min_formula: rank out of range");
    // Spin-orbital energies, each spatial level doubled, ascending (1-based below).
    auto lam = [&](int j) { return orbital_energies((j - 1) / 2); };
    double s = 0.0;
    for (int j = 1; j <= q + 1; ++j) s += lam(nelec + j) - lam(nelec - j + 1);
    return s;
}

Vec truncate_amplitudes(const Model& m, const Vec& tau, int q) {
    Vec out = tau.cwiseProduct(rank_mask(m, q));
    out(0) = 0.0;
    return out;
}

StructureTerms structure_b2_terms(const Model& m, const GroundState& gs, int q, double gamma_gs) {
    if (q < 1 || q >= m.engine->max_rank()) throw Error("structure_b2_terms: rank must satisfy 1 <= q < max rank");
    const Vec in = rank_mask(m, q);
    const Vec outm = Vec::Ones(in.size()) - in;
    const Vec sw = m.weights.cwiseSqrt();
    const Vec isw = sw.cwiseInverse();
    StructureTerms st;
    st.rank = q;
    st.gamma_gs = gamma_gs;
    st.lambda_min = std::numeric_limits<double>::infinity();
    for (Eigen::Index g = 0; g < in.size(); ++g) {
        if (in(g) == 0.0) st.lambda_min = std::min(st.lambda_min, m.weights(g));
    }
    LinearMap h = [&](const Vec& x, Vec& y) { m.sigma(x, y); };
    st.coupling_norm = scaled_norm(m, h, h, outm, in.cwiseProduct(isw));

    const Vec tp = truncate_amplitudes(m, gs.tau, q);
    const Vec plus = m.engine->exp_amplitudes(tp, 1.0);
    const Vec minus = m.engine->exp_amplitudes(tp, -1.0);
    LinearMap chain = [&](const Vec& x, Vec& y) {
        const Vec z = in.cwiseProduct(apply_exp(m, minus, x));
        y = apply_exp(m, plus, z);
    };
    LinearMap chain_t = [&](const Vec& x, Vec& y) {
        const Vec z = in.cwiseProduct(apply_exp(m, plus, x, true));
        y = apply_exp(m, minus, z, true);
    };
    st.beta_k = scaled_norm(m, chain, chain_t, sw.cwiseProduct(outm), in.cwiseProduct(isw));
    st.smallness_rhs = st.beta_k > 0.0 ? std::sqrt(st.lambda_min) * gamma_gs / st.beta_k
                                       : std::numeric_limits<double>::infinity();
    st.smallness_ok = st.coupling_norm < st.smallness_rhs;
    return st;
}

DiscreteInfSup discrete_infsup_gamma(const Model& m, const GroundState& gs, const StructureTerms& st) {
    const int q = st.rank;
    const Vec in = rank_mask(m, q);
    const Vec sw = m.weights.cwiseSqrt();
    const Vec isw = sw.cwiseInverse();
    Vec p0in = in;
    p0in(0) = 0.0;
    const Vec tp = truncate_amplitudes(m, gs.tau, q);
    const Vec plus = m.engine->exp_amplitudes(tp, 1.0);
    const Vec minus = m.engine->exp_amplitudes(tp, -1.0);
    DiscreteInfSup out;
    out.dagger_norm = scaled_norm(m, exp_map(m, plus, true), exp_map(m, plus, false), sw.cwiseProduct(in),
                                  in.cwiseProduct(isw));
    out.minus_norm = scaled_norm(m, exp_map(m, minus, false), exp_map(m, minus, true), sw.cwiseProduct(p0in),
                                 in.cwiseProduct(isw));
    out.r3_reference = dual_norm(m, Vec::Unit(dim_of(m), 0), gs.energy);
    out.r3_truncated = dual_norm(m, m.engine->exp_ref(tp, 1.0), gs.energy);
    const double num = st.gamma_gs - st.coupling_norm * st.beta_k / std::sqrt(st.lambda_min);
    out.value = (num - out.r3_truncated) / (out.dagger_norm * out.minus_norm);
    return out;
}

}  // namespace ccwp
