// Copyright 2026 The ccwp Authors
// SPDX-License-Identifier: Apache-2.0

#include "ccwp/solver.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>

namespace ccwp {

namespace {

constexpr double kMinGap = 1e-8;
constexpr Eigen::Index kDenseFci = 2000;

void fix_reference_sign(Vec& psi) {
    if (psi(0) < 0.0) psi = -psi;
}

double weighted_inverse_norm(const Vec& r, const Vec& w) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < r.size(); ++i) s += r(i) * r(i) / w(i);
    return std::sqrt(s);
}

}  // namespace

FciResult solve_fci(const DeterminantSpace& space, const Mat& h) {
    if (!space.full) throw Error("solve_fci: a Full determinant space is required");
    if (h.rows() != static_cast<Eigen::Index>(space.size()) || h.cols() != h.rows()) {
        throw Error("solve_fci: Hamiltonian dimension mismatch");
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    FciResult r;
    r.energy = es.eigenvalues()(0);
    r.psi = es.eigenvectors().col(0);
    fix_reference_sign(r.psi);
    r.gap = h.rows() > 1 ? es.eigenvalues()(1) - es.eigenvalues()(0) : std::numeric_limits<double>::infinity();
    if (r.gap < kMinGap) throw Error("solve_fci: degenerate ground state");
    return r;
}

FciResult solve_fci(const Model& m) {
    const auto n = static_cast<Eigen::Index>(m.dim());
    FciResult r;
    LinearMap h = [&](const Vec& x, Vec& y) { m.sigma(x, y); };
    if (n <= kDenseFci) {
        Mat hm = assemble(h, n, n);
        hm = 0.5 * (hm + hm.transpose()).eval();
        Eigen::SelfAdjointEigenSolver<Mat> es(hm);
        r.energy = es.eigenvalues()(0);
        r.psi_grid = es.eigenvectors().col(0);
        r.gap = n > 1 ? es.eigenvalues()(1) - es.eigenvalues()(0) : std::numeric_limits<double>::infinity();
    } else {
        auto d = davidson(h, m.ham->diagonal(), 2, 1e-10);
        if (!d.converged) throw Error("solve_fci: Davidson did not converge");
        r.energy = d.values(0);
        r.psi_grid = d.vectors.col(0);
        r.psi_grid /= r.psi_grid.norm();
        r.gap = d.values(1) - d.values(0);
    }
    if (r.gap < kMinGap) throw Error("solve_fci: degenerate ground state");
    fix_reference_sign(r.psi_grid);
    r.psi = m.map.wavefunction_from_grid(r.psi_grid);
    return r;
}

CcResult solve_cc_core(const ResidualFunction& residual, const Vec& weights, Vec t0, const CcOptions& opts) {
    if (weights.size() != t0.size()) throw Error("solve_cc: weight and amplitude dimensions differ");
    Diis diis(opts.diis_depth);
    CcResult res;
    Vec t = std::move(t0);
    Vec r(t.size());
    for (int it = 0;; ++it) {
        res.energy = residual(t, r);
        res.residual_norm = r.size() ? r.cwiseAbs().maxCoeff() : 0.0;
        res.t = t;
        res.iterations = it;
        if (!std::isfinite(res.residual_norm)) {
            res.diverged = true;
            return res;
        }
        if (res.residual_norm < opts.tol) {
            res.converged = true;
            return res;
        }
        if (it >= opts.max_iter) return res;
        Vec dt(t.size());
        for (Eigen::Index i = 0; i < t.size(); ++i) {
            dt(i) = r(i) == 0.0 ? 0.0 : -r(i) / (weights(i) + opts.level_shift);
        }
        t = diis.push(t + dt, dt);
        if (t.norm() > opts.divergence) {
            res.diverged = true;
            res.t = t;
            return res;
        }
    }
}

CcResult solve_cc(const DeterminantSpace& amp_space, const DeterminantSpace& host, const Mat& h,
                  const Vec& host_weights, const CcOptions& opts, const Vec* t0) {
    const auto ne = static_cast<Eigen::Index>(amp_space.excitations.size());
    if (host_weights.size() != static_cast<Eigen::Index>(host.size())) {
        throw Error("solve_cc: metric does not match the host space");
    }
    if (amp_space.size() > host.size() ||
        !std::equal(amp_space.dets.begin(), amp_space.dets.end(), host.dets.begin())) {
        throw Error("solve_cc: amplitude space is not a prefix of the host space");
    }
    Vec start = t0 ? *t0 : Vec::Zero(ne);
    ResidualFunction f = [&](const Vec& t, Vec& r) {
        auto cr = cc_residual(amp_space, t, host, h);
        r = cr.residual;
        return cr.energy;
    };
    return solve_cc_core(f, host_weights.segment(1, ne), start, opts);
}

CcResult solve_cc(const Model& m, int q, const CcOptions& opts, const Vec* tau0) {
    if (q != kFullRank && (q < 1 || q > m.nelec)) throw Error("solve_cc: rank must lie in 1..N or be full");
    const int qq = q == kFullRank ? -1 : q;
    Vec start = tau0 ? *tau0 : Vec::Zero(static_cast<Eigen::Index>(m.dim()));
    ResidualFunction f = [&](const Vec& tau, Vec& r) {
        auto gr = grid_residual(m, tau, qq);
        r = std::move(gr.residual);
        return gr.energy;
    };
    CcResult res = solve_cc_core(f, m.weights, start, opts);
    res.tau = res.t;
    const std::size_t count = m.full.excitation_count(qq < 0 ? m.nelec : qq);
    res.t = m.map.amplitudes_from_grid(res.tau, count);
    return res;
}

double aposteriori_bound(const DeterminantSpace& host, const Vec& t, const Mat& h, const Vec& host_weights,
                         double e_ref) {
    const auto ne = static_cast<Eigen::Index>(host.excitations.size());
    const Vec w = host_weights.segment(1, ne);
    const auto cr = cc_residual(host, t, host, h);
    Mat j = cc_jacobian(host, t, host, h, e_ref);
    const Vec iw = w.cwiseSqrt().cwiseInverse();
    const double smin = sigma_min(iw.asDiagonal() * j * iw.asDiagonal());
    if (smin <= 1e-10) throw Error("aposteriori_bound: singular Jacobian");
    return 2.0 * weighted_inverse_norm(cr.residual, w) / smin;
}

double aposteriori_bound(const Model& m, const Vec& tau, double e_ref) {
    auto idx = grid_indices(m, -1);
    GridJacobian jac(m, tau, e_ref, idx);
    const auto n = jac.size();
    Vec iw(n);
    for (Eigen::Index i = 0; i < n; ++i) iw(i) = 1.0 / std::sqrt(m.weights(idx[i]));
    LinearMap a = [&](const Vec& x, Vec& y) {
        jac.apply(iw.cwiseProduct(x), y);
        y = iw.cwiseProduct(y);
    };
    LinearMap at = [&](const Vec& x, Vec& y) {
        jac.apply_transpose(iw.cwiseProduct(x), y);
        y = iw.cwiseProduct(y);
    };
    const double smin = sigma_min(a, at, n);
    if (smin <= 1e-10) throw Error("aposteriori_bound: singular Jacobian");
    const auto gr = grid_residual(m, tau, -1);
    return 2.0 * weighted_inverse_norm(gr.residual, m.weights) / smin;
}

}  // namespace ccwp
