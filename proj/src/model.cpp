// Copyright 2026 The ccwp Authors
// SPDX-License-Identifier: Apache-2.0

#include "ccwp/model.hpp"

namespace ccwp {

void Model::sigma(const Vec& x, Vec& y, double shift) const {
    ham->apply(x, y);
    if (shift != 0.0) y.noalias() -= shift * x;
}

Model build_model(const IntegralTable& ao, const ScfOptions& scf_opts) {
    Model m;
    m.ao = ao;
    m.scf = run_scf(ao, scf_opts);
    if (!m.scf.converged) throw Error("SCF did not converge");
    m.mo = mo_transform(to_dense(ao), m.scf.coeffs);
    m.norb = ao.header.norb;
    m.nelec = ao.header.nelec;
    m.full = build_space(m.nelec, 2 * m.norb, kFullRank);
    m.strings = build_strings(m.norb, m.nelec / 2);
    const StringLinks links = build_string_links(m.strings);
    m.map = build_grid_map(m.full, m.strings, links);
    m.ham = std::make_unique<GridHamiltonian>(m.mo, m.strings);
    m.engine = std::make_unique<ClusterEngine>(m.strings, links);
    const std::size_t ns = m.strings.size();
    Vec ws(static_cast<Eigen::Index>(ns));
    double ref = 0.0;
    for (int p = 0; p < m.strings.nel; ++p) ref += m.scf.orbital_energies(p);
    for (std::size_t a = 0; a < ns; ++a) {
        double s = 0.0;
        for (int p = 0; p < m.norb; ++p) {
            if ((m.strings.strings[a] >> p) & 1) s += m.scf.orbital_energies(p);
        }
        ws(static_cast<Eigen::Index>(a)) = s - ref;
    }
    m.weights.resize(static_cast<Eigen::Index>(ns * ns));
    for (std::size_t a = 0; a < ns; ++a) {
        for (std::size_t b = 0; b < ns; ++b) {
            m.weights(static_cast<Eigen::Index>(a * ns + b)) =
                ws(static_cast<Eigen::Index>(a)) + ws(static_cast<Eigen::Index>(b));
        }
    }
    m.weights(0) = 1.0;
    if ((m.weights.array() <= 0.0).any()) throw Error("mean-field metric has a non-positive weight");
    return m;
}

std::vector<std::uint32_t> grid_indices(const Model& m, int q) {
    std::vector<std::uint32_t> idx;
    const auto& rk = m.engine->rank();
    for (std::size_t g = 1; g < rk.size(); ++g) {
        if (q < 0 || rk[g] <= q) idx.push_back(static_cast<std::uint32_t>(g));
    }
    return idx;
}

Vec apply_exp(const Model& m, const Vec& exp_amps, const Vec& x, bool adjoint) {
    Vec y;
    m.engine->apply(exp_amps, x, y, adjoint);
    y += x;
    return y;
}

GridResidual grid_residual(const Model& m, const Vec& tau, int q) {
    const ClusterEngine& eng = *m.engine;
    const Vec c = eng.exp_ref(tau, 1.0);
    Vec hc;
    m.sigma(c, hc);
    const Vec u = apply_exp(m, eng.exp_amplitudes(tau, -1.0), hc);
    GridResidual out;
    out.energy = u(0);
    out.residual = eng.ref_sign().cwiseProduct(u);
    out.residual(0) = 0.0;
    if (q >= 0) {
        const auto& rk = eng.rank();
        for (std::size_t g = 0; g < rk.size(); ++g) {
            if (rk[g] > q) out.residual(static_cast<Eigen::Index>(g)) = 0.0;
        }
    }
    return out;
}

GridJacobian::GridJacobian(const Model& m, const Vec& tau, double e_shift, std::vector<std::uint32_t> idx)
    : m_(m), e_(e_shift), idx_(std::move(idx)) {
    plus_ = m.engine->exp_amplitudes(tau, 1.0);
    minus_ = m.engine->exp_amplitudes(tau, -1.0);
}

void GridJacobian::chain(const Vec& x, Vec& y, bool transpose) const {
    const Vec& sref = m_.engine->ref_sign();
    Vec v = Vec::Zero(static_cast<Eigen::Index>(m_.dim()));
    for (std::size_t i = 0; i < idx_.size(); ++i) v(idx_[i]) = sref(idx_[i]) * x(static_cast<Eigen::Index>(i));
    v = apply_exp(m_, transpose ? minus_ : plus_, v, transpose);
    Vec w;
    m_.sigma(v, w, e_);
    const Vec u = apply_exp(m_, transpose ? plus_ : minus_, w, transpose);
    y.resize(size());
    for (std::size_t i = 0; i < idx_.size(); ++i) y(static_cast<Eigen::Index>(i)) = sref(idx_[i]) * u(idx_[i]);
}

void GridJacobian::apply(const Vec& x, Vec& y) const { chain(x, y, false); }

void GridJacobian::apply_transpose(const Vec& x, Vec& y) const { chain(x, y, true); }

}  // namespace ccwp
