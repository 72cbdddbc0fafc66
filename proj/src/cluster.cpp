// Copyright 2026 The ccwp Authors
// SPDX-License-Identifier: Apache-2.0

#include "ccwp/cluster.hpp"

#include <algorithm>
#include <cmath>

namespace ccwp {

namespace {

void check_compatible(const DeterminantSpace& amp_space, const DeterminantSpace& host) {
    if (amp_space.reference != host.reference || amp_space.n_spin != host.n_spin) {
        throw Error("cluster: amplitude space and host space have different references");
    }
}

int ref_phase(const ExcitationIndex& mu, Det ref) { return apply_excitation(mu, ref)->phase; }

}  // namespace

Vec cluster_apply(const DeterminantSpace& amp_space, const Vec& t, const DeterminantSpace& host, const Vec& psi,
                  bool adjoint) {
    check_compatible(amp_space, host);
    if (t.size() != static_cast<Eigen::Index>(amp_space.excitations.size())) {
        throw Error("cluster_apply: amplitude vector does not match the space");
    }
    if (psi.size() != static_cast<Eigen::Index>(host.size())) {
        throw Error("cluster_apply: wavefunction does not match the host space");
    }
    Vec out = Vec::Zero(psi.size());
    for (std::size_t i = 0; i < amp_space.excitations.size(); ++i) {
        const double ti = t(static_cast<Eigen::Index>(i));
        if (ti == 0.0) continue;
        const auto& mu = amp_space.excitations[i];
        for (std::size_t j = 0; j < host.size(); ++j) {
            const double pj = psi(static_cast<Eigen::Index>(j));
            if (pj == 0.0) continue;
            auto r = adjoint ? apply_deexcitation(mu, host.dets[j]) : apply_excitation(mu, host.dets[j]);
            if (!r) continue;
            const std::size_t k = host.find(r->det);
            if (k == DeterminantSpace::npos) throw Error("cluster_apply: image outside the host space");
            out(static_cast<Eigen::Index>(k)) += ti * r->phase * pj;
        }
    }
    return out;
}

Vec exp_cluster_apply(const DeterminantSpace& amp_space, const Vec& t, const DeterminantSpace& host, const Vec& psi,
                      int sign, bool adjoint) {
    Vec r = psi;
    for (int k = host.nelec; k >= 1; --k) {
        r = psi + (static_cast<double>(sign) / k) * cluster_apply(amp_space, t, host, r, adjoint);
    }
    return r;
}

Vec log_cluster(const DeterminantSpace& host, const Vec& phi) {
    if (phi.size() != static_cast<Eigen::Index>(host.size())) throw Error("log_cluster: dimension mismatch");
    if (std::abs(phi(0)) < 1e-12) throw Error("log_cluster: vanishing reference coefficient");
    const Vec c = phi / phi(0);
    const auto ne = static_cast<Eigen::Index>(host.excitations.size());
    Vec camp(ne);
    std::vector<int> ph(host.excitations.size());
    for (Eigen::Index i = 0; i < ne; ++i) {
        ph[i] = ref_phase(host.excitations[i], host.reference);
        camp(i) = ph[i] * c(i + 1);
    }
    Vec v = Vec::Zero(c.size());
    v(0) = 1.0;
    Vec acc = Vec::Zero(c.size());
    for (int j = 1; j <= host.nelec; ++j) {
        v = cluster_apply(host, camp, host, v);
        acc += ((j % 2 == 1) ? 1.0 : -1.0) / j * v;
    }
    Vec t(ne);
    for (Eigen::Index i = 0; i < ne; ++i) t(i) = ph[i] * acc(i + 1);
    return t;
}

Vec amplitudes_from_ci(const DeterminantSpace& host, const Vec& psi_star) {
    if (psi_star.size() != static_cast<Eigen::Index>(host.size())) {
        throw Error("amplitudes_from_ci: dimension mismatch");
    }
    if (std::abs(psi_star(0)) < 1e-12 * std::max(1.0, psi_star.norm())) {
        throw Error("amplitudes_from_ci: vanishing overlap with the reference");
    }
    return log_cluster(host, psi_star);
}

CcResidual cc_residual(const DeterminantSpace& amp_space, const Vec& t, const DeterminantSpace& host, const Mat& h) {
    if (h.rows() != static_cast<Eigen::Index>(host.size())) throw Error("cc_residual: Hamiltonian dimension mismatch");
    Vec e0 = Vec::Zero(static_cast<Eigen::Index>(host.size()));
    e0(0) = 1.0;
    const Vec v = exp_cluster_apply(amp_space, t, host, e0, 1);
    const Vec w = h * v;
    const Vec u = exp_cluster_apply(amp_space, t, host, w, -1);
    CcResidual out;
    out.energy = u(0);
    out.residual.resize(static_cast<Eigen::Index>(amp_space.excitations.size()));
    for (std::size_t i = 0; i < amp_space.excitations.size(); ++i) {
        const std::size_t k = host.find(amp_space.dets[i + 1]);
        out.residual(static_cast<Eigen::Index>(i)) =
            ref_phase(amp_space.excitations[i], host.reference) * u(static_cast<Eigen::Index>(k));
    }
    return out;
}

Mat cc_jacobian(const DeterminantSpace& amp_space, const Vec& t, const DeterminantSpace& host, const Mat& h,
                double e_shift) {
    check_compatible(amp_space, host);
    if (h.rows() != static_cast<Eigen::Index>(host.size())) throw Error("cc_jacobian: Hamiltonian dimension mismatch");
    const std::size_t ne = amp_space.excitations.size();
    std::vector<std::size_t> pos(ne);
    std::vector<int> ph(ne);
    for (std::size_t i = 0; i < ne; ++i) {
        pos[i] = host.find(amp_space.dets[i + 1]);
        ph[i] = ref_phase(amp_space.excitations[i], host.reference);
    }
    Mat j(static_cast<Eigen::Index>(ne), static_cast<Eigen::Index>(ne));
    parallel_for(ne, [&](std::size_t b, std::size_t e) {
        for (std::size_t mu = b; mu < e; ++mu) {
            Vec x = Vec::Zero(static_cast<Eigen::Index>(host.size()));
            x(static_cast<Eigen::Index>(pos[mu])) = ph[mu];
            const Vec v = exp_cluster_apply(amp_space, t, host, x, 1);
            const Vec w = h * v - e_shift * v;
            const Vec u = exp_cluster_apply(amp_space, t, host, w, -1);
            for (std::size_t nu = 0; nu < ne; ++nu) {
                j(static_cast<Eigen::Index>(nu), static_cast<Eigen::Index>(mu)) =
                    ph[nu] * u(static_cast<Eigen::Index>(pos[nu]));
            }
        }
    });
    return j;
}

GridMap build_grid_map(const DeterminantSpace& full, const StringSpace& strings, const StringLinks& links) {
    if (!full.full) throw Error("build_grid_map: a Full space is required");
    if (full.n_spin != 2 * strings.norb || full.nelec != 2 * strings.nel) {
        throw Error("build_grid_map: string space does not match the determinant space");
    }
    GridMap m;
    m.ns = strings.size();
    if (full.size() != m.ns * m.ns) throw Error("build_grid_map: Full space is not a complete string grid");
    const std::size_t n = full.size();
    m.grid.resize(n);
    m.kappa.resize(n);
    m.eps.assign(n, 1);
    auto split = [&](Det d, std::uint32_t& a, std::uint32_t& b) {
        a = b = 0;
        for (int p = 0; p < strings.norb; ++p) {
            if ((d >> (2 * p)) & 1) a |= 1u << p;
            if ((d >> (2 * p + 1)) & 1) b |= 1u << p;
        }
    };
    auto kappa_of = [&](std::uint32_t a, std::uint32_t b) {
        int cnt = 0;
        for (int p = 0; p < strings.norb; ++p) {
            if ((a >> p) & 1) cnt += __builtin_popcount(b & ((1u << p) - 1));
        }
        return (cnt & 1) ? -1 : 1;
    };
    std::uint32_t ra, rb;
    split(full.reference, ra, rb);
    const int kref = kappa_of(ra, rb);
    for (std::size_t i = 0; i < n; ++i) {
        std::uint32_t a, b;
        split(full.dets[i], a, b);
        const std::uint32_t ia = strings.index_of.at(a), ib = strings.index_of.at(b);
        m.grid[i] = static_cast<std::uint32_t>(ia * m.ns + ib);
        m.kappa[i] = kappa_of(a, b) * kref;
        if (i > 0) {
            m.eps[i] = ref_phase(full.excitations[i - 1], full.reference) * m.kappa[i] * links.ref_sign[ia] *
                       links.ref_sign[ib];
        }
    }
    return m;
}

Vec GridMap::amplitudes_to_grid(const Vec& t) const {
    if (static_cast<std::size_t>(t.size()) + 1 > grid.size()) throw Error("amplitudes_to_grid: too many amplitudes");
    Vec tau = Vec::Zero(static_cast<Eigen::Index>(ns * ns));
    for (Eigen::Index i = 0; i < t.size(); ++i) tau(grid[i + 1]) = eps[i + 1] * t(i);
    return tau;
}

Vec GridMap::amplitudes_from_grid(const Vec& tau, std::size_t count) const {
    if (count + 1 > grid.size()) throw Error("amplitudes_from_grid: too many amplitudes");
    Vec t(static_cast<Eigen::Index>(count));
    for (std::size_t i = 0; i < count; ++i) t(static_cast<Eigen::Index>(i)) = eps[i + 1] * tau(grid[i + 1]);
    return t;
}

Vec GridMap::wavefunction_to_grid(const Vec& psi) const {
    Vec x(static_cast<Eigen::Index>(grid.size()));
    for (std::size_t i = 0; i < grid.size(); ++i) x(grid[i]) = kappa[i] * psi(static_cast<Eigen::Index>(i));
    return x;
}

Vec GridMap::wavefunction_from_grid(const Vec& x) const {
    Vec psi(static_cast<Eigen::Index>(grid.size()));
    for (std::size_t i = 0; i < grid.size(); ++i) psi(static_cast<Eigen::Index>(i)) = kappa[i] * x(grid[i]);
    return psi;
}

ClusterEngine::ClusterEngine(const StringSpace& strings, const StringLinks& links)
    : ns_(strings.size()),
      srank_(strings.rank),
      rank_offset_(strings.rank_offset),
      t_off_(links.by_target_offset),
      s_off_(links.by_source_offset),
      t_links_(links.by_target),
      s_links_(links.by_source) {
    rank_.resize(ns_ * ns_);
    sref_.resize(static_cast<Eigen::Index>(ns_ * ns_));
    max_rank_ = 0;
    for (std::size_t a = 0; a < ns_; ++a) {
        for (std::size_t b = 0; b < ns_; ++b) {
            const std::size_t g = a * ns_ + b;
            rank_[g] = srank_[a] + srank_[b];
            sref_(static_cast<Eigen::Index>(g)) = links.ref_sign[a] * links.ref_sign[b];
            max_rank_ = std::max(max_rank_, rank_[g]);
        }
    }
}

void ClusterEngine::apply(const Vec& tau, const Vec& x, Vec& y, bool adjoint, int max_rank) const {
    const std::size_t ns = ns_;
    if (static_cast<std::size_t>(tau.size()) != ns * ns || static_cast<std::size_t>(x.size()) != ns * ns) {
        throw Error("ClusterEngine::apply: dimension mismatch");
    }
    const int q = max_rank < 0 ? max_rank_ : max_rank;
    std::vector<char> row_nz(ns, 0);
    for (std::size_t m = 0; m < ns; ++m) {
        row_nz[m] = (tau.segment(static_cast<Eigen::Index>(m * ns), static_cast<Eigen::Index>(ns)).array() != 0.0).any();
    }
    y.setZero(static_cast<Eigen::Index>(ns * ns));
    const auto& off = adjoint ? s_off_ : t_off_;
    const auto& lk = adjoint ? s_links_ : t_links_;
    const double* tp = tau.data();
    const double* xp = x.data();
    double* yp = y.data();
    parallel_for(ns, [&](std::size_t b, std::size_t e) {
        for (std::size_t a1 = b; a1 < e; ++a1) {
            double* yrow = yp + a1 * ns;
            for (std::size_t l = off[a1]; l < off[a1 + 1]; ++l) {
                const StringLink& la = lk[l];
                const int rm = srank_[la.exc];
                if (rm > q) break;
                if (!row_nz[la.exc]) continue;
                const int rem = q - rm;
                const double* tm = tp + static_cast<std::size_t>(la.exc) * ns;
                const double* xa = xp + static_cast<std::size_t>(la.other) * ns;
                for (std::size_t b1 = 0; b1 < ns; ++b1) {
                    double acc = 0.0;
                    for (std::size_t l2 = off[b1]; l2 < off[b1 + 1]; ++l2) {
                        const StringLink& lb = lk[l2];
                        if (srank_[lb.exc] > rem) break;
                        acc += lb.sign * tm[lb.exc] * xa[lb.other];
                    }
                    yrow[b1] += la.sign * acc;
                }
            }
        }
    });
}

template <bool Log>
void ClusterEngine::sweep(const Vec& in, Vec& out, double sign) const {
    // Exp: in = tau, out = exp(sign T) ref.  Log: in = c, out = tau.
    const std::size_t ns = ns_;
    const std::size_t dim = ns * ns;
    Vec weighted = Vec::Zero(static_cast<Eigen::Index>(dim));
    Vec c;
    int qmax = max_rank_;
    if constexpr (Log) {
        c = in;
        out = Vec::Zero(static_cast<Eigen::Index>(dim));
    } else {
        qmax = 0;
        for (std::size_t g = 0; g < dim; ++g) {
            const double v = in(static_cast<Eigen::Index>(g));
            if (g > 0 && v != 0.0) {
                weighted(static_cast<Eigen::Index>(g)) = sign * rank_[g] * v;
                qmax = std::max(qmax, rank_[g]);
            }
        }
        out = Vec::Zero(static_cast<Eigen::Index>(dim));
        out(0) = 1.0;
    }
    const double* cp = Log ? c.data() : out.data();
    double* wp = weighted.data();
    const int smax = static_cast<int>(rank_offset_.size()) - 2;
    for (int r = 1; r <= max_rank_; ++r) {
        parallel_for(ns, [&](std::size_t b, std::size_t e) {
            for (std::size_t a1 = b; a1 < e; ++a1) {
                const int rb = r - srank_[a1];
                if (rb < 0 || rb > smax) continue;
                for (std::size_t b1 = rank_offset_[rb]; b1 < rank_offset_[rb + 1]; ++b1) {
                    double acc = 0.0;
                    for (std::size_t l = t_off_[a1]; l < t_off_[a1 + 1]; ++l) {
                        const StringLink& la = t_links_[l];
                        const int rm = srank_[la.exc];
                        if (rm > qmax) break;
                        const double* wm = wp + static_cast<std::size_t>(la.exc) * ns;
                        const double* ca = cp + static_cast<std::size_t>(la.other) * ns;
                        double part = 0.0;
                        for (std::size_t l2 = t_off_[b1]; l2 < t_off_[b1 + 1]; ++l2) {
                            const StringLink& lb = t_links_[l2];
                            if (srank_[lb.exc] + rm > qmax) break;
                            if constexpr (Log) {
                                if (la.other == 0 && lb.other == 0) continue;
                            }
                            part += lb.sign * wm[lb.exc] * ca[lb.other];
                        }
                        acc += la.sign * part;
                    }
                    const std::size_t g = a1 * ns + b1;
                    if constexpr (Log) {
                        const double tg = (r * cp[g] - acc) / (r * sref_(static_cast<Eigen::Index>(g)));
                        out(static_cast<Eigen::Index>(g)) = tg;
                        wp[g] = r * tg;
                    } else {
                        out(static_cast<Eigen::Index>(g)) = acc / r;
                    }
                }
            }
        });
    }
}

Vec ClusterEngine::exp_ref(const Vec& tau, double sign) const {
    if (static_cast<std::size_t>(tau.size()) != dim()) throw Error("ClusterEngine::exp_ref: dimension mismatch");
    Vec out;
    sweep<false>(tau, out, sign);
    return out;
}

Vec ClusterEngine::log_ref(const Vec& c) const {
    if (static_cast<std::size_t>(c.size()) != dim()) throw Error("ClusterEngine::log_ref: dimension mismatch");
    if (std::abs(c(0) - 1.0) > 1e-12) throw Error("ClusterEngine::log_ref: vector is not intermediately normalized");
    Vec out;
    sweep<true>(c, out, 1.0);
    return out;
}

Vec ClusterEngine::exp_amplitudes(const Vec& tau, double sign) const {
    Vec c = exp_ref(tau, sign);
    Vec out = sref_.cwiseProduct(c);
    out(0) = 0.0;
    return out;
}

}  // namespace ccwp
