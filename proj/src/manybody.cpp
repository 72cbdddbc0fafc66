// Copyright 2026 The ccwp Authors
// SPDX-License-Identifier: Apache-2.0

#include "ccwp/manybody.hpp"

#include "ccwp/linalg.hpp"

#include <cmath>

namespace ccwp {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

double slater_condon(Det di, Det dj, const SpinIntegralTable& ints) {
    const Det diff = di ^ dj;
    const int nd = popcount(diff) / 2;
    if (nd > 2) return 0.0;
    const int n = ints.n_spin;
    if (nd == 0) {
        double e = ints.core_energy;
        for (int p = 0; p < n; ++p) {
            if (!((di >> p) & 1)) continue;
            e += ints.h(p, p);
            for (int q = 0; q < p; ++q) {
                if ((di >> q) & 1) e += ints.anti(p, q, p, q);
            }
        }
        return e;
    }
    std::vector<int> pi, qj;
    for (int p = 0; p < n; ++p) {
        if (!((diff >> p) & 1)) continue;
        if ((di >> p) & 1) {
            pi.push_back(p);
        } else {
            qj.push_back(p);
        }
    }
    const auto r = apply_excitation(ExcitationIndex{qj, pi}, dj);
    if (nd == 1) {
        const int p = pi[0], q = qj[0];
        double v = ints.h(p, q);
        for (int s = 0; s < n; ++s) {
            if (s != q && ((dj >> s) & 1)) v += ints.anti(p, s, q, s);
        }
        return r->phase * v;
    }
    return r->phase * ints.anti(pi[0], pi[1], qj[0], qj[1]);
}

inline int string_phase(std::uint32_t s, int p) { return (__builtin_popcount(s & ((1u << p) - 1)) & 1) ? -1 : 1; }

}  // namespace

Mat hamiltonian_matrix(const DeterminantSpace& space, const SpinIntegralTable& ints) {
    if (space.n_spin > ints.n_spin) throw Error("hamiltonian_matrix: space exceeds the integral basis");
    const std::size_t n = space.size();
    Mat h(n, n);
    parallel_for(n, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            for (std::size_t j = 0; j < n; ++j) h(i, j) = slater_condon(space.dets[i], space.dets[j], ints);
        }
    });
    return h;
}

double determinant_orbital_sum(Det d, const Vec& orbital_energies) {
    double s = 0.0;
    for (int p = 0; d >> p; ++p) {
        if ((d >> p) & 1) s += orbital_energies(p / 2);
    }
    return s;
}

MeanFieldMetric mean_field_metric(const DeterminantSpace& space, const Vec& orbital_energies) {
    if (orbital_energies.size() * 2 < space.n_spin) throw Error("mean_field_metric: too few orbital energies");
    MeanFieldMetric m;
    m.weights.resize(static_cast<Eigen::Index>(space.size()));
    const double ref = determinant_orbital_sum(space.reference, orbital_energies);
    for (std::size_t i = 0; i < space.size(); ++i) {
        const double w = i == 0 ? 1.0 : determinant_orbital_sum(space.dets[i], orbital_energies) - ref;
        if (!(w > 0.0)) throw Error("mean_field_metric: non-positive weight (no HOMO-LUMO gap)");
        m.weights(static_cast<Eigen::Index>(i)) = w;
    }
    return m;
}

Mat fluctuation_matrix(const DeterminantSpace& space, const SpinIntegralTable& ints, const Vec& orbital_energies) {
    Mat u = hamiltonian_matrix(space, ints);
    const double shift = u(0, 0) - determinant_orbital_sum(space.reference, orbital_energies);
    for (std::size_t i = 0; i < space.size(); ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        u(ii, ii) -= determinant_orbital_sum(space.dets[i], orbital_energies) + shift;
    }
    return u;
}

double weighted_operator_norm(const Mat& a, const Vec* w_in, const Vec* w_out) {
    Mat b = a;
    if (w_in) {
        if (w_in->size() != a.cols()) throw Error("weighted_operator_norm: input metric dimension mismatch");
        if ((w_in->array() <= 0.0).any()) throw Error("weighted_operator_norm: non-positive weight");
        b = b * w_in->cwiseSqrt().cwiseInverse().asDiagonal();
    }
    if (w_out) {
        if (w_out->size() != a.rows()) throw Error("weighted_operator_norm: output metric dimension mismatch");
        if ((w_out->array() <= 0.0).any()) throw Error("weighted_operator_norm: non-positive weight");
        b = w_out->cwiseSqrt().asDiagonal() * b;
    }
    return sigma_max(b);
}

Mat project_subspace(const Mat& a, const DeterminantSpace& sub, const DeterminantSpace& space) {
    if (a.rows() != static_cast<Eigen::Index>(space.size()) || a.cols() != a.rows()) {
        throw Error("project_subspace: matrix does not match the space");
    }
    if (sub.size() > space.size() || !std::equal(sub.dets.begin(), sub.dets.end(), space.dets.begin())) {
        throw Error("project_subspace: subspace is not a prefix of the space");
    }
    const auto m = static_cast<Eigen::Index>(sub.size());
    Mat out = Mat::Zero(a.rows(), a.cols());
    out.topLeftCorner(m, m) = a.topLeftCorner(m, m);
    return out;
}

GridHamiltonian::GridHamiltonian(const DenseIntegrals& ints, const StringSpace& strings)
    : norb_(ints.norb), ns_(strings.size()), core_(ints.core_energy) {
    const int k = norb_;
    if (strings.norb != k) throw Error("GridHamiltonian: string space and integrals disagree");
    auto g = [&](int p, int q, int r, int s) { return ints.g(p, q, r, s); };
    std::vector<Eigen::Triplet<double>> trip;
    std::vector<std::vector<Single>> by_target(ns_);
    Vec hdiag(static_cast<Eigen::Index>(ns_));
    for (std::size_t j = 0; j < ns_; ++j) {
        const std::uint32_t sj = strings.strings[j];
        std::vector<int> occ, vir;
        for (int p = 0; p < k; ++p) ((sj >> p) & 1 ? occ : vir).push_back(p);
        double d = 0.0;
        for (int p : occ) {
            d += ints.h(p, p);
            for (int q : occ) d += 0.5 * (g(p, p, q, q) - g(p, q, q, p));
        }
        hdiag(static_cast<Eigen::Index>(j)) = d;
        trip.emplace_back(static_cast<int>(j), static_cast<int>(j), d);
        for (int q : occ) {
            by_target[j].push_back({static_cast<std::uint32_t>(q * k + q), static_cast<std::uint32_t>(j), 1});
            const std::uint32_t s1 = sj & ~(1u << q);
            const int sg1 = string_phase(sj, q);
            for (int p : vir) {
                const std::uint32_t si = s1 | (1u << p);
                const int sign = sg1 * string_phase(s1, p);
                const auto i = strings.index_of.at(si);
                double v = ints.h(p, q);
                for (int r : occ) {
                    if (r != q) v += g(p, q, r, r) - g(p, r, r, q);
                }
                trip.emplace_back(static_cast<int>(i), static_cast<int>(j), sign * v);
                by_target[i].push_back({static_cast<std::uint32_t>(p * k + q), static_cast<std::uint32_t>(j), sign});
            }
        }
        for (std::size_t a = 0; a < occ.size(); ++a) {
            for (std::size_t b = a + 1; b < occ.size(); ++b) {
                const int q1 = occ[a], q2 = occ[b];
                std::uint32_t s = sj;
                int sign = string_phase(s, q1);
                s &= ~(1u << q1);
                sign *= string_phase(s, q2);
                s &= ~(1u << q2);
                for (std::size_t c = 0; c < vir.size(); ++c) {
                    for (std::size_t e = c + 1; e < vir.size(); ++e) {
                        const int p1 = vir[c], p2 = vir[e];
                        std::uint32_t t = s;
                        int sg = sign * string_phase(t, p2);
                        t |= 1u << p2;
                        sg *= string_phase(t, p1);
                        t |= 1u << p1;
                        const double v = g(p1, q1, p2, q2) - g(p1, q2, p2, q1);
                        if (v != 0.0) {
                            trip.emplace_back(static_cast<int>(strings.index_of.at(t)), static_cast<int>(j), sg * v);
                        }
                    }
                }
            }
        }
    }
    hs_.resize(static_cast<Eigen::Index>(ns_), static_cast<Eigen::Index>(ns_));
    hs_.setFromTriplets(trip.begin(), trip.end());
    single_off_.assign(ns_ + 1, 0);
    for (std::size_t i = 0; i < ns_; ++i) {
        single_off_[i + 1] = single_off_[i] + by_target[i].size();
        singles_.insert(singles_.end(), by_target[i].begin(), by_target[i].end());
    }
    eri_.resize(k * k, k * k);
    for (int p = 0; p < k; ++p)
        for (int q = 0; q < k; ++q)
            for (int r = 0; r < k; ++r)
                for (int s = 0; s < k; ++s) eri_(p * k + q, r * k + s) = g(p, q, r, s);
    diag_.resize(static_cast<Eigen::Index>(ns_ * ns_));
    for (std::size_t a = 0; a < ns_; ++a) {
        for (std::size_t b = 0; b < ns_; ++b) {
            double v = core_ + hdiag(static_cast<Eigen::Index>(a)) + hdiag(static_cast<Eigen::Index>(b));
            const std::uint32_t sa = strings.strings[a], sb = strings.strings[b];
            for (int p = 0; p < k; ++p) {
                if (!((sa >> p) & 1)) continue;
                for (int q = 0; q < k; ++q) {
                    if ((sb >> q) & 1) v += g(p, p, q, q);
                }
            }
            diag_(static_cast<Eigen::Index>(a * ns_ + b)) = v;
        }
    }
}

void GridHamiltonian::apply(const Vec& x, Vec& y) const {
    const auto ns = static_cast<Eigen::Index>(ns_);
    if (x.size() != ns * ns) throw Error("GridHamiltonian::apply: dimension mismatch");
    y.resize(ns * ns);
    Eigen::Map<const RowMat> xm(x.data(), ns, ns);
    Eigen::Map<RowMat> ym(y.data(), ns, ns);
    const int k2 = norb_ * norb_;
    parallel_for(ns_, [&](std::size_t b, std::size_t e) {
        RowMat d;
        RowMat gm;
        Eigen::Matrix<double, 1, Eigen::Dynamic> row(ns);
        std::vector<int> cols;
        for (std::size_t ia = b; ia < e; ++ia) {
            const auto i = static_cast<Eigen::Index>(ia);
            row = core_ * xm.row(i);
            for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(hs_, i); it; ++it) {
                row += it.value() * xm.row(it.col());
            }
            row += (hs_ * xm.row(i).transpose()).transpose();
            const std::size_t lo = single_off_[ia], hi = single_off_[ia + 1];
            const auto nloc = static_cast<Eigen::Index>(hi - lo);
            d.resize(nloc, ns);
            Mat esub(k2, nloc);
            for (std::size_t t = lo; t < hi; ++t) {
                const auto& s = singles_[t];
                const auto kk = static_cast<Eigen::Index>(t - lo);
                d.row(kk) = s.sign * xm.row(s.src);
                esub.col(kk) = eri_.col(s.pq);
            }
            gm.noalias() = esub * d;
            for (Eigen::Index ib = 0; ib < ns; ++ib) {
                double acc = 0.0;
                const std::size_t l2 = single_off_[ib], h2 = single_off_[ib + 1];
                for (std::size_t t = l2; t < h2; ++t) {
                    const auto& s = singles_[t];
                    acc += s.sign * gm(s.pq, s.src);
                }
                row(ib) += acc;
            }
            ym.row(i) = row;
        }
    });
}

}  // namespace ccwp
