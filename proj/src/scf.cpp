// Copyright 2026 The ccwp Authors
// SPDX-License-Identifier: Apache-2.0

#include "ccwp/scf.hpp"

#include "ccwp/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <limits>

namespace ccwp {

namespace {

/// Orthonormal eigenvectors with each column's largest-magnitude entry made positive.
void fix_signs(Mat& c) {
    for (Eigen::Index j = 0; j < c.cols(); ++j) {
        Eigen::Index imax = 0;
        c.col(j).cwiseAbs().maxCoeff(&imax);
        if (c(imax, j) < 0) c.col(j) = -c.col(j);
    }
}

Mat density_from(const Mat& c, int nocc) {
    return 2.0 * c.leftCols(nocc) * c.leftCols(nocc).transpose();
}

}  // namespace

Mat build_fock_matrix(const Mat& density, const DenseIntegrals& ints) {
    const int k = ints.norb;
    if (density.rows() != k || density.cols() != k) throw Error("build_fock_matrix: dimension mismatch");
    Mat f = ints.h;
    for (int p = 0; p < k; ++p) {
        for (int q = 0; q <= p; ++q) {
            double acc = 0.0;
            for (int r = 0; r < k; ++r) {
                for (int s = 0; s < k; ++s) {
                    acc += density(r, s) * (ints.g(p, q, r, s) - 0.5 * ints.g(p, r, q, s));
                }
            }
            f(p, q) += acc;
            if (p != q) f(q, p) = f(p, q);
        }
    }
    return f;
}

Mat build_fock_matrix(const Mat& density, const IntegralTable& table) {
    return build_fock_matrix(density, to_dense(table));
}

double hf_energy(const Mat& density, const DenseIntegrals& ints) {
    Mat f = build_fock_matrix(density, ints);
    return ints.core_energy + 0.5 * density.cwiseProduct(ints.h + f).sum();
}

namespace {

/// DIIS iterations from density @p d; fills everything but the final orbitals.
void converge(const DenseIntegrals& ints, int nocc, Mat d, const ScfOptions& opts, ScfState& st) {
    Diis diis(opts.diis_depth);
    double e_prev = 0.0;
    st.converged = false;
    for (int it = 1; it <= opts.max_iter; ++it) {
        ++st.iterations;
        Mat f = build_fock_matrix(d, ints);
        const double e = ints.core_energy + 0.5 * d.cwiseProduct(ints.h + f).sum();
        Mat err = f * d - d * f;
        Vec fx = diis.push(Eigen::Map<const Vec>(f.data(), f.size()), Eigen::Map<const Vec>(err.data(), err.size()));
        Mat fe = Eigen::Map<const Mat>(fx.data(), f.rows(), f.cols());
        fe = 0.5 * (fe + fe.transpose()).eval();
        Eigen::SelfAdjointEigenSolver<Mat> es(fe);
        Mat dn = density_from(es.eigenvectors(), nocc);
        if (it > 1 && e > e_prev + 1e-8) {
            dn = (1.0 - opts.damping) * dn + opts.damping * d;
            diis.clear();
        }
        e_prev = e;
        const double delta = (dn - d).cwiseAbs().maxCoeff();
        d = dn;
        if (delta < opts.conv_tol) {
            st.converged = true;
            break;
        }
    }
    Mat f = build_fock_matrix(d, ints);
    Eigen::SelfAdjointEigenSolver<Mat> es(f);
    st.coeffs = es.eigenvectors();
    fix_signs(st.coeffs);
    st.orbital_energies = es.eigenvalues();
    st.density = d;
    st.hf_energy = ints.core_energy + 0.5 * d.cwiseProduct(ints.h + f).sum();
}

}  // namespace

std::pair<double, Vec> rhf_stability(const DenseIntegrals& mo, const Vec& eps, int nocc) {
    const int k = mo.norb;
    const int nvir = k - nocc;
    const int n = nocc * nvir;
    if (n == 0) return {std::numeric_limits<double>::infinity(), Vec()};
    Mat h(n, n);
    for (int i = 0; i < nocc; ++i)
        for (int a = 0; a < nvir; ++a)
            for (int j = 0; j < nocc; ++j)
                for (int b = 0; b < nvir; ++b) {
                    const int A = a + nocc, B = b + nocc;
                    double v = 4.0 * mo.g(i, A, j, B) - mo.g(i, j, A, B) - mo.g(i, B, j, A);
                    if (i == j && a == b) v += eps(A) - eps(i);
                    h(i * nvir + a, j * nvir + b) = v;
                }
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (h + h.transpose()));
    return {es.eigenvalues()(0), es.eigenvectors().col(0)};
}

ScfState run_scf(const IntegralTable& table, const ScfOptions& opts) {
    const DenseIntegrals ints = to_dense(table);
    const int k = ints.norb;
    const int n = ints.nelec;
    if (n % 2 != 0) throw Error("run_scf: closed-shell SCF requires an even electron count");
    const int nocc = n / 2;
    if (nocc > k) throw Error("run_scf: N/2 exceeds the orbital count");

    Mat d;
    if (opts.initial_density) {
        d = *opts.initial_density;
        if (d.rows() != k || d.cols() != k) throw Error("run_scf: initial density has wrong dimension");
    } else {
        Eigen::SelfAdjointEigenSolver<Mat> es(ints.h);
        d = density_from(es.eigenvectors(), nocc);
    }

    ScfState st;
    converge(ints, nocc, d, opts, st);
    for (int restart = 0; opts.follow_instabilities && st.converged && restart < 10; ++restart) {
        const auto [lowest, mode] = rhf_stability(mo_transform(ints, st.coeffs), st.orbital_energies, nocc);
        if (lowest > -1e-6) break;
        Mat kappa = Mat::Zero(k, k);
        for (int i = 0; i < nocc; ++i)
            for (int a = nocc; a < k; ++a) {
                kappa(a, i) = mode(i * (k - nocc) + a - nocc);
                kappa(i, a) = -kappa(a, i);
            }
        double best_e = st.hf_energy;
        Mat best_d = st.density;
        for (int step = 1; step <= 32; ++step) {
            const Mat c = st.coeffs * (0.05 * step * kappa).exp();
            const Mat dt = density_from(c, nocc);
            const double e = hf_energy(dt, ints);
            if (e < best_e) {
                best_e = e;
                best_d = dt;
            }
        }
        ++st.stability_restarts;
        converge(ints, nocc, best_d, opts, st);
    }
    if (st.converged && nocc > 0 && nocc < k &&
        st.orbital_energies(nocc) - st.orbital_energies(nocc - 1) < 1e-8) {
        throw Error("run_scf: degenerate HOMO/LUMO at the Aufbau boundary");
    }
    return st;
}

DenseIntegrals mo_transform(const DenseIntegrals& ints, const Mat& c) {
    const int k = ints.norb;
    if (c.rows() != k || c.cols() != k) throw Error("mo_transform: coefficient dimension mismatch");
    if ((c.transpose() * c - Mat::Identity(k, k)).cwiseAbs().maxCoeff() > 1e-8) {
        throw Error("mo_transform: coefficients are not orthogonal");
    }
    DenseIntegrals out;
    out.norb = k;
    out.nelec = ints.nelec;
    out.core_energy = ints.core_energy;
    out.h = c.transpose() * ints.h * c;
    const int k2 = k * k;
    Mat m(k2, k2);
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
            for (int p = 0; p < k; ++p)
                for (int q = 0; q < k; ++q) m(a * k + b, p * k + q) = c(a, p) * c(b, q);
    // Row-major (pq, rs) view of the eri array equals a column-major (rs, pq) matrix; G is symmetric.
    Eigen::Map<const Mat> g(ints.eri.data(), k2, k2);
    Mat gt = m.transpose() * g * m;
    out.eri.assign(gt.data(), gt.data() + gt.size());
    // Enforce the exact 8-fold symmetry of the transformed array.
    for (int p = 0; p < k; ++p)
        for (int q = 0; q < k; ++q)
            for (int r = 0; r < k; ++r)
                for (int s = 0; s < k; ++s) {
                    const int pp = std::max(p, q), qq = std::min(p, q);
                    const int rr = std::max(r, s), ss = std::min(r, s);
                    int a = pp, b = qq, cc = rr, dd = ss;
                    if (pp * (pp + 1) / 2 + qq < rr * (rr + 1) / 2 + ss) {
                        a = rr;
                        b = ss;
                        cc = pp;
                        dd = qq;
                    }
                    out.eri[((static_cast<std::size_t>(p) * k + q) * k + r) * k + s] =
                        gt(a * k + b, cc * k + dd);
                }
    out.h = 0.5 * (out.h + out.h.transpose()).eval();
    return out;
}

IntegralTable mo_transform(const IntegralTable& table, const Mat& coeffs) {
    return from_dense(mo_transform(to_dense(table), coeffs), table.header);
}

}  // namespace ccwp
