// Copyright 2026 The ccwp Authors
// SPDX-License-Identifier: Apache-2.0

#include "ccwp/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace ccwp {

Vec Diis::push(const Vec& x, const Vec& err) {
    xs_.push_back(x);
    errs_.push_back(err);
    while (static_cast<int>(xs_.size()) > depth_) {
        xs_.pop_front();
        errs_.pop_front();
    }
    const int m = static_cast<int>(xs_.size());
    if (m == 1) return x;
    Mat b = Mat::Zero(m + 1, m + 1);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j <= i; ++j) {
            b(i, j) = b(j, i) = errs_[i].dot(errs_[j]);
        }
    }
    const double scale = b.topLeftCorner(m, m).diagonal().maxCoeff();
    if (!(scale > 0.0)) return x;
    b.topLeftCorner(m, m) /= scale;
    Eigen::JacobiSVD<Mat> svd(b.topLeftCorner(m, m));
    const auto& sv = svd.singularValues();
    if (sv(m - 1) <= 0.0 || sv(0) / sv(m - 1) > max_cond_) {
        xs_.erase(xs_.begin(), xs_.end() - 1);
        errs_.erase(errs_.begin(), errs_.end() - 1);
        return x;
    }
    for (int i = 0; i < m; ++i) b(i, m) = b(m, i) = -1.0;
    Vec rhs = Vec::Zero(m + 1);
    rhs(m) = -1.0;
    Vec c = b.fullPivLu().solve(rhs);
    Vec out = Vec::Zero(x.size());
    for (int i = 0; i < m; ++i) out += c(i) * xs_[i];
    return out;
}

Mat assemble(const LinearMap& op, Eigen::Index n_in, Eigen::Index n_out) {
    Mat m(n_out, n_in);
    Vec e = Vec::Zero(n_in), y(n_out);
    for (Eigen::Index j = 0; j < n_in; ++j) {
        e(j) = 1.0;
        op(e, y);
        m.col(j) = y;
        e(j) = 0.0;
    }
    return m;
}

namespace {

Vec start_vector(Eigen::Index n) {
    std::mt19937 gen(20240917u);
    Vec v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = static_cast<double>(gen()) / 4294967296.0 - 0.5;
    return v / v.norm();
}

int pick(const Vec& evals, Extremum which) {
    const int last = static_cast<int>(evals.size()) - 1;
    switch (which) {
        case Extremum::Smallest: return 0;
        case Extremum::Largest: return last;
        case Extremum::Magnitude: return std::abs(evals(0)) > std::abs(evals(last)) ? 0 : last;
    }
    return 0;
}

}  // namespace

EigenPair extreme_eigenpair(const LinearMap& op, Eigen::Index n, Extremum which, const EigenOptions& opts) {
    EigenPair out;
    if (n <= 0) throw Error("eigenproblem of empty dimension");
    if (n <= opts.dense_threshold) {
        Mat m = assemble(op, n, n);
        Mat sym = 0.5 * (m + m.transpose());
        Eigen::SelfAdjointEigenSolver<Mat> es(sym);
        const int k = pick(es.eigenvalues(), which);
        out.value = es.eigenvalues()(k);
        out.vector = es.eigenvectors().col(k);
        out.converged = true;
        return out;
    }
    const int mmax = static_cast<int>(std::min<Eigen::Index>(opts.max_basis, n));
    Mat v(n, mmax);
    Vec x = start_vector(n);
    Vec w(n);
    for (int restart = 0; restart <= opts.max_restarts; ++restart) {
        std::vector<double> alpha, beta;
        v.col(0) = x / x.norm();
        for (int j = 0; j < mmax; ++j) {
            op(v.col(j), w);
            const double a = v.col(j).dot(w);
            alpha.push_back(a);
            for (int pass = 0; pass < 2; ++pass) {
                Vec coef = v.leftCols(j + 1).transpose() * w;
                w.noalias() -= v.leftCols(j + 1) * coef;
            }
            const double b = w.norm();
            beta.push_back(b);
            const int k = j + 1;
            const bool check = (k % 5 == 0) || k == mmax || b < 1e-12 * std::max(1.0, std::abs(a));
            if (check) {
                Mat t = Mat::Zero(k, k);
                for (int i = 0; i < k; ++i) {
                    t(i, i) = alpha[i];
                    if (i + 1 < k) t(i, i + 1) = t(i + 1, i) = beta[i];
                }
                Eigen::SelfAdjointEigenSolver<Mat> es(t);
                const Vec& ev = es.eigenvalues();
                auto converged = [&](int idx) {
                    const double res = b * std::abs(es.eigenvectors()(k - 1, idx));
                    return res <= opts.tol * std::max(1.0, std::abs(ev(idx)));
                };
                const int target = pick(ev, which);
                bool done = converged(target);
                if (which == Extremum::Magnitude) done = converged(0) && converged(k - 1);
                const bool invariant = b < 1e-12 * std::max(1.0, ev.cwiseAbs().maxCoeff());
                if (done || invariant || k == mmax) {
                    x = v.leftCols(k) * es.eigenvectors().col(target);
                    if (done || invariant || k == n) {
                        out.value = ev(target);
                        out.vector = x / x.norm();
                        out.converged = true;
                        return out;
                    }
                    break;
                }
            }
            if (j + 1 < mmax) v.col(j + 1) = w / b;
        }
    }
    // Last Ritz pair after exhausting restarts.
    Vec ax(n);
    x /= x.norm();
    op(x, ax);
    out.value = x.dot(ax);
    out.vector = x;
    out.converged = false;
    return out;
}

double sigma_max(const LinearMap& a, const LinearMap& at, Eigen::Index n_in, Eigen::Index n_out,
                 const EigenOptions& opts) {
    Vec tmp;
    LinearMap normal;
    Eigen::Index n = n_in;
    if (n_in <= n_out) {
        normal = [&](const Vec& x, Vec& y) {
            tmp.resize(n_out);
            a(x, tmp);
            y.resize(n_in);
            at(tmp, y);
        };
    } else {
        n = n_out;
        normal = [&](const Vec& x, Vec& y) {
            tmp.resize(n_in);
            at(x, tmp);
            y.resize(n_out);
            a(tmp, y);
        };
    }
    auto ep = extreme_eigenpair(normal, n, Extremum::Largest, opts);
    return std::sqrt(std::max(ep.value, 0.0));
}

double sigma_min(const LinearMap& a, const LinearMap& at, Eigen::Index n, const EigenOptions& opts) {
    Vec tmp(n);
    LinearMap normal = [&](const Vec& x, Vec& y) {
        a(x, tmp);
        y.resize(n);
        at(tmp, y);
    };
    auto ep = extreme_eigenpair(normal, n, Extremum::Smallest, opts);
    return std::sqrt(std::max(ep.value, 0.0));
}

double sigma_max(const Mat& a) {
    if (a.size() == 0) return 0.0;
    Eigen::BDCSVD<Mat> svd(a);
    return svd.singularValues()(0);
}

double sigma_min(const Mat& a) {
    if (a.rows() != a.cols()) throw Error("sigma_min requires a square matrix");
    if (a.size() == 0) return 0.0;
    Eigen::BDCSVD<Mat> svd(a);
    return svd.singularValues()(svd.singularValues().size() - 1);
}

DavidsonResult davidson(const LinearMap& op, const Vec& diagonal, int nroots, double tol, int max_iter,
                        int max_subspace) {
    const Eigen::Index n = diagonal.size();
    nroots = static_cast<int>(std::min<Eigen::Index>(nroots, n));
    std::vector<Eigen::Index> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) { return diagonal(i) < diagonal(j); });
    Mat v = Mat::Zero(n, nroots);
    for (int k = 0; k < nroots; ++k) v(order[k], k) = 1.0;
    Mat av(n, nroots);
    Vec y(n);
    for (int k = 0; k < nroots; ++k) {
        op(v.col(k), y);
        av.col(k) = y;
    }
    DavidsonResult res;
    for (int it = 1; it <= max_iter; ++it) {
        res.iterations = it;
        Mat h = v.transpose() * av;
        h = 0.5 * (h + h.transpose()).eval();
        Eigen::SelfAdjointEigenSolver<Mat> es(h);
        Mat yk = es.eigenvectors().leftCols(nroots);
        res.values = es.eigenvalues().head(nroots);
        res.vectors = v * yk;
        Mat r = av * yk - res.vectors * res.values.asDiagonal();
        std::vector<Vec> add;
        bool all = true;
        for (int k = 0; k < nroots; ++k) {
            if (r.col(k).norm() < tol) continue;
            all = false;
            Vec t(n);
            for (Eigen::Index i = 0; i < n; ++i) {
                double d = res.values(k) - diagonal(i);
                if (std::abs(d) < 1e-8) d = d < 0 ? -1e-8 : 1e-8;
                t(i) = r(i, k) / d;
            }
            add.push_back(std::move(t));
        }
        if (all) {
            res.converged = true;
            return res;
        }
        if (v.cols() + static_cast<Eigen::Index>(add.size()) > max_subspace) {
            av = (av * yk).eval();
            v = res.vectors;
        }
        for (auto& t : add) {
            t /= t.norm();
            for (int pass = 0; pass < 2; ++pass) t -= v * (v.transpose() * t);
            const double nt = t.norm();
            if (nt < 1e-8) continue;
            t /= nt;
            op(t, y);
            v.conservativeResize(Eigen::NoChange, v.cols() + 1);
            av.conservativeResize(Eigen::NoChange, av.cols() + 1);
            v.col(v.cols() - 1) = t;
            av.col(av.cols() - 1) = y;
        }
    }
    return res;
}

}  // namespace ccwp
