// Copyright 2026 The ccwp Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file cluster.hpp
 * @brief Cluster-operator algebra: action and adjoint, exponential,
 *        logarithm, CC residual and energy, Jacobian and amplitudes from a CI
 *        vector.
 *
 * Two layers are provided. The determinant-space layer works on
 * DeterminantSpace coordinates with dense Hamiltonians and evaluates the
 * exponential by Horner's rule; it is literal and meant for small spaces.
 * ClusterEngine works on the alpha x beta string grid of a Full space and is
 * used by the solver and analysis modules for every fixture size.
 *
 * Amplitude vectors are aligned with space.excitations (t[i] belongs to
 * excitations[i], determinant dets[i+1]); wavefunction vectors are aligned
 * with host.dets. Intermediate vectors always live in the Full host space.
 */

#pragma once

#include "ccwp/detspace.hpp"

#include <utility>

namespace ccwp {

/**
 * sum_mu t_mu X_mu psi (or X_mu^dagger). @p t is aligned with
 * @p amp_space.excitations, @p psi with @p host.dets. Throws when an image
 * falls outside @p host.
 */
Vec cluster_apply(const DeterminantSpace& amp_space, const Vec& t, const DeterminantSpace& host, const Vec& psi,
                  bool adjoint = false);

/// exp(sign * T) psi (or exp(sign * T^dagger) psi) as the exact polynomial of degree N.
Vec exp_cluster_apply(const DeterminantSpace& amp_space, const Vec& t, const DeterminantSpace& host, const Vec& psi,
                      int sign = 1, bool adjoint = false);

/// Amplitudes over host.excitations with exp(T) ref = phi / phi[0]. Throws if |phi[0]| < 1e-12.
Vec log_cluster(const DeterminantSpace& host, const Vec& phi);

/// Amplitudes from a CI vector: log of psi_star scaled to intermediate normalization.
Vec amplitudes_from_ci(const DeterminantSpace& host, const Vec& psi_star);

struct CcResidual {
    double energy = 0.0;  ///< <ref, exp(-T) H exp(T) ref>
    Vec residual;         ///< aligned with amp_space.excitations
};

/// CC energy and residual <X_mu ref, exp(-T) H exp(T) ref> with dense H over @p host.
CcResidual cc_residual(const DeterminantSpace& amp_space, const Vec& t, const DeterminantSpace& host, const Mat& h);

/// J_{nu mu} = <X_nu ref, exp(-T) (H - e_shift) exp(T) X_mu ref> over amp_space.excitations.
Mat cc_jacobian(const DeterminantSpace& amp_space, const Vec& t, const DeterminantSpace& host, const Mat& h,
                double e_shift);

/**
 * Signed permutation between Full determinant-space coordinates and the
 * string grid. grid[i] is the grid position of dets[i], kappa[i] the sign
 * relating the two basis vectors, and eps[i] (i >= 1) the sign relating the
 * amplitude of excitations[i-1] to the grid amplitude at grid[i].
 */
struct GridMap {
    std::size_t ns = 0;
    std::vector<std::uint32_t> grid;
    std::vector<int> kappa;
    std::vector<int> eps;

    /// Grid amplitudes from an amplitude vector over a prefix of the excitations.
    Vec amplitudes_to_grid(const Vec& t) const;
    /// First @p count excitation amplitudes from grid amplitudes.
    Vec amplitudes_from_grid(const Vec& tau, std::size_t count) const;
    Vec wavefunction_to_grid(const Vec& psi) const;
    Vec wavefunction_from_grid(const Vec& x) const;
};

GridMap build_grid_map(const DeterminantSpace& full, const StringSpace& strings, const StringLinks& links);

/**
 * Cluster operators on the string grid. A grid amplitude vector tau holds the
 * coefficient of X_{m alpha} X_{n beta} at the grid position m * ns + n of the
 * image of the reference; tau[0] is always zero.
 *
 * Because [R, X_mu] = rank(mu) X_mu for the excitation-rank operator R,
 * exp(T) ref and the logarithm are each computed in one sweep over grid
 * positions in order of increasing rank. exp(sT) - I is itself a cluster
 * operator, so exp(+-T) x costs one application once its amplitudes are known.
 */
class ClusterEngine {
public:
    ClusterEngine(const StringSpace& strings, const StringLinks& links);

    std::size_t ns() const { return ns_; }
    std::size_t dim() const { return ns_ * ns_; }
    /// Excitation rank of each grid position.
    const std::vector<int>& rank() const { return rank_; }
    /// Phase of X_{m alpha} X_{n beta} on the reference, per grid position.
    const Vec& ref_sign() const { return sref_; }
    int max_rank() const { return max_rank_; }

    /**
     * y = T x or T^dagger x, using only amplitudes of rank <= max_rank
     * (negative for all).
     */
    void apply(const Vec& tau, const Vec& x, Vec& y, bool adjoint = false, int max_rank = -1) const;

    /// exp(sign * T) ref.
    Vec exp_ref(const Vec& tau, double sign = 1.0) const;
    /// tau with exp(T) ref = c, for c[0] = 1.
    Vec log_ref(const Vec& c) const;
    /// Amplitudes of exp(sign * T) - I.
    Vec exp_amplitudes(const Vec& tau, double sign = 1.0) const;

private:
    template <bool Sweep>
    void sweep(const Vec& tau, Vec& c, double sign) const;

    std::size_t ns_;
    int max_rank_;
    std::vector<int> srank_;
    std::vector<std::size_t> rank_offset_;
    std::vector<int> rank_;
    Vec sref_;
    std::vector<std::size_t> t_off_, s_off_;
    std::vector<StringLink> t_links_, s_links_;
};

}  // namespace ccwp
