// Copyright 2026 The ccwp Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file fcidump.hpp
 * @brief FCIDUMP reading and writing, symmetry-aware integral lookup and the
 *        spin-orbital expansion of the integral table.
 *
 * Spatial orbitals are 1-based in the FCIDUMP-facing API. Spin orbitals are
 * 0-based everywhere: spin orbital i is spatial orbital i/2 with spin i%2
 * (0 = alpha, 1 = beta), i.e. alpha and beta spin orbitals are interleaved.
 */

#pragma once

#include "ccwp/common.hpp"

#include <array>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ccwp {

/// Namelist header of an FCIDUMP file.
struct FcidumpHeader {
    int norb = 0;             ///< number of spatial orbitals K
    int nelec = 0;            ///< number of electrons N
    int ms2 = 0;              ///< twice the spin projection
    std::vector<int> orbsym;  ///< orbital symmetry labels (informational)
    int isym = 1;             ///< state symmetry label (informational)

    bool operator==(const FcidumpHeader&) const = default;
};

/// Key of a one-electron integral (p >= q, 1-based).
using OneKey = std::pair<int, int>;
/// Key of a two-electron integral in canonical 8-fold form (1-based).
using TwoKey = std::array<int, 4>;

/**
 * One- and two-electron integrals in chemists' notation, stored under
 * canonical keys only. Unstored integrals are zero.
 */
struct IntegralTable {
    FcidumpHeader header;
    double core_energy = 0.0;
    std::map<OneKey, double> h;
    std::map<TwoKey, double> eri;

    bool operator==(const IntegralTable&) const = default;
};

/// Canonical 8-fold key: p >= q, r >= s and (p,q) >= (r,s) as pair indices.
TwoKey canonical_eri_key(int p, int q, int r, int s);

/**
 * Parse FCIDUMP text. Duplicate records overwrite earlier ones and append a
 * message to @p warnings (or print to stderr when @p warnings is null).
 * Throws ccwp::Error on malformed input or MS2 != 0.
 */
IntegralTable parse_fcidump(std::string_view text, std::vector<std::string>* warnings = nullptr);

/// Read and parse an FCIDUMP file.
IntegralTable read_fcidump(const std::string& path, std::vector<std::string>* warnings = nullptr);

/**
 * Symmetry-expanded lookup with 1-based indices: (0,0,0,0) is the core
 * energy, (p,q,0,0) a one-electron integral and (p,q,r,s) the two-electron
 * integral (pq|rs).
 */
double integral_lookup(const IntegralTable& table, int p, int q, int r, int s);

/// Canonical FCIDUMP text; parse_fcidump(write_fcidump(t)) == t exactly.
std::string write_fcidump(const IntegralTable& table);

/// Dense 0-based copy of an integral table used by the numerical kernels.
struct DenseIntegrals {
    int norb = 0;
    int nelec = 0;
    double core_energy = 0.0;
    Mat h;                    ///< norb x norb one-electron integrals
    std::vector<double> eri;  ///< (pq|rs) at ((p*K+q)*K+r)*K+s

    double g(int p, int q, int r, int s) const {
        return eri[((static_cast<std::size_t>(p) * norb + q) * norb + r) * norb + s];
    }
};

DenseIntegrals to_dense(const IntegralTable& table);

/// Build a table from dense integrals, keeping canonical entries that are not exactly zero.
IntegralTable from_dense(const DenseIntegrals& dense, const FcidumpHeader& header);

/// Spin-orbital integrals over n_spin = 2K interleaved spin orbitals (0-based).
struct SpinIntegralTable {
    int n_spin = 0;
    double core_energy = 0.0;
    std::vector<double> h_so;      ///< n_spin^2 one-electron integrals
    std::vector<double> eri_anti;  ///< n_spin^4 antisymmetrized <pq||rs>

    double h(int p, int q) const { return h_so[static_cast<std::size_t>(p) * n_spin + q]; }
    double anti(int p, int q, int r, int s) const {
        return eri_anti[((static_cast<std::size_t>(p) * n_spin + q) * n_spin + r) * n_spin + s];
    }
};

/// <pq||rs> = (pr|qs) d(sp,sr) d(sq,ss) - (ps|qr) d(sp,ss) d(sq,sr).
SpinIntegralTable spin_orbital_transform(const IntegralTable& table);
SpinIntegralTable spin_orbital_transform(const DenseIntegrals& dense);

}  // namespace ccwp
