// Copyright 2026 The ccwp Authors
// SPDX-License-Identifier: Apache-2.0

#include "ccwp/detspace.hpp"

#include <algorithm>
#include <functional>

namespace ccwp {

namespace {

/// Phase of a creator/annihilator on orbital p of @p d.
inline int op_phase(Det d, int p) { return (popcount(d & ((Det{1} << p) - 1)) & 1) ? -1 : 1; }

inline bool annihilate(Det& d, int p, int& phase) {
    if (!((d >> p) & 1)) return false;
    phase *= op_phase(d, p);
    d &= ~(Det{1} << p);
    return true;
}

inline bool create(Det& d, int p, int& phase) {
    if ((d >> p) & 1) return false;
    phase *= op_phase(d, p);
    d |= Det{1} << p;
    return true;
}

/// a+_{c1} ... a+_{cj} a_{aj} ... a_{a1}: annihilate a1..aj, then create cj..c1.
std::optional<PhasedDet> apply_string(const std::vector<int>& ann, const std::vector<int>& cre, Det det) {
    int phase = 1;
    for (int p : ann) {
        if (!annihilate(det, p, phase)) return std::nullopt;
    }
    for (auto it = cre.rbegin(); it != cre.rend(); ++it) {
        if (!create(det, *it, phase)) return std::nullopt;
    }
    return PhasedDet{phase, det};
}

/// Visit all k-subsets of @p pool in lexicographic order.
void for_each_combination(const std::vector<int>& pool, int k, const std::function<void(const std::vector<int>&)>& fn) {
    const int n = static_cast<int>(pool.size());
    if (k > n || k < 0) return;
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    std::vector<int> sel(k);
    for (;;) {
        for (int i = 0; i < k; ++i) sel[i] = pool[idx[i]];
        fn(sel);
        int i = k - 1;
        while (i >= 0 && idx[i] == n - k + i) --i;
        if (i < 0) return;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

}  // namespace

Det reference_determinant(int nelec, int n_spin) {
    if (n_spin > 64) throw Error("at most 64 spin orbitals are supported");
    if (nelec < 0 || nelec > n_spin) throw Error("electron count exceeds spin-orbital count");
    return nelec == 64 ? ~Det{0} : (Det{1} << nelec) - 1;
}

int excitation_rank(Det det, Det ref) {
    if (popcount(det) != popcount(ref)) throw Error("excitation_rank: particle-number mismatch");
    return popcount(det ^ ref) / 2;
}

std::optional<PhasedDet> apply_excitation(const ExcitationIndex& mu, Det det) {
    return apply_string(mu.holes, mu.particles, det);
}

std::optional<PhasedDet> apply_deexcitation(const ExcitationIndex& mu, Det det) {
    return apply_string(mu.particles, mu.holes, det);
}

std::optional<PhasedDet> apply_orbital_replacement(const std::vector<int>& from, const std::vector<int>& to,
                                                   Det det) {
    if (from.size() != to.size()) throw Error("orbital replacement: from/to lengths differ");
    if (from != to) {
        for (int f : from) {
            if (std::find(to.begin(), to.end(), f) != to.end()) {
                throw Error("orbital replacement: overlapping from/to lists");
            }
        }
    }
    return apply_string(from, to, det);
}

std::vector<ExcitationIndex> enumerate_excitations(int nelec, int n_spin, int max_rank) {
    reference_determinant(nelec, n_spin);
    const int top = std::min(nelec, n_spin - nelec);
    if (max_rank == kFullRank) {
        max_rank = top;
    } else if (max_rank < 1 || max_rank > nelec) {
        throw Error("max_rank must lie in 1..N");
    }
    max_rank = std::min(max_rank, top);
    std::vector<int> occ(nelec), vir(n_spin - nelec);
    for (int i = 0; i < nelec; ++i) occ[i] = i;
    for (int i = nelec; i < n_spin; ++i) vir[i - nelec] = i;
    std::vector<ExcitationIndex> out;
    for (int j = 1; j <= max_rank; ++j) {
        for_each_combination(occ, j, [&](const std::vector<int>& holes) {
            int alpha_holes = 0;
            for (int h : holes) alpha_holes += (h % 2 == 0);
            for_each_combination(vir, j, [&](const std::vector<int>& parts) {
                int alpha_parts = 0;
                for (int a : parts) alpha_parts += (a % 2 == 0);
                if (alpha_parts == alpha_holes) out.push_back({holes, parts});
            });
        });
    }
    return out;
}

std::size_t DeterminantSpace::find(Det d) const {
    auto it = index_of.find(d);
    return it == index_of.end() ? npos : it->second;
}

std::size_t DeterminantSpace::excitation_count(int q) const {
    auto it = std::partition_point(excitations.begin(), excitations.end(),
                                   [q](const ExcitationIndex& e) { return e.rank() <= q; });
    return static_cast<std::size_t>(it - excitations.begin());
}

DeterminantSpace build_space(int nelec, int n_spin, int max_rank) {
    DeterminantSpace s;
    s.nelec = nelec;
    s.n_spin = n_spin;
    s.reference = reference_determinant(nelec, n_spin);
    s.full = (max_rank == kFullRank) || max_rank >= std::min(nelec, n_spin - nelec);
    s.excitations = enumerate_excitations(nelec, n_spin, max_rank);
    s.max_rank = s.excitations.empty() ? 0 : s.excitations.back().rank();
    s.dets.reserve(s.excitations.size() + 1);
    s.dets.push_back(s.reference);
    for (const auto& mu : s.excitations) s.dets.push_back(apply_excitation(mu, s.reference)->det);
    s.index_of.reserve(s.dets.size());
    for (std::size_t i = 0; i < s.dets.size(); ++i) s.index_of.emplace(s.dets[i], i);
    return s;
}

StringSpace build_strings(int norb, int nel) {
    if (norb > 32) throw Error("at most 32 spatial orbitals are supported");
    if (nel < 0 || nel > norb) throw Error("string electron count out of range");
    StringSpace s;
    s.norb = norb;
    s.nel = nel;
    const std::uint32_t ref = nel == 32 ? ~0u : (1u << nel) - 1;
    std::vector<int> occ(nel), vir(norb - nel);
    for (int i = 0; i < nel; ++i) occ[i] = i;
    for (int i = nel; i < norb; ++i) vir[i - nel] = i;
    const int top = std::min(nel, norb - nel);
    for (int r = 0; r <= top; ++r) {
        s.rank_offset.push_back(s.strings.size());
        for_each_combination(occ, r, [&](const std::vector<int>& holes) {
            for_each_combination(vir, r, [&](const std::vector<int>& parts) {
                std::uint32_t str = ref;
                for (int h : holes) str &= ~(1u << h);
                for (int a : parts) str |= 1u << a;
                s.strings.push_back(str);
                s.rank.push_back(r);
            });
        });
    }
    s.rank_offset.push_back(s.strings.size());
    s.index_of.reserve(s.strings.size());
    for (std::size_t i = 0; i < s.strings.size(); ++i) s.index_of.emplace(s.strings[i], static_cast<std::uint32_t>(i));
    return s;
}

StringLinks build_string_links(const StringSpace& s) {
    const std::size_t ns = s.size();
    const std::uint32_t ref = s.strings[0];
    struct Raw {
        std::uint32_t src, dst, exc;
        int sign;
    };
    std::vector<Raw> raw;
    StringLinks L;
    L.ref_sign.assign(ns, 0);
    for (std::uint32_t m = 0; m < ns; ++m) {
        const std::uint32_t holes = ref & ~s.strings[m];
        const std::uint32_t parts = s.strings[m] & ~ref;
        std::vector<int> h, p;
        for (int i = 0; i < s.norb; ++i) {
            if ((holes >> i) & 1) h.push_back(i);
            if ((parts >> i) & 1) p.push_back(i);
        }
        for (std::uint32_t a = 0; a < ns; ++a) {
            const std::uint32_t str = s.strings[a];
            if ((str & holes) != holes || (str & parts) != 0) continue;
            auto r = apply_string(h, p, str);
            const std::uint32_t dst = s.index_of.at(static_cast<std::uint32_t>(r->det));
            raw.push_back({a, dst, m, r->phase});
            if (a == 0) L.ref_sign[m] = r->phase;
        }
    }
    auto build = [&](bool by_target, std::vector<std::size_t>& off, std::vector<StringLink>& out) {
        std::vector<Raw> sorted = raw;
        std::stable_sort(sorted.begin(), sorted.end(), [&](const Raw& x, const Raw& y) {
            const std::uint32_t kx = by_target ? x.dst : x.src;
            const std::uint32_t ky = by_target ? y.dst : y.src;
            if (kx != ky) return kx < ky;
            if (s.rank[x.exc] != s.rank[y.exc]) return s.rank[x.exc] < s.rank[y.exc];
            return x.exc < y.exc;
        });
        off.assign(ns + 1, 0);
        out.reserve(sorted.size());
        for (const auto& r : sorted) {
            ++off[(by_target ? r.dst : r.src) + 1];
            out.push_back({by_target ? r.src : r.dst, r.exc, r.sign});
        }
        for (std::size_t i = 0; i < ns; ++i) off[i + 1] += off[i];
    };
    build(true, L.by_target_offset, L.by_target);
    build(false, L.by_source_offset, L.by_source);
    return L;
}

}  // namespace ccwp
