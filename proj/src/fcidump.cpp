// Copyright 2026 The ccwp Authors
// SPDX-License-Identifier: Apache-2.0

#include "ccwp/fcidump.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace ccwp {

namespace {

std::string upper(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
}

bool parse_int(std::string_view tok, int& out) {
    if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), out);
    return res.ec == std::errc() && res.ptr == tok.data() + tok.size();
}

bool parse_real(std::string_view tok, double& out) {
    std::string buf(tok);
    for (auto& c : buf) {
        if (c == 'D' || c == 'd') c = 'E';
    }
    const char* b = buf.data();
    const char* e = buf.data() + buf.size();
    if (b != e && *b == '+') ++b;
    auto res = std::from_chars(b, e, out);
    return b != e && res.ec == std::errc() && res.ptr == e;
}

void warn(std::vector<std::string>* warnings, const std::string& msg) {
    if (warnings) {
        warnings->push_back(msg);
    } else {
        std::cerr << "warning: " << msg << '\n';
    }
}

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_sep(char c) { return c == ',' || std::isspace(static_cast<unsigned char>(c)); }

/// Split a namelist body into KEY -> value tokens.
std::map<std::string, std::vector<std::string>> lex_namelist(std::string_view body) {
    std::map<std::string, std::vector<std::string>> out;
    std::string current;
    std::size_t i = 0;
    while (i < body.size()) {
        if (is_sep(body[i])) {
            ++i;
            continue;
        }
        if (is_ident_start(body[i])) {
            std::size_t j = i;
            while (j < body.size() && is_ident_char(body[j])) ++j;
            std::size_t k = j;
            while (k < body.size() && (body[k] == ' ' || body[k] == '\t')) ++k;
            if (k < body.size() && body[k] == '=') {
                current = upper(body.substr(i, j - i));
                if (out.count(current)) throw Error("malformed namelist header: repeated key " + current);
                out[current];
                i = k + 1;
                continue;
            }
        }
        std::size_t j = i;
        while (j < body.size() && !is_sep(body[j])) ++j;
        if (current.empty()) {
            throw Error("malformed namelist header: value without key '" +
                        std::string(body.substr(i, j - i)) + "'");
        }
        out[current].emplace_back(body.substr(i, j - i));
        i = j;
    }
    return out;
}

int scalar_int(const std::map<std::string, std::vector<std::string>>& nl, const std::string& key,
               bool required, int fallback) {
    auto it = nl.find(key);
    if (it == nl.end()) {
        if (required) throw Error("malformed namelist header: missing " + key);
        return fallback;
    }
    int v = 0;
    if (it->second.size() != 1 || !parse_int(it->second[0], v)) {
        throw Error("malformed namelist header: " + key + " is not an integer");
    }
    return v;
}

}  // namespace

TwoKey canonical_eri_key(int p, int q, int r, int s) {
    if (p < q) std::swap(p, q);
    if (r < s) std::swap(r, s);
    long pq = static_cast<long>(p) * (p - 1) / 2 + q;
    long rs = static_cast<long>(r) * (r - 1) / 2 + s;
    if (pq < rs) {
        std::swap(p, r);
        std::swap(q, s);
    }
    return {p, q, r, s};
}

IntegralTable parse_fcidump(std::string_view text, std::vector<std::string>* warnings) {
    std::string up = upper(text);
    std::size_t start = up.find("&FCI");
    if (start == std::string::npos) throw Error("malformed namelist header: missing &FCI");
    std::size_t body_begin = start + 4;
    std::size_t slash = up.find('/', body_begin);
    std::size_t amp_end = up.find("&END", body_begin);
    std::size_t term = std::min(slash, amp_end);
    if (term == std::string::npos) throw Error("malformed namelist header: missing terminator");
    std::size_t term_len = (term == slash) ? 1 : 4;
    auto nl = lex_namelist(text.substr(body_begin, term - body_begin));

    IntegralTable t;
    t.header.norb = scalar_int(nl, "NORB", true, 0);
    t.header.nelec = scalar_int(nl, "NELEC", true, 0);
    t.header.ms2 = scalar_int(nl, "MS2", false, 0);
    t.header.isym = scalar_int(nl, "ISYM", false, 1);
    if (auto it = nl.find("ORBSYM"); it != nl.end()) {
        for (const auto& tok : it->second) {
            int v = 0;
            if (!parse_int(tok, v)) throw Error("malformed namelist header: ORBSYM entry '" + tok + "'");
            t.header.orbsym.push_back(v);
        }
    }
    const auto& hd = t.header;
    if (hd.norb < 1) throw Error("malformed namelist header: NORB must be >= 1");
    if (hd.nelec < 1) throw Error("malformed namelist header: NELEC must be >= 1");
    if (hd.nelec > 2 * hd.norb) throw Error("malformed namelist header: NELEC exceeds 2*NORB");
    if (hd.ms2 != 0) throw Error("open-shell input rejected: MS2 must be 0");

    std::size_t pos = text.find('\n', term + term_len);
    pos = (pos == std::string_view::npos) ? text.size() : pos + 1;
    int line_no = static_cast<int>(std::count(text.begin(), text.begin() + pos, '\n'));
    bool core_seen = false;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        std::vector<std::string_view> tok;
        std::size_t i = 0;
        while (i < line.size()) {
            while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
            std::size_t j = i;
            while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
            if (j > i) tok.push_back(line.substr(i, j - i));
            i = j;
        }
        if (tok.empty()) continue;
        const std::string where = " (line " + std::to_string(line_no) + ")";
        if (tok.size() != 5) throw Error("malformed record: expected 5 fields" + where);
        double v = 0.0;
        if (!parse_real(tok[0], v)) throw Error("non-numeric value '" + std::string(tok[0]) + "'" + where);
        int idx[4];
        for (int k = 0; k < 4; ++k) {
            if (!parse_int(tok[k + 1], idx[k])) {
                throw Error("non-integer index '" + std::string(tok[k + 1]) + "'" + where);
            }
            if (idx[k] < 0 || idx[k] > hd.norb) {
                throw Error("index out of range 0.." + std::to_string(hd.norb) + where);
            }
        }
        const int p = idx[0], q = idx[1], r = idx[2], s = idx[3];
        if (p == 0 && q == 0 && r == 0 && s == 0) {
            if (core_seen) warn(warnings, "duplicate core-energy record, last wins" + where);
            t.core_energy = v;
            core_seen = true;
        } else if (p > 0 && q > 0 && r == 0 && s == 0) {
            OneKey key{std::max(p, q), std::min(p, q)};
            if (t.h.count(key)) warn(warnings, "duplicate one-electron record, last wins" + where);
            t.h[key] = v;
        } else if (p > 0 && q > 0 && r > 0 && s > 0) {
            TwoKey key = canonical_eri_key(p, q, r, s);
            if (t.eri.count(key)) warn(warnings, "duplicate two-electron record, last wins" + where);
            t.eri[key] = v;
        } else if (p > 0 && q == 0 && r == 0 && s == 0) {
            warn(warnings, "orbital-energy record ignored" + where);
        } else {
            throw Error("malformed record: illegal index pattern" + where);
        }
    }
    return t;
}

IntegralTable read_fcidump(const std::string& path, std::vector<std::string>* warnings) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open FCIDUMP file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_fcidump(ss.str(), warnings);
}

double integral_lookup(const IntegralTable& table, int p, int q, int r, int s) {
    const int n = table.header.norb;
    for (int x : {p, q, r, s}) {
        if (x < 0 || x > n) throw Error("integral index out of range");
    }
    if (p == 0 && q == 0 && r == 0 && s == 0) return table.core_energy;
    if (p > 0 && q > 0 && r == 0 && s == 0) {
        auto it = table.h.find({std::max(p, q), std::min(p, q)});
        return it == table.h.end() ? 0.0 : it->second;
    }
    if (p > 0 && q > 0 && r > 0 && s > 0) {
        auto it = table.eri.find(canonical_eri_key(p, q, r, s));
        return it == table.eri.end() ? 0.0 : it->second;
    }
    throw Error("illegal integral index pattern");
}

std::string write_fcidump(const IntegralTable& table) {
    std::string out;
    char buf[96];
    const auto& hd = table.header;
    std::snprintf(buf, sizeof buf, "&FCI NORB=%d,NELEC=%d,MS2=%d,\n", hd.norb, hd.nelec, hd.ms2);
    out += buf;
    if (!hd.orbsym.empty()) {
        out += " ORBSYM=";
        for (int v : hd.orbsym) out += std::to_string(v) + ",";
        out += "\n";
    }
    std::snprintf(buf, sizeof buf, " ISYM=%d,\n&END\n", hd.isym);
    out += buf;
    for (const auto& [k, v] : table.eri) {
        std::snprintf(buf, sizeof buf, "% .16E %d %d %d %d\n", v, k[0], k[1], k[2], k[3]);
        out += buf;
    }
    for (const auto& [k, v] : table.h) {
        std::snprintf(buf, sizeof buf, "% .16E %d %d 0 0\n", v, k.first, k.second);
        out += buf;
    }
    std::snprintf(buf, sizeof buf, "% .16E 0 0 0 0\n", table.core_energy);
    out += buf;
    return out;
}

DenseIntegrals to_dense(const IntegralTable& table) {
    DenseIntegrals d;
    const int n = table.header.norb;
    d.norb = n;
    d.nelec = table.header.nelec;
    d.core_energy = table.core_energy;
    d.h = Mat::Zero(n, n);
    for (const auto& [k, v] : table.h) {
        d.h(k.first - 1, k.second - 1) = v;
        d.h(k.second - 1, k.first - 1) = v;
    }
    d.eri.assign(static_cast<std::size_t>(n) * n * n * n, 0.0);
    auto at = [&](int p, int q, int r, int s) -> double& {
        return d.eri[((static_cast<std::size_t>(p) * n + q) * n + r) * n + s];
    };
    for (const auto& [k, v] : table.eri) {
        const int p = k[0] - 1, q = k[1] - 1, r = k[2] - 1, s = k[3] - 1;
        at(p, q, r, s) = v;
        at(q, p, r, s) = v;
        at(p, q, s, r) = v;
        at(q, p, s, r) = v;
        at(r, s, p, q) = v;
        at(s, r, p, q) = v;
        at(r, s, q, p) = v;
        at(s, r, q, p) = v;
    }
    return d;
}

IntegralTable from_dense(const DenseIntegrals& dense, const FcidumpHeader& header) {
    IntegralTable t;
    t.header = header;
    t.core_energy = dense.core_energy;
    const int n = dense.norb;
    for (int p = 0; p < n; ++p) {
        for (int q = 0; q <= p; ++q) {
            if (dense.h(p, q) != 0.0) t.h[{p + 1, q + 1}] = dense.h(p, q);
        }
    }
    for (int p = 0; p < n; ++p) {
        for (int q = 0; q <= p; ++q) {
            const int pq = p * (p + 1) / 2 + q;
            for (int r = 0; r < n; ++r) {
                for (int s = 0; s <= r; ++s) {
                    if (r * (r + 1) / 2 + s > pq) continue;
                    const double v = dense.g(p, q, r, s);
                    if (v != 0.0) t.eri[{p + 1, q + 1, r + 1, s + 1}] = v;
                }
            }
        }
    }
    return t;
}

SpinIntegralTable spin_orbital_transform(const DenseIntegrals& d) {
    SpinIntegralTable s;
    const int n = 2 * d.norb;
    s.n_spin = n;
    s.core_energy = d.core_energy;
    s.h_so.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int p = 0; p < n; ++p) {
        for (int q = 0; q < n; ++q) {
            if (p % 2 == q % 2) s.h_so[static_cast<std::size_t>(p) * n + q] = d.h(p / 2, q / 2);
        }
    }
    s.eri_anti.assign(static_cast<std::size_t>(n) * n * n * n, 0.0);
    for (int p = 0; p < n; ++p) {
        for (int q = 0; q < n; ++q) {
            for (int r = 0; r < n; ++r) {
                for (int t = 0; t < n; ++t) {
                    double v = 0.0;
                    if (p % 2 == r % 2 && q % 2 == t % 2) v += d.g(p / 2, r / 2, q / 2, t / 2);
                    if (p % 2 == t % 2 && q % 2 == r % 2) v -= d.g(p / 2, t / 2, q / 2, r / 2);
                    s.eri_anti[((static_cast<std::size_t>(p) * n + q) * n + r) * n + t] = v;
                }
            }
        }
    }
    return s;
}

SpinIntegralTable spin_orbital_transform(const IntegralTable& table) {
    return spin_orbital_transform(to_dense(table));
}

}  // namespace ccwp
