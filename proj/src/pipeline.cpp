// Copyright 2026 The ccwp Authors
// SPDX-License-Identifier: Apache-2.0

#include "ccwp/pipeline.hpp"

#include "json.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

namespace ccwp {

namespace {

using ojson = nlohmann::ordered_json;

constexpr const char* kVersion = "0.1.0";

template <class F>
auto stage(const char* name, F&& f) {
    try {
        return f();
    } catch (const std::exception& e) {
        throw Error(std::string(name) + ": " + e.what());
    }
}

std::string shortest(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

ojson number(double v) {
    if (std::isfinite(v)) return v;
    return shortest(v);
}

ojson number(const std::optional<double>& v) { return v ? number(*v) : ojson(nullptr); }

double read_number(const ojson& j) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
        throw Error("report: invalid number '" + s + "'");
    }
    return j.get<double>();
}

std::optional<double> read_optional(const ojson& j) {
    if (j.is_null()) return std::nullopt;
    return read_number(j);
}

ojson row_to_json(const ConstantsReport& r) {
    ojson j;
    j["molecule"] = r.molecule;
    j["basis"] = r.basis;
    j["rank"] = r.rank == kFullRank ? ojson("full") : ojson(r.rank);
    j["e_hf"] = number(r.e_hf);
    j["e_fci"] = number(r.e_fci);
    j["e_cc"] = number(r.e_cc);
    j["overlap"] = number(r.overlap);
    j["gamma_monotone"] = number(r.gamma_monotone);
    j["infsup_continuous"] = number(r.infsup_continuous);
    j["jac_inv_norm"] = number(r.jac_inv_norm);
    j["lambda_min"] = number(r.lambda_min);
    j["gamma_gs"] = number(r.gamma_gs);
    j["beta_k"] = number(r.beta_k);
    j["coupling_norm"] = number(r.coupling_norm);
    j["smallness_ok"] = r.smallness_ok ? ojson(*r.smallness_ok) : ojson(nullptr);
    j["smallness_rhs"] = number(r.smallness_rhs);
    j["gamma_discrete"] = number(r.gamma_discrete);
    j["apost_bound"] = number(r.apost_bound);
    j["converged"] = r.converged;
    j["iterations"] = r.iterations;
    return j;
}

std::string csv_cell(const ojson& v) {
    if (v.is_null()) return "";
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    return shortest(v.get<double>());
}

std::pair<std::string, std::string> split_stem(const std::string& path) {
    const std::string stem = std::filesystem::path(path).stem().string();
    const auto pos = stem.find('_');
    if (pos == std::string::npos) return {stem, ""};
    return {stem.substr(0, pos), stem.substr(pos + 1)};
}

}  // namespace

const std::vector<std::string>& report_columns() {
    static const std::vector<std::string> cols = [] {
        std::vector<std::string> c;
        const ojson blank = row_to_json(ConstantsReport{});
        for (const auto& item : blank.items()) c.push_back(item.key());
        return c;
    }();
    return cols;
}

std::vector<ConstantsReport> run_pipeline(const PipelineConfig& config) {
    if (config.ranks.empty()) throw Error("no ranks requested");
    const IntegralTable table = stage("read", [&] { return read_fcidump(config.fcidump); });
    const int n = table.header.nelec;
    for (int q : config.ranks) {
        if (q != kFullRank && (q < 1 || q > n)) throw Error("config: rank must lie in 1..N or be full");
    }
    const Model m = stage("scf", [&] { return build_model(table, config.scf); });
    const GroundState gs = stage("fci", [&] { return ground_state(m); });

    auto [molecule, basis] = split_stem(config.fcidump);
    if (!config.molecule.empty()) molecule = config.molecule;
    if (!config.basis.empty()) basis = config.basis;

    const double lambda0 = stage("constants", [&] { return coercivity_constant(m, gs); });
    const MonotonicityTerms mono = stage("constants", [&] { return monotonicity_constant(m, gs, gs.tau, lambda0); });
    const InfSupTerms infsup = stage("constants", [&] { return continuous_infsup_constant(m, gs.tau, lambda0); });

    std::vector<ConstantsReport> rows;
    for (int q : config.ranks) {
        const CcResult cc = stage("cc", [&] { return solve_cc(m, q, config.cc); });
        ConstantsReport r;
        r.molecule = molecule;
        r.basis = basis;
        r.rank = q;
        r.e_hf = m.scf.hf_energy;
        r.e_fci = gs.energy;
        r.e_cc = cc.energy;
        r.overlap = gs.overlap;
        r.gamma_monotone = mono.gamma;
        r.infsup_continuous = infsup.value;
        r.converged = cc.converged;
        r.iterations = cc.iterations;
        const bool truncated = q != kFullRank && q < m.engine->max_rank();
        stage("constants", [&] {
            if (truncated) {
                r.jac_inv_norm = jacobian_inverse_norm(m, truncate_amplitudes(m, gs.tau, q), gs.energy, q);
                const StructureTerms st = structure_b2_terms(m, gs, q, lambda0);
                r.lambda_min = st.lambda_min;
                r.gamma_gs = st.gamma_gs;
                r.beta_k = st.beta_k;
                r.coupling_norm = st.coupling_norm;
                r.smallness_ok = st.smallness_ok;
                r.smallness_rhs = st.smallness_rhs;
                r.gamma_discrete = discrete_infsup_gamma(m, gs, st).value;
            } else {
                r.jac_inv_norm = jacobian_inverse_norm(m, gs.tau, gs.energy, -1);
            }
            return 0;
        });
        if (cc.converged) {
            try {
                r.apost_bound = aposteriori_bound(m, cc.tau, cc.energy);
            } catch (const Error&) {
                r.apost_bound.reset();
            }
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

std::string format_report(const std::vector<ConstantsReport>& rows, ReportFormat format) {
    if (rows.empty()) throw Error("emit_report: no rows");
    if (format == ReportFormat::Json) {
        ojson doc;
        doc["version"] = kVersion;
        doc["metadata"] = {
            {"generator", std::string("ccwp ") + kVersion},
            {"norms", "mean-field metric F; operator norms F->F, F->L2 or F->F^-1 as named"},
            {"gamma_monotone", "Lambda0 - ||H - E*||_{F->F^-1} ||T - T^dagger||_{F->F}, higher-order remainder not included"},
            {"gamma_gs", "Lambda0 of the Full space"},
            {"jac_inv_norm", "sigma_min of the Jacobian F->F^-1; Full rows at the Full-CC zero, rank rows at its truncation"},
            {"apost_bound", "2 ||f(t_Q)||_{F^-1} / sigma_min(Df(t_Q)) over the Full space"}};
        ojson arr = ojson::array();
        for (const auto& r : rows) arr.push_back(row_to_json(r));
        doc["rows"] = std::move(arr);
        return doc.dump(1) + "\n";
    }
    std::ostringstream os;
    const auto& cols = report_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
    os << "\n";
    for (const auto& r : rows) {
        const ojson j = row_to_json(r);
        std::size_t i = 0;
        for (const auto& item : j.items()) os << (i++ ? "," : "") << csv_cell(item.value());
        os << "\n";
    }
    return os.str();
}

void emit_report(const std::vector<ConstantsReport>& rows, ReportFormat format, const std::string& path) {
    const std::string text = format_report(rows, format);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("emit_report: cannot write '" + path + "'");
    out << text;
    if (!out) throw Error("emit_report: cannot write '" + path + "'");
}

std::vector<ConstantsReport> parse_report(const std::string& json_text) {
    ojson doc;
    try {
        doc = ojson::parse(json_text);
    } catch (const std::exception& e) {
        throw Error(std::string("report: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("rows") || !doc["rows"].is_array()) throw Error("report: missing rows");
    std::vector<ConstantsReport> rows;
    try {
        for (const auto& j : doc["rows"]) {
            ConstantsReport r;
            r.molecule = j.at("molecule").get<std::string>();
            r.basis = j.at("basis").get<std::string>();
            const auto& rk = j.at("rank");
            r.rank = rk.is_string() ? kFullRank : rk.get<int>();
            r.e_hf = read_number(j.at("e_hf"));
            r.e_fci = read_number(j.at("e_fci"));
            r.e_cc = read_number(j.at("e_cc"));
            r.overlap = read_number(j.at("overlap"));
            r.gamma_monotone = read_number(j.at("gamma_monotone"));
            r.infsup_continuous = read_number(j.at("infsup_continuous"));
            r.jac_inv_norm = read_number(j.at("jac_inv_norm"));
            r.lambda_min = read_optional(j.at("lambda_min"));
            r.gamma_gs = read_optional(j.at("gamma_gs"));
            r.beta_k = read_optional(j.at("beta_k"));
            r.coupling_norm = read_optional(j.at("coupling_norm"));
            if (!j.at("smallness_ok").is_null()) r.smallness_ok = j.at("smallness_ok").get<bool>();
            r.smallness_rhs = read_optional(j.at("smallness_rhs"));
            r.gamma_discrete = read_optional(j.at("gamma_discrete"));
            r.apost_bound = read_optional(j.at("apost_bound"));
            r.converged = j.at("converged").get<bool>();
            r.iterations = j.at("iterations").get<int>();
            rows.push_back(std::move(r));
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("report: ") + e.what());
    }
    return rows;
}

}  // namespace ccwp
