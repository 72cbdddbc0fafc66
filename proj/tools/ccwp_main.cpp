// Copyright 2026 The ccwp Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file ccwp_main.cpp
 * @brief Command-line front end: one subcommand per pipeline stage.
 *
 * Results are printed as JSON on stdout. Exit status: 0 on success with all
 * solves converged, 1 when a solve did not converge, 2 on errors.
 */

#include "ccwp/pipeline.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

using ojson = nlohmann::ordered_json;

int parse_rank(const std::string& s) {
    if (s == "full" || s == "FULL") return ccwp::kFullRank;
    int q = 0;
    try {
        std::size_t pos = 0;
        q = std::stoi(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
    } catch (const std::exception&) {
        throw ccwp::Error("invalid rank '" + s + "' (expected an integer or 'full')");
    }
    return q;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ccwp::Error("cannot read '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void print(const ojson& j) { std::cout << j.dump(1) << "\n"; }

ccwp::ReportFormat parse_format(const std::string& f) {
    if (f == "json") return ccwp::ReportFormat::Json;
    if (f == "csv") return ccwp::ReportFormat::Csv;
    throw ccwp::Error("unknown format '" + f + "'");
}

/// Options shared by several subcommands; command-line values override the config file.
struct Settings {
    std::string config;
    std::string file;
    std::vector<std::string> ranks;
    double tol = 1e-10;
    int max_iter = 0;
    double level_shift = 0.0;
    std::string out;
    std::string format = "json";
    std::vector<std::string> merge;
};

/// Returns the config's thread count, if any.
std::optional<int> apply_config(Settings& s, const CLI::App& sub) {
    if (s.config.empty()) return std::nullopt;
    ojson cfg;
    try {
        cfg = ojson::parse(slurp(s.config));
    } catch (const nlohmann::json::exception& e) {
        throw ccwp::Error("config: " + std::string(e.what()));
    }
    auto unset = [&](const char* name) {
        const CLI::Option* o = sub.get_option_no_throw(name);
        return o == nullptr || o->count() == 0;
    };
    if (cfg.contains("fcidump") && s.file.empty()) s.file = cfg["fcidump"].get<std::string>();
    if (cfg.contains("ranks") && unset("--rank")) {
        s.ranks.clear();
        for (const auto& r : cfg["ranks"]) s.ranks.push_back(r.is_string() ? r.get<std::string>() : std::to_string(r.get<int>()));
    }
    if (cfg.contains("tol") && unset("--tol")) s.tol = cfg["tol"].get<double>();
    if (cfg.contains("max_iter") && unset("--max-iter")) s.max_iter = cfg["max_iter"].get<int>();
    if (cfg.contains("level_shift") && unset("--level-shift")) s.level_shift = cfg["level_shift"].get<double>();
    if (cfg.contains("out") && unset("--out")) s.out = cfg["out"].get<std::string>();
    if (cfg.contains("format") && unset("--format")) s.format = cfg["format"].get<std::string>();
    if (cfg.contains("threads")) return cfg["threads"].get<int>();
    return std::nullopt;
}

ccwp::CcOptions cc_options(const Settings& s) {
    ccwp::CcOptions o;
    o.tol = s.tol;
    if (s.max_iter > 0) o.max_iter = s.max_iter;
    o.level_shift = s.level_shift;
    return o;
}

ojson maybe_number(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }

int cmd_parse(const Settings& s) {
    std::vector<std::string> warnings;
    const auto t = ccwp::read_fcidump(s.file, &warnings);
    ojson j;
    j["norb"] = t.header.norb;
    j["nelec"] = t.header.nelec;
    j["ms2"] = t.header.ms2;
    j["isym"] = t.header.isym;
    j["core_energy"] = t.core_energy;
    j["one_electron_records"] = t.h.size();
    j["two_electron_records"] = t.eri.size();
    j["warnings"] = warnings;
    print(j);
    return 0;
}

int cmd_scf(const Settings& s) {
    ccwp::ScfOptions o;
    o.conv_tol = s.tol;
    if (s.max_iter > 0) o.max_iter = s.max_iter;
    const auto st = ccwp::run_scf(ccwp::read_fcidump(s.file), o);
    ojson j;
    j["e_hf"] = st.hf_energy;
    j["converged"] = st.converged;
    j["iterations"] = st.iterations;
    j["stability_restarts"] = st.stability_restarts;
    j["orbital_energies"] = std::vector<double>(st.orbital_energies.begin(), st.orbital_energies.end());
    print(j);
    return st.converged ? 0 : 1;
}

int cmd_fci(const Settings& s) {
    const auto m = ccwp::build_model(ccwp::read_fcidump(s.file));
    const auto gs = ccwp::ground_state(m);
    ojson j;
    j["dimension"] = m.dim();
    j["e_hf"] = m.scf.hf_energy;
    j["e_fci"] = gs.energy;
    j["gap"] = maybe_number(gs.gap);
    j["overlap"] = gs.overlap;
    print(j);
    return 0;
}

int cmd_cc(const Settings& s) {
    if (s.ranks.size() != 1) throw ccwp::Error("cc: exactly one --rank is required");
    const int q = parse_rank(s.ranks.front());
    const auto m = ccwp::build_model(ccwp::read_fcidump(s.file));
    const auto cc = ccwp::solve_cc(m, q, cc_options(s));
    ojson j;
    j["rank"] = q == ccwp::kFullRank ? ojson("full") : ojson(q);
    j["e_hf"] = m.scf.hf_energy;
    j["e_cc"] = cc.energy;
    j["converged"] = cc.converged;
    j["diverged"] = cc.diverged;
    j["iterations"] = cc.iterations;
    j["residual_norm"] = cc.residual_norm;
    print(j);
    return cc.converged ? 0 : 1;
}

int write_rows(const std::vector<ccwp::ConstantsReport>& rows, const Settings& s) {
    const auto fmt = parse_format(s.format);
    if (s.out.empty()) {
        std::cout << ccwp::format_report(rows, fmt);
    } else {
        ccwp::emit_report(rows, fmt, s.out);
    }
    for (const auto& r : rows) {
        if (!r.converged) return 1;
    }
    return 0;
}

int cmd_constants(const Settings& s) {
    ccwp::PipelineConfig cfg;
    cfg.fcidump = s.file;
    for (const auto& r : s.ranks) cfg.ranks.push_back(parse_rank(r));
    cfg.cc = cc_options(s);
    return write_rows(ccwp::run_pipeline(cfg), s);
}

int cmd_report(const Settings& s) {
    if (s.merge.empty()) throw ccwp::Error("report: --merge needs at least one file");
    std::vector<ccwp::ConstantsReport> rows;
    for (const auto& f : s.merge) {
        auto part = ccwp::parse_report(slurp(f));
        rows.insert(rows.end(), part.begin(), part.end());
    }
    return write_rows(rows, s);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ccwp: coupled-cluster solutions and well-posedness constants from FCIDUMP files"};
    app.require_subcommand(1);
    app.fallthrough();
    int threads = 0;
    Settings s;
    app.add_option("--threads", threads, "worker threads (default: CCWP_THREADS or all cores)");
    app.add_option("--config", s.config, "JSON file with defaults for the options below")->check(CLI::ExistingFile);

    auto* parse = app.add_subcommand("parse", "summarize an FCIDUMP file");
    parse->add_option("file", s.file, "FCIDUMP path")->required();

    auto* scf = app.add_subcommand("scf", "restricted Hartree-Fock");
    scf->add_option("file", s.file, "FCIDUMP path")->required();
    scf->add_option("--tol", s.tol, "density convergence threshold");
    scf->add_option("--max-iter", s.max_iter, "iteration limit");

    auto* fci = app.add_subcommand("fci", "FCI ground state");
    fci->add_option("file", s.file, "FCIDUMP path")->required();

    auto* cc = app.add_subcommand("cc", "coupled-cluster solve at one rank");
    cc->add_option("file", s.file, "FCIDUMP path");
    cc->add_option("--rank", s.ranks, "excitation rank 1..N or 'full'")->expected(1);
    cc->add_option("--tol", s.tol, "max-abs residual threshold");
    cc->add_option("--max-iter", s.max_iter, "iteration limit");
    cc->add_option("--level-shift", s.level_shift, "denominator shift");

    auto* con = app.add_subcommand("constants", "report rows of well-posedness constants");
    con->add_option("file", s.file, "FCIDUMP path");
    con->add_option("--rank", s.ranks, "ranks 1..N or 'full' (repeatable)")->expected(1, -1);
    con->add_option("--tol", s.tol, "max-abs CC residual threshold");
    con->add_option("--max-iter", s.max_iter, "CC iteration limit");
    con->add_option("--level-shift", s.level_shift, "CC denominator shift");
    con->add_option("--out", s.out, "output path (default: stdout)");
    con->add_option("--format", s.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

    auto* rep = app.add_subcommand("report", "merge JSON reports");
    rep->add_option("--merge", s.merge, "JSON reports to merge")->expected(1, -1)->required();
    rep->add_option("--out", s.out, "output path (default: stdout)");
    rep->add_option("--format", s.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

    CLI11_PARSE(app, argc, argv);

    try {
        const CLI::App* sub = app.get_subcommands().front();
        const auto config_threads = apply_config(s, *sub);
        if (config_threads) ccwp::set_thread_count(*config_threads);
        if (std::getenv("CCWP_THREADS") != nullptr) ccwp::init_threads_from_env();
        if (app.get_option("--threads")->count() > 0) ccwp::set_thread_count(threads);
        if (sub != rep && s.file.empty()) throw ccwp::Error("an FCIDUMP path is required");
        if (sub == parse) return cmd_parse(s);
        if (sub == scf) return cmd_scf(s);
        if (sub == fci) return cmd_fci(s);
        if (sub == cc) return cmd_cc(s);
        if (sub == con) {
            if (s.ranks.empty()) throw ccwp::Error("no ranks requested");
            return cmd_constants(s);
        }
        return cmd_report(s);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
