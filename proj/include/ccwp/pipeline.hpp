// Copyright 2026 The ccwp Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file pipeline.hpp
 * @brief End-to-end evaluation FCIDUMP -> SCF -> spaces -> CC -> constants,
 *        and serialization of the resulting report rows as JSON or CSV.
 */

#pragma once

#include "ccwp/analysis.hpp"
#include "ccwp/solver.hpp"

#include <string>
#include <vector>

namespace ccwp {

struct PipelineConfig {
    std::string fcidump;      ///< input path
    std::vector<int> ranks;   ///< 1..N or kFullRank
    std::string molecule;     ///< default: file stem before the first '_'
    std::string basis;        ///< default: file stem after the first '_'
    ScfOptions scf;
    CcOptions cc;
};

/**
 * One report row per requested rank. Errors carry the failing stage as a
 * prefix ("scf: ...", "fci: ...", ...). A CC solve that does not converge
 * yields a row with converged = false.
 */
std::vector<ConstantsReport> run_pipeline(const PipelineConfig& config);

enum class ReportFormat { Json, Csv };

/// Serialize rows. JSON: {version, metadata, rows}; CSV: header plus one line per row.
std::string format_report(const std::vector<ConstantsReport>& rows, ReportFormat format);

/// Write format_report(rows, format) to @p path; throws when rows are empty or the path is unwritable.
void emit_report(const std::vector<ConstantsReport>& rows, ReportFormat format, const std::string& path);

/// Rows of a JSON report produced by format_report.
std::vector<ConstantsReport> parse_report(const std::string& json_text);

/// Column names of the CSV form, in order.
const std::vector<std::string>& report_columns();

}  // namespace ccwp
