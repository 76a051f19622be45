#pragma once

#include <complex>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace solab {

// Outcome of one CLI command: the JSON report, verdict-mapped exit code, and
// any CSV side files (name -> content).  Exit codes: 0 success / positive
// verdict, 1 usage or config error, 2 negative verdict.
struct RunResult {
    nlohmann::json report;
    int exit_code = 0;
    std::vector<std::pair<std::string, std::string>> csv_files;
};

// Known commands: solve-diophantine, s-norm, solve-beltrami, tower,
// counterexample, split-solve.  Never throws on valid JSON input: execution
// errors are embedded in the report under "error" with exit code 1 or 2.
RunResult run_command(const std::string& command, const nlohmann::json& config);

// Parses config text (JSON document) with diagnostics.
nlohmann::json parse_config_text(const std::string& text);

// Atomic write: temp file + rename.
void write_file_atomic(const std::string& path, const std::string& content);

// Serializes a report; stable field order and float formatting.
std::string report_to_text(const nlohmann::json& report);

// Writes report.json (and CSVs when requested) under out_dir with the given
// base name; returns the report path.
std::string write_outputs(const RunResult& result, const std::string& out_dir,
                          const std::string& base_name, bool want_json, bool want_csv);

// Builtin coefficient evaluators shared by the runners and the C API:
// kinds radial_stretch, disk, counterexample_windowed, ring_and_tail.
std::function<std::complex<double>(std::complex<double>)> builtin_mu_evaluator(
    const nlohmann::json& spec, double& sup_hint);

} // namespace solab
