#pragma once

#include "theicp/admm.hpp"
#include "theicp/model.hpp"
#include "theicp/spectrum.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace theicp::io {

/// Problem document, format 1:
/// {
///   "format": 1, "m": 2, "n": 4,
///   "A": <nested arrays of depth m>, "B": ..., "C": <nested> | "identity" | "neg_identity",
///   "cone": {"type": "orthant"} | {"type": "polyhedral", "H": [[...], ...]},
///   "symmetrize": false,       // mean over index permutations on load
///   "strict_symmetry": true    // false stores asymmetric tensors verbatim
/// }
/// Indices are 0-based in the file nesting (outermost = first index).
ProblemTriple load_problem(const std::filesystem::path& path);
ProblemTriple parse_problem(const std::string& text, const std::string& origin = "<memory>");

/// Serializes a problem back to document text (12 significant digits).
std::string problem_to_text(const ProblemTriple& Q);
void save_problem(const ProblemTriple& Q, const std::filesystem::path& path);

/// One record of a result document (Table-style row).
struct ResultRecord {
    std::string status;
    Vector initial_point;  ///< empty when not applicable
    double lambda = 0.0;
    Vector x;
    Vector x_unit_sum;  ///< e^T x = 1 normalization of x
    Vector rho;
    Residuals residuals;
    bool passed = false;
    int iterations = 0;
    int total_iterations = 0;
    double time_seconds = 0.0;
    std::vector<int> support;  ///< 1-based in the document
    std::string method;        ///< enumeration only
    Vector margins;            ///< enumeration only
    double zeta = 0.0;
    bool has_pair = false;
};

struct ResultDocument {
    std::string kind;  ///< "solve" | "enumerate" | "verify" | "reproduce"
    int m = 0, n = 0;
    std::vector<ResultRecord> records;
};

std::string result_to_text(const ResultDocument& doc);
void save_result(const ResultDocument& doc, const std::filesystem::path& path);
ResultDocument load_result(const std::filesystem::path& path);

ResultRecord record_from_outcome(const SolveOutcome& outcome, const Vector& u0);
ResultRecord record_from_entry(const SpectrumEntry& entry);

/// Trace CSV: header `iter,relerr,objective,violation`, LF endings.
void save_trace_csv(const std::vector<TraceRow>& trace, const std::filesystem::path& path);

/// Reads THEICP_SIZE_GUARD (entry count) into the tensor size guard.
void apply_env_overrides();

}  // namespace theicp::io
