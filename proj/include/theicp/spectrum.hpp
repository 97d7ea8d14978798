#pragma once

#include "theicp/model.hpp"

#include <cstdint>
#include <vector>

namespace theicp {

/// Tolerances and budget of the support-set enumeration.
struct EnumerationConfig {
    int attempts = 40;         ///< Newton starts per multi-index support
    std::uint64_t seed = 0;
    double sys_tol = 1e-10;    ///< residual bound on the in-support system
    double pos_tol = 1e-8;     ///< strict-positivity threshold for w
    double dedup_tol = 1e-6;   ///< eigenvalue/eigenvector dedup radius
    double margin_tol = 1e-8;  ///< admissibility slack on off-support margins
    int newton_max_iter = 50;
    double verify_tol_closed_form = 1e-8;
    double verify_tol_newton = 1e-6;
};

enum class RootMethod { closed_form_univariate, newton_multistart };

/// In-support system solution for a support J: (lambda, w) with
/// (lambda^m A_J + lambda B_J + C_J) w^{m-1} = 0, w > 0, e^T w = 1,
/// plus the off-support inequality margins.
struct SupportSystem {
    std::vector<int> support;  ///< 0-based, sorted
    double lambda = 0.0;
    Vector w;                     ///< positive weights on the support, e^T w = 1
    Vector off_support_margins;   ///< one per index outside the support
    double system_residual = 0.0;
    bool admissible = false;          ///< margins >= -margin_tol and w > pos_tol
    bool boundary_ambiguous = false;  ///< some w_i in (0, pos_tol]
    RootMethod method = RootMethod::closed_form_univariate;
};

/// One admissible spectrum member with its verified eigenpair.
struct SpectrumEntry {
    SupportSystem system;
    Eigenpair pair;  ///< embedded eigenvector, verified on the full problem
};

enum class Completeness { exact_for_singletons, heuristic };

struct SpectrumResult {
    std::vector<SpectrumEntry> entries;            ///< sorted by lambda, then support
    std::vector<SupportSystem> boundary_ambiguous;  ///< reported, not counted
    std::vector<int> degenerate_singletons;  ///< diagonals whose polynomial vanishes
                                             ///< identically (every lambda solves them)
    int supports_explored = 0;
    std::uint64_t bound = 0;  ///< n m^n
    Completeness completeness = Completeness::heuristic;

    /// Deduplicated sorted eigenvalues of the admissible entries.
    std::vector<double> eigenvalues(double dedup_tol = 1e-6) const;
};

/// Roots of the univariate in-support polynomial
/// lambda^m a_{ii..i} + lambda b_{ii..i} + c_{ii..i} = 0 for the singleton
/// support {i}, each with w = (1) and the off-support margins. Exact up to
/// the univariate root finder; a degenerate all-zero polynomial yields an
/// empty list.
std::vector<SupportSystem> single_support_eigenvalues(const ProblemTriple& Q, int i,
                                                      const EnumerationConfig& cfg = {});

/// Damped-Newton multistart on the square system (in-support equations +
/// e^T w = 1) for |J| >= 2. Finds roots, filters by positivity, residual and
/// margins, deduplicates. An empty result is not a proof of absence.
std::vector<SupportSystem> support_system_solve(const ProblemTriple& Q,
                                                const std::vector<int>& J,
                                                const EnumerationConfig& cfg = {});

/// Union of the support analyses over all nonempty J with |J| <= max_support;
/// every admissible system is embedded and verified on the full problem.
SpectrumResult enumerate_pareto_spectrum(const ProblemTriple& Q, int max_support,
                                         const EnumerationConfig& cfg = {});

/// Largest admissible eigenvalue. Throws std::domain_error on an empty spectrum.
double lambda_max(const SpectrumResult& result);

/// Embeds the support weights into the ambient space (zeros off support).
Vector embed_support(const SupportSystem& sys, int dim);

}  // namespace theicp
