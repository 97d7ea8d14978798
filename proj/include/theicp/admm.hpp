#pragma once

#include "theicp/model.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <vector>

namespace theicp {

/// Parameters of the linearized alternating-direction scheme.
struct SolverConfig {
    double beta = 1.0;     ///< penalty on the equality constraint
    double gamma1 = 200.0; ///< proximal/linearization weight of the u-step
    double gamma2 = 10.0;  ///< proximal/linearization weight of the v-step
    double tol = 1e-6;
    int max_iter = 20000;
    std::uint64_t seed = 0;
    bool trace = false;
    double zero_tol = 1e-4;    ///< ||u||_inf below this counts as a zero limit
    int certify_cadence = 16;  ///< verification check interval after convergence

    void validate() const;

    /// gamma defaults used for the bundled examples: (200, 10) for the
    /// matrix case m = 2, n = 4 and (1000, 50) otherwise.
    static SolverConfig defaults_for(int order, int dim);
};

struct TraceRow {
    int iter = 0;
    double relerr = 0.0;     ///< stopping measure at this iterate
    double objective = 0.0;  ///< B u^m + theta v^T u^{[m-1]}  (= -varphi0)
    double violation = 0.0;  ///< A u^m + sum v_i^m - 1
};

struct SolverState {
    Vector u, v;
    double zeta = 0.0;
    int k = 0;
    double last_relerr = std::numeric_limits<double>::infinity();
    std::vector<TraceRow> trace;
};

enum class SolveStatus { converged_nonzero, converged_zero, diverged };

const char* to_string(SolveStatus status);

struct SolveOutcome {
    SolveStatus status = SolveStatus::diverged;
    int iterations = 0;        ///< iterations to stopping-rule satisfaction
    int total_iterations = 0;  ///< including the certification sweep
    double elapsed_seconds = 0.0;
    Vector u, v;
    double zeta = 0.0;
    double last_relerr = std::numeric_limits<double>::infinity();
    std::optional<Eigenpair> eigenpair;  ///< populated for converged_nonzero
    bool recovery_failed = false;  ///< converged nonzero but no certified pair
    bool nonfinite = false;        ///< divergence caused by a non-finite iterate
    std::vector<TraceRow> trace;
};

/// Augmented Lagrangian of the minimization form:
/// B u^m + theta v^T u^{[m-1]} - zeta (A u^m + sum v^m - 1)
/// + (beta/2)(A u^m + sum v^m - 1)^2.  Requires C = -identity.
double augmented_lagrangian(const ProblemTriple& Q, const Vector& u, const Vector& v,
                            double zeta, double beta);

/// One Gauss-Seidel sweep of the linearized scheme: projected gradient step
/// in u, then in v (using the fresh u), then the multiplier update.
/// state.last_relerr receives the stopping measure max{||du||, |V|}.
SolverState admm_step(const ProblemTriple& Q, const SolverState& state,
                      const SolverConfig& config);

/// RelErr of the termination rule: max{||u'-u||, ||v'-v||, |V|} with
/// V = A u'^m + sum v'^m - 1 (Euclidean norms).
double rel_err(const ProblemTriple& Q, const SolverState& state,
               const SolverState& next);

/// Runs the scheme from (u0, v0) with zeta = 0.  Convergence is declared on
/// max{||du||, |V|} <= tol (the v-block's off-support components vanish only
/// O(1/k) and do not enter the recovered pair); afterwards the sweep
/// continues until the recovered eigenpair verifies at tol, capped at
/// max_iter total iterations.
SolveOutcome solve(const ProblemTriple& Q, const Vector& u0, const Vector& v0,
                   const SolverConfig& config);

using InitSampler = std::function<Vector(std::mt19937_64&, int dim)>;

/// Entrywise U(0,1) start with u0 = v0.
Vector uniform_init(std::mt19937_64& eng, int dim);

struct MultistartResult {
    std::vector<SolveOutcome> outcomes;  ///< one per run, in run order
    int runs = 0;
    int diverged = 0;
    int converged_zero = 0;
    int converged_nonzero = 0;

    double rate_diverged() const { return runs ? double(diverged) / runs : 0.0; }
    double rate_zero() const { return runs ? double(converged_zero) / runs : 0.0; }
    double rate_nonzero() const { return runs ? double(converged_nonzero) / runs : 0.0; }
};

/// Runs `runs` solves from sampled starts (per-run seed = config.seed + run
/// index), in parallel; results are independent of scheduling.
MultistartResult multistart(const ProblemTriple& Q, int runs, const SolverConfig& config,
                            const InitSampler& sampler = uniform_init);

}  // namespace theicp
