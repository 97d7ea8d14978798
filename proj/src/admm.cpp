#include "theicp/admm.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <mutex>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace theicp {

void SolverConfig::validate() const {
    if (!(beta > 0.0) || !(gamma1 > 0.0) || !(gamma2 > 0.0) || !(tol > 0.0))
        throw std::invalid_argument("beta, gamma1, gamma2 and tol must be positive");
    if (max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
    if (certify_cadence < 1) throw std::invalid_argument("certify_cadence must be >= 1");
}

SolverConfig SolverConfig::defaults_for(int order, int dim) {
    SolverConfig cfg;
    if (order == 2 && dim == 4) {
        cfg.gamma1 = 200.0;
        cfg.gamma2 = 10.0;
    } else {
        cfg.gamma1 = 1000.0;
        cfg.gamma2 = 50.0;
    }
    return cfg;
}

const char* to_string(SolveStatus status) {
    switch (status) {
        case SolveStatus::converged_nonzero: return "converged_nonzero";
        case SolveStatus::converged_zero: return "converged_zero";
        case SolveStatus::diverged: return "diverged";
    }
    return "unknown";
}

double augmented_lagrangian(const ProblemTriple& Q, const Vector& u, const Vector& v,
                            double zeta, double beta) {
    if (!Q.c_is_neg_identity())
        throw std::invalid_argument("augmented_lagrangian requires C = -identity");
    const int m = Q.order();
    const double theta = coupling_constant(m);
    const double constraint =
        contract_full(Q.A, u) + detail::pow_vec(v, m).sum() - 1.0;
    return contract_full(Q.B, u) + theta * v.dot(detail::pow_vec(u, m - 1)) -
           zeta * constraint + 0.5 * beta * constraint * constraint;
}

// Two exact-subproblem variants are deliberately not implemented:
//  - plain augmented-Lagrangian: (u,v) jointly minimize L(.,.,zeta) over the
//    orthant, then the multiplier update; the joint subproblem is a coupled
//    nonconvex polynomial program with no closed form.
//  - exact alternating sweep: u and v block-minimize L in turn; each block
//    still needs a degree-m polynomial minimization with no closed form.
// The linearized sweep below replaces both block solves with projected
// gradient steps weighted by gamma1/gamma2, so every update is closed-form.
namespace {

Vector project_nonneg(const Vector& x) { return x.cwiseMax(0.0); }

struct StepScratch {
    Vector u_next, v_next;
    double zeta_next = 0.0;
    double du = 0.0, dv = 0.0, violation = 0.0;
};

// The sweep of the linearized scheme:
//   q   = A u^m + sum v^m - 1 - zeta/beta                        (at u, v)
//   Phi = m B u^{m-1} + theta (m-1) diag(v) u^{[m-2]} + beta m q A u^{m-1}
//   u'  = proj(u - Phi/gamma1)
//   Ups = beta m (A u'^m + sum v^m - 1 - zeta/beta) v^{[m-1]}    (u', v)
//   v'  = proj(v - (theta u'^{[m-1]} + Ups)/gamma2)
//   zeta' = zeta - beta (A u'^m + sum v'^m - 1)
StepScratch raw_step(const ProblemTriple& Q, const Vector& u, const Vector& v,
                     double zeta, const SolverConfig& cfg) {
    const int m = Q.order();
    const double theta = coupling_constant(m);
    const double beta = cfg.beta;

    const double q =
        contract_full(Q.A, u) + detail::pow_vec(v, m).sum() - 1.0 - zeta / beta;
    const Vector phi = m * contract_m1(Q.B, u) +
                       theta * (m - 1) * v.cwiseProduct(detail::pow_vec(u, m - 2)) +
                       beta * m * q * contract_m1(Q.A, u);

    StepScratch s;
    s.u_next = project_nonneg(u - phi / cfg.gamma1);

    const double q_mid = contract_full(Q.A, s.u_next) + detail::pow_vec(v, m).sum() -
                         1.0 - zeta / beta;
    const Vector ups = beta * m * q_mid * detail::pow_vec(v, m - 1);
    s.v_next =
        project_nonneg(v - (theta * detail::pow_vec(s.u_next, m - 1) + ups) / cfg.gamma2);

    s.violation = contract_full(Q.A, s.u_next) + detail::pow_vec(s.v_next, m).sum() - 1.0;
    s.zeta_next = zeta - beta * s.violation;
    s.du = (s.u_next - u).norm();
    s.dv = (s.v_next - v).norm();
    return s;
}

bool finite(const Vector& x) { return x.allFinite(); }

}  // namespace

SolverState admm_step(const ProblemTriple& Q, const SolverState& state,
                      const SolverConfig& config) {
    if (!Q.c_is_neg_identity())
        throw std::invalid_argument("admm_step requires C = -identity");
    config.validate();
    StepScratch s = raw_step(Q, state.u, state.v, state.zeta, config);
    SolverState next;
    next.u = std::move(s.u_next);
    next.v = std::move(s.v_next);
    next.zeta = s.zeta_next;
    next.k = state.k + 1;
    next.last_relerr = std::max(s.du, std::abs(s.violation));
    return next;
}

double rel_err(const ProblemTriple& Q, const SolverState& state, const SolverState& next) {
    const int m = Q.order();
    const double violation =
        contract_full(Q.A, next.u) + detail::pow_vec(next.v, m).sum() - 1.0;
    return std::max({(next.u - state.u).norm(), (next.v - state.v).norm(),
                     std::abs(violation)});
}

SolveOutcome solve(const ProblemTriple& Q, const Vector& u0, const Vector& v0,
                   const SolverConfig& config) {
    config.validate();
    if (!Q.c_is_neg_identity())
        throw std::invalid_argument("solve requires C = -identity");
    if (u0.size() != Q.dim() || v0.size() != Q.dim())
        throw std::invalid_argument("start vectors must have the problem dimension");
    if (u0.minCoeff() < 0.0 || v0.minCoeff() < 0.0)
        throw std::invalid_argument("start vectors must be nonnegative");

    const auto t0 = std::chrono::steady_clock::now();
    const int m = Q.order();
    const double theta = coupling_constant(m);

    SolveOutcome out;
    Vector u = u0, v = v0;
    double zeta = 0.0;
    int converged_at = 0;

    for (int k = 1; k <= config.max_iter; ++k) {
        StepScratch s = raw_step(Q, u, v, zeta, config);
        u = std::move(s.u_next);
        v = std::move(s.v_next);
        zeta = s.zeta_next;

        if (!finite(u) || !finite(v) || !std::isfinite(zeta)) {
            out.nonfinite = true;
            out.total_iterations = k;
            break;
        }

        const double measure = std::max(s.du, std::abs(s.violation));
        if (config.trace) {
            const double objective =
                contract_full(Q.B, u) + theta * v.dot(detail::pow_vec(u, m - 1));
            out.trace.push_back(TraceRow{k, measure, objective, s.violation});
        }
        out.last_relerr = measure;
        out.total_iterations = k;

        if (measure > config.tol) continue;
        if (converged_at == 0) converged_at = k;

        if (u.cwiseAbs().maxCoeff() <= config.zero_tol) {
            out.status = SolveStatus::converged_zero;
            break;
        }
        // Certification sweep: keep iterating until the recovered pair
        // verifies at tol.
        if ((k - converged_at) % config.certify_cadence == 0) {
            const double phi = varphi0(Q, ReformulationPoint{u, v});
            if ((m - 1) % 2 == 0 && phi <= 0.0) continue;
            Eigenpair pair =
                stationary_to_eigenpair(Q, ReformulationPoint{u, v}, config.tol);
            if (pair.passed) {
                out.status = SolveStatus::converged_nonzero;
                out.eigenpair = std::move(pair);
                break;
            }
        }
    }

    out.u = std::move(u);
    out.v = std::move(v);
    out.zeta = zeta;
    out.iterations = converged_at > 0 ? converged_at : out.total_iterations;

    if (out.status == SolveStatus::diverged && converged_at > 0 && !out.nonfinite) {
        // Stopping rule was met but no certified nonzero pair emerged by
        // max_iter: grouped with the zero-limit class and flagged.
        out.status = SolveStatus::converged_zero;
        out.recovery_failed = out.u.cwiseAbs().maxCoeff() > config.zero_tol;
    }

    out.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

Vector uniform_init(std::mt19937_64& eng, int dim) {
    Vector u0(dim);
    for (int i = 0; i < dim; ++i) u0[i] = detail::canonical(eng());
    return u0;
}

MultistartResult multistart(const ProblemTriple& Q, int runs, const SolverConfig& config,
                            const InitSampler& sampler) {
    if (runs < 1) throw std::invalid_argument("runs must be >= 1");
    config.validate();

    MultistartResult result;
    result.runs = runs;
    result.outcomes.resize(runs);

    const unsigned workers = std::min<unsigned>(
        std::max(1u, std::thread::hardware_concurrency()), static_cast<unsigned>(runs));
    std::atomic<int> next_run{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&]() {
        try {
            for (int run = next_run.fetch_add(1); run < runs;
                 run = next_run.fetch_add(1)) {
                std::mt19937_64 eng(config.seed + static_cast<std::uint64_t>(run));
                const Vector u0 = sampler(eng, Q.dim());
                result.outcomes[run] = solve(Q, u0, u0, config);
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);

    for (const auto& o : result.outcomes) {
        switch (o.status) {
            case SolveStatus::converged_nonzero: ++result.converged_nonzero; break;
            case SolveStatus::converged_zero: ++result.converged_zero; break;
            case SolveStatus::diverged: ++result.diverged; break;
        }
    }
    return result;
}

}  // namespace theicp
