// Command-line front end: solve / enumerate / verify / reproduce.
//
// Exit codes: 0 success, 1 usage or input error, 2 zero solution,
// 3 diverged, 4 verification failure.

#include "theicp/admm.hpp"
#include "theicp/examples.hpp"
#include "theicp/io.hpp"
#include "theicp/model.hpp"
#include "theicp/spectrum.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace theicp;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitZero = 2;
constexpr int kExitDiverged = 3;
constexpr int kExitVerifyFail = 4;

Vector parse_csv_vector(const std::string& text) {
    std::vector<double> vals;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        const std::string item = text.substr(pos, comma - pos);
        if (item.empty()) throw std::runtime_error("empty component in vector '" + text + "'");
        std::size_t used = 0;
        vals.push_back(std::stod(item, &used));
        if (used != item.size())
            throw std::runtime_error("bad number '" + item + "' in vector");
        pos = comma + 1;
    }
    Vector v(static_cast<Eigen::Index>(vals.size()));
    for (std::size_t i = 0; i < vals.size(); ++i) v[static_cast<Eigen::Index>(i)] = vals[i];
    return v;
}

std::string format_vector(const Vector& x, int digits = 4) {
    std::string out = "(";
    char buf[64];
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.*f", digits, x[i]);
        out += buf;
        if (i + 1 < x.size()) out += ", ";
    }
    return out + ")";
}

std::vector<int> support_of(const Vector& x, double tol = 1e-4) {
    std::vector<int> support;
    const double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < x.size(); ++i)
        if (x[i] > tol * scale) support.push_back(static_cast<int>(i) + 1);
    return support;
}

void print_outcome(const SolveOutcome& outcome) {
    std::printf("status      : %s\n", to_string(outcome.status));
    std::printf("iterations  : %d (stopping rule), %d total\n", outcome.iterations,
                outcome.total_iterations);
    std::printf("time        : %.3f s\n", outcome.elapsed_seconds);
    if (outcome.eigenpair) {
        const Eigenpair& p = *outcome.eigenpair;
        std::printf("lambda      : %.6f\n", p.lambda);
        std::printf("x           : %s\n", format_vector(p.x).c_str());
        const double total = p.x.sum();
        if (total != 0.0)
            std::printf("x (e^T x=1) : %s\n", format_vector(p.x / total).c_str());
        std::printf("rho         : %s\n", format_vector(p.rho).c_str());
        std::printf("residuals   : primal %.2e  dual %.2e  compl %.2e\n",
                    p.residuals.primal_neg, p.residuals.dual_neg, p.residuals.compl_);
        std::printf("zeta        : %.6f\n", outcome.zeta);
    } else if (outcome.recovery_failed) {
        std::printf("note        : stopping rule met but no certified eigenpair "
                    "(u stayed away from zero)\n");
    }
    if (outcome.nonfinite)
        std::printf("note        : non-finite iterate encountered; run counted as "
                    "diverged\n");
}

int exit_code_for(SolveStatus status) {
    switch (status) {
        case SolveStatus::converged_nonzero: return kExitOk;
        case SolveStatus::converged_zero: return kExitZero;
        case SolveStatus::diverged: return kExitDiverged;
    }
    return kExitUsage;
}

struct SolveArgs {
    std::string problem_path;
    std::string u0_csv;
    bool random_start = false;
    double beta = 1.0;
    double gamma1 = 0.0;  // 0 = per-size default
    double gamma2 = 0.0;
    double tol = 1e-6;
    int max_iter = 20000;
    std::uint64_t seed = 0;
    std::string trace_path;
    std::string out_path;
};

int run_solve(const SolveArgs& args) {
    ProblemTriple Q = io::load_problem(args.problem_path);
    SolverConfig cfg = SolverConfig::defaults_for(Q.order(), Q.dim());
    cfg.beta = args.beta;
    if (args.gamma1 > 0.0) cfg.gamma1 = args.gamma1;
    if (args.gamma2 > 0.0) cfg.gamma2 = args.gamma2;
    cfg.tol = args.tol;
    cfg.max_iter = args.max_iter;
    cfg.seed = args.seed;
    cfg.trace = !args.trace_path.empty();

    Vector u0;
    if (args.random_start) {
        std::mt19937_64 eng(cfg.seed);
        u0 = uniform_init(eng, Q.dim());
    } else {
        u0 = parse_csv_vector(args.u0_csv);
        if (u0.size() != Q.dim())
            throw std::runtime_error("--u0 has " + std::to_string(u0.size()) +
                                     " components, problem dimension is " +
                                     std::to_string(Q.dim()));
    }

    SolveOutcome outcome = solve(Q, u0, u0, cfg);
    std::printf("u0          : %s\n", format_vector(u0).c_str());
    print_outcome(outcome);

    if (!args.trace_path.empty()) io::save_trace_csv(outcome.trace, args.trace_path);
    if (!args.out_path.empty()) {
        io::ResultDocument doc;
        doc.kind = "solve";
        doc.m = Q.order();
        doc.n = Q.dim();
        doc.records.push_back(io::record_from_outcome(outcome, u0));
        io::save_result(doc, args.out_path);
    }
    return exit_code_for(outcome.status);
}

struct EnumerateArgs {
    std::string problem_path;
    int max_support = 1;
    int attempts = 40;
    std::uint64_t seed = 0;
    std::string out_path;
};

int run_enumerate(const EnumerateArgs& args) {
    ProblemTriple Q = io::load_problem(args.problem_path);
    if (Q.cone.kind == ConeKind::polyhedral) {
        std::printf("polyhedral cone with %d generators: enumerating the reduced "
                    "orthant problem (weights alpha; x = H^T alpha)\n",
                    static_cast<int>(Q.cone.H.rows()));
        Q = polyhedral_reduce(Q);
    }
    EnumerationConfig cfg;
    cfg.attempts = args.attempts;
    cfg.seed = args.seed;
    const int max_support = args.max_support == 0 ? Q.dim() : args.max_support;
    SpectrumResult result = enumerate_pareto_spectrum(Q, max_support, cfg);

    std::printf("supports explored : %d (|J| <= %d)\n", result.supports_explored, max_support);
    std::printf("admissible roots  : %zu\n", result.entries.size());
    std::printf("distinct lambda   : %zu (bound n*m^n = %llu)\n",
                result.eigenvalues().size(),
                static_cast<unsigned long long>(result.bound));
    std::printf("completeness      : %s\n",
                result.completeness == Completeness::exact_for_singletons
                    ? "exact_for_singletons"
                    : "heuristic");
    std::printf("%-12s %-10s %-24s %-24s %s\n", "lambda", "support", "w", "margins",
                "method");
    for (const auto& e : result.entries) {
        std::string supp;
        for (int i : e.system.support) supp += std::to_string(i + 1) + " ";
        std::printf("%-12.6f %-10s %-24s %-24s %s\n", e.system.lambda, supp.c_str(),
                    format_vector(e.system.w).c_str(),
                    format_vector(e.system.off_support_margins).c_str(),
                    e.system.method == RootMethod::closed_form_univariate
                        ? "closed_form_univariate"
                        : "newton_multistart");
    }
    for (const auto& b : result.boundary_ambiguous)
        std::printf("boundary-ambiguous root lambda=%.6f (support size %zu)\n", b.lambda,
                    b.support.size());
    for (int i : result.degenerate_singletons)
        std::printf("degenerate support {%d}: in-support polynomial vanishes identically "
                    "(every lambda admissible there)\n",
                    i + 1);

    if (!args.out_path.empty()) {
        io::ResultDocument doc;
        doc.kind = "enumerate";
        doc.m = Q.order();
        doc.n = Q.dim();
        for (const auto& e : result.entries) doc.records.push_back(io::record_from_entry(e));
        io::save_result(doc, args.out_path);
    }
    return kExitOk;
}

struct VerifyArgs {
    std::string problem_path;
    double lambda = 0.0;
    std::string x_csv;
    double tol = 1e-6;
    std::string out_path;
};

int run_verify(const VerifyArgs& args) {
    ProblemTriple Q = io::load_problem(args.problem_path);
    Vector x = parse_csv_vector(args.x_csv);
    Eigenpair pair = [&] {
        if (Q.cone.kind == ConeKind::polyhedral) {
            // for generator cones the candidate is given by its weights
            if (x.size() != Q.cone.H.rows())
                throw std::runtime_error("--x must list the generator weights (length " +
                                         std::to_string(Q.cone.H.rows()) + ")");
            std::printf("polyhedral cone: interpreting --x as generator weights\n");
            return verify_eigenpair_polyhedral(Q, args.lambda, x, args.tol);
        }
        if (x.size() != Q.dim())
            throw std::runtime_error("--x has wrong length for the problem");
        return verify_eigenpair(Q, args.lambda, x, args.tol);
    }();
    std::printf("lambda    : %.10g\n", pair.lambda);
    std::printf("x         : %s\n", format_vector(pair.x).c_str());
    std::printf("rho       : %s\n", format_vector(pair.rho).c_str());
    std::printf("residuals : primal %.3e  dual %.3e  compl %.3e  (tol %.1e)\n",
                pair.residuals.primal_neg, pair.residuals.dual_neg, pair.residuals.compl_,
                args.tol);
    std::printf("verdict   : %s\n", pair.passed ? "pass" : "fail");
    if (!args.out_path.empty()) {
        io::ResultDocument doc;
        doc.kind = "verify";
        doc.m = Q.order();
        doc.n = Q.dim();
        io::ResultRecord r;
        r.status = pair.passed ? "verified" : "failed";
        r.has_pair = true;
        r.lambda = pair.lambda;
        r.x = pair.x;
        const double total = pair.x.sum();
        r.x_unit_sum = total != 0.0 ? Vector(pair.x / total) : pair.x;
        r.rho = pair.rho;
        r.residuals = pair.residuals;
        r.passed = pair.passed;
        doc.records.push_back(std::move(r));
        io::save_result(doc, args.out_path);
    }
    return pair.passed ? kExitOk : kExitVerifyFail;
}

struct ReproduceArgs {
    int example = 1;
    std::string rows = "all";
    int multistart_runs = 0;
    std::uint64_t seed = 0;
    int max_iter = 40000;
};

int run_reproduce(const ReproduceArgs& args) {
    const BundledExample& ex = bundled_example(args.example);
    SolverConfig cfg;
    cfg.gamma1 = ex.gamma1;
    cfg.gamma2 = ex.gamma2;
    cfg.max_iter = args.max_iter;
    cfg.seed = args.seed;

    std::vector<int> wanted;
    if (args.rows == "all") {
        for (std::size_t r = 0; r < ex.rows.size(); ++r) wanted.push_back(static_cast<int>(r));
    } else {
        const int r = std::stoi(args.rows) - 1;
        if (r < 0 || r >= static_cast<int>(ex.rows.size()))
            throw std::runtime_error("row index out of range (1.." +
                                     std::to_string(ex.rows.size()) + ")");
        wanted.push_back(r);
    }

    constexpr double lambda_tol = 5e-4;
    constexpr double x_tol = 1e-3;
    constexpr double rho_tol = 1e-3;

    bool all_ok = true;
    for (int r : wanted) {
        const ReferenceRow& row = ex.rows[r];
        SolveOutcome outcome = solve(ex.problem, row.u0, row.u0, cfg);
        std::printf("example %d row %d: u0 = %s\n", args.example, r + 1,
                    format_vector(row.u0).c_str());
        if (outcome.status != SolveStatus::converged_nonzero || !outcome.eigenpair) {
            std::printf("  FAILED: solver status %s\n", to_string(outcome.status));
            all_ok = false;
            continue;
        }
        const Eigenpair& p = *outcome.eigenpair;
        const double dl = std::abs(p.lambda - row.lambda);
        double dx = 0.0, dr = 0.0;
        for (Eigen::Index i = 0; i < p.x.size(); ++i) {
            dx = std::max(dx, std::abs(p.x[i] - row.x[i]));
            dr = std::max(dr, std::abs(p.rho[i] - row.rho[i]));
        }
        const bool support_ok = support_of(p.x) == support_of(row.x);
        const bool ok =
            dl <= lambda_tol && dx <= x_tol && dr <= rho_tol && support_ok;
        all_ok = all_ok && ok;
        std::printf("  lambda  ref %.4f  got %.6f  |d| %.1e\n", row.lambda, p.lambda, dl);
        std::printf("  x       ref %s  got %s  |d| %.1e\n", format_vector(row.x).c_str(),
                    format_vector(p.x).c_str(), dx);
        std::printf("  rho     ref %s  got %s  |d| %.1e\n", format_vector(row.rho).c_str(),
                    format_vector(p.rho).c_str(), dr);
        std::printf("  iter    ref %d  got %d (stopping rule; %d total)   [%s]\n",
                    row.iterations, outcome.iterations, outcome.total_iterations,
                    ok ? "ok" : "MISMATCH");
    }

    if (args.multistart_runs > 0) {
        MultistartResult ms = multistart(ex.problem, args.multistart_runs, cfg);
        std::printf("multistart (%d runs, seed %llu):\n", ms.runs,
                    static_cast<unsigned long long>(cfg.seed));
        std::printf("  diverged          %3d  (%.2f)\n", ms.diverged, ms.rate_diverged());
        std::printf("  converged_zero    %3d  (%.2f)\n", ms.converged_zero, ms.rate_zero());
        std::printf("  converged_nonzero %3d  (%.2f)\n", ms.converged_nonzero,
                    ms.rate_nonzero());
        for (const auto& o : ms.outcomes)
            if (o.status == SolveStatus::converged_nonzero && !o.eigenpair->passed) {
                std::printf("  unverified nonzero outcome!\n");
                all_ok = false;
            }
    }
    return all_ok ? kExitOk : kExitVerifyFail;
}

}  // namespace

int main(int argc, char** argv) {
    theicp::io::apply_env_overrides();

    CLI::App app{"Tensor higher-degree eigenvalue complementarity solver"};
    app.require_subcommand(1);

    SolveArgs solve_args;
    auto* cmd_solve = app.add_subcommand("solve", "Run the linearized ADMM on a problem file");
    cmd_solve->add_option("--problem", solve_args.problem_path, "problem document")->required();
    auto* u0_opt = cmd_solve->add_option("--u0", solve_args.u0_csv,
                                         "comma-separated start (u0 = v0)");
    auto* rnd_opt = cmd_solve->add_flag("--random", solve_args.random_start,
                                        "sample the start from U(0,1)^n");
    u0_opt->excludes(rnd_opt);
    cmd_solve->add_option("--beta", solve_args.beta, "penalty parameter");
    cmd_solve->add_option("--gamma1", solve_args.gamma1, "u-step proximal weight");
    cmd_solve->add_option("--gamma2", solve_args.gamma2, "v-step proximal weight");
    cmd_solve->add_option("--tol", solve_args.tol, "stopping tolerance");
    cmd_solve->add_option("--max-iter", solve_args.max_iter, "iteration cap");
    cmd_solve->add_option("--seed", solve_args.seed, "seed for --random");
    cmd_solve->add_option("--trace", solve_args.trace_path, "write per-iteration CSV");
    cmd_solve->add_option("--out", solve_args.out_path, "write result document");

    EnumerateArgs enum_args;
    auto* cmd_enum = app.add_subcommand("enumerate",
                                        "Enumerate the Pareto spectrum by support sets");
    cmd_enum->add_option("--problem", enum_args.problem_path, "problem document")->required();
    cmd_enum->add_option("--max-support", enum_args.max_support,
                         "largest support size (0 = full)");
    cmd_enum->add_option("--attempts", enum_args.attempts, "Newton starts per support");
    cmd_enum->add_option("--seed", enum_args.seed, "Newton multistart seed");
    cmd_enum->add_option("--out", enum_args.out_path, "write result document");

    VerifyArgs verify_args;
    auto* cmd_verify = app.add_subcommand("verify", "Check a candidate eigenpair");
    cmd_verify->add_option("--problem", verify_args.problem_path, "problem document")->required();
    cmd_verify->add_option("--lambda", verify_args.lambda, "candidate eigenvalue")->required();
    cmd_verify->add_option("--x", verify_args.x_csv, "candidate eigenvector (CSV)")->required();
    cmd_verify->add_option("--tol", verify_args.tol, "verification tolerance");
    cmd_verify->add_option("--out", verify_args.out_path, "write result document");

    ReproduceArgs repro_args;
    auto* cmd_repro = app.add_subcommand("reproduce",
                                         "Re-run the bundled examples against their references");
    cmd_repro->add_option("--example", repro_args.example, "example id (1..3)")
        ->check(CLI::Range(1, 3));
    cmd_repro->add_option("--rows", repro_args.rows, "'all' or a 1-based row index");
    cmd_repro->add_option("--multistart", repro_args.multistart_runs,
                          "additionally run N random starts");
    cmd_repro->add_option("--seed", repro_args.seed, "multistart seed");
    cmd_repro->add_option("--max-iter", repro_args.max_iter, "iteration cap");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (cmd_solve->parsed()) {
            if (!solve_args.random_start && solve_args.u0_csv.empty())
                throw std::runtime_error("either --u0 or --random is required");
            return run_solve(solve_args);
        }
        if (cmd_enum->parsed()) return run_enumerate(enum_args);
        if (cmd_verify->parsed()) return run_verify(verify_args);
        if (cmd_repro->parsed()) return run_reproduce(repro_args);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    }
    return kExitUsage;
}
