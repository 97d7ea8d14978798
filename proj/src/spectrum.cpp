#include "theicp/spectrum.hpp"

#include "theicp/polyroots.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace theicp {

namespace {

// Off-support margins: sum over i2..im in J of
// (lambda^m a_{i,i2..im} + lambda b + c) w_{i2}...w_{im} for each i outside J.
// Evaluated by embedding w and contracting the full tensors once.
Vector off_support_margins(const ProblemTriple& Q, const std::vector<int>& J,
                           const Vector& w, double lambda) {
    Vector x = Vector::Zero(Q.dim());
    for (std::size_t k = 0; k < J.size(); ++k) x[J[k]] = w[static_cast<Eigen::Index>(k)];
    const Vector rho = detail::pow_int(lambda, Q.order()) * contract_m1(Q.A, x) +
                       lambda * contract_m1(Q.B, x) + contract_m1(Q.C, x);
    Vector margins(Q.dim() - static_cast<int>(J.size()));
    Eigen::Index out = 0;
    std::size_t jpos = 0;
    for (int i = 0; i < Q.dim(); ++i) {
        if (jpos < J.size() && J[jpos] == i) {
            ++jpos;
            continue;
        }
        margins[out++] = rho[i];
    }
    return margins;
}

void classify(SupportSystem& sys, const EnumerationConfig& cfg) {
    const double wmin = sys.w.minCoeff();
    sys.boundary_ambiguous = wmin > 0.0 && wmin <= cfg.pos_tol;
    sys.admissible = wmin > cfg.pos_tol &&
                     (sys.off_support_margins.size() == 0 ||
                      sys.off_support_margins.minCoeff() >= -cfg.margin_tol);
}

struct SupportProblem {
    Tensor AJ, BJ, CJ;
    int m;
    int p;

    Vector system(const Vector& w, double lambda) const {
        Vector f(p + 1);
        f.head(p) = detail::pow_int(lambda, m) * contract_m1(AJ, w) +
                    lambda * contract_m1(BJ, w) + contract_m1(CJ, w);
        f[p] = w.sum() - 1.0;
        return f;
    }

    Matrix jacobian(const Vector& w, double lambda) const {
        Matrix jac(p + 1, p + 1);
        const double lm = detail::pow_int(lambda, m);
        jac.topLeftCorner(p, p) =
            (m - 1) *
            (lm * contract_m2(AJ, w) + lambda * contract_m2(BJ, w) + contract_m2(CJ, w));
        jac.topRightCorner(p, 1) = m * detail::pow_int(lambda, m - 1) * contract_m1(AJ, w) +
                                   contract_m1(BJ, w);
        jac.bottomLeftCorner(1, p).setOnes();
        jac(p, p) = 0.0;
        return jac;
    }
};

// Largest singleton-root magnitude; calibrates the lambda sampling box.
double singleton_scale(const ProblemTriple& Q) {
    double scale = 0.0;
    std::vector<int> idx(Q.order());
    for (int i = 0; i < Q.dim(); ++i) {
        std::fill(idx.begin(), idx.end(), i);
        std::vector<double> coeffs(Q.order() + 1, 0.0);
        coeffs[0] = Q.C.at(idx);
        coeffs[1] = Q.B.at(idx);
        coeffs[Q.order()] = Q.A.at(idx);
        bool all_zero = true;
        for (double c : coeffs)
            if (c != 0.0) all_zero = false;
        if (all_zero) continue;
        for (double r : real_roots(coeffs)) scale = std::max(scale, std::abs(r));
    }
    return scale;
}

}  // namespace

Vector embed_support(const SupportSystem& sys, int dim) {
    Vector x = Vector::Zero(dim);
    for (std::size_t k = 0; k < sys.support.size(); ++k)
        x[sys.support[k]] = sys.w[static_cast<Eigen::Index>(k)];
    return x;
}

std::vector<SupportSystem> single_support_eigenvalues(const ProblemTriple& Q, int i,
                                                      const EnumerationConfig& cfg) {
    if (Q.cone.kind != ConeKind::orthant)
        throw std::invalid_argument("enumeration runs on orthant problems; reduce first");
    if (i < 0 || i >= Q.dim()) throw std::invalid_argument("index out of range");
    const int m = Q.order();
    std::vector<int> idx(m, i);
    std::vector<double> coeffs(m + 1, 0.0);
    coeffs[0] = Q.C.at(idx);
    coeffs[1] = Q.B.at(idx);
    coeffs[m] = Q.A.at(idx);

    bool all_zero = true;
    for (double c : coeffs)
        if (c != 0.0) all_zero = false;
    if (all_zero) return {};  // degenerate: every lambda solves the support system

    std::vector<SupportSystem> out;
    for (double lambda : real_roots(coeffs)) {
        SupportSystem sys;
        sys.support = {i};
        sys.lambda = lambda;
        sys.w = Vector::Ones(1);
        sys.method = RootMethod::closed_form_univariate;
        sys.system_residual = std::abs(poly_eval(coeffs, lambda));
        sys.off_support_margins = off_support_margins(Q, sys.support, sys.w, lambda);
        classify(sys, cfg);
        out.push_back(std::move(sys));
    }
    return out;
}

std::vector<SupportSystem> support_system_solve(const ProblemTriple& Q,
                                                const std::vector<int>& J,
                                                const EnumerationConfig& cfg) {
    if (Q.cone.kind != ConeKind::orthant)
        throw std::invalid_argument("enumeration runs on orthant problems; reduce first");
    if (J.size() < 2) throw std::invalid_argument("use single_support_eigenvalues for |J| = 1");
    std::vector<int> support = J;
    std::sort(support.begin(), support.end());
    const int p = static_cast<int>(support.size());
    const int m = Q.order();

    SupportProblem sp{principal_subtensor(Q.A, support), principal_subtensor(Q.B, support),
                      principal_subtensor(Q.C, support), m, p};

    const double lambda_box = 1.0 + singleton_scale(Q);
    std::mt19937_64 eng(cfg.seed ^ 0x9e3779b97f4a7c15ull);

    std::vector<SupportSystem> found;
    for (int attempt = 0; attempt < cfg.attempts; ++attempt) {
        // second half of the attempts doubles the sampling box
        const double box = attempt * 2 < cfg.attempts ? lambda_box : 2.0 * lambda_box;
        Vector w(p);
        double s = 0.0;
        for (int k = 0; k < p; ++k) {
            w[k] = -std::log(1.0 - detail::canonical(eng()) + 1e-300);
            s += w[k];
        }
        w /= s;
        double lambda = box * (2.0 * detail::canonical(eng()) - 1.0);

        // damped Newton with Armijo backtracking on the residual norm
        Vector f = sp.system(w, lambda);
        double fnorm = f.norm();
        bool ok = false;
        for (int it = 0; it < cfg.newton_max_iter; ++it) {
            if (fnorm <= cfg.sys_tol) {
                ok = true;
                break;
            }
            // minimal-norm step; also handles the rank-deficient Jacobians
            // that appear on solution manifolds (e.g. the unit tensor)
            Matrix jac = sp.jacobian(w, lambda);
            Eigen::CompleteOrthogonalDecomposition<Matrix> cod(jac);
            Vector step = cod.solve(-f);
            if (!step.allFinite()) break;
            double t = 1.0;
            bool improved = false;
            for (int bt = 0; bt < 30; ++bt) {
                Vector wc = w + t * step.head(p);
                double lc = lambda + t * step[p];
                Vector fc = sp.system(wc, lc);
                if (fc.norm() <= (1.0 - 1e-4 * t) * fnorm) {
                    w = wc;
                    lambda = lc;
                    f = fc;
                    fnorm = fc.norm();
                    improved = true;
                    break;
                }
                t *= 0.5;
            }
            if (!improved) break;
        }
        if (!ok && fnorm <= cfg.sys_tol) ok = true;
        if (!ok) continue;
        if (!std::isfinite(lambda) || !w.allFinite()) continue;
        if (w.minCoeff() <= 0.0) continue;

        SupportSystem sys;
        sys.support = support;
        sys.lambda = lambda;
        sys.w = w;
        sys.method = RootMethod::newton_multistart;
        sys.system_residual = fnorm;
        sys.off_support_margins = off_support_margins(Q, support, w, lambda);
        classify(sys, cfg);

        bool duplicate = false;
        for (const auto& prev : found) {
            if (std::abs(prev.lambda - sys.lambda) <= cfg.dedup_tol &&
                (prev.w - sys.w).norm() <= cfg.dedup_tol) {
                duplicate = true;
                break;
            }
        }
        if (!duplicate) found.push_back(std::move(sys));
    }
    return found;
}

namespace {

template <typename Fn>
void for_each_subset(int n, int max_size, Fn&& fn) {
    std::vector<int> subset;
    // lexicographic recursion over subsets of {0..n-1} up to max_size
    auto rec = [&](auto&& self, int next) -> void {
        if (!subset.empty()) fn(subset);
        if (static_cast<int>(subset.size()) == max_size) return;
        for (int i = next; i < n; ++i) {
            subset.push_back(i);
            self(self, i + 1);
            subset.pop_back();
        }
    };
    rec(rec, 0);
}

}  // namespace

std::vector<double> SpectrumResult::eigenvalues(double dedup_tol) const {
    std::vector<double> vals;
    for (const auto& e : entries) vals.push_back(e.system.lambda);
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end(),
                           [&](double a, double b) { return std::abs(a - b) <= dedup_tol; }),
               vals.end());
    return vals;
}

SpectrumResult enumerate_pareto_spectrum(const ProblemTriple& Q, int max_support,
                                         const EnumerationConfig& cfg) {
    if (max_support < 1 || max_support > Q.dim())
        throw std::invalid_argument("max_support must lie in [1, n]");
    SpectrumResult result;
    result.bound = count_bound(Q.order(), Q.dim());
    result.completeness =
        max_support == 1 ? Completeness::exact_for_singletons : Completeness::heuristic;

    for_each_subset(Q.dim(), max_support, [&](const std::vector<int>& J) {
        ++result.supports_explored;
        std::vector<SupportSystem> systems;
        if (J.size() == 1) {
            std::vector<int> idx(Q.order(), J[0]);
            if (Q.A.at(idx) == 0.0 && Q.B.at(idx) == 0.0 && Q.C.at(idx) == 0.0)
                result.degenerate_singletons.push_back(J[0]);
            systems = single_support_eigenvalues(Q, J[0], cfg);
        } else {
            systems = support_system_solve(Q, J, cfg);
        }
        for (auto& sys : systems) {
            if (sys.boundary_ambiguous) {
                result.boundary_ambiguous.push_back(std::move(sys));
                continue;
            }
            if (!sys.admissible) continue;
            const double vtol = sys.method == RootMethod::closed_form_univariate
                                    ? cfg.verify_tol_closed_form
                                    : cfg.verify_tol_newton;
            Eigenpair pair =
                verify_eigenpair(Q, sys.lambda, embed_support(sys, Q.dim()), vtol);
            if (!pair.passed) continue;  // near-boundary numerics; not a member
            result.entries.push_back(SpectrumEntry{std::move(sys), std::move(pair)});
        }
    });

    std::sort(result.entries.begin(), result.entries.end(),
              [](const SpectrumEntry& a, const SpectrumEntry& b) {
                  if (a.system.lambda != b.system.lambda)
                      return a.system.lambda < b.system.lambda;
                  return a.system.support < b.system.support;
              });
    return result;
}

double lambda_max(const SpectrumResult& result) {
    if (result.entries.empty()) throw std::domain_error("empty spectrum");
    double best = result.entries.front().system.lambda;
    for (const auto& e : result.entries) best = std::max(best, e.system.lambda);
    return best;
}

}  // namespace theicp
