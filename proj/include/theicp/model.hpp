#pragma once

#include "theicp/tensor.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace theicp {

enum class ConeKind { orthant, polyhedral };

/// Either the nonnegative orthant or a finitely generated cone
/// {H^T a | a >= 0} with linearly independent rows of H.
struct Cone {
    ConeKind kind = ConeKind::orthant;
    Matrix H;  ///< p x n generator matrix (polyhedral only)

    static Cone orthant() { return Cone{}; }
    static Cone polyhedral(Matrix H);
};

/// The problem data Q = (A, B, C): find (lambda, x != 0) with
/// K ∋ x ⊥ (lambda^m A + lambda B + C) x^{m-1} ∈ K*.
struct ProblemTriple {
    Tensor A, B, C;
    Cone cone;

    /// Validates shared order/dimension and, for polyhedral cones,
    /// rank(H) = p (singular values above 1e-8).
    static ProblemTriple make(Tensor A, Tensor B, Tensor C, Cone cone = Cone::orthant());

    int order() const { return A.order(); }
    int dim() const { return A.dim(); }

    /// True when C equals -identity entrywise within tol.
    bool c_is_neg_identity(double tol = 1e-12) const;
    bool c_is_identity(double tol = 1e-12) const;
};

/// Verification residuals of a candidate pair.
struct Residuals {
    double primal_neg = 0.0;  ///< ||min(x,0)||_inf
    double dual_neg = 0.0;    ///< ||min(rho,0)||_inf
    double compl_ = 0.0;      ///< |x^T rho| / max(1, ||x|| ||rho||)
};

/// A (lambda, x) candidate with the dual vector rho and residual report.
/// The pass/fail verdict is computed on the sup-normalized pair so that it
/// is invariant under positive rescaling of x; the reported residuals are
/// the raw ones (they rescale by t, t^{m-1} and the normalized compl).
struct Eigenpair {
    double lambda = 0.0;
    Vector x;
    Vector rho;
    Residuals residuals;             ///< at the given x
    Residuals normalized_residuals;  ///< at x / ||x||_inf, used for the verdict
    double tol = 0.0;
    bool passed = false;
    int order = 2;  ///< tensor order m (needed to rescale rho)
};

/// Point of the polynomial-optimization reformulation (u, v >= 0).
struct ReformulationPoint {
    Vector u, v;
};

/// theta(m) = -m (m-1)^{1/m - 1}, the coupling constant of the
/// minimization form of the reformulation.
double coupling_constant(int order);

/// Objective of the max-form reformulation:
/// m (m-1)^{1/m-1} v^T u^{[m-1]} - B u^m.  Requires C = -identity.
double varphi0(const ProblemTriple& Q, const ReformulationPoint& p);

/// Constraint function A u^m + sum_i v_i^m.
double phi0(const ProblemTriple& Q, const ReformulationPoint& p);

/// The four gradient vectors of the objective and constraint.
struct GradientSet {
    Vector obj_u;  ///< m (m-1)^{1/m} diag(v) u^{[m-2]} - m B u^{m-1}
    Vector obj_v;  ///< m (m-1)^{1/m-1} u^{[m-1]}
    Vector con_u;  ///< m A u^{m-1}
    Vector con_v;  ///< m v^{[m-1]}
};

GradientSet gradients(const ProblemTriple& Q, const ReformulationPoint& p);

/// Computes rho = lambda^m A x^{m-1} + lambda B x^{m-1} + C x^{m-1} and the
/// residual report; verdict pass iff all normalized residuals <= tol.
/// Throws std::invalid_argument on a zero vector.
Eigenpair verify_eigenpair(const ProblemTriple& Q, double lambda, const Vector& x,
                           double tol);

/// Verification for a polyhedral-cone problem given the generator weights:
/// x = H^T alpha, primal feasibility on alpha, dual feasibility on H rho.
Eigenpair verify_eigenpair_polyhedral(const ProblemTriple& Q, double lambda,
                                      const Vector& alpha, double tol);

/// (lambda, t x) with rho rescaled by t^{m-1}; verdict unchanged. t > 0.
Eigenpair eigenpair_scaling(const ProblemTriple& Q, const Eigenpair& pair, double t);

/// lambda = varphi0(u,v)^{1/(m-1)} (sign-preserving real root for even m;
/// for odd m the radicand must be positive), x = u.
Eigenpair stationary_to_eigenpair(const ProblemTriple& Q, const ReformulationPoint& p,
                                  double tol);

/// Inverse map: y = (m-1)^{-1/m} lambda^{-1} x, then scale (x, y) by
/// phi0^{-1/m}. Requires lambda > 0.
ReformulationPoint eigenpair_to_stationary(const ProblemTriple& Q, const Eigenpair& pair);

enum class ExistenceVariant { c_minus_identity, c_plus_identity };

/// Sufficient-condition margins for solvability, one per diagonal:
///   C = -I: (a_{ii..i} + 1 - m)(m-1)^{1/m-1} - b_{ii..i} > 0
///   C = +I: (m + a_{ii..i} - 1)(m-1)^{1/m-1} + b_{ii..i} > 0
struct ExistenceReport {
    bool holds = false;
    Vector margins;
};

ExistenceReport existence_condition(const ProblemTriple& Q, ExistenceVariant variant);

/// Transforms a polyhedral-cone problem into an orthant problem of
/// dimension p by m mode-wise contractions of each tensor with H.
ProblemTriple polyhedral_reduce(const ProblemTriple& Q);

/// Upper bound n m^n on the number of m-degree Pareto-eigenvalues.
/// Throws std::overflow_error if it does not fit in 64 bits.
std::uint64_t count_bound(int order, int dim);

}  // namespace theicp
