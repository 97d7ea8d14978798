#include "theicp/model.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>

namespace theicp {

namespace {

double sup_norm(const Vector& x) { return x.size() ? x.cwiseAbs().maxCoeff() : 0.0; }

double neg_part_inf(const Vector& x) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) worst = std::max(worst, -x[i]);
    return std::max(worst, 0.0);
}

Residuals residuals_of(const Vector& x, const Vector& rho) {
    Residuals r;
    r.primal_neg = neg_part_inf(x);
    r.dual_neg = neg_part_inf(rho);
    r.compl_ = std::abs(x.dot(rho)) / std::max(1.0, x.norm() * rho.norm());
    return r;
}

bool tensor_is(const Tensor& T, double diag, double tol) {
    const int n = T.dim(), m = T.order();
    std::size_t stride = 0;
    for (int k = 0; k < m; ++k) stride = stride * n + 1;
    std::size_t next_diag = 0;
    int i = 0;
    for (std::size_t flat = 0; flat < T.data().size(); ++flat) {
        double want = 0.0;
        if (flat == next_diag) {
            want = diag;
            ++i;
            next_diag = static_cast<std::size_t>(i) * stride;
        }
        if (std::abs(T.data()[flat] - want) > tol) return false;
    }
    return true;
}

}  // namespace

Cone Cone::polyhedral(Matrix H) {
    if (H.rows() < 1 || H.cols() < 1)
        throw std::invalid_argument("generator matrix must be nonempty");
    Cone c;
    c.kind = ConeKind::polyhedral;
    c.H = std::move(H);
    return c;
}

ProblemTriple ProblemTriple::make(Tensor A, Tensor B, Tensor C, Cone cone) {
    if (A.order() != B.order() || A.order() != C.order() || A.dim() != B.dim() ||
        A.dim() != C.dim())
        throw std::invalid_argument("A, B, C must share order and dimension");
    if (cone.kind == ConeKind::polyhedral) {
        if (cone.H.cols() != A.dim())
            throw std::invalid_argument("generator matrix has wrong column count");
        if (cone.H.rows() > cone.H.cols())
            throw std::invalid_argument("generator rows cannot exceed the ambient dimension");
        Eigen::JacobiSVD<Matrix> svd(cone.H);
        if (svd.singularValues().minCoeff() <= 1e-8)
            throw std::invalid_argument("generator matrix is rank deficient");
    }
    return ProblemTriple{std::move(A), std::move(B), std::move(C), std::move(cone)};
}

bool ProblemTriple::c_is_neg_identity(double tol) const { return tensor_is(C, -1.0, tol); }
bool ProblemTriple::c_is_identity(double tol) const { return tensor_is(C, 1.0, tol); }

double coupling_constant(int order) {
    const double m = order;
    return -m * std::pow(m - 1.0, 1.0 / m - 1.0);
}

namespace {

void require_neg_identity(const ProblemTriple& Q, const char* where) {
    if (!Q.c_is_neg_identity())
        throw std::invalid_argument(std::string(where) +
                                    ": reformulation requires C = -identity");
}

}  // namespace

double varphi0(const ProblemTriple& Q, const ReformulationPoint& p) {
    require_neg_identity(Q, "varphi0");
    const int m = Q.order();
    const double coef = m * std::pow(m - 1.0, 1.0 / m - 1.0);
    return coef * p.v.dot(detail::pow_vec(p.u, m - 1)) - contract_full(Q.B, p.u);
}

double phi0(const ProblemTriple& Q, const ReformulationPoint& p) {
    const int m = Q.order();
    return contract_full(Q.A, p.u) + p.v.dot(detail::pow_vec(p.v, m - 1));
}

GradientSet gradients(const ProblemTriple& Q, const ReformulationPoint& p) {
    const int m = Q.order();
    const double md = m;
    GradientSet g;
    g.obj_u = md * std::pow(md - 1.0, 1.0 / md) *
                  p.v.cwiseProduct(detail::pow_vec(p.u, m - 2)) -
              md * contract_m1(Q.B, p.u);
    g.obj_v = md * std::pow(md - 1.0, 1.0 / md - 1.0) * detail::pow_vec(p.u, m - 1);
    g.con_u = md * contract_m1(Q.A, p.u);
    g.con_v = md * detail::pow_vec(p.v, m - 1);
    return g;
}

namespace {

Vector dual_vector(const ProblemTriple& Q, double lambda, const Vector& x) {
    const int m = Q.order();
    return detail::pow_int(lambda, m) * contract_m1(Q.A, x) +
           lambda * contract_m1(Q.B, x) + contract_m1(Q.C, x);
}

Eigenpair assemble_pair(const ProblemTriple& Q, double lambda, const Vector& x,
                        const Vector& rho, double tol) {
    Eigenpair pair;
    pair.lambda = lambda;
    pair.x = x;
    pair.rho = rho;
    pair.order = Q.order();
    pair.tol = tol;
    pair.residuals = residuals_of(x, rho);
    const double s = sup_norm(x);
    const Vector xn = x / s;
    const Vector rn = rho / detail::pow_int(s, Q.order() - 1);
    pair.normalized_residuals = residuals_of(xn, rn);
    const Residuals& r = pair.normalized_residuals;
    pair.passed = r.primal_neg <= tol && r.dual_neg <= tol && r.compl_ <= tol;
    return pair;
}

}  // namespace

Eigenpair verify_eigenpair(const ProblemTriple& Q, double lambda, const Vector& x,
                           double tol) {
    if (x.size() != Q.dim())
        throw std::invalid_argument("eigenvector length does not match problem dimension");
    if (sup_norm(x) == 0.0) throw std::invalid_argument("eigenvector must be nonzero");
    return assemble_pair(Q, lambda, x, dual_vector(Q, lambda, x), tol);
}

Eigenpair verify_eigenpair_polyhedral(const ProblemTriple& Q, double lambda,
                                      const Vector& alpha, double tol) {
    if (Q.cone.kind != ConeKind::polyhedral)
        throw std::invalid_argument("problem does not carry a polyhedral cone");
    if (alpha.size() != Q.cone.H.rows())
        throw std::invalid_argument("weight vector length does not match generator count");
    if (sup_norm(alpha) == 0.0) throw std::invalid_argument("weights must be nonzero");
    const Vector x = Q.cone.H.transpose() * alpha;
    const Vector rho = dual_vector(Q, lambda, x);
    const Vector hrho = Q.cone.H * rho;

    // Feasibility lives in the generator weights and the mapped dual.
    Eigenpair pair;
    pair.lambda = lambda;
    pair.x = x;
    pair.rho = rho;
    pair.order = Q.order();
    pair.tol = tol;
    pair.residuals.primal_neg = neg_part_inf(alpha);
    pair.residuals.dual_neg = neg_part_inf(hrho);
    pair.residuals.compl_ = std::abs(x.dot(rho)) / std::max(1.0, x.norm() * rho.norm());
    // verdict on the sup-normalized weights (rho is (m-1)-homogeneous in x)
    const double s = sup_norm(alpha);
    const double sm1 = detail::pow_int(s, Q.order() - 1);
    const Vector xn = x / s;
    const Vector rn = rho / sm1;
    pair.normalized_residuals.primal_neg = pair.residuals.primal_neg / s;
    pair.normalized_residuals.dual_neg = pair.residuals.dual_neg / sm1;
    pair.normalized_residuals.compl_ =
        std::abs(xn.dot(rn)) / std::max(1.0, xn.norm() * rn.norm());
    const Residuals& r = pair.normalized_residuals;
    pair.passed = r.primal_neg <= tol && r.dual_neg <= tol && r.compl_ <= tol;
    return pair;
}

Eigenpair eigenpair_scaling(const ProblemTriple& Q, const Eigenpair& pair, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("scaling factor must be positive");
    return verify_eigenpair(Q, pair.lambda, t * pair.x, pair.tol);
}

Eigenpair stationary_to_eigenpair(const ProblemTriple& Q, const ReformulationPoint& p,
                                  double tol) {
    if (sup_norm(p.u) == 0.0)
        throw std::invalid_argument("stationary point has u = 0; no eigenpair");
    const int m = Q.order();
    const double phi = varphi0(Q, p);
    double lambda;
    if ((m - 1) % 2 == 1) {
        lambda = std::copysign(std::pow(std::abs(phi), 1.0 / (m - 1)), phi);
    } else {
        if (phi <= 0.0)
            throw std::domain_error(
                "varphi0 <= 0 with even root degree; cannot take the real root");
        lambda = std::pow(phi, 1.0 / (m - 1));
    }
    return verify_eigenpair(Q, lambda, p.u, tol);
}

ReformulationPoint eigenpair_to_stationary(const ProblemTriple& Q, const Eigenpair& pair) {
    if (!(pair.lambda > 0.0))
        throw std::invalid_argument("inverse map requires a positive eigenvalue");
    const int m = Q.order();
    const Vector& x = pair.x;
    const Vector y = std::pow(m - 1.0, -1.0 / m) / pair.lambda * x;
    const double scale_m =
        contract_full(Q.A, x) + y.dot(detail::pow_vec(y, m - 1));
    if (!(scale_m > 0.0))
        throw std::domain_error(
            "constraint scale A x^m + sum y^m is not positive (A not copositive here)");
    const double s = std::pow(scale_m, 1.0 / m);
    return ReformulationPoint{x / s, y / s};
}

ExistenceReport existence_condition(const ProblemTriple& Q, ExistenceVariant variant) {
    const bool want_minus = variant == ExistenceVariant::c_minus_identity;
    if (want_minus && !Q.c_is_neg_identity())
        throw std::invalid_argument("variant c_minus_identity requires C = -identity");
    if (!want_minus && !Q.c_is_identity())
        throw std::invalid_argument("variant c_plus_identity requires C = +identity");
    const int m = Q.order(), n = Q.dim();
    const double root = std::pow(m - 1.0, 1.0 / m - 1.0);
    ExistenceReport report;
    report.margins.resize(n);
    std::vector<int> idx(m);
    for (int i = 0; i < n; ++i) {
        std::fill(idx.begin(), idx.end(), i);
        const double a = Q.A.at(idx), b = Q.B.at(idx);
        report.margins[i] = want_minus ? (a + 1.0 - m) * root - b
                                       : (m + a - 1.0) * root + b;
    }
    report.holds = (report.margins.array() > 0.0).all();
    return report;
}

namespace {

// One mode-wise index change: contracts the leading mode of a dense
// [d0, n^(m-1)]-shaped array with H (p x n), producing [p, n^(m-1)].
// Applying it m times with a cyclic transpose transforms every mode.
std::vector<double> contract_leading_mode(const std::vector<double>& in, int d0,
                                          std::size_t rest, const Matrix& H) {
    const int p = static_cast<int>(H.rows());
    std::vector<double> out(static_cast<std::size_t>(p) * rest, 0.0);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < d0; ++j) {
            const double h = H(i, j);
            if (h == 0.0) continue;
            const double* src = in.data() + static_cast<std::size_t>(j) * rest;
            double* dst = out.data() + static_cast<std::size_t>(i) * rest;
            for (std::size_t r = 0; r < rest; ++r) dst[r] += h * src[r];
        }
    return out;
}

// Moves the leading mode to the back: out[i2..im, i1] = in[i1, i2..im].
std::vector<double> rotate_leading_mode(const std::vector<double>& in, int d0,
                                        std::size_t rest) {
    std::vector<double> out(in.size());
    for (int j = 0; j < d0; ++j)
        for (std::size_t r = 0; r < rest; ++r)
            out[r * d0 + j] = in[static_cast<std::size_t>(j) * rest + r];
    return out;
}

// Each pass contracts the next untransformed mode (always size n, sitting in
// front) and cycles it to the back; after m passes the mode order is restored
// with every index transformed.
Tensor mode_transform(const Tensor& T, const Matrix& H) {
    const int m = T.order(), n = T.dim();
    const int p = static_cast<int>(H.rows());
    std::vector<double> cur = T.data();
    for (int pass = 0; pass < m; ++pass) {
        const std::size_t rest = cur.size() / static_cast<std::size_t>(n);
        cur = contract_leading_mode(cur, n, rest, H);
        cur = rotate_leading_mode(cur, p, rest);
    }
    return Tensor::raw(m, p, std::move(cur));
}

}  // namespace

ProblemTriple polyhedral_reduce(const ProblemTriple& Q) {
    if (Q.cone.kind != ConeKind::polyhedral)
        throw std::invalid_argument("polyhedral_reduce requires a polyhedral cone");
    const Matrix& H = Q.cone.H;
    return ProblemTriple::make(mode_transform(Q.A, H), mode_transform(Q.B, H),
                               mode_transform(Q.C, H), Cone::orthant());
}

std::uint64_t count_bound(int order, int dim) {
    if (order < 2 || dim < 1) throw std::invalid_argument("need order >= 2, dim >= 1");
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t pow = 1;
    for (int k = 0; k < dim; ++k) {
        if (pow > limit / static_cast<std::uint64_t>(order))
            throw std::overflow_error("count bound exceeds 64 bits");
        pow *= static_cast<std::uint64_t>(order);
    }
    if (pow > limit / static_cast<std::uint64_t>(dim))
        throw std::overflow_error("count bound exceeds 64 bits");
    return static_cast<std::uint64_t>(dim) * pow;
}

}  // namespace theicp
