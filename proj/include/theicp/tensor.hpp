#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

namespace theicp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Global cap on dense tensor storage (number of entries n^m).
/// Overridable via config or the THEICP_SIZE_GUARD environment variable.
std::size_t tensor_size_guard();
void set_tensor_size_guard(std::size_t entries);

/// Dense m-way array over the reals, row-major in (i1,...,im).
///
/// The checked factory `Tensor::symmetric` enforces invariance of the
/// entries under index permutation (absolute tolerance `sym_tol`); data
/// that is not fully symmetric (some published problem instances are only
/// slice-symmetric) can be carried verbatim through `Tensor::raw`, which
/// validates shape and finiteness only and records the symmetry status.
class Tensor {
public:
    static constexpr double sym_tol = 1e-10;

    /// Empty placeholder; every operation requires a factory-built tensor.
    Tensor() = default;

    /// Checked constructor: throws std::invalid_argument if the data is not
    /// permutation-symmetric within sym_tol, contains non-finite entries,
    /// or exceeds the size guard.
    static Tensor symmetric(int order, int dim, std::vector<double> data);

    /// Stores arbitrary finite data; symmetry status is probed and recorded.
    static Tensor raw(int order, int dim, std::vector<double> data);

    int order() const { return order_; }
    int dim() const { return dim_; }
    bool is_symmetric() const { return symmetric_; }
    const std::vector<double>& data() const { return data_; }

    /// Entry access by multi-index (0-based), idx.size() == order().
    double at(const std::vector<int>& idx) const;

    /// Flat row-major offset of a multi-index.
    std::size_t flat_index(const std::vector<int>& idx) const;

    double frobenius_norm() const;

    bool operator==(const Tensor& other) const = default;

private:
    Tensor(int order, int dim, std::vector<double> data, bool symmetric);

    int order_ = 0;
    int dim_ = 0;
    bool symmetric_ = false;
    std::vector<double> data_;
};

/// Unit tensor: entry 1 iff all indices coincide.
Tensor identity_tensor(int order, int dim);

/// Zero tensor of the given shape.
Tensor zero_tensor(int order, int dim);

/// Mean over all index permutations; the result is exactly symmetric.
Tensor symmetrize(int order, int dim, const std::vector<double>& data);

/// T x^m: full contraction, compensated summation.
double contract_full(const Tensor& T, const Vector& x);

/// (T x^{m-1})_i = sum over i2..im of t[i,i2..im] x_{i2}...x_{im}.
Vector contract_m1(const Tensor& T, const Vector& x);

/// (T x^{m-2})_{ij}: contraction down to a matrix (order >= 2).
Matrix contract_m2(const Tensor& T, const Vector& x);

/// Restriction of T to the index subset J (0-based, nonempty, strictly
/// increasing after sorting); result has dimension |J|.
Tensor principal_subtensor(const Tensor& T, std::vector<int> J);

/// Outcome of the copositivity probe. This is a heuristic, not a decision
/// procedure: a negative witness certifies "not copositive"; otherwise only
/// the smallest value seen over the search is reported.
struct CopositivityReport {
    bool certified_not_copositive = false;
    double min_value = 0.0;  ///< smallest T x^m observed on the unit simplex
    Vector witness;          ///< argmin over the probe points
};

/// Evaluates T x^m over a simplex grid (`mesh` subdivisions per edge) plus
/// projected-gradient refinements from `restarts` random simplex points.
CopositivityReport copositivity_probe(const Tensor& T, int mesh = 20,
                                      int restarts = 8, std::uint64_t seed = 0);

namespace detail {

/// Kahan-compensated accumulator used by the contraction kernels.
class CompensatedSum {
public:
    void add(double term) {
        double y = term - c_;
        double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double value() const { return s_; }

private:
    double s_ = 0.0;
    double c_ = 0.0;
};

/// x_i^p with the convention 0^0 = 1 (needed for u^{[m-2]} at m = 2).
double pow_int(double base, int exponent);

/// Componentwise powers x^{[p]}.
Vector pow_vec(const Vector& x, int exponent);

/// Projection onto the unit simplex {x >= 0, sum x = 1}.
Vector project_simplex(const Vector& y);

/// Uniform double in [0,1) from a 64-bit engine (portable construction).
double canonical(std::uint64_t bits);

}  // namespace detail

}  // namespace theicp
