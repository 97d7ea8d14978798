#include "theicp/tensor.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace theicp {

namespace {

std::atomic<std::size_t> g_size_guard{10'000'000};

std::size_t checked_entry_count(int order, int dim) {
    if (order < 2) throw std::invalid_argument("tensor order must be >= 2");
    if (dim < 1) throw std::invalid_argument("tensor dimension must be >= 1");
    std::size_t count = 1;
    const std::size_t guard = tensor_size_guard();
    for (int k = 0; k < order; ++k) {
        count *= static_cast<std::size_t>(dim);
        if (count > guard)
            throw std::invalid_argument("tensor exceeds size guard (" +
                                        std::to_string(guard) + " entries)");
    }
    return count;
}

void check_finite(const std::vector<double>& data) {
    for (double v : data)
        if (!std::isfinite(v))
            throw std::invalid_argument("tensor entries must be finite");
}

// Largest deviation |t[idx] - t[sorted(idx)]| over all entries.
double symmetry_defect(int order, int dim, const std::vector<double>& data) {
    std::vector<int> idx(order, 0), sorted(order);
    double worst = 0.0;
    for (std::size_t flat = 0; flat < data.size(); ++flat) {
        sorted = idx;
        std::sort(sorted.begin(), sorted.end());
        std::size_t canon = 0;
        for (int k = 0; k < order; ++k) canon = canon * dim + sorted[k];
        worst = std::max(worst, std::abs(data[flat] - data[canon]));
        for (int k = order - 1; k >= 0; --k) {
            if (++idx[k] < dim) break;
            idx[k] = 0;
        }
    }
    return worst;
}

}  // namespace

std::size_t tensor_size_guard() { return g_size_guard.load(); }

void set_tensor_size_guard(std::size_t entries) {
    if (entries == 0) throw std::invalid_argument("size guard must be positive");
    g_size_guard.store(entries);
}

Tensor::Tensor(int order, int dim, std::vector<double> data, bool symmetric)
    : order_(order), dim_(dim), symmetric_(symmetric), data_(std::move(data)) {}

Tensor Tensor::symmetric(int order, int dim, std::vector<double> data) {
    const std::size_t count = checked_entry_count(order, dim);
    if (data.size() != count)
        throw std::invalid_argument("tensor data has " + std::to_string(data.size()) +
                                    " entries, expected " + std::to_string(count));
    check_finite(data);
    const double defect = symmetry_defect(order, dim, data);
    if (defect > sym_tol)
        throw std::invalid_argument(
            "tensor is not permutation-symmetric (defect " + std::to_string(defect) +
            " > sym_tol); symmetrize it explicitly or load it as raw data");
    return Tensor(order, dim, std::move(data), true);
}

Tensor Tensor::raw(int order, int dim, std::vector<double> data) {
    const std::size_t count = checked_entry_count(order, dim);
    if (data.size() != count)
        throw std::invalid_argument("tensor data has " + std::to_string(data.size()) +
                                    " entries, expected " + std::to_string(count));
    check_finite(data);
    const bool sym = symmetry_defect(order, dim, data) <= sym_tol;
    return Tensor(order, dim, std::move(data), sym);
}

std::size_t Tensor::flat_index(const std::vector<int>& idx) const {
    if (static_cast<int>(idx.size()) != order_)
        throw std::invalid_argument("multi-index length does not match tensor order");
    std::size_t flat = 0;
    for (int k = 0; k < order_; ++k) {
        if (idx[k] < 0 || idx[k] >= dim_)
            throw std::invalid_argument("multi-index out of range");
        flat = flat * dim_ + idx[k];
    }
    return flat;
}

double Tensor::at(const std::vector<int>& idx) const { return data_[flat_index(idx)]; }

double Tensor::frobenius_norm() const {
    detail::CompensatedSum acc;
    for (double v : data_) acc.add(v * v);
    return std::sqrt(acc.value());
}

Tensor identity_tensor(int order, int dim) {
    const std::size_t count = checked_entry_count(order, dim);
    std::vector<double> data(count, 0.0);
    std::size_t stride = 0;  // flat offset of (i,i,...,i) advances by this per i
    for (int k = 0; k < order; ++k) stride = stride * dim + 1;
    for (int i = 0; i < dim; ++i) data[static_cast<std::size_t>(i) * stride] = 1.0;
    return Tensor::raw(order, dim, std::move(data));
}

Tensor zero_tensor(int order, int dim) {
    const std::size_t count = checked_entry_count(order, dim);
    return Tensor::raw(order, dim, std::vector<double>(count, 0.0));
}

Tensor symmetrize(int order, int dim, const std::vector<double>& data) {
    const std::size_t count = checked_entry_count(order, dim);
    if (data.size() != count)
        throw std::invalid_argument("tensor data has " + std::to_string(data.size()) +
                                    " entries, expected " + std::to_string(count));
    check_finite(data);
    // Group entries by the sorted multi-index, then write back the group mean.
    std::vector<double> sum(count, 0.0);
    std::vector<std::uint32_t> mult(count, 0);
    std::vector<int> idx(order, 0), sorted(order);
    std::vector<std::size_t> canon_of(count);
    for (std::size_t flat = 0; flat < count; ++flat) {
        sorted = idx;
        std::sort(sorted.begin(), sorted.end());
        std::size_t canon = 0;
        for (int k = 0; k < order; ++k) canon = canon * dim + sorted[k];
        canon_of[flat] = canon;
        sum[canon] += data[flat];
        ++mult[canon];
        for (int k = order - 1; k >= 0; --k) {
            if (++idx[k] < dim) break;
            idx[k] = 0;
        }
    }
    std::vector<double> out(count);
    for (std::size_t flat = 0; flat < count; ++flat)
        out[flat] = sum[canon_of[flat]] / mult[canon_of[flat]];
    return Tensor::raw(order, dim, std::move(out));
}

namespace {

void check_vector(const Tensor& T, const Vector& x) {
    if (x.size() != T.dim())
        throw std::invalid_argument("vector length " + std::to_string(x.size()) +
                                    " does not match tensor dimension " +
                                    std::to_string(T.dim()));
    for (Eigen::Index i = 0; i < x.size(); ++i)
        if (!std::isfinite(x[i]))
            throw std::invalid_argument("vector entries must be finite");
}

}  // namespace

double contract_full(const Tensor& T, const Vector& x) {
    check_vector(T, x);
    const auto& d = T.data();
    const int n = T.dim(), m = T.order();
    detail::CompensatedSum acc;
    for (std::size_t flat = 0; flat < d.size(); ++flat) {
        double term = d[flat];
        std::size_t rem = flat;
        for (int k = 0; k < m; ++k) {
            term *= x[static_cast<Eigen::Index>(rem % n)];
            rem /= n;
        }
        acc.add(term);
    }
    return acc.value();
}

Vector contract_m1(const Tensor& T, const Vector& x) {
    check_vector(T, x);
    const auto& d = T.data();
    const int n = T.dim(), m = T.order();
    std::size_t block = d.size() / n;  // n^{m-1}
    Vector out(n);
    for (int i = 0; i < n; ++i) {
        detail::CompensatedSum acc;
        const std::size_t base = static_cast<std::size_t>(i) * block;
        for (std::size_t flat = 0; flat < block; ++flat) {
            double term = d[base + flat];
            std::size_t rem = flat;
            for (int k = 0; k < m - 1; ++k) {
                term *= x[static_cast<Eigen::Index>(rem % n)];
                rem /= n;
            }
            acc.add(term);
        }
        out[i] = acc.value();
    }
    return out;
}

Matrix contract_m2(const Tensor& T, const Vector& x) {
    check_vector(T, x);
    const auto& d = T.data();
    const int n = T.dim(), m = T.order();
    std::size_t block = d.size() / (static_cast<std::size_t>(n) * n);  // n^{m-2}
    Matrix out(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            detail::CompensatedSum acc;
            const std::size_t base = (static_cast<std::size_t>(i) * n + j) * block;
            for (std::size_t flat = 0; flat < block; ++flat) {
                double term = d[base + flat];
                std::size_t rem = flat;
                for (int k = 0; k < m - 2; ++k) {
                    term *= x[static_cast<Eigen::Index>(rem % n)];
                    rem /= n;
                }
                acc.add(term);
            }
            out(i, j) = acc.value();
        }
    }
    return out;
}

Tensor principal_subtensor(const Tensor& T, std::vector<int> J) {
    if (J.empty()) throw std::invalid_argument("index subset must be nonempty");
    std::sort(J.begin(), J.end());
    J.erase(std::unique(J.begin(), J.end()), J.end());
    for (int j : J)
        if (j < 0 || j >= T.dim())
            throw std::invalid_argument("index subset out of range");
    const int p = static_cast<int>(J.size());
    const int m = T.order();
    std::size_t count = 1;
    for (int k = 0; k < m; ++k) count *= static_cast<std::size_t>(p);
    std::vector<double> out(count);
    std::vector<int> idx(m, 0), full(m);
    for (std::size_t flat = 0; flat < count; ++flat) {
        for (int k = 0; k < m; ++k) full[k] = J[idx[k]];
        out[flat] = T.at(full);
        for (int k = m - 1; k >= 0; --k) {
            if (++idx[k] < p) break;
            idx[k] = 0;
        }
    }
    Tensor sub = Tensor::raw(m, p, std::move(out));
    return sub;
}

namespace detail {

double pow_int(double base, int exponent) {
    if (exponent == 0) return 1.0;
    double r = 1.0;
    for (int k = 0; k < exponent; ++k) r *= base;
    return r;
}

Vector pow_vec(const Vector& x, int exponent) {
    Vector out(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = pow_int(x[i], exponent);
    return out;
}

Vector project_simplex(const Vector& y) {
    const Eigen::Index n = y.size();
    std::vector<double> u(y.data(), y.data() + n);
    std::sort(u.begin(), u.end(), std::greater<double>());
    double cssv = 0.0, theta = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
        cssv += u[k];
        const double t = (cssv - 1.0) / static_cast<double>(k + 1);
        if (u[k] - t > 0.0) theta = t;
    }
    Vector out(n);
    for (Eigen::Index i = 0; i < n; ++i) out[i] = std::max(0.0, y[i] - theta);
    return out;
}

double canonical(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace detail

namespace {

// Enumerates grid points (k1..kn)/mesh with sum ki = mesh, calling fn on each.
template <typename Fn>
void simplex_grid_rec(int n, int mesh, int level, int remaining, std::vector<int>& k,
                      Vector& x, Fn& fn) {
    if (level == n - 1) {
        k[level] = remaining;
        for (int i = 0; i < n; ++i) x[i] = static_cast<double>(k[i]) / mesh;
        fn(x);
        return;
    }
    for (int c = 0; c <= remaining; ++c) {
        k[level] = c;
        simplex_grid_rec(n, mesh, level + 1, remaining - c, k, x, fn);
    }
}

template <typename Fn>
void simplex_grid(int n, int mesh, Fn&& fn) {
    std::vector<int> k(n, 0);
    Vector x(n);
    simplex_grid_rec(n, mesh, 0, mesh, k, x, fn);
}

}  // namespace

CopositivityReport copositivity_probe(const Tensor& T, int mesh, int restarts,
                                      std::uint64_t seed) {
    if (mesh < 1) throw std::invalid_argument("mesh must be >= 1");
    const int n = T.dim();
    const int m = T.order();
    CopositivityReport report;
    report.min_value = std::numeric_limits<double>::infinity();

    auto consider = [&](const Vector& x) {
        double v = contract_full(T, x);
        if (v < report.min_value) {
            report.min_value = v;
            report.witness = x;
        }
    };

    simplex_grid(n, mesh, consider);

    // Projected-gradient refinement from random simplex points.
    std::mt19937_64 eng(seed);
    for (int r = 0; r < restarts; ++r) {
        Vector x(n);
        double s = 0.0;
        for (int i = 0; i < n; ++i) {
            x[i] = -std::log(1.0 - detail::canonical(eng()) + 1e-300);
            s += x[i];
        }
        x /= s;
        double fx = contract_full(T, x);
        double step = 1.0;
        for (int it = 0; it < 200; ++it) {
            Vector g = static_cast<double>(m) * contract_m1(T, x);
            Vector cand = detail::project_simplex(x - step * g);
            double fc = contract_full(T, cand);
            if (fc < fx - 1e-14) {
                x = cand;
                fx = fc;
                step *= 1.3;
            } else {
                step *= 0.5;
                if (step < 1e-12) break;
            }
        }
        consider(x);
    }

    report.certified_not_copositive = report.min_value < 0.0;
    return report;
}

}  // namespace theicp
