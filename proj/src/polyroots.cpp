#include "theicp/polyroots.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace theicp {

double poly_eval(const std::vector<double>& coeffs, double x) {
    double r = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) r = r * x + *it;
    return r;
}

double poly_deriv_eval(const std::vector<double>& coeffs, double x) {
    double r = 0.0;
    for (int k = static_cast<int>(coeffs.size()) - 1; k >= 1; --k)
        r = r * x + k * coeffs[k];
    return r;
}

std::vector<double> real_roots(std::vector<double> coeffs) {
    while (!coeffs.empty() && coeffs.back() == 0.0) coeffs.pop_back();
    if (coeffs.empty())
        throw std::invalid_argument("zero polynomial has no isolated roots");
    const int deg = static_cast<int>(coeffs.size()) - 1;
    if (deg == 0) return {};

    double scale = 0.0;
    for (double c : coeffs) scale = std::max(scale, std::abs(c));

    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
    for (int k = 0; k < deg; ++k) companion(k, deg - 1) = -coeffs[k] / coeffs[deg];
    for (int k = 1; k < deg; ++k) companion(k, k - 1) = 1.0;

    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion);
    std::vector<double> roots;
    for (int k = 0; k < deg; ++k) {
        const auto z = solver.eigenvalues()[k];
        const double mag = std::max(1.0, std::abs(z.real()));
        if (std::abs(z.imag()) > 1e-8 * mag) continue;
        double x = z.real();
        // Newton polish; the companion eigenvalue is already close.
        for (int it = 0; it < 8; ++it) {
            const double f = poly_eval(coeffs, x);
            const double df = poly_deriv_eval(coeffs, x);
            if (df == 0.0) break;
            const double step = f / df;
            x -= step;
            if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(x))) break;
        }
        if (std::abs(poly_eval(coeffs, x)) > 1e-7 * scale * std::max(1.0, std::pow(std::abs(x), deg)))
            continue;
        roots.push_back(x);
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [](double a, double b) {
                                return std::abs(a - b) <=
                                       1e-10 * std::max({1.0, std::abs(a), std::abs(b)});
                            }),
                roots.end());
    return roots;
}

}  // namespace theicp
