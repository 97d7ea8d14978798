#pragma once

#include <vector>

namespace theicp {

/// All real roots of sum_k c[k] x^k (ascending coefficients), via the
/// companion-matrix eigenvalues followed by Newton polishing. Multiple
/// roots are returned once. Throws std::invalid_argument when every
/// coefficient vanishes (the zero polynomial).
std::vector<double> real_roots(std::vector<double> coeffs);

/// p(x) and p'(x) by Horner evaluation.
double poly_eval(const std::vector<double>& coeffs, double x);
double poly_deriv_eval(const std::vector<double>& coeffs, double x);

}  // namespace theicp
