#pragma once

// Independent reference computations for the test suites. Nothing here calls
// into the library's solvers.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <utility>
#include <vector>

namespace oracle {

using cd = std::complex<double>;

/// Roots of the characteristic polynomial of [[a, b], [c, d]], sorted by (re, im).
inline std::pair<cd, cd> eig2x2(cd a, cd b, cd c, cd d) {
    const cd tr = a + d;
    const cd det = a * d - b * c;
    const cd disc = std::sqrt(tr * tr - 4.0 * det);
    cd l1 = (tr - disc) / 2.0, l2 = (tr + disc) / 2.0;
    if (l2.real() < l1.real() || (l2.real() == l1.real() && l2.imag() < l1.imag())) std::swap(l1, l2);
    return {l1, l2};
}

/// Spectrum of the n x n Dirichlet second-difference operator on step h.
inline std::vector<double> dirichlet_laplacian_spectrum(int n, double h) {
    std::vector<double> ev;
    for (int k = 1; k <= n; ++k) ev.push_back((2.0 - 2.0 * std::cos(k * std::numbers::pi / (n + 1))) / (h * h));
    std::sort(ev.begin(), ev.end());
    return ev;
}

/// Central second difference.
inline double second_derivative(const std::function<double(double)>& f, double x, double step) {
    return (f(x + step) - 2.0 * f(x) + f(x - step)) / (step * step);
}

/// Central first difference.
inline double first_derivative(const std::function<double(double)>& f, double x, double step) {
    return (f(x + step) - f(x - step)) / (2.0 * step);
}

}  // namespace oracle
