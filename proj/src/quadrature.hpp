// quadrature.hpp — adaptive Gauss-Kronrod wrappers shared by the spectral integrals

#pragma once

#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "twomode/errors.hpp"

namespace twomode::detail {

template <typename F>
double integrate(F&& f, double a, double b) {
    double err = 0.0;
    const double v =
        boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 20, 1e-13, &err);
    if (!std::isfinite(v) || err > 1e-10 + 1e-10 * std::abs(v)) {
        std::ostringstream os;
        os << "quadrature on [" << a << ", " << b << "] did not converge (error estimate " << err
           << ")";
        throw NumericalError(os.str());
    }
    return v;
}

// Integral over [0, b] of a function behaving like e^(alpha-1) near zero.
// For 0 < alpha < 1 the substitution u = e^alpha makes the integrand bounded.
template <typename F>
double integrate_from_zero(F&& f, double b, double alpha) {
    if (alpha >= 1.0 || alpha <= 0.0) return integrate(f, 0.0, b);
    const double ia = 1.0 / alpha;
    auto fu = [&](double u) {
        const double e = std::pow(u, ia);
        return f(e) * ia * e / u;
    };
    return integrate(fu, 0.0, std::pow(b, alpha));
}

} // namespace twomode::detail
