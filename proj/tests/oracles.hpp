// oracles.hpp — reference computations used only by the tests
//
// Each one takes a different route from the library: symmetric exclusion + Richardson
// for principal values, adaptive Runge-Kutta for the moment equations transcribed in
// complex form, plain arithmetic for the bath couplings, and explicit passive unitaries
// on the Fock blocks for correlated Gaussian states.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/numeric/odeint.hpp>

#include "twomode/fock_oracle.hpp"
#include "twomode/master_equations.hpp"
#include "twomode/spectral.hpp"

namespace oracle {

using twomode::cplx;

// P int_a^b f(e)/(e - w) de: integrate outside [w - d, w + d] with tanh-sinh and remove the
// O(d) remainder by Richardson extrapolation over d, d/2.
inline double pv(const std::function<double(double)>& f, double w, double a, double b, double d = 1e-3) {
    boost::math::quadrature::tanh_sinh<double> ts;
    auto h = [&](double e) { return f(e) / (e - w); };
    auto cut = [&](double dd) { return ts.integrate(h, a, w - dd) + ts.integrate(h, w + dd, b); };
    return 2.0 * cut(0.5 * d) - cut(d);
}

// gamma_k straight from the discretization rule, kept apart from the library.
inline std::vector<double> couplings(double kappa0, double omega0, double omega_c, double alpha, int M) {
    std::vector<double> out;
    const double two_pi = 2.0 * std::acos(-1.0);
    for (int k = 1; k <= M; ++k) {
        const double w = omega_c * k / M;
        out.push_back(std::sqrt(kappa0 * std::pow(w / omega0, alpha) * omega_c / (two_pi * M)));
    }
    return out;
}

// Complex moment equations written term by term; state (n+, n-, c).
struct Moments {
    double np, nm;
    cplx c;
};

inline Moments redfield_rhs(const twomode::CoefficientSet& k, double s, const Moments& x) {
    using twomode::Minus;
    using twomode::Plus;
    const cplx I{0.0, 1.0};
    const cplx eta_pm = k.eta[0](Plus, Minus) + k.eta[1](Minus, Plus);
    const cplx eta_mp = k.eta[0](Minus, Plus) + k.eta[1](Plus, Minus);
    const cplx gam_pm = k.gamma[0](Plus, Minus) - k.gamma[1](Minus, Plus);
    const cplx gam_mp = k.gamma[0](Minus, Plus) - k.gamma[1](Plus, Minus);
    Moments d;
    d.np = -0.5 * k.kappa_plus * (x.np - k.n_plus) + s * (2.0 * std::imag(eta_pm * x.c) + std::real(gam_pm * x.c));
    d.nm = -0.5 * k.kappa_minus * (x.nm - k.n_minus) + s * (-2.0 * std::imag(eta_pm * x.c) + std::real(gam_pm * x.c));
    const double freq = k.omega_plus + k.delta_omega_plus - k.omega_minus - k.delta_omega_minus;
    d.c = (I * freq - 0.25 * (k.kappa_plus + k.kappa_minus)) * x.c +
          s * (I * eta_mp * (x.nm - x.np) + k.gamma[0](Minus, Plus) + 0.5 * gam_mp * (x.nm + x.np));
    return d;
}

inline Moments local_rhs(const twomode::CoefficientSet& k, bool lamb, const Moments& x) {
    const cplx I{0.0, 1.0};
    const double dA = lamb ? k.delta_omega_A : 0.0, k0 = k.kappa0, N = k.n0;
    Moments d;
    d.np = -0.5 * k0 * (x.np - N + x.c.real()) + dA * x.c.imag();
    d.nm = -0.5 * k0 * (x.nm - N + x.c.real()) - dA * x.c.imag();
    d.c = (I * 2.0 * k.g - 0.5 * k0) * x.c + 0.5 * k0 * (N - 0.5 * (x.np + x.nm)) + I * 0.5 * dA * (x.nm - x.np);
    return d;
}

// Dormand-Prince at the given tolerance, sampled on `times` (first entry is the start).
inline std::vector<Moments> integrate(const std::function<Moments(const Moments&)>& rhs, Moments x0,
                                      const std::vector<double>& times, double tol = 1e-12) {
    namespace ode = boost::numeric::odeint;
    using S = std::array<double, 4>;
    S x{x0.np, x0.nm, x0.c.real(), x0.c.imag()};
    auto sys = [&](const S& y, S& dy, double) {
        const Moments d = rhs({y[0], y[1], {y[2], y[3]}});
        dy = {d.np, d.nm, d.c.real(), d.c.imag()};
    };
    std::vector<Moments> out;
    ode::integrate_times(ode::make_dense_output(tol, tol, ode::runge_kutta_dopri5<S>()), sys, x, times.begin(),
                         times.end(), 1e-3,
                         [&](const S& y, double) { out.push_back({y[0], y[1], {y[2], y[3]}}); });
    return out;
}

// Gaussian state with eigen-occupations nu on the blocks of a truncated Fock space, rotated
// by exp(-i (X_jk g_j^dag g_k)) for a Hermitian 2x2 X.
inline twomode::TruncatedState rotated_thermal(double nu1, double nu2, const Eigen::Matrix2cd& X, int K) {
    auto rho = twomode::thermal_product_state(nu1, nu2, K);
    for (int n = 0; n <= K; ++n) {
        const int m = n + 1;
        Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(m, m);
        for (int j = 0; j < m; ++j) {
            G(j, j) = X(0, 0) * double(n - j) + X(1, 1) * double(j);
            if (j + 1 < m) {
                const double amp = std::sqrt(double(j + 1) * double(n - j));
                G(j, j + 1) = X(0, 1) * amp;  // g+^dag g- lowers the n- index
                G(j + 1, j) = X(1, 0) * amp;
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G);
        const Eigen::VectorXcd ph = (cplx(0, -1) * es.eigenvalues().cast<cplx>()).array().exp();
        const Eigen::MatrixXcd U = es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
        rho.blocks[n] = U * rho.blocks[n] * U.adjoint();
    }
    return rho;
}

} // namespace oracle
