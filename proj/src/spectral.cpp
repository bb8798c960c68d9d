// spectral.cpp — bath functions, principal-value integrals and coefficient tensors

#include "twomode/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "quadrature.hpp"
#include "twomode/errors.hpp"

namespace twomode {

using detail::integrate;

void ModelParams::set_occupation0(double n0) { beta = beta_from_occupation(n0, omega0); }

double ModelParams::occupation0() const { return bose_factor(omega0, beta); }

void ModelParams::validate() const {
    auto fail = [](const std::string& field, const std::string& why) {
        throw ValidationError(field + ": " + why);
    };
    if (!(omega0 > 0.0) || !std::isfinite(omega0)) fail("omega0", "must be positive and finite");
    if (!(g >= 0.0) || !std::isfinite(g)) fail("g", "must be non-negative and finite");
    if (!(omega_minus() > 0.0)) fail("g", "omega0 - g must be positive");
    if (!(kappa0 > 0.0) || !std::isfinite(kappa0)) fail("kappa0", "must be positive and finite");
    if (!(omega_c > omega_plus()) || !std::isfinite(omega_c))
        fail("omega_c", "must exceed omega0 + g");
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) fail("alpha", "must be non-negative");
    if (!(beta > 0.0) || !std::isfinite(beta)) fail("beta", "must be positive and finite");
    if (M < 1) fail("M", "must be at least 1");
    if (!(delta_t >= 0.0)) fail("delta_t", "must be non-negative");
    if (!(mixture_rate > 0.0) || !std::isfinite(mixture_rate))
        fail("mixture_rate", "must be positive and finite");
}

double beta_from_occupation(double n, double omega) {
    if (!(n > 0.0) || !std::isfinite(n)) throw DomainError("occupation must be positive and finite");
    if (!(omega > 0.0)) throw DomainError("frequency must be positive");
    return std::log1p(1.0 / n) / omega;
}

double bose_factor(double omega, double beta) {
    if (!(omega > 0.0)) throw DomainError("bose_factor: frequency must be positive");
    if (!(beta > 0.0)) throw DomainError("bose_factor: inverse temperature must be positive");
    return 1.0 / std::expm1(beta * omega);
}

double spectral_density(double omega, const ModelParams& p) {
    if (omega < 0.0) throw DomainError("spectral_density: negative frequency");
    if (omega > p.omega_c) return 0.0;
    return p.kappa0 * std::pow(omega / p.omega0, p.alpha);
}

std::vector<BathMode> bath_modes(const ModelParams& p) {
    if (p.M < 1) throw ValidationError("M: must be at least 1");
    std::vector<BathMode> modes(static_cast<std::size_t>(p.M));
    const double bin = p.omega_c / p.M;
    for (int k = 1; k <= p.M; ++k) {
        const double w = k * bin;
        modes[k - 1] = {w, std::sqrt(p.kappa0 * std::pow(w / p.omega0, p.alpha) * bin / (2.0 * pi))};
    }
    return modes;
}

cplx correlation_function(CorrelationKind kind, double tau, const std::vector<BathMode>& modes,
                          const ModelParams& p) {
    cplx sum{0.0, 0.0};
    const double sign = kind == CorrelationKind::Absorption ? 1.0 : -1.0;
    for (const auto& m : modes) {
        const double n = bose_factor(m.omega, p.beta);
        const double w = m.coupling * m.coupling * (kind == CorrelationKind::Absorption ? n : 1.0 + n);
        sum += w * std::polar(1.0, sign * (m.omega - p.omega0) * tau);
    }
    return sum;
}

cplx correlation_function(CorrelationKind kind, double tau, const ModelParams& p) {
    return correlation_function(kind, tau, bath_modes(p), p);
}

double recurrence_time(const ModelParams& p) { return 2.0 * pi * p.M / p.omega_c; }

double memory_time(const ModelParams& p) {
    const auto modes = bath_modes(p);
    auto mag = [&](double t) {
        return std::abs(correlation_function(CorrelationKind::Absorption, t, modes, p));
    };
    const double half = 0.5 * mag(0.0);
    const double limit = 0.5 * recurrence_time(p);
    const double h = 0.05 / p.omega_c;
    double lo = 0.0;
    for (double hi = h; hi <= limit; lo = hi, hi += h) {
        if (mag(hi) > half) continue;
        for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            (mag(mid) > half ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    }
    throw NumericalError("memory_time: |c1| never drops to half maximum before T_rec/2");
}

bool memory_time_resolved(double tau, const ModelParams& p) { return tau <= 0.25 * recurrence_time(p); }

double pv_weight(PvWeight weight, double e, const ModelParams& p) {
    const double k = spectral_density(e, p) / (2.0 * pi);
    switch (weight) {
    case PvWeight::Occupation: return k / std::expm1(p.beta * e);
    case PvWeight::OnePlusOccupation: return k * (1.0 + 1.0 / std::expm1(p.beta * e));
    case PvWeight::Bare: return k;
    }
    return 0.0;
}

double pv_integral(PvWeight weight, double omega_target, const ModelParams& p) {
    const double wt = omega_target;
    const double eps = 64.0 * std::numeric_limits<double>::epsilon() * p.omega_c;
    if (!(wt > eps) || !(wt < p.omega_c - eps))
        throw DomainError("pv_integral: pole must lie strictly inside (0, omega_c)");
    if (weight != PvWeight::Bare && p.alpha <= 0.0)
        throw DomainError("pv_integral: thermal weight diverges at zero frequency for alpha = 0");

    const double ft = pv_weight(weight, wt, p);
    auto h = [&](double e) { return (pv_weight(weight, e, p) - ft) / (e - wt); };

    const double below = detail::integrate_from_zero(h, wt, p.alpha);
    const double above = integrate(h, wt, p.omega_c);
    return below + above + ft * std::log((p.omega_c - wt) / wt);
}

RateTensors reconstruct_rates(const Vector2d& gd, const Vector2d& ed) {
    RateTensors r;
    const cplx I{0.0, 1.0};
    for (int s = 0; s < 2; ++s)
        for (int t = 0; t < 2; ++t) {
            r.gamma(s, t) = 0.5 * (gd(s) + gd(t)) + I * (ed(s) - ed(t));
            r.eta(s, t) = -0.25 * I * (gd(s) - gd(t)) + 0.5 * (ed(s) + ed(t));
        }
    return r;
}

CoefficientSet dissipator_coefficients(const ModelParams& p) {
    p.validate();
    CoefficientSet c;
    c.g = p.g;
    c.omega_plus = p.omega_plus();
    c.omega_minus = p.omega_minus();
    c.kappa_plus = spectral_density(c.omega_plus, p);
    c.kappa_minus = spectral_density(c.omega_minus, p);
    c.kappa0 = p.kappa0;
    c.n_plus = bose_factor(c.omega_plus, p.beta);
    c.n_minus = bose_factor(c.omega_minus, p.beta);
    c.n0 = bose_factor(p.omega0, p.beta);

    const Vector2d w{c.omega_plus, c.omega_minus};
    const Vector2d k{c.kappa_plus, c.kappa_minus};
    const Vector2d n{c.n_plus, c.n_minus};

    Vector2d g1 = 0.5 * k.cwiseProduct(n);
    Vector2d g2 = 0.5 * k.cwiseProduct((1.0 + n.array()).matrix());
    Vector2d e1, e2;
    for (int s = 0; s < 2; ++s) {
        e1(s) = 0.5 * pv_integral(PvWeight::Occupation, w(s), p);
        e2(s) = -0.5 * pv_integral(PvWeight::OnePlusOccupation, w(s), p);
    }
    const auto r1 = reconstruct_rates(g1, e1);
    const auto r2 = reconstruct_rates(g2, e2);
    c.gamma = {r1.gamma, r2.gamma};
    c.eta = {r1.eta, r2.eta};
    c.delta_omega_plus = e1(Plus) + e2(Plus);
    c.delta_omega_minus = e1(Minus) + e2(Minus);
    c.delta_omega_A = -pv_integral(PvWeight::Bare, p.omega0, p);
    c.s_offdiag = secular_filter(p.delta_t, p.g)(Plus, Minus);
    return c;
}

double sinc(double x) {
    if (std::isinf(x)) return 0.0;
    if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0 * (1.0 - x * x / 20.0);
    return std::sin(x) / x;
}

Matrix2d secular_filter(double delta_t, double g) {
    if (!(delta_t >= 0.0)) throw DomainError("secular_filter: delta_t must be non-negative");
    const double s = g == 0.0 ? 1.0 : sinc(g * delta_t);
    Matrix2d S;
    S << 1.0, s, s, 1.0;
    return S;
}

Matrix4cd dissipation_matrix(const CoefficientSet& c, double s) {
    Matrix4cd D = Matrix4cd::Zero();
    for (int i = 0; i < 2; ++i) {
        auto blk = D.block<2, 2>(2 * i, 2 * i);
        blk = c.gamma[i];
        blk(0, 1) *= s;
        blk(1, 0) *= s;
    }
    return D;
}

CpThreshold cp_threshold(const CoefficientSet& c) {
    CpThreshold out;
    double bound = 1.0;
    for (int i = 0; i < 2; ++i) {
        const auto& G = c.gamma[i];
        const double off = std::abs(G(Plus, Minus));
        const double diag = std::sqrt(G(Plus, Plus).real() * G(Minus, Minus).real());
        out.per_channel[i] = off > 0.0 ? diag / off : std::numeric_limits<double>::infinity();
        bound = std::min(bound, out.per_channel[i]);
    }
    out.bound = bound;
    out.dissipation_matrix = dissipation_matrix(c, bound);
    return out;
}

CpThreshold cp_threshold(const ModelParams& p) { return cp_threshold(dissipator_coefficients(p)); }

} // namespace twomode
