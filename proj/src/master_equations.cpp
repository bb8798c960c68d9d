// master_equations.cpp — moment generators and their exact propagation

#include "twomode/master_equations.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "quadrature.hpp"
#include "twomode/errors.hpp"

namespace twomode {

namespace {

constexpr cplx I{0.0, 1.0};

// (e^z - 1) / z without cancellation for small |z|.
cplx phi1(cplx z) {
    if (std::abs(z) < 1e-3) return 1.0 + z / 2.0 * (1.0 + z / 3.0 * (1.0 + z / 4.0));
    const double x = z.real(), y = z.imag();
    const double s = std::sin(0.5 * y);
    const cplx em1{std::expm1(x) * std::cos(y) - 2.0 * s * s, std::exp(x) * std::sin(y)};
    return em1 / z;
}

} // namespace

Vector4d to_real(const MomentState& m) {
    return {m.n_plus, m.n_minus, m.cross.real(), m.cross.imag()};
}

MomentState from_real(const Eigen::Ref<const Vector4d>& x) {
    return {x(0), x(1), cplx{x(2), x(3)}};
}

AffineGenerator::AffineGenerator(const Matrix4d& A, const Vector4d& b) : A_(A), b_(b) {
    Eigen::EigenSolver<Matrix4d> es(A_);
    if (es.info() != Eigen::Success) {
        cond_ = std::numeric_limits<double>::infinity();
        return;
    }
    lambda_ = es.eigenvalues();
    V_ = es.eigenvectors();
    Eigen::PartialPivLU<Eigen::Matrix4cd> lu(V_);
    Vinv_ = lu.inverse();
    cond_ = V_.cwiseAbs().rowwise().sum().maxCoeff() * Vinv_.cwiseAbs().rowwise().sum().maxCoeff();
    if (!std::isfinite(cond_)) cond_ = std::numeric_limits<double>::infinity();
}

Vector4d AffineGenerator::evolve(const Vector4d& x0, double t) const {
    if (t == 0.0) return x0;
    if (cond_ < 1e6) {
        const Eigen::Vector4cd y0 = Vinv_ * x0.cast<cplx>();
        const Eigen::Vector4cd yb = Vinv_ * b_.cast<cplx>();
        Eigen::Vector4cd y;
        for (int i = 0; i < 4; ++i) {
            const cplx z = lambda_(i) * t;
            y(i) = std::exp(z) * y0(i) + t * phi1(z) * yb(i);
        }
        return (V_ * y).real();
    }
    // Near-defective A: exponentiate the augmented 5x5 matrix [[A, b], [0, 0]].
    Eigen::Matrix<double, 5, 5> aug = Eigen::Matrix<double, 5, 5>::Zero();
    aug.topLeftCorner<4, 4>() = A_ * t;
    aug.topRightCorner<4, 1>() = b_ * t;
    const Eigen::Matrix<double, 5, 5> E = aug.exp();
    if (!E.allFinite()) throw NumericalError("propagate: matrix exponential fallback did not converge");
    return E.topLeftCorner<4, 4>() * x0 + E.topRightCorner<4, 1>();
}

AffineGenerator cg_redfield_generator(const CoefficientSet& c, double s, bool lamb_shift) {
    const auto& g1 = c.gamma[0];
    const auto& g2 = c.gamma[1];
    const double ls = lamb_shift ? 1.0 : 0.0;
    const cplx eta_pm = ls * (c.eta[0](Plus, Minus) + c.eta[1](Minus, Plus));
    const cplx eta_mp = ls * (c.eta[0](Minus, Plus) + c.eta[1](Plus, Minus));
    const cplx gam_pm = g1(Plus, Minus) - g2(Minus, Plus);
    const cplx gam_mp = g1(Minus, Plus) - g2(Plus, Minus);
    const double freq =
        c.omega_plus - c.omega_minus + ls * (c.delta_omega_plus - c.delta_omega_minus);

    return affine_from_rhs([&](const Vector4d& x) {
        const double np = x(0), nm = x(1);
        const cplx cr{x(2), x(3)};
        const double lamb = 2.0 * (eta_pm * cr).imag();
        const double diss = (gam_pm * cr).real();
        const double dp = -0.5 * c.kappa_plus * (np - c.n_plus) + s * (lamb + diss);
        const double dm = -0.5 * c.kappa_minus * (nm - c.n_minus) + s * (diss - lamb);
        const cplx dc = (I * freq - 0.25 * (c.kappa_plus + c.kappa_minus)) * cr +
                        s * (I * eta_mp * (nm - np) + g1(Minus, Plus) + 0.5 * gam_mp * (nm + np));
        return Vector4d{dp, dm, dc.real(), dc.imag()};
    });
}

AffineGenerator global_generator(const CoefficientSet& c, bool lamb_shift) {
    return cg_redfield_generator(c, 0.0, lamb_shift);
}

AffineGenerator local_generator(const CoefficientSet& c, bool lamb_shift) {
    const double k = c.kappa0, n0 = c.n0;
    const double d = lamb_shift ? c.delta_omega_A : 0.0;
    return affine_from_rhs([&](const Vector4d& x) {
        const double np = x(0), nm = x(1);
        const cplx cr{x(2), x(3)};
        const double dp = -0.5 * k * (np - n0 + cr.real()) + d * cr.imag();
        const double dm = -0.5 * k * (nm - n0 + cr.real()) - d * cr.imag();
        const cplx dc = (2.0 * I * c.g - 0.5 * k) * cr + 0.5 * k * (n0 - 0.5 * (np + nm)) +
                        0.5 * I * d * (nm - np);
        return Vector4d{dp, dm, dc.real(), dc.imag()};
    });
}

Vector4d evaluate(const AffineGenerator& gen, const MomentState& init, double t) {
    return gen.evolve(to_real(init), t);
}

Trajectory propagate(const AffineGenerator& gen, const MomentState& init,
                     const std::vector<double>& times, std::string scheme) {
    Trajectory tr;
    tr.scheme = std::move(scheme);
    tr.times = times;
    tr.states.reserve(times.size());
    const Vector4d x0 = to_real(init);
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!(times[i] >= 0.0) || (i > 0 && !(times[i] > times[i - 1])))
            throw ValidationError("time grid must be non-negative and strictly increasing");
        const Vector4d x = gen.evolve(x0, times[i]);
        if (!x.allFinite()) {
            std::ostringstream os;
            os << "propagate: non-finite state at t = " << times[i];
            throw NumericalError(os.str());
        }
        tr.states.push_back(from_real(x));
    }
    return tr;
}

MomentState steady_state(const AffineGenerator& gen) {
    Eigen::FullPivLU<Matrix4d> lu(gen.A());
    lu.setThreshold(1e-12);
    if (!lu.isInvertible()) throw NumericalError("steady_state: generator has no unique fixed point");
    return from_real(-lu.solve(gen.b()));
}

double asymptotic_gap_first_order(double s, const ModelParams& p) {
    p.validate();
    if (!(p.g > 0.0)) throw DomainError("asymptotic_gap_first_order: requires g > 0");
    const double wp = p.omega_plus(), wm = p.omega_minus();
    const double np = bose_factor(wp, p.beta), nm = bose_factor(wm, p.beta);
    // (N(e) - N(w)) / (e - w) without cancellation near e = w
    auto slope = [&](double e, double w, double nw) {
        const double x = e - w;
        const double q = x == 0.0 ? p.beta : std::expm1(p.beta * x) / x;
        return -q * (nw + 1.0) / std::expm1(p.beta * e);
    };
    auto f = [&](double e) {
        return spectral_density(e, p) / (2.0 * pi) * (slope(e, wp, np) - slope(e, wm, nm));
    };
    const double v = detail::integrate_from_zero(f, wm, p.alpha) + detail::integrate(f, wm, wp) +
                     detail::integrate(f, wp, p.omega_c);
    return s / (wp - wm) * v;
}

Trajectory mixture_moments(const Trajectory& local, const Trajectory& global, double mixture_rate) {
    if (local.times != global.times || local.states.size() != global.states.size())
        throw ValidationError("mixture_moments: local and global grids differ");
    Trajectory out;
    out.scheme = "mixture";
    out.times = local.times;
    out.states.reserve(local.states.size());
    for (std::size_t i = 0; i < local.times.size(); ++i) {
        const double w = std::exp(-mixture_rate * local.times[i]);
        const Vector4d x = w * to_real(local.states[i]) + (1.0 - w) * to_real(global.states[i]);
        out.states.push_back(from_real(x));
    }
    return out;
}

MomentState global_closed_form(const CoefficientSet& c, double t) {
    return {-c.n_plus * std::expm1(-0.5 * c.kappa_plus * t),
            -c.n_minus * std::expm1(-0.5 * c.kappa_minus * t), cplx{0.0, 0.0}};
}

MomentState local_closed_form(const CoefficientSet& c, double t) {
    const double k = c.kappa0, n0 = c.n0, g = c.g;
    const cplx eps2 = 16.0 * g * g - k * k;
    const cplx eps = std::sqrt(eps2);
    const cplx h = 0.5 * eps * t;
    // sin(h)/eps and (1 - cos h)/eps^2, both entire in eps^2
    cplx sn, cs;
    if (std::abs(h) < 1e-4) {
        sn = 0.5 * t * (1.0 - h * h / 6.0);
        cs = t * t / 8.0 * (1.0 - h * h / 12.0);
    } else {
        sn = std::sin(h) / eps;
        const cplx sh = std::sin(0.5 * h);
        cs = 2.0 * sh * sh / eps2;
    }
    const double damp = std::exp(-0.5 * k * t);
    const double re = n0 * k * damp * sn.real();
    const double im = 4.0 * n0 * k * g * damp * cs.real();
    const double n = n0 * (1.0 - damp * (1.0 + k * k * cs.real()));
    return {n, n, cplx{re, im}};
}

} // namespace twomode
