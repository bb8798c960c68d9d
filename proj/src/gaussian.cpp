// gaussian.cpp — covariance assembly, lambda_c and the closed-form Uhlmann fidelity

#include "twomode/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "twomode/errors.hpp"

namespace twomode {

namespace {
constexpr cplx I{0.0, 1.0};
}

Matrix4cd eigenmode_covariance(const MomentState& m) {
    Matrix4cd G = Matrix4cd::Zero();
    G(0, 0) = G(1, 1) = 2.0 * m.n_plus + 1.0;
    G(2, 2) = G(3, 3) = 2.0 * m.n_minus + 1.0;
    G(0, 2) = 2.0 * std::conj(m.cross);
    G(1, 3) = 2.0 * m.cross;
    G(2, 0) = 2.0 * m.cross;
    G(3, 1) = 2.0 * std::conj(m.cross);
    return G;
}

Matrix4cd symplectic_form_xi() {
    return (-I * Eigen::Vector4cd(1.0, -1.0, 1.0, -1.0)).asDiagonal();
}

MomentState moments_from_covariance(const Eigen::Ref<const Matrix4cd>& G) {
    return {0.5 * (G(0, 0).real() - 1.0), 0.5 * (G(2, 2).real() - 1.0), 0.5 * G(2, 0)};
}

double lambda_c(const MomentState& m) {
    const double d = m.n_plus - m.n_minus;
    return 0.5 * (m.n_plus + m.n_minus - std::sqrt(d * d + 4.0 * std::norm(m.cross)));
}

double lambda_c_eigen(const MomentState& m) {
    const Matrix4cd H = eigenmode_covariance(m) + I * symplectic_form_xi();
    Eigen::SelfAdjointEigenSolver<Matrix4cd> es(H, Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().minCoeff();
}

double lambda_c_checked(const MomentState& m) {
    const double a = lambda_c(m), b = lambda_c_eigen(m);
    const double scale = 1.0 + std::abs(m.n_plus) + std::abs(m.n_minus) + std::abs(m.cross);
    if (std::abs(a - b) > 1e-8 * scale) {
        std::ostringstream os;
        os << "lambda_c: closed form " << a << " disagrees with eigenvalue route " << b;
        throw NumericalError(os.str());
    }
    return a;
}

double lambda_c_short_time_slope(double s, const CoefficientSet& c) {
    const auto& G = c.gamma[0];
    const double gpp = G(Plus, Plus).real(), gmm = G(Minus, Minus).real();
    const double sum = gpp + gmm;
    const double disc = 1.0 + 4.0 * (s * s * std::norm(G(Plus, Minus)) - gpp * gmm) / (sum * sum);
    return 0.5 * sum * (1.0 - std::sqrt(disc));
}

FidelityResult gaussian_fidelity(const Eigen::Ref<const Matrix4cd>& g1,
                                 const Eigen::Ref<const Matrix4cd>& g2) {
    const Matrix4cd Xi = symplectic_form_xi();
    const Matrix4cd Id = Matrix4cd::Identity();
    const cplx a = lu_determinant(g1 + g2) / 16.0;
    const cplx b = lu_determinant(Xi * g1 * Xi * g2 - Id) / 16.0;
    const cplx c = lu_determinant(g1 + I * Xi) * lu_determinant(g2 + I * Xi) / 16.0;
    const cplx sb = std::sqrt(b), sc = std::sqrt(c);
    const cplx f2 = 1.0 / (sb + sc - std::sqrt((sb + sc) * (sb + sc) - a));

    auto min_eig = [&](const Matrix4cd& g) {
        const Matrix4cd h = 0.5 * (g + g.adjoint()) + I * Xi;
        return Eigen::SelfAdjointEigenSolver<Matrix4cd>(h, Eigen::EigenvaluesOnly).eigenvalues()(0);
    };
    FidelityResult r;
    r.f2_complex = f2;
    r.physical = min_eig(g1) >= -1e-8 && min_eig(g2) >= -1e-8;
    r.f2 = f2.real();
    if (!r.physical) return r;

    if (!std::isfinite(r.f2) || std::abs(f2.imag()) > 1e-8 || r.f2 < -1e-9 || r.f2 > 1.0 + 1e-9) {
        std::ostringstream os;
        os << "gaussian_fidelity: F^2 = " << f2 << " outside [0, 1] for physical inputs";
        throw NumericalError(os.str());
    }
    r.f2 = std::clamp(r.f2, 0.0, 1.0);
    return r;
}

FidelityResult gaussian_fidelity(const MomentState& a, const MomentState& b) {
    return gaussian_fidelity(eigenmode_covariance(a), eigenmode_covariance(b));
}

double mixture_fidelity_lower_bound(double f_loc, double f_glob, double mixture_rate, double t) {
    const double w = std::exp(-mixture_rate * t);
    return w * f_loc + (1.0 - w) * f_glob;
}

ModeMoments to_mode_basis(const MomentState& m) {
    const double half_sum = 0.5 * (m.n_plus + m.n_minus);
    return {half_sum + m.cross.real(), half_sum - m.cross.real(),
            cplx{0.5 * (m.n_plus - m.n_minus), m.cross.imag()}};
}

MomentState from_mode_basis(const ModeMoments& m) {
    const double half_sum = 0.5 * (m.aa + m.bb);
    return {half_sum + m.ab.real(), half_sum - m.ab.real(), cplx{0.5 * (m.aa - m.bb), m.ab.imag()}};
}

Matrix4cd quadrature_unitary() {
    Matrix4cd V;
    V << 1.0, 1.0, 1.0, 1.0,
         -I, I, -I, I,
         1.0, 1.0, -1.0, -1.0,
         -I, I, I, -I;
    return 0.5 * V;
}

} // namespace twomode
