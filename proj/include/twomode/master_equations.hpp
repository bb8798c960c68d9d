// master_equations.hpp — second-moment dynamics of the Redfield family, Local ME and mixture
//
// The state is x = (n+, n-, Re c, Im c) with n_s = <g_s^dag g_s> and c = <g_- g_+^dag>;
// every scheme is an affine system dx/dt = A x + b solved in closed form.

#pragma once

#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "twomode/spectral.hpp"
#include "twomode/types.hpp"

namespace twomode {

struct MomentState {
    double n_plus{0.0};
    double n_minus{0.0};
    cplx cross{0.0, 0.0};
};

Vector4d to_real(const MomentState& m);
MomentState from_real(const Eigen::Ref<const Vector4d>& x);

struct Trajectory {
    std::vector<double> times;
    std::vector<MomentState> states;
    std::string scheme;
};

class AffineGenerator {
public:
    AffineGenerator(const Matrix4d& A, const Vector4d& b);

    const Matrix4d& A() const { return A_; }
    const Vector4d& b() const { return b_; }
    Vector4d rate(const Vector4d& x) const { return A_ * x + b_; }

    // Eigenvalues of A (relaxation rates and oscillation frequencies).
    const Eigen::Vector4cd& eigenvalues() const { return lambda_; }
    // Condition number of the eigenvector matrix; large means numerically defective.
    double eigenvector_condition() const { return cond_; }

    // x(t) = e^{At} x0 + A^{-1}(e^{At} - I) b.
    Vector4d evolve(const Vector4d& x0, double t) const;

private:
    Matrix4d A_;
    Vector4d b_;
    Eigen::Vector4cd lambda_;
    Eigen::Matrix4cd V_, Vinv_;
    double cond_{0.0};
};

// Builds A, b by probing an affine right-hand side at x = 0 and the unit vectors.
template <typename Rhs>
AffineGenerator affine_from_rhs(Rhs&& f) {
    const Vector4d b = f(Vector4d::Zero());
    Matrix4d A;
    for (int j = 0; j < 4; ++j) A.col(j) = f(Vector4d::Unit(j)) - b;
    return AffineGenerator(A, b);
}

// Coarse-grained Redfield with filter value s (s = 1 Redfield, s = 0 Global).
// Without the Lamb shift the eta terms and the frequency shifts are dropped; the
// complex off-diagonal rates are kept as they are.
AffineGenerator cg_redfield_generator(const CoefficientSet& c, double s, bool lamb_shift = true);
AffineGenerator global_generator(const CoefficientSet& c, bool lamb_shift = true);
AffineGenerator local_generator(const CoefficientSet& c, bool lamb_shift = true);

Vector4d evaluate(const AffineGenerator& gen, const MomentState& init, double t);

// times must be non-negative and strictly increasing; init is the state at t = 0.
Trajectory propagate(const AffineGenerator& gen, const MomentState& init,
                     const std::vector<double>& times, std::string scheme = {});

// -A^{-1} b; NumericalError when A is singular.
MomentState steady_state(const AffineGenerator& gen);

// O(kappa) prediction of 2 Re c(infinity) for filter value s.
double asymptotic_gap_first_order(double s, const ModelParams& p);

Trajectory mixture_moments(const Trajectory& local, const Trajectory& global, double mixture_rate);

// Global scheme from the vacuum: n_s = N_s (1 - e^{-kappa_s t / 2}), c = 0.
MomentState global_closed_form(const CoefficientSet& c, double t);

// Local scheme from the vacuum without Lamb shift. Needs 4g > kappa0.
MomentState local_closed_form(const CoefficientSet& c, double t);

} // namespace twomode
