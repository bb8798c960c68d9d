// gaussian.hpp — eigenmode covariance, positivity diagnostic and two-mode Gaussian fidelity
//
// Gamma is the 4x4 anticommutator covariance in the (g+, g+^dag, g-, g-^dag) ordering,
// so the vacuum is the identity.

#pragma once

#include "twomode/master_equations.hpp"
#include "twomode/spectral.hpp"
#include "twomode/types.hpp"

namespace twomode {

Matrix4cd eigenmode_covariance(const MomentState& m);

// -i diag(1, -1, 1, -1).
Matrix4cd symplectic_form_xi();

// Inverse of eigenmode_covariance (reads n+, n-, c from the matrix entries).
MomentState moments_from_covariance(const Eigen::Ref<const Matrix4cd>& gamma);

// Half the smallest eigenvalue of Gamma + i Xi, closed form.
double lambda_c(const MomentState& m);

// Same quantity from a Hermitian eigendecomposition.
double lambda_c_eigen(const MomentState& m);

// Closed form checked against the eigenvalue route; NumericalError beyond 1e-8.
double lambda_c_checked(const MomentState& m);

// Initial slope d lambda_c / dt at t = 0+ for a trajectory started in the vacuum.
double lambda_c_short_time_slope(double s, const CoefficientSet& c);

struct FidelityResult {
    double f2{1.0};        // F^2 (real part when non-physical)
    cplx f2_complex{1.0};  // full complex value of the closed formula
    bool physical{true};
};

FidelityResult gaussian_fidelity(const Eigen::Ref<const Matrix4cd>& g1,
                                 const Eigen::Ref<const Matrix4cd>& g2);
FidelityResult gaussian_fidelity(const MomentState& a, const MomentState& b);

// e^{-G t} f_loc + (1 - e^{-G t}) f_glob.
double mixture_fidelity_lower_bound(double f_loc, double f_glob, double mixture_rate, double t);

// Moments in the bare-mode basis.
struct ModeMoments {
    double aa{0.0};          // <a^dag a>
    double bb{0.0};          // <b^dag b>
    cplx ab{0.0, 0.0};       // <a b^dag>
};

ModeMoments to_mode_basis(const MomentState& m);
MomentState from_mode_basis(const ModeMoments& m);

// Unitary taking Gamma to the quadrature covariance: Sigma_S = V Gamma V^dag,
// Sigma_S ordered (x_A, p_A, x_B, p_B).
Matrix4cd quadrature_unitary();

} // namespace twomode
