// fock_oracle.hpp — brute-force density-matrix propagation on a truncated two-mode Fock space
//
// States are stored in the eigenmode number basis |n+, n-> truncated at n+ + n- <= K.
// Every generator here commutes with the total excitation number, so a state that is
// diagonal in that number stays block diagonal: block n holds |n - j, j>, j = 0..n.

#pragma once

#include <vector>

#include "twomode/master_equations.hpp"
#include "twomode/spectral.hpp"
#include "twomode/types.hpp"

namespace twomode {

struct TruncatedState {
    int cutoff{0};                 // K, largest total excitation number kept
    std::vector<MatrixXcd> blocks; // blocks[n] is (n+1) x (n+1)

    double trace() const;
    // Dense matrix on the (K+1)^2 product space, index n+ * (K+1) + n-.
    MatrixXcd dense() const;
};

// Smallest K for which a product of thermal modes with occupations <= n_bar loses
// less than tol of probability above K.
int cutoff_for_occupation(double n_bar, double tol = 1e-10);

// Product of thermal eigenmode states; ValidationError if the dropped tail exceeds 1e-8.
TruncatedState thermal_product_state(double n_plus, double n_minus, int cutoff);

MomentState state_moments(const TruncatedState& rho);

struct OracleScheme {
    enum class Kind { Local, Global, CgRedfield } kind{Kind::Global};
    double s{0.0};            // filter value for CgRedfield
    bool lamb_shift{true};
};

// Integrates the operator master equation with an adaptive Dormand-Prince stepper at
// tolerance 1e-10. Returned states are in the Schroedinger picture. Throws
// NumericalError when the population of the outermost block exceeds 1e-6.
std::vector<TruncatedState> lindblad_propagate(const OracleScheme& scheme, const ModelParams& p,
                                               const TruncatedState& rho0,
                                               const std::vector<double>& times);
TruncatedState lindblad_propagate(const OracleScheme& scheme, const ModelParams& p,
                                  const TruncatedState& rho0, double t);

// Uhlmann fidelity ||sqrt(rho1) sqrt(rho2)||_1 (not squared).
double fidelity_truncated(const TruncatedState& rho1, const TruncatedState& rho2);
double fidelity_truncated(const MatrixXcd& rho1, const MatrixXcd& rho2);

} // namespace twomode
