// exact.hpp — quadratic system + discretized bath, solved through the eigenvectors of i Omega H
//
// Phase-space ordering r = (x_A, p_A, x_B, p_B, x_1, p_1, ..., x_M, p_M), with
// x = (c + c^dag)/sqrt(2). H is the quadratic-form matrix of the Hamiltonian (H = r^T H r / 2)
// and Sigma_ij = <{r_i, r_j}>, so the vacuum covariance is the identity.

#pragma once

#include <array>
#include <vector>

#include "twomode/master_equations.hpp"
#include "twomode/spectral.hpp"
#include "twomode/types.hpp"

namespace twomode {

struct FullModel {
    ModelParams params;
    std::vector<BathMode> modes;
    MatrixXd H;
    MatrixXd Omega;
    VectorXd eigenvalues;  // g_alpha of M = i Omega H, ascending
    MatrixXcd V;           // unitary eigenvectors of M

    Eigen::Index dim() const { return H.rows(); }
};

// Block-diagonal symplectic form with blocks [[0, 1], [-1, 0]].
MatrixXd symplectic_form(Eigen::Index n_modes);

FullModel build_full_model(const ModelParams& p);

// Vacuum for A and B, thermal [2 N(w_k) + 1] I blocks for the bath.
MatrixXd initial_covariance(const ModelParams& p);

// Real symplectic propagator S(t) = V E_-(t) V^dag.
MatrixXd symplectic_propagator(const FullModel& m, double t);

// Sigma(t) = S(t) Sigma(0) S(t)^T, O(n^3).
MatrixXd propagate_exact(const FullModel& m, const MatrixXd& sigma0, double t);

// Moments of the eigenmodes from the 4x4 system block.
MomentState system_moments(const Eigen::Ref<const MatrixXd>& sigma);

// Symplectic eigenvalues (ascending) and the smallest eigenvalue of Sigma + i Omega.
VectorXd symplectic_spectrum(const MatrixXd& sigma);
double uncertainty_margin(const MatrixXd& sigma);

// Quadratic-form matrices of H_S0, H_Sg, H_1 and H_E.
struct HamiltonianParts {
    MatrixXd s0, sg, coupling, bath;
};
HamiltonianParts hamiltonian_parts(const ModelParams& p);

// Normal-ordered <H_S0>, <H_Sg>, <H_1>; E_E is measured from its value in sigma0.
struct EnergyComponents {
    double e_s0{0.0};
    double e_sg{0.0};
    double e_1{0.0};
    double e_e{0.0};
    double total() const { return e_s0 + e_sg + e_1 + e_e; }
};
EnergyComponents energy_components(const MatrixXd& sigma, const MatrixXd& sigma0,
                                   const ModelParams& p);

// Per-time observables in O(n^2) from quantities precomputed in the eigenbasis.
class ExactObservables {
public:
    ExactObservables(const FullModel& m, const MatrixXd& sigma0, bool with_energies = true);

    Matrix4d system_covariance(double t) const;
    MomentState moments(double t) const;
    EnergyComponents energies(double t) const;

private:
    const FullModel* model_;
    MatrixXd sigma0_;
    MatrixXcd Vsys_;  // first four rows of V
    bool energies_{false};
    std::array<MatrixXcd, 4> weights_;  // (V^dag Q V)^T o (V^dag Sigma0 V) per energy part
    std::array<double, 4> offsets_{};
};

struct ExactRun {
    Trajectory trajectory;
    std::vector<EnergyComponents> energies;
};

ExactRun run_exact(const ModelParams& p, const std::vector<double>& times, bool with_energies = true);

} // namespace twomode
