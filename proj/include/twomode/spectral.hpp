// spectral.hpp — model parameters, discretized bath, spectral functions and
// dissipator coefficients of the two-oscillator / one-sided-bath model.
//
// Units: everything is expressed in units of omega0 when serialized; internally
// omega0 is carried explicitly so the formulas stay dimensionally honest.

#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "twomode/types.hpp"

namespace twomode {

struct ModelParams {
    double omega0{1.0};        // common bare frequency of A and B
    double g{0.3};             // A-B exchange coupling
    double kappa0{0.04};       // kappa(omega0)
    double omega_c{3.0};       // hard cutoff of the bath band
    double alpha{1.0};         // spectral exponent (1 = Ohmic)
    double beta{std::log1p(0.1)}; // inverse temperature; N(omega0) = 10
    int M{400};                // number of bath modes
    double delta_t{0.0};       // coarse-grain interval; +inf means full secular limit
    double mixture_rate{0.016};   // convex-mixture rate, 0.4 kappa0 by default

    double omega_plus() const { return omega0 + g; }
    double omega_minus() const { return omega0 - g; }

    // Temperature parametrized through the occupation of the bare mode.
    void set_occupation0(double n0);
    double occupation0() const;

    // Throws ValidationError when an invariant is violated.
    void validate() const;
};

// Inverse temperature giving N(omega) = n.
double beta_from_occupation(double n, double omega);

// 1 / (exp(beta omega) - 1).
double bose_factor(double omega, double beta);

// kappa(omega) = kappa0 (omega/omega0)^alpha Theta(omega_c - omega).
double spectral_density(double omega, const ModelParams& p);

struct BathMode {
    double omega;
    double coupling;
};

// Equally spaced modes omega_k = k omega_c / M with couplings reproducing kappa(omega).
std::vector<BathMode> bath_modes(const ModelParams& p);

enum class CorrelationKind { Absorption = 1, Emission = 2 };

// c1(tau) = sum_k gamma_k^2 N_k e^{i(omega_k - omega0) tau},
// c2(tau) = sum_k gamma_k^2 (1 + N_k) e^{-i(omega_k - omega0) tau}.
cplx correlation_function(CorrelationKind kind, double tau, const ModelParams& p);
cplx correlation_function(CorrelationKind kind, double tau, const std::vector<BathMode>& modes,
                          const ModelParams& p);

// 2 pi M / omega_c.
double recurrence_time(const ModelParams& p);

// Half width at half maximum of |c1(tau)|. Throws NumericalError if |c1| does not
// drop below half its peak before T_rec / 2.
double memory_time(const ModelParams& p);

// True when the memory time is short enough compared with the recurrence time
// (tau_E <= T_rec / 4) to be trusted.
bool memory_time_resolved(double tau, const ModelParams& p);

enum class PvWeight {
    Occupation,         // kappa(e) N(e) / 2 pi
    OnePlusOccupation,  // kappa(e) [1 + N(e)] / 2 pi
    Bare                // kappa(e) / 2 pi
};

// Cauchy principal value of int_0^omega_c f(e) / (e - omega_target) de.
// Requires 0 < omega_target < omega_c.
double pv_integral(PvWeight weight, double omega_target, const ModelParams& p);

// Weight function f(e) used by pv_integral (exposed for tests and the gap formula).
double pv_weight(PvWeight weight, double e, const ModelParams& p);

struct CoefficientSet {
    // gamma[i](s, s'), eta[i](s, s') for i = 0 -> superscript (1), i = 1 -> (2);
    // index 0 is the '+' eigenmode, 1 is '-'.
    std::array<Matrix2cd, 2> gamma;
    std::array<Matrix2cd, 2> eta;
    double delta_omega_plus{0.0};
    double delta_omega_minus{0.0};
    double delta_omega_A{0.0};
    double s_offdiag{1.0};

    // Quantities the moment equations need alongside the tensors.
    double g{0.0};
    double omega_plus{0.0};
    double omega_minus{0.0};
    double kappa_plus{0.0};
    double kappa_minus{0.0};
    double kappa0{0.0};
    double n_plus{0.0};   // N(omega_+)
    double n_minus{0.0};  // N(omega_-)
    double n0{0.0};       // N(omega0)
};

// Off-diagonal reconstruction from the diagonals:
//   gamma_ss' = (gamma_ss + gamma_s's')/2 + i (eta_ss - eta_s's')
//   eta_ss'   = -i (gamma_ss - gamma_s's')/4 + (eta_ss + eta_s's')/2
struct RateTensors {
    Matrix2cd gamma;
    Matrix2cd eta;
};
RateTensors reconstruct_rates(const Vector2d& gamma_diag, const Vector2d& eta_diag);

CoefficientSet dissipator_coefficients(const ModelParams& p);

// sinc(x) with sinc(0) = 1 and sinc(+inf) = 0.
double sinc(double x);

// S_ss' = delta_ss' + (1 - delta_ss') sinc(g delta_t).
Matrix2d secular_filter(double delta_t, double g);

// Block-diagonal 4x4 Kossakowski matrix of the coarse-grained dissipator at filter value s.
Matrix4cd dissipation_matrix(const CoefficientSet& c, double s);

struct CpThreshold {
    double bound{1.0};                 // min over channels, clamped to 1
    std::array<double, 2> per_channel; // unclamped sqrt(g++ g-- / |g+-|^2) for i = 1, 2
    Matrix4cd dissipation_matrix;      // assembled at s = bound
};

CpThreshold cp_threshold(const CoefficientSet& c);
CpThreshold cp_threshold(const ModelParams& p);

} // namespace twomode
