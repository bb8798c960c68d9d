// exact.cpp — exact covariance dynamics of the system + bath model

#include "twomode/exact.hpp"

#include <cmath>
#include <sstream>

#include <unsupported/Eigen/KroneckerProduct>

#include "twomode/errors.hpp"
#include "twomode/gaussian.hpp"

namespace twomode {

namespace {

constexpr cplx I{0.0, 1.0};

// (M+2) x (M+2) coupling matrix; H = K (x) I_2.
MatrixXd arrow_matrix(const ModelParams& p, const std::vector<BathMode>& modes) {
    const Eigen::Index n = static_cast<Eigen::Index>(modes.size()) + 2;
    MatrixXd K = MatrixXd::Zero(n, n);
    K(0, 0) = K(1, 1) = p.omega0;
    K(0, 1) = K(1, 0) = p.g;
    for (std::size_t k = 0; k < modes.size(); ++k) {
        const Eigen::Index j = static_cast<Eigen::Index>(k) + 2;
        K(j, j) = modes[k].omega;
        K(0, j) = K(j, 0) = modes[k].coupling;
    }
    return K;
}

MatrixXd expand(const MatrixXd& K) { return Eigen::kroneckerProduct(K, Matrix2d::Identity()); }

VectorXcd phases(const VectorXd& g, double t) {
    return (-I * t * g.cast<cplx>()).array().exp().matrix();
}

} // namespace

MatrixXd symplectic_form(Eigen::Index n_modes) {
    MatrixXd O = MatrixXd::Zero(2 * n_modes, 2 * n_modes);
    for (Eigen::Index k = 0; k < n_modes; ++k) {
        O(2 * k, 2 * k + 1) = 1.0;
        O(2 * k + 1, 2 * k) = -1.0;
    }
    return O;
}

FullModel build_full_model(const ModelParams& p) {
    p.validate();
    FullModel m;
    m.params = p;
    m.modes = bath_modes(p);
    m.H = expand(arrow_matrix(p, m.modes));
    m.Omega = symplectic_form(p.M + 2);
    const MatrixXcd Mh = I * (m.Omega * m.H).cast<cplx>();
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(Mh);
    if (es.info() != Eigen::Success) {
        std::ostringstream os;
        os << "build_full_model: eigensolver failed for dimension " << Mh.rows()
           << ", hermitian defect " << hermitian_defect(Mh);
        throw NumericalError(os.str());
    }
    m.eigenvalues = es.eigenvalues();
    m.V = es.eigenvectors();
    return m;
}

MatrixXd initial_covariance(const ModelParams& p) {
    VectorXd d(2 * p.M + 4);
    d.head<4>().setOnes();
    const double bin = p.omega_c / p.M;
    for (int k = 1; k <= p.M; ++k) {
        const double n = bose_factor(k * bin, p.beta);
        d(2 * k + 2) = d(2 * k + 3) = 2.0 * n + 1.0;
    }
    return d.asDiagonal();
}

MatrixXd symplectic_propagator(const FullModel& m, double t) {
    const MatrixXcd S = m.V * phases(m.eigenvalues, t).asDiagonal() * m.V.adjoint();
    const double residue = S.imag().cwiseAbs().maxCoeff();
    if (residue > 1e-8) {
        std::ostringstream os;
        os << "symplectic_propagator: imaginary residue " << residue << " at t = " << t;
        throw NumericalError(os.str());
    }
    return S.real();
}

MatrixXd propagate_exact(const FullModel& m, const MatrixXd& sigma0, double t) {
    const VectorXcd em = phases(m.eigenvalues, t);
    const MatrixXcd B = m.V.adjoint() * sigma0.cast<cplx>() * m.V;
    const MatrixXcd Sig =
        m.V * (em.asDiagonal() * B * em.conjugate().asDiagonal()) * m.V.adjoint();
    const double residue = Sig.imag().cwiseAbs().maxCoeff();
    if (residue > 1e-8 * std::max(1.0, Sig.real().cwiseAbs().maxCoeff())) {
        std::ostringstream os;
        os << "propagate_exact: imaginary residue " << residue << " at t = " << t;
        throw NumericalError(os.str());
    }
    MatrixXd out = Sig.real();
    return 0.5 * (out + out.transpose());
}

MomentState system_moments(const Eigen::Ref<const MatrixXd>& sigma) {
    if (sigma.rows() < 4 || sigma.cols() < 4)
        throw ValidationError("system_moments: covariance smaller than 4x4");
    const Matrix4d S = sigma.topLeftCorner<4, 4>();
    if ((S - S.transpose()).cwiseAbs().maxCoeff() > 1e-9 * std::max(1.0, S.cwiseAbs().maxCoeff()))
        throw ValidationError("system_moments: system block is not symmetric");
    const Matrix4cd U = quadrature_unitary();
    const Matrix4cd G = U.adjoint() * S.cast<cplx>() * U;
    return moments_from_covariance(G);
}

VectorXd symplectic_spectrum(const MatrixXd& sigma) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(sigma);
    const MatrixXd root = es.operatorSqrt();
    const MatrixXcd K = I * (root * symplectic_form(sigma.rows() / 2) * root).cast<cplx>();
    Eigen::SelfAdjointEigenSolver<MatrixXcd> ks(K, Eigen::EigenvaluesOnly);
    // eigenvalues come in +-nu pairs; the upper half is the spectrum
    return ks.eigenvalues().tail(sigma.rows() / 2);
}

double uncertainty_margin(const MatrixXd& sigma) {
    const MatrixXcd K = sigma.cast<cplx>() + I * symplectic_form(sigma.rows() / 2).cast<cplx>();
    return Eigen::SelfAdjointEigenSolver<MatrixXcd>(K, Eigen::EigenvaluesOnly).eigenvalues()(0);
}

HamiltonianParts hamiltonian_parts(const ModelParams& p) {
    const auto modes = bath_modes(p);
    const Eigen::Index n = p.M + 2;
    MatrixXd s0 = MatrixXd::Zero(n, n), sg = s0, c = s0, e = s0;
    s0(0, 0) = s0(1, 1) = p.omega0;
    sg(0, 1) = sg(1, 0) = p.g;
    for (Eigen::Index k = 0; k < p.M; ++k) {
        c(0, k + 2) = c(k + 2, 0) = modes[k].coupling;
        e(k + 2, k + 2) = modes[k].omega;
    }
    return {expand(s0), expand(sg), expand(c), expand(e)};
}

EnergyComponents energy_components(const MatrixXd& sigma, const MatrixXd& sigma0,
                                   const ModelParams& p) {
    const auto h = hamiltonian_parts(p);
    auto quarter_trace = [](const MatrixXd& Q, const MatrixXd& S) {
        return 0.25 * Q.cwiseProduct(S).sum();
    };
    const MatrixXd vac = MatrixXd::Identity(sigma.rows(), sigma.cols());
    return {quarter_trace(h.s0, sigma - vac), quarter_trace(h.sg, sigma),
            quarter_trace(h.coupling, sigma), quarter_trace(h.bath, sigma - sigma0)};
}

ExactObservables::ExactObservables(const FullModel& m, const MatrixXd& sigma0, bool with_energies)
    : model_(&m), sigma0_(sigma0), Vsys_(m.V.topRows(4)), energies_(with_energies) {
    if (!with_energies) return;
    const MatrixXcd B = m.V.adjoint() * sigma0.cast<cplx>() * m.V;
    const auto h = hamiltonian_parts(m.params);
    const MatrixXcd Vs = m.V.topRows(4);
    const MatrixXcd VA = m.V.topRows(2);

    // V^dag Q V using the sparsity of each part
    MatrixXcd A_s0 = Vs.adjoint() * h.s0.topLeftCorner(4, 4).cast<cplx>() * Vs;
    MatrixXcd A_sg = Vs.adjoint() * h.sg.topLeftCorner(4, 4).cast<cplx>() * Vs;
    const MatrixXcd R = h.coupling.topRows(2).cast<cplx>() * m.V;  // rows x_A, p_A of Q_1 V
    MatrixXcd A_1 = VA.adjoint() * R;
    A_1 += A_1.adjoint().eval();
    const VectorXd be = h.bath.diagonal();
    MatrixXcd A_e = m.V.adjoint() * (be.cast<cplx>().asDiagonal() * m.V);

    const std::array<const MatrixXcd*, 4> A{&A_s0, &A_sg, &A_1, &A_e};
    for (int i = 0; i < 4; ++i) weights_[i] = A[i]->transpose().cwiseProduct(B);

    offsets_[0] = 0.25 * h.s0.trace();
    offsets_[1] = 0.0;
    offsets_[2] = 0.0;
    offsets_[3] = 0.25 * h.bath.cwiseProduct(sigma0).sum();
}

Matrix4d ExactObservables::system_covariance(double t) const {
    const MatrixXcd S = Vsys_ * phases(model_->eigenvalues, t).asDiagonal() * model_->V.adjoint();
    const double residue = S.imag().cwiseAbs().maxCoeff();
    if (residue > 1e-8) {
        std::ostringstream os;
        os << "exact propagation: imaginary residue " << residue << " at t = " << t;
        throw NumericalError(os.str());
    }
    const MatrixXd Sr = S.real();
    Matrix4d out = Sr * sigma0_ * Sr.transpose();
    return 0.5 * (out + out.transpose());
}

MomentState ExactObservables::moments(double t) const { return system_moments(system_covariance(t)); }

EnergyComponents ExactObservables::energies(double t) const {
    if (!energies_) throw ValidationError("ExactObservables: built without energy support");
    const VectorXcd u = phases(model_->eigenvalues, t);
    const VectorXcd v = u.conjugate();
    std::array<double, 4> e{};
    for (int i = 0; i < 4; ++i) e[i] = 0.25 * (u.transpose() * weights_[i] * v).value().real() - offsets_[i];
    return {e[0], e[1], e[2], e[3]};
}

ExactRun run_exact(const ModelParams& p, const std::vector<double>& times, bool with_energies) {
    const FullModel m = build_full_model(p);
    const MatrixXd sigma0 = initial_covariance(p);
    const ExactObservables obs(m, sigma0, with_energies);
    ExactRun run;
    run.trajectory.scheme = "exact";
    run.trajectory.times = times;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!(times[i] >= 0.0) || (i > 0 && !(times[i] > times[i - 1])))
            throw ValidationError("time grid must be non-negative and strictly increasing");
        run.trajectory.states.push_back(obs.moments(times[i]));
        if (with_energies) run.energies.push_back(obs.energies(times[i]));
    }
    return run;
}

} // namespace twomode
