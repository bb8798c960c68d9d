// fock_oracle.cpp — block-diagonal GKSL integration and direct Uhlmann fidelity

#include "twomode/fock_oracle.hpp"

#include <cmath>
#include <sstream>

#include <boost/numeric/odeint.hpp>

#include "twomode/errors.hpp"

namespace twomode {

namespace {

constexpr cplx I{0.0, 1.0};
using State = std::vector<cplx>;

// Coefficients of the generator in the interaction picture of w+ n+ + w- n-.
// Lowering part: sum_jk C_jk (L_j rho L_k^dag - {L_k^dag L_j, rho}/2) with L = (g+, g-),
// raising part the same with C' and F_j = L_j^dag, Hamiltonian sum_jk h_jk g_j^dag g_k.
struct Generator {
    Matrix2cd C, Cr, h;
    Vector2d omega;
};

Generator make_generator(const OracleScheme& sc, const ModelParams& p) {
    const CoefficientSet c = dissipator_coefficients(p);
    Generator G;
    G.omega = {c.omega_plus, c.omega_minus};
    const double ls = sc.lamb_shift ? 1.0 : 0.0;
    if (sc.kind == OracleScheme::Kind::Local) {
        const Matrix2cd ones = Matrix2cd::Constant(0.5);
        G.C = c.kappa0 * (1.0 + c.n0) * ones;
        G.Cr = c.kappa0 * c.n0 * ones;
        G.h = ls * c.delta_omega_A * ones;
        return G;
    }
    const double s = sc.kind == OracleScheme::Kind::Global ? 0.0 : sc.s;
    Matrix2cd S;
    S << 1.0, s, s, 1.0;
    G.C = S.cwiseProduct(c.gamma[1]);
    G.Cr = S.cwiseProduct(c.gamma[0]);
    G.h = ls * S.cwiseProduct(c.eta[0] + c.eta[1].transpose());
    return G;
}

std::vector<std::size_t> block_offsets(int K) {
    std::vector<std::size_t> off(K + 2, 0);
    for (int n = 0; n <= K; ++n) off[n + 1] = off[n] + static_cast<std::size_t>((n + 1) * (n + 1));
    return off;
}

class Rhs {
public:
    Rhs(const Generator& g, int K) : g_(g), K_(K), off_(block_offsets(K)), root_(K + 2), diag_(K + 1), hop_(K + 1) {
        for (int k = 0; k < K + 2; ++k) root_[k] = std::sqrt(double(k));
    }

    void operator()(const State& x, State& dx, double t) const {
        // phase factors e^{i (w_j - w_k) t}
        Matrix2cd ph;
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) ph(j, k) = std::polar(1.0, (g_.omega(j) - g_.omega(k)) * t);
        const Matrix2cd C = g_.C.cwiseProduct(ph.conjugate());
        const Matrix2cd Cr = g_.Cr.cwiseProduct(ph);
        const Matrix2cd h = g_.h.cwiseProduct(ph);

        const std::vector<double>& r = root_;  // r[k] = sqrt(k)
        for (int n = 0; n <= K_; ++n) {
            const int m = n + 1;
            const cplx* rho = x.data() + off_[n];
            const cplx* up = n < K_ ? x.data() + off_[n + 1] : nullptr;
            const cplx* lo = n > 0 ? x.data() + off_[n - 1] : nullptr;
            cplx* d = dx.data() + off_[n];

            // H_eff = sum_ab coef_ab g_a^dag g_b + shift, non-Hermitian part from the anticommutators
            Matrix2cd coef = h - 0.5 * I * C.transpose();
            cplx shift = 0.0;
            if (n < K_) {
                coef -= 0.5 * I * Cr;
                shift = -0.5 * I * Cr.trace();
            }
            // block basis index j = n-, n+ = n - j; hop(j) = <j| g+^dag g- |j+1> = sqrt((j+1)(n-j))
            for (int j = 0; j < m; ++j) {
                diag_[j] = coef(0, 0) * double(n - j) + coef(1, 1) * double(j) + shift;
                hop_[j] = j + 1 < m ? r[j + 1] * r[n - j] : 0.0;
            }
            const cplx h01 = coef(0, 1), h10 = coef(1, 0), h01c = std::conj(h01), h10c = std::conj(h10);

            for (int b = 0; b < m; ++b) {
                const cplx db = std::conj(diag_[b]);
                const cplx* col = rho + b * m;
                for (int a = 0; a < m; ++a) {
                    // H rho - rho H^dag, written out so it stays exact for non-Hermitian round-off
                    cplx hr = (diag_[a] - db) * col[a];
                    if (a + 1 < m) hr += h01 * (hop_[a] * col[a + 1]);
                    if (a > 0) hr += h10 * (hop_[a - 1] * col[a - 1]);
                    if (b + 1 < m) hr -= h01c * (hop_[b] * col[a + m]);
                    if (b > 0) hr -= h10c * (hop_[b - 1] * col[a - m]);
                    cplx v = cplx(hr.imag(), -hr.real());  // -i hr

                    if (up) {  // g_j rho g_k^dag from block n + 1
                        const cplx* u0 = up + b * (m + 1) + a;
                        const cplx* u1 = u0 + (m + 1);
                        const double pa = r[n + 1 - a], ma = r[a + 1], pb = r[n + 1 - b], mb = r[b + 1];
                        v += pb * (C(0, 0) * (pa * u0[0]) + C(1, 0) * (ma * u0[1])) +
                             mb * (C(0, 1) * (pa * u1[0]) + C(1, 1) * (ma * u1[1]));
                    }
                    if (lo) {  // g_j^dag rho g_k from block n - 1
                        auto yp = [&](int c) { return a < n ? r[n - a] * lo[a + c * n] : cplx{}; };
                        auto ym = [&](int c) { return a > 0 ? r[a] * lo[a - 1 + c * n] : cplx{}; };
                        if (b < n) v += r[n - b] * (Cr(0, 0) * yp(b) + Cr(1, 0) * ym(b));
                        if (b > 0) v += r[b] * (Cr(0, 1) * yp(b - 1) + Cr(1, 1) * ym(b - 1));
                    }
                    d[a + b * m] = v;
                }
            }
        }
    }

private:
    Generator g_;
    int K_;
    std::vector<std::size_t> off_;
    std::vector<double> root_;
    mutable std::vector<cplx> diag_;
    mutable std::vector<double> hop_;
};

State flatten(const TruncatedState& s) {
    const auto off = block_offsets(s.cutoff);
    State x(off.back());
    for (int n = 0; n <= s.cutoff; ++n)
        Eigen::Map<MatrixXcd>(x.data() + off[n], n + 1, n + 1) = s.blocks[n];
    return x;
}

// Back to the Schroedinger picture: rho_S = U rho_I U^dag with U = e^{-i (w+ n+ + w- n-) t}.
TruncatedState unflatten(const State& x, int K, const Vector2d& omega, double t) {
    const auto off = block_offsets(K);
    TruncatedState s;
    s.cutoff = K;
    s.blocks.resize(K + 1);
    for (int n = 0; n <= K; ++n) {
        VectorXcd u(n + 1);
        for (int j = 0; j <= n; ++j) u(j) = std::polar(1.0, -(omega(0) * (n - j) + omega(1) * j) * t);
        const Eigen::Map<const MatrixXcd> r(x.data() + off[n], n + 1, n + 1);
        s.blocks[n] = u.asDiagonal() * r * u.conjugate().asDiagonal();
    }
    return s;
}

MatrixXcd psd_sqrt(const MatrixXcd& rho) {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(0.5 * (rho + rho.adjoint()));
    const VectorXd ev = es.eigenvalues();
    if (ev.size() > 0 && ev.minCoeff() < -1e-8) {
        std::ostringstream os;
        os << "fidelity_truncated: non-physical input, eigenvalue " << ev.minCoeff();
        throw NumericalError(os.str());
    }
    return es.eigenvectors() * ev.cwiseMax(0.0).cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
}

} // namespace

double TruncatedState::trace() const {
    double t = 0.0;
    for (const auto& b : blocks) t += b.trace().real();
    return t;
}

MatrixXcd TruncatedState::dense() const {
    const int d = cutoff + 1;
    MatrixXcd out = MatrixXcd::Zero(d * d, d * d);
    for (int n = 0; n <= cutoff; ++n)
        for (int a = 0; a <= n; ++a)
            for (int b = 0; b <= n; ++b)
                out((n - a) * d + a, (n - b) * d + b) = blocks[n](a, b);
    return out;
}

int cutoff_for_occupation(double n_bar, double tol) {
    if (!(n_bar >= 0.0)) throw DomainError("cutoff_for_occupation: negative occupation");
    const double q = n_bar / (1.0 + n_bar);
    // total excitation of two independent geometric variables with ratio q
    double cdf = 0.0;
    for (int K = 0; K < 100000; ++K) {
        cdf += (K + 1) * (1.0 - q) * (1.0 - q) * std::pow(q, K);
        if (1.0 - cdf <= tol) return std::max(K, 1);
    }
    throw ValidationError("cutoff_for_occupation: occupation too large for a Fock oracle");
}

TruncatedState thermal_product_state(double n_plus, double n_minus, int cutoff) {
    if (cutoff < 1) throw ValidationError("thermal_product_state: cutoff must be at least 1");
    if (n_plus < 0.0 || n_minus < 0.0) throw DomainError("thermal_product_state: negative occupation");
    auto p = [](double n, int k) { return std::pow(n / (1.0 + n), k) / (1.0 + n); };
    TruncatedState s;
    s.cutoff = cutoff;
    s.blocks.resize(cutoff + 1);
    for (int n = 0; n <= cutoff; ++n) {
        VectorXcd d(n + 1);
        for (int j = 0; j <= n; ++j) d(j) = p(n_plus, n - j) * p(n_minus, j);
        s.blocks[n] = d.asDiagonal();
    }
    if (1.0 - s.trace() > 1e-8) {
        std::ostringstream os;
        os << "thermal_product_state: truncation at " << cutoff << " drops " << 1.0 - s.trace();
        throw ValidationError(os.str());
    }
    return s;
}

MomentState state_moments(const TruncatedState& rho) {
    MomentState m;
    for (int n = 0; n <= rho.cutoff; ++n) {
        const auto& b = rho.blocks[n];
        for (int j = 0; j <= n; ++j) {
            m.n_plus += (n - j) * b(j, j).real();
            m.n_minus += j * b(j, j).real();
            // <g+^dag g-> = tr(rho N_{+-}), N_{+-}(j-1, j) = sqrt(j (n - j + 1))
            if (j > 0) m.cross += std::sqrt(double(j) * (n - j + 1)) * b(j, j - 1);
        }
    }
    return m;
}

std::vector<TruncatedState> lindblad_propagate(const OracleScheme& scheme, const ModelParams& p,
                                               const TruncatedState& rho0,
                                               const std::vector<double>& times) {
    namespace odeint = boost::numeric::odeint;
    const Generator G = make_generator(scheme, p);
    const Rhs rhs(G, rho0.cutoff);
    State x = flatten(rho0);
    std::vector<TruncatedState> out;
    out.reserve(times.size());
    for (std::size_t i = 0; i < times.size(); ++i)
        if (!(times[i] >= 0.0) || (i > 0 && !(times[i] > times[i - 1])))
            throw ValidationError("time grid must be non-negative and strictly increasing");

    auto observe = [&](const State& s, double t) {
        out.push_back(unflatten(s, rho0.cutoff, G.omega, t));
        const double edge = out.back().blocks.back().trace().real();
        if (edge > 1e-6) {
            std::ostringstream os;
            os << "lindblad_propagate: population " << edge << " at cutoff " << rho0.cutoff
               << " (t = " << t << ")";
            throw NumericalError(os.str());
        }
    };
    std::vector<double> grid = times;
    const bool prepend = grid.empty() || grid.front() > 0.0;
    if (prepend) grid.insert(grid.begin(), 0.0);
    if (grid.size() == 1) {
        observe(x, 0.0);
    } else {
        auto stepper = odeint::make_dense_output(1e-10, 1e-10, odeint::runge_kutta_dopri5<State>());
        odeint::integrate_times(stepper, std::cref(rhs), x, grid.begin(), grid.end(), 1e-3,
                                observe);
    }
    if (prepend) out.erase(out.begin());
    return out;
}

TruncatedState lindblad_propagate(const OracleScheme& scheme, const ModelParams& p,
                                  const TruncatedState& rho0, double t) {
    return lindblad_propagate(scheme, p, rho0, std::vector<double>{t}).front();
}

double fidelity_truncated(const MatrixXcd& rho1, const MatrixXcd& rho2) {
    const MatrixXcd prod = psd_sqrt(rho1) * psd_sqrt(rho2);
    return Eigen::JacobiSVD<MatrixXcd>(prod).singularValues().sum();
}

double fidelity_truncated(const TruncatedState& rho1, const TruncatedState& rho2) {
    if (rho1.cutoff != rho2.cutoff) throw ValidationError("fidelity_truncated: cutoffs differ");
    double f = 0.0;
    for (int n = 0; n <= rho1.cutoff; ++n) f += fidelity_truncated(rho1.blocks[n], rho2.blocks[n]);
    return f;
}

} // namespace twomode
