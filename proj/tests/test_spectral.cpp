// test_spectral.cpp — bath discretization, correlation functions, Lamb-shift integrals, CP bound

#include <doctest.h>

#include <thread>

#include "oracles.hpp"
#include "twomode/errors.hpp"
#include "twomode/spectral.hpp"

using namespace twomode;

namespace {

ModelParams fig4() { return ModelParams{}; }

double min_eig(const Matrix4cd& D) {
    return Eigen::SelfAdjointEigenSolver<Matrix4cd>(D, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
}

} // namespace

TEST_CASE("bose factor") {
    CHECK(bose_factor(1.0, std::log(1.1)) == doctest::Approx(10.0).epsilon(1e-13));
    CHECK(bose_factor(1.0, std::log(2.0)) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(bose_factor(1.0, 60.0) < 1e-12);
    double prev = bose_factor(0.01, 0.3);
    for (int i = 2; i < 300; ++i) {
        const double n = bose_factor(0.01 * i, 0.3);
        CHECK(n < prev);
        CHECK(bose_factor(0.01 * i, 0.31) < n);
        prev = n;
    }
    CHECK_THROWS_AS(bose_factor(0.0, 1.0), DomainError);
    CHECK_THROWS_AS(bose_factor(1.0, -1.0), DomainError);
}

TEST_CASE("temperature parametrizations round-trip") {
    ModelParams p;
    for (double n : {0.01, 0.5, 1.0, 10.0, 123.0}) {
        p.set_occupation0(n);
        CHECK(p.occupation0() == doctest::Approx(n).epsilon(1e-12));
        CHECK(bose_factor(p.omega0, p.beta) == doctest::Approx(n).epsilon(1e-12));
    }
    CHECK(fig4().occupation0() == doctest::Approx(10.0).epsilon(1e-13));
}

TEST_CASE("parameter validation") {
    ModelParams p;
    CHECK_NOTHROW(p.validate());
    p.g = 1.0;
    CHECK_THROWS_AS(p.validate(), ValidationError);
    p = fig4();
    p.omega_c = 1.3;
    CHECK_THROWS_AS(p.validate(), ValidationError);
    p = fig4();
    p.kappa0 = 0.0;
    CHECK_THROWS_AS(p.validate(), ValidationError);
    p = fig4();
    p.M = 0;
    CHECK_THROWS_AS(p.validate(), ValidationError);
    p = fig4();
    p.delta_t = -1.0;
    CHECK_THROWS_AS(p.validate(), ValidationError);
}

TEST_CASE("spectral density") {
    const ModelParams p = fig4();
    CHECK(spectral_density(1.0, p) == doctest::Approx(p.kappa0));
    CHECK(spectral_density(2.0, p) == doctest::Approx(2.0 * p.kappa0));
    CHECK(spectral_density(3.0, p) == doctest::Approx(3.0 * p.kappa0));
    CHECK(spectral_density(3.5, p) == 0.0);
    CHECK(spectral_density(3.0 + 1e-12, p) == 0.0);
    for (int i = 1; i < 299; ++i) CHECK(spectral_density(0.01 * (i + 1), p) > spectral_density(0.01 * i, p));
}

TEST_CASE("bath modes") {
    ModelParams p = fig4();
    p.M = 50;
    const auto modes = bath_modes(p);
    REQUIRE(modes.size() == 50u);
    CHECK(modes.back().omega == doctest::Approx(p.omega_c).epsilon(1e-15));
    const auto ref = oracle::couplings(p.kappa0, p.omega0, p.omega_c, p.alpha, p.M);
    for (int k = 0; k < p.M; ++k) {
        CHECK(modes[k].omega == doctest::Approx(p.omega_c * (k + 1) / p.M).epsilon(1e-15));
        CHECK(modes[k].coupling == doctest::Approx(ref[k]).epsilon(1e-14));
        CHECK(modes[k].coupling >= 0.0);
    }
    CHECK(modes[0].coupling ==
          doctest::Approx(std::sqrt(0.04 * (3.0 / 50.0) * 3.0 / (2.0 * pi * 50.0))).epsilon(1e-14));

    // Riemann sum of 2 pi gamma_k^2 per unit frequency around omega0 recovers kappa0
    p.M = 10000;
    double sum = 0.0;
    const double half = 0.05;
    for (const auto& m : bath_modes(p))
        if (std::abs(m.omega - p.omega0) <= half) sum += 2.0 * pi * m.coupling * m.coupling;
    CHECK(sum / (2.0 * half) == doctest::Approx(p.kappa0).epsilon(0.01));
}

TEST_CASE("correlation functions") {
    ModelParams p = fig4();
    p.M = 50;
    const double T = recurrence_time(p);
    CHECK(T == doctest::Approx(2.0 * pi * 50.0 / 3.0).epsilon(1e-14));
    CHECK(T == doctest::Approx(104.72).epsilon(1e-4));
    for (auto kind : {CorrelationKind::Absorption, CorrelationKind::Emission}) {
        const cplx c0 = correlation_function(kind, 0.0, p);
        CHECK(c0.real() > 0.0);
        CHECK(std::abs(c0.imag()) == 0.0);
        for (double tau : {0.0, 0.3, 1.7, 12.5, 40.0}) {
            const double a = std::abs(correlation_function(kind, tau, p));
            const double b = std::abs(correlation_function(kind, tau + T, p));
            CHECK(std::abs(a - b) <= 1e-12);
        }
    }
    double direct = 0.0;
    for (const auto& m : bath_modes(p)) direct += m.coupling * m.coupling * bose_factor(m.omega, p.beta);
    CHECK(correlation_function(CorrelationKind::Absorption, 0.0, p).real() == doctest::Approx(direct).epsilon(1e-14));
    for (double tau : {0.4, 3.3}) {
        const cplx a = std::conj(correlation_function(CorrelationKind::Emission, tau, p));
        const cplx b = correlation_function(CorrelationKind::Emission, -tau, p);
        CHECK(std::abs(a - b) <= 1e-14);
    }
}

TEST_CASE("memory time") {
    ModelParams p = fig4();
    const double tau = memory_time(p);
    CHECK(tau == doctest::Approx(3.8 / p.omega_c).epsilon(0.10));
    CHECK(memory_time_resolved(tau, p));
    p.M = 800;
    CHECK(memory_time(p) == doctest::Approx(tau).epsilon(0.02));
    CHECK(recurrence_time(p) == doctest::Approx(2.0 * recurrence_time(fig4())).epsilon(1e-14));
}

TEST_CASE("principal values against the closed form") {
    const ModelParams p = fig4();
    // P int_0^3 (k0/2pi) e / (e - 1) de = (k0/2pi)(3 + ln 2)
    const double bare = pv_integral(PvWeight::Bare, 1.0, p);
    CHECK(std::abs(bare - p.kappa0 / (2.0 * pi) * (3.0 + std::log(2.0))) <= 1e-8);
    const auto c = dissipator_coefficients(p);
    CHECK(c.delta_omega_A == doctest::Approx(-0.023511).epsilon(1e-4));
    CHECK(std::abs(c.delta_omega_A + p.kappa0 / (2.0 * pi) * (3.0 + std::log(2.0))) <= 1e-8);
    // general target: (k0/2pi)(wc + w ln((wc - w)/w))
    for (double w : {0.3, 0.7, 1.3, 2.5}) {
        const double ref = p.kappa0 / (2.0 * pi) * (p.omega_c + w * std::log((p.omega_c - w) / w));
        CHECK(std::abs(pv_integral(PvWeight::Bare, w, p) - ref) <= 1e-8);
    }
}

TEST_CASE("principal values against symmetric-exclusion quadrature") {
    for (double alpha : {0.5, 1.0, 2.0}) {
        ModelParams p = fig4();
        p.alpha = alpha;
        for (auto w : {PvWeight::Occupation, PvWeight::OnePlusOccupation, PvWeight::Bare}) {
            for (double target : {p.omega_minus(), 1.0, p.omega_plus()}) {
                const double ref = oracle::pv([&](double e) { return pv_weight(w, e, p); }, target, 0.0, p.omega_c);
                const double v = pv_integral(w, target, p);
                INFO("alpha " << alpha << " weight " << int(w) << " target " << target);
                CHECK(std::abs(v - ref) <= 1e-6);
            }
        }
    }
}

TEST_CASE("principal value edge cases") {
    ModelParams p = fig4();
    CHECK_THROWS_AS(pv_integral(PvWeight::Bare, 0.0, p), DomainError);
    CHECK_THROWS_AS(pv_integral(PvWeight::Bare, p.omega_c, p), DomainError);
    CHECK_THROWS_AS(pv_integral(PvWeight::Bare, 4.0, p), DomainError);
    // odd integrand about the pole
    p.alpha = 0.0;
    CHECK(std::abs(pv_integral(PvWeight::Bare, 0.5 * p.omega_c, p)) <= 1e-14);
    CHECK_THROWS_AS(pv_integral(PvWeight::Occupation, 1.0, p), DomainError);
    // weights vanish beyond the cutoff
    CHECK(pv_weight(PvWeight::Occupation, 3.2, fig4()) == 0.0);
}

TEST_CASE("dissipator coefficients") {
    const ModelParams p = fig4();
    const auto c = dissipator_coefficients(p);
    for (int s : {0, 1}) {
        const double w = s == 0 ? p.omega_plus() : p.omega_minus();
        const double k = spectral_density(w, p), n = bose_factor(w, p.beta);
        for (int i = 0; i < 2; ++i) {
            CHECK(c.gamma[i](s, s).imag() == 0.0);
            CHECK(c.eta[i](s, s).imag() == 0.0);
            CHECK(c.gamma[i](s, s).real() >= 0.0);
        }
        CHECK(c.gamma[0](s, s).real() == doctest::Approx(0.5 * k * n).epsilon(1e-14));
        CHECK(c.gamma[1](s, s).real() == doctest::Approx(0.5 * k * (1 + n)).epsilon(1e-14));
        CHECK((c.gamma[1](s, s) - c.gamma[0](s, s)).real() == doctest::Approx(0.5 * k).epsilon(1e-13));
        CHECK(c.eta[0](s, s).real() == doctest::Approx(0.5 * pv_integral(PvWeight::Occupation, w, p)).epsilon(1e-13));
        CHECK(c.eta[1](s, s).real() ==
              doctest::Approx(-0.5 * pv_integral(PvWeight::OnePlusOccupation, w, p)).epsilon(1e-13));
    }
    CHECK(c.delta_omega_plus == doctest::Approx((c.eta[0](0, 0) + c.eta[1](0, 0)).real()).epsilon(1e-13));
    CHECK(c.delta_omega_minus == doctest::Approx((c.eta[0](1, 1) + c.eta[1](1, 1)).real()).epsilon(1e-13));
    CHECK(c.delta_omega_plus == doctest::Approx(-0.5 * pv_integral(PvWeight::Bare, p.omega_plus(), p)).epsilon(1e-9));
    CHECK(std::abs(c.delta_omega_plus - c.delta_omega_minus) > 1e-4);
    CHECK(c.s_offdiag == 1.0);

    // off-diagonals obey the reconstruction identities
    const cplx I{0, 1};
    for (int i = 0; i < 2; ++i) {
        const auto& G = c.gamma[i];
        const auto& E = c.eta[i];
        CHECK(std::abs(G(0, 1) - (0.5 * (G(0, 0) + G(1, 1)) + I * (E(0, 0) - E(1, 1)))) <= 1e-15);
        CHECK(std::abs(G(1, 0) - (0.5 * (G(0, 0) + G(1, 1)) + I * (E(1, 1) - E(0, 0)))) <= 1e-15);
        CHECK(std::abs(E(0, 1) - (-0.25 * I * (G(0, 0) - G(1, 1)) + 0.5 * (E(0, 0) + E(1, 1)))) <= 1e-15);
    }
}

TEST_CASE("reconstruction round trip") {
    const Vector2d gd(0.37, 0.81), ed(-0.12, 0.05);
    const auto r = reconstruct_rates(gd, ed);
    CHECK(r.gamma(0, 0) == cplx(gd(0), 0.0));
    CHECK(r.gamma(1, 1) == cplx(gd(1), 0.0));
    CHECK(r.eta(0, 0) == cplx(ed(0), 0.0));
    CHECK(r.eta(1, 1) == cplx(ed(1), 0.0));
    const auto again = reconstruct_rates(r.gamma.diagonal().real(), r.eta.diagonal().real());
    CHECK((again.gamma - r.gamma).norm() == 0.0);
    CHECK((again.eta - r.eta).norm() == 0.0);
}

TEST_CASE("zero coupling collapses the tensors") {
    ModelParams p = fig4();
    p.g = 0.0;
    const auto c = dissipator_coefficients(p);
    for (int i = 0; i < 2; ++i) {
        CHECK(std::abs(c.gamma[i](0, 0) - c.gamma[i](1, 1)) <= 1e-15);
        CHECK(std::abs(c.gamma[i](0, 1) - c.gamma[i](0, 0)) <= 1e-15);
        CHECK(std::abs(c.eta[i](0, 1) - c.eta[i](0, 0)) <= 1e-15);
    }
}

TEST_CASE("secular filter") {
    CHECK(secular_filter(0.0, 0.3)(0, 1) == 1.0);
    CHECK(std::abs(secular_filter(pi / 0.3, 0.3)(0, 1)) <= 1e-15);
    const Matrix2d inf = secular_filter(std::numeric_limits<double>::infinity(), 0.3);
    CHECK(inf == Matrix2d::Identity());
    CHECK(secular_filter(5.0, 0.3)(0, 0) == 1.0);
    CHECK(secular_filter(5.0, 0.3)(1, 0) == doctest::Approx(std::sin(1.5) / 1.5).epsilon(1e-15));
}

TEST_CASE("complete-positivity threshold") {
    ModelParams p = fig4();
    CHECK(cp_threshold(p).bound == doctest::Approx(0.989).epsilon(0.001 / 0.989));
    p.g = 0.04;
    CHECK(cp_threshold(p).bound == doctest::Approx(0.9998).epsilon(0.001 / 0.9998));
    p = fig4();
    p.set_occupation0(0.01);
    CHECK(std::abs(cp_threshold(p).bound - 0.4813) <= 1e-4);

    for (double n0 : {10.0, 0.01, 1.0}) {
        p = fig4();
        p.set_occupation0(n0);
        const auto c = dissipator_coefficients(p);
        const auto cp = cp_threshold(c);
        CHECK(std::abs(min_eig(cp.dissipation_matrix)) <= 1e-10);
        CHECK(min_eig(dissipation_matrix(c, cp.bound * (1.0 + 1e-3))) < 0.0);
        CHECK(min_eig(dissipation_matrix(c, 0.5 * cp.bound)) > 0.0);
        CHECK(hermitian_defect(cp.dissipation_matrix) <= 1e-15);
    }

    double prev = 0.0;
    for (double g : {0.2, 0.1, 0.03, 0.01, 0.001}) {
        p = fig4();
        p.g = g;
        const double b = cp_threshold(p).bound;
        CHECK(b > prev);
        CHECK(b <= 1.0);
        prev = b;
    }
    CHECK(prev == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("threshold with vanishing off-diagonal rates") {
    CoefficientSet c;
    c.gamma[0] = c.gamma[1] = Matrix2cd::Zero();
    c.gamma[0](0, 0) = c.gamma[0](1, 1) = c.gamma[1](0, 0) = c.gamma[1](1, 1) = 0.1;
    CHECK(cp_threshold(c).bound == 1.0);
}

TEST_CASE("coefficients are safe to compute concurrently") {
    const auto ref = dissipator_coefficients(fig4());
    std::vector<CoefficientSet> out(4);
    std::vector<std::thread> pool;
    for (int i = 0; i < 4; ++i) pool.emplace_back([&out, i] { out[i] = dissipator_coefficients(fig4()); });
    for (auto& t : pool) t.join();
    for (const auto& c : out) {
        CHECK(c.delta_omega_A == ref.delta_omega_A);
        CHECK((c.eta[0] - ref.eta[0]).norm() == 0.0);
    }
}
