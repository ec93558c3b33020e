#include <doctest.h>

#include <cmath>
#include <random>

#include "emvac/renormalization.hpp"
#include "emvac/spectral.hpp"

using namespace emvac;
using doctest::Approx;

namespace {

PhiFactors free_space_phi(double k) {
    PhiFactors phi;
    phi.phi0_perp = phi0_perp(k);
    phi.k = k;
    return phi;
}

}  // namespace

TEST_SUITE("renormalization") {

TEST_CASE("resonant bare polarizability is halved by radiative dressing") {
    const double k = 1.7;
    const cdouble alpha0 = cdouble(0.0, 6.0 * pi / (k * k * k));
    const cdouble at = renormalize_alpha(alpha0, free_space_phi(k));
    CHECK(std::abs(at - alpha0 / 2.0) < 1e-15 * std::abs(alpha0));
}

TEST_CASE("free-space optical theorem holds exactly") {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> ua(0.05, 20.0);
    std::uniform_real_distribution<double> uk(0.1, 4.0);
    for (int i = 0; i < 500; ++i) {
        const double k = uk(gen);
        const cdouble at =
            renormalize_alpha(cdouble(ua(gen), 0.0), free_space_phi(k));
        const double rhs = k * k * k / (6.0 * pi) * std::norm(at);
        CHECK(std::abs(at.imag() - rhs) <= 1e-14 * std::abs(at.imag()));
    }
}

TEST_CASE("power balance: total equals radiated plus absorbed") {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(0.1, 3.0);
    for (int i = 0; i < 300; ++i) {
        const double k = u(gen);
        const cdouble alpha0(3.0 * u(gen), u(gen));  // lossy dipole
        PhiFactors phi = free_space_phi(k);
        // embed in a lossless scattering background (negative Im)
        phi.phi_sc_perp = cdouble(0.1 * u(gen), -0.02 * u(gen));
        phi.phi_sc_par = cdouble(-0.05 * u(gen), -0.01 * u(gen));
        const auto p = stimulated_power(alpha0, phi, 2.0);
        CHECK(p.total ==
              Approx(p.radiated + p.absorbed).epsilon(1e-12));
        CHECK(p.radiated >= 0.0);
        CHECK(p.absorbed >= 0.0);
    }
}

TEST_CASE("lossless dipole absorbs nothing") {
    const auto p =
        stimulated_power(cdouble(2.0, 0.0), free_space_phi(1.3), 1.0);
    CHECK(p.absorbed == 0.0);
    CHECK(p.total == Approx(p.radiated).epsilon(1e-15));
}

TEST_CASE("vanishing scattering shift returns the bare resonance exactly") {
    const double alpha0 = 0.8;
    const double k0 = 2.0;
    const auto res = solve_kres(
        alpha0, k0, [](double k) { return free_space_phi(k); });
    CHECK(res.k_res == k0);  // bitwise: closed-form branch
    CHECK(res.gamma == res.gamma0);
    CHECK(res.gamma0 == alpha0 * k0 * k0 * k0 * k0 / (6.0 * pi));
    // on-resonance dressed value i alpha0_tilde k_res / (3 gamma)
    const cdouble expect =
        cdouble(0.0, res.alpha0_tilde * res.k_res / (3.0 * res.gamma));
    CHECK(std::abs(res.alpha_tilde - expect) < 1e-12 * std::abs(expect));
}

TEST_CASE("constant reactive shift moves the resonance as predicted") {
    const double alpha0 = 0.4;
    const double k0 = 1.0;
    const double s = -0.03;  // red shift
    auto phi_of_k = [&](double k) {
        PhiFactors phi = free_space_phi(k);
        phi.phi_sc_perp = cdouble(0.5 * s, 0.0);
        return phi;
    };
    const auto res = solve_kres(alpha0, k0, phi_of_k);
    const double exact = k0 / std::sqrt(1.0 - alpha0 * k0 * k0 * s / 3.0);
    CHECK(res.k_res == Approx(exact).epsilon(1e-10));
    CHECK(res.k_res < k0);
    // first-order expansion k0 (1 + alpha0 k0^2 s / 6)
    CHECK(res.k_res ==
          Approx(k0 * (1.0 + alpha0 * k0 * k0 * s / 6.0)).epsilon(1e-4));
    CHECK(res.gamma > 0.0);
}

TEST_CASE("no crossing in the bracket raises a numeric error") {
    const double alpha0 = 1.0;
    const double k0 = 1.0;
    auto phi_of_k = [&](double k) {
        PhiFactors phi = free_space_phi(k);
        // exactly cancels the (k/k0)^2 - 1 slope: no root anywhere
        phi.phi_sc_perp = cdouble(1.5 / (alpha0 * k0 * k0), 0.0);
        return phi;
    };
    CHECK_THROWS_AS(solve_kres(alpha0, k0, phi_of_k), NumericError);
}

TEST_CASE("self-consistent medium at zero density is the dressed vacuum") {
    const auto sc = self_consistent_medium(0.0, 1.0, 1.3, 1.0);
    const double k = 1.3;
    const cdouble expect =
        renormalize_alpha(cdouble(1.0, 0.0), free_space_phi(k));
    CHECK(std::abs(sc.alpha_tilde - expect) < 1e-12 * std::abs(expect));
}

TEST_CASE("self-consistent medium converges at benchmark density") {
    const auto sc = self_consistent_medium(0.05, 1.0, 0.2, 1.0);
    CHECK(sc.residual < 1e-10);
    CHECK(sc.iterations < 100);
    // radiative broadening survives dressing
    CHECK(sc.alpha_tilde.imag() > 0.0);
    // weak coupling: dressed value stays near alpha0
    CHECK(std::abs(sc.alpha_tilde - 1.0) < 0.1);
    CHECK(sc.medium.rho == 0.05);
    CHECK(std::abs(sc.medium.alpha_tilde - sc.alpha_tilde) == 0.0);
}

}  // TEST_SUITE
