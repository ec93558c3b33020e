#include <doctest.h>

#include <cmath>
#include <random>

#include "emvac/media.hpp"

using namespace emvac;
using doctest::Approx;

TEST_SUITE("media") {

TEST_CASE("Maxwell Garnett susceptibility at reference points") {
    CHECK(chi_mg(cdouble(0.3, 0.0)).real() == Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(chi_mg(cdouble(0.0, 0.0)) == cdouble(0.0, 0.0));
    CHECK_THROWS_AS(chi_mg(cdouble(3.0, 0.0)), ConfigError);
}

TEST_CASE("chi equals the vertex times the bare coupling") {
    // chi_MG = x L_LL(1 + chi_MG) for every x away from the pole
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (int i = 0; i < 500; ++i) {
        const cdouble x(u(gen), 0.3 * std::abs(u(gen)));
        if (std::abs(1.0 - x / 3.0) < 1e-3) continue;
        const cdouble chi = chi_mg(x);
        CHECK(std::abs(chi - x * lff_ll(1.0 + chi)) < 1e-12);
    }
}

TEST_CASE("local-field factors") {
    CHECK(lff_ll(cdouble(4.0, 0.0)).real() == Approx(2.0));
    CHECK(lff_ob(cdouble(4.0, 0.0)).real() == Approx(4.0 / 3.0));
    CHECK(lff_ll(cdouble(1.0, 0.0)).real() == Approx(1.0));
    CHECK(lff_ob(cdouble(1.0, 0.0)).real() == Approx(1.0));
    CHECK_THROWS_AS(lff_ob(cdouble(-0.5, 0.0)), ConfigError);
}

TEST_CASE("Lorentzian dielectric") {
    LorentzianDielectric d;
    d.f = 0.1;
    d.omega_res = 2.0;
    d.gamma = 0.01;
    d.validate();

    CHECK(eps_lorentzian(0.0, d).real() == Approx(1.1).epsilon(1e-15));
    const auto on_res = eps_lorentzian(2.0, d);
    CHECK(on_res.real() == Approx(1.0));
    CHECK(on_res.imag() == Approx(0.1 * 2.0 / 0.01));
    // passivity: Im eps >= 0 everywhere
    for (double w : {0.5, 1.9, 2.0, 2.1, 10.0})
        CHECK(eps_lorentzian(w, d).imag() >= 0.0);

    const auto wl = longitudinal_eps_zero(d);
    CHECK(wl.imag() == Approx(-0.005));
    // eps vanishes at the longitudinal root (complex continuation by hand)
    const cdouble w2 = wl * wl;
    const cdouble eps_at_root =
        1.0 + d.f * d.omega_res * d.omega_res /
                  (d.omega_res * d.omega_res - w2 - cdouble(0.0, 1.0) * wl * d.gamma);
    CHECK(std::abs(eps_at_root) < 1e-12);

    LorentzianDielectric bad = d;
    bad.f = 1.5;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad.f = -0.1;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = d;
    bad.gamma = 0.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("Lorentzian polarizability") {
    LorentzianPolarizability p;
    p.alpha0_tilde = 0.6;
    p.k_res = 2.0;
    p.gamma = 0.05;
    p.validate();

    CHECK(alpha_lorentzian(cdouble(0.0, 0.0), p).real() ==
          Approx(0.2).epsilon(1e-15));
    // on resonance the response is purely reactive-free: i a0 k_res / (3 gamma)
    const auto on_res = alpha_lorentzian(cdouble(p.k_res, 0.0), p);
    CHECK(on_res.real() == Approx(0.0).scale(1.0));
    CHECK(on_res.imag() ==
          Approx(p.alpha0_tilde * p.k_res / (3.0 * p.gamma)).epsilon(1e-12));

    // imaginary-axis combination entering Matsubara sums is real
    for (double u : {0.1, 0.7, 1.9, 3.4}) {
        const auto s = alpha_lorentzian(cdouble(0.0, u), p) +
                       alpha_lorentzian(cdouble(0.0, -u), p);
        CHECK(s.imag() == Approx(0.0).scale(std::abs(s.real())));
    }
}

TEST_CASE("quasi-static sphere and bare atom") {
    CHECK(alpha0_nanoparticle(1.0, cdouble(4.0, 0.0)).real() ==
          Approx(2.0 * pi).epsilon(1e-15));
    CHECK(alpha_bare_atom(0.0, 3.0, 0.9) == Approx(0.3).epsilon(1e-15));
    CHECK(alpha_bare_atom(3.0 * std::sqrt(2.0), 3.0, 0.9) ==
          Approx(-0.3).epsilon(1e-12));
}

TEST_CASE("medium validation") {
    MaxwellGarnettMedium m;
    m.rho = 0.05;
    m.alpha_tilde = cdouble(1.0, 0.0);
    m.xi = 1.0;
    m.validate();
    CHECK(m.packing_fraction() == Approx(0.05 * pi / 6.0).epsilon(1e-15));

    MaxwellGarnettMedium empty;
    empty.rho = 0.0;
    empty.validate();

    MaxwellGarnettMedium bad = m;
    bad.rho = -1.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = m;
    bad.xi = 0.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = m;
    bad.rho = 3.0;  // resonant Maxwell Garnett denominator
    bad.xi = 0.1;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = m;
    bad.rho = 2.0;  // packing fraction > 0.64 at xi = 1
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("susceptibility models") {
    const auto uni = UniformChiModel::from_eps(cdouble(4.0, 0.0));
    CHECK(uni.chi_perp(0.7, 1.0).real() == Approx(3.0));
    CHECK(uni.chi_par(5.0, 1.0).real() == Approx(3.0));
    // from_eps inverts Maxwell Garnett: x = chi / (1 + chi/3)
    CHECK(uni.rho_alpha(1.0).real() == Approx(1.5));
    CHECK(std::abs(chi_mg(uni.rho_alpha(1.0)) - cdouble(3.0, 0.0)) < 1e-14);

    const auto dil = UniformChiModel::from_dilute(cdouble(0.2, 0.01));
    CHECK(dil.chi_perp(1.0, 1.0) == cdouble(0.2, 0.01));
    CHECK(dil.rho_alpha(1.0) == cdouble(0.2, 0.01));

    VacuumModel vac;
    CHECK(vac.chi_perp(1.0, 1.0) == cdouble(0.0, 0.0));
    CHECK(vac.rho_alpha(1.0) == cdouble(0.0, 0.0));
}

TEST_CASE("windowed Maxwell Garnett model") {
    MaxwellGarnettMedium m;
    m.rho = 0.05;
    m.alpha_tilde = cdouble(1.0, 0.0);
    m.xi = 1.0;

    const auto w = windowed_mg_susceptibility(m);
    CHECK(w.q_c() == Approx(2.0 * pi));
    const cdouble x = m.rho * m.alpha_tilde;
    CHECK(std::abs(w.chi_perp(1.0, 1.0) - chi_mg(x)) < 1e-15);
    CHECK(std::abs(w.chi_perp(7.0, 1.0) - x) < 1e-15);
    CHECK(w.q_breakpoints(1.0) == std::vector<double>{w.q_c()});

    CHECK(default_hole_qc(2.0) == Approx(pi));
    CHECK(calibrated_hole_qc(1.0) ==
          Approx(std::cbrt(4.5 * pi)).epsilon(1e-15));
    CHECK(calibrated_hole_qc(1.0) == Approx(2.4179879).epsilon(1e-7));
    CHECK_THROWS_AS(default_hole_qc(0.0), ConfigError);

    const auto wc = windowed_mg_susceptibility(m, calibrated_hole_qc(m.xi));
    CHECK(wc.q_c() < w.q_c());
}

}  // TEST_SUITE
