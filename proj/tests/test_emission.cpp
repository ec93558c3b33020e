#include <doctest.h>

#include <cmath>

#include "emvac/emission.hpp"
#include "emvac/media.hpp"
#include "emvac/propagators.hpp"

using namespace emvac;
using doctest::Approx;

namespace {

MaxwellGarnettMedium medium_for_index(double n) {
    const double eps = n * n;
    MaxwellGarnettMedium m;
    m.rho = 3.0 * (eps - 1.0) / (eps + 2.0);
    m.alpha_tilde = cdouble(1.0, 0.0);
    m.xi = 0.05;
    m.validate();
    return m;
}

}  // namespace

TEST_SUITE("emission") {

TEST_CASE("vacuum emits exactly the free-space power") {
    QuadratureSpec spec;
    const auto b = emission_decomposition(VacuumModel{}, 1.0, spec);
    CHECK(b.w_total == Approx(1.0).epsilon(1e-7));
    CHECK(b.w_coh_perp == Approx(1.0).epsilon(1e-7));
    CHECK(b.w_ext_perp == Approx(0.0).scale(1.0));
    CHECK(b.w_coh_par == Approx(0.0).scale(1.0));
    CHECK(b.w_ext_par == Approx(0.0).scale(1.0));
    CHECK(b.w_direct == Approx(1.0).epsilon(1e-7));
    CHECK(b.w_indirect == Approx(0.0).scale(1.0));
}

TEST_CASE("dilute medium has no interference power") {
    QuadratureSpec spec;
    const cdouble x(0.21, 0.0);
    const auto b = emission_decomposition(
        UniformChiModel::from_dilute(x), 1.0, spec);
    const double n = std::sqrt(1.0 + x.real());
    CHECK(b.w_indirect == Approx(0.0).scale(1e-6));
    CHECK(b.w_total == Approx(n).epsilon(1e-6));
    CHECK(b.w_direct == Approx(n).epsilon(1e-6));
}

TEST_CASE("lossless effective medium: vertex scales the radiated power") {
    QuadratureSpec spec;
    const auto m = UniformChiModel::from_eps(cdouble(2.25, 0.0));
    const auto b = emission_decomposition(m, 1.0, spec);
    const double n = 1.5;
    const double L = (2.25 + 2.0) / 3.0;
    CHECK(b.w_coh_perp == Approx(L * n).epsilon(1e-6));
    CHECK(b.w_ext_perp == Approx(0.0).scale(1e-6));
    CHECK(b.w_coh_par == Approx(0.0).scale(1e-6));
    CHECK(b.w_direct == Approx(n).epsilon(1e-6));
    CHECK(b.w_indirect == Approx((L - 1.0) * n).epsilon(1e-5));
    CHECK(b.w_total == Approx(L * n).epsilon(1e-6));
}

TEST_CASE("lossy medium: pieces stay additive and extinction turns on") {
    QuadratureSpec spec;
    const auto m = UniformChiModel::from_eps(cdouble(2.25, 0.5));
    const auto b = emission_decomposition(m, 1.0, spec);
    const double sum =
        b.w_coh_perp + b.w_ext_perp + b.w_coh_par + b.w_ext_par;
    CHECK(b.w_total == Approx(sum).epsilon(1e-8));
    CHECK(b.w_ext_perp != 0.0);
    CHECK(b.w_total > 0.0);
}

TEST_CASE("free-space density of states") {
    CHECK(ldos_free(pi) == Approx(1.0).epsilon(1e-15));
    CHECK(ldos_free(1.0) == Approx(1.0 / (pi * pi)).epsilon(1e-15));
}

TEST_CASE("radiative density ratios of the Maxwell Garnett medium") {
    QuadratureSpec spec;
    struct Ref {
        double n, light, emis, coh;
    };
    // light = n, emis = L^2 n = (n^5 + 4 n^3 + 4 n)/9, coh = L n
    const Ref refs[] = {
        {1.33, 1.33, 2.099125288, 1.670879},
        {1.5, 1.5, 3.010416667, 2.125},
        {2.0, 2.0, 8.0, 4.0},
    };
    for (const auto& r : refs) {
        const auto m = medium_for_index(r.n);
        const auto rep = ldos_report(m, 1.0, spec);
        CHECK(rep.n_free == Approx(1.0 / (pi * pi)).epsilon(1e-15));
        CHECK(rep.n_light / rep.n_free == Approx(r.light).epsilon(1e-6));
        CHECK(rep.n_emis / rep.n_free == Approx(r.emis).epsilon(1e-5));
        CHECK(rep.n_coh / rep.n_free == Approx(r.coh).epsilon(1e-6));
    }
}

TEST_CASE("emission density from the self-field factors is positive") {
    QuadratureSpec spec;
    const auto m = medium_for_index(1.5);
    const auto rep = ldos_report(m, 2.0, spec);
    CHECK(rep.n_emis > 0.0);
    CHECK(rep.phi.k == 2.0);
    // scaling with k^2: free-space part
    CHECK(rep.n_free == Approx(4.0 / (pi * pi)).epsilon(1e-15));
}

TEST_CASE("vertex residue at the transverse pole is the local-field factor") {
    const auto m = medium_for_index(1.5);
    const MgEffectiveModel model(m);
    const auto roots = dispersion_roots(model, 1.0);
    const auto res = renormalization_residues(model, 1.0, roots);
    REQUIRE(!res.empty());
    const double L = (2.25 + 2.0) / 3.0;
    CHECK(res[0] == Approx(L).epsilon(1e-9));
}

TEST_CASE("far-field attenuation follows the effective index") {
    const cdouble eps(2.25, 0.1);
    const double k = 1.0;
    const double w0 = 2.0;
    const auto n = passive_sqrt(eps).sqrt_eps;
    CHECK(beer_lambert_farfield(w0, eps, k, 0.0) == Approx(w0));
    const double r = 3.0;
    CHECK(beer_lambert_farfield(w0, eps, k, r) ==
          Approx(w0 * std::exp(-2.0 * n.imag() * k * r)).epsilon(1e-12));
    // lossless medium does not attenuate
    CHECK(beer_lambert_farfield(w0, cdouble(2.25, 0.0), k, 10.0) ==
          Approx(w0));
}

}  // TEST_SUITE
