#include <doctest.h>

#include <cmath>
#include <cstring>

#include "emvac/cdm.hpp"
#include "emvac/renormalization.hpp"
#include "emvac/spectral.hpp"

using namespace emvac;
using doctest::Approx;

namespace {

CdmParams small_params() {
    CdmParams p;
    p.rho = 0.05;
    p.xi = 1.0;
    p.n_dipoles = 40;
    p.alpha_tilde = cdouble(1.0, 4.2e-4);
    p.k = 0.2;
    return p;
}

DipoleConfiguration two_dipole_setup(double d, double xi) {
    DipoleConfiguration cfg;
    cfg.positions = {Eigen::Vector3d::Zero(), Eigen::Vector3d(0.0, 0.0, d)};
    cfg.emitter_index = 0;
    cfg.xi = xi;
    cfg.box_side = 10.0 * d;
    cfg.seed = 0;
    return cfg;
}

}  // namespace

TEST_SUITE("cdm") {

TEST_CASE("parameter validation") {
    auto p = small_params();
    p.validate();
    CHECK(p.box_side() == Approx(std::cbrt(40.0 / 0.05)));

    auto bad = small_params();
    bad.rho = 0.6;  // packing 0.6 pi/6 > 0.3
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = small_params();
    bad.n_dipoles = 0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = small_params();
    bad.alpha_tilde = cdouble(0.0, 0.0);
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("random sequential addition respects the hard core") {
    const auto p = small_params();
    const auto cfg = generate_configuration(p, 77);
    REQUIRE(static_cast<int>(cfg.positions.size()) == p.n_dipoles);
    const double L = p.box_side();
    // emitter sits at the box center
    CHECK((cfg.positions[0] - 0.5 * L * Eigen::Vector3d::Ones()).norm() <
          1e-12);
    double dmin = 1e9;
    for (std::size_t i = 0; i < cfg.positions.size(); ++i) {
        for (std::size_t j = i + 1; j < cfg.positions.size(); ++j) {
            dmin = std::min(dmin,
                            (cfg.positions[i] - cfg.positions[j]).norm());
        }
        CHECK(cfg.positions[i].minCoeff() >= 0.0);
        CHECK(cfg.positions[i].maxCoeff() <= L);
    }
    CHECK(dmin >= p.xi);

    // same seed reproduces, different seed does not
    const auto again = generate_configuration(p, 77);
    for (std::size_t i = 0; i < cfg.positions.size(); ++i)
        CHECK(cfg.positions[i] == again.positions[i]);
    const auto other = generate_configuration(p, 78);
    CHECK(cfg.positions[1] != other.positions[1]);
}

TEST_CASE("packing beyond the sequential-addition regime is rejected") {
    CdmParams p;
    p.rho = 0.86;
    p.xi = 1.0;
    p.n_dipoles = 600;
    p.alpha_tilde = cdouble(1.0, 0.0);
    p.k = 0.2;
    // packing fraction 0.86*(pi/6) = 0.45 sits above the saturation of
    // random sequential addition (~0.38); the validator refuses it before
    // the sampler can stall
    CHECK_THROWS_AS(p.validate(), ConfigError);
    CHECK_THROWS_AS(generate_configuration(p, 1), ConfigError);
    // just under the cap still generates
    p.rho = 0.57;
    p.n_dipoles = 400;
    p.validate();
    const auto cfg = generate_configuration(p, 11);
    CHECK(int(cfg.positions.size()) == 400);
}

TEST_CASE("two-dipole system matches the closed form") {
    const double k = 0.7;
    const double d = 1.3;
    const cdouble alpha(0.9, 0.1);
    const auto cfg = two_dipole_setup(d, 1.0);

    cdouble g_t, g_l;
    g0_realspace_components(d, k, g_t, g_l);
    const cdouble k2a = k * k * alpha;

    // drive along x: transverse coupling
    const auto sol =
        solve_coupled_dipoles(cfg, alpha, k, Eigen::Vector3cd::UnitX());
    CHECK(sol.residual < 1e-10);
    const cdouble p0_expect = alpha / (1.0 - k2a * k2a * g_t * g_t);
    CHECK(std::abs(sol.moments[0](0) - p0_expect) <
          1e-10 * std::abs(p0_expect));
    const cdouble p1_expect = -k2a * g_t * p0_expect;
    CHECK(std::abs(sol.moments[1](0) - p1_expect) <
          1e-10 * std::abs(p1_expect));

    // self-propagator diagonal: (xx, yy) transverse, (zz) longitudinal
    const auto gsc = self_propagator_scattering(cfg, alpha, k);
    const cdouble sxx = -k * k * alpha * g_t * g_t /
                        (1.0 - k2a * k2a * g_t * g_t);
    const cdouble szz = -k * k * alpha * g_l * g_l /
                        (1.0 - k2a * k2a * g_l * g_l);
    CHECK(std::abs(gsc(0, 0) - sxx) < 1e-10 * std::abs(sxx));
    CHECK(std::abs(gsc(1, 1) - sxx) < 1e-10 * std::abs(sxx));
    CHECK(std::abs(gsc(2, 2) - szz) < 1e-10 * std::abs(szz));
    // off-diagonals vanish by symmetry
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
            if (r != c) CHECK(std::abs(gsc(r, c)) < 1e-12);
}

TEST_CASE("ensemble averages are bitwise independent of the worker count") {
    const auto p = small_params();
    const auto serial = ensemble_average(p, 12, 2026, 1);
    const auto threaded = ensemble_average(p, 12, 2026, 3);
    CHECK(std::memcmp(serial.mean.data(), threaded.mean.data(),
                      sizeof(cdouble) * 9) == 0);
    CHECK(std::memcmp(serial.stderr_abs.data(), threaded.stderr_abs.data(),
                      sizeof(double) * 9) == 0);
    CHECK(serial.n_configs == 12);
    CHECK(serial.failed_indices.empty());
    CHECK(serial.all_passive);
}

TEST_CASE("ensemble statistics behave physically") {
    auto p = small_params();
    // dress the bare polarizability so the single-dipole optical theorem holds
    PhiFactors free;
    free.phi0_perp = phi0_perp(p.k);
    free.k = p.k;
    p.alpha_tilde = renormalize_alpha(cdouble(1.0, 0.0), free);
    const auto est = ensemble_average(p, 24, 99, 2);
    CHECK(est.all_passive);
    CHECK(est.n_configs == 24);
    CHECK(est.stderr_abs.maxCoeff() > 0.0);
    CHECK(est.stderr_abs.maxCoeff() < 1.0);
    // isotropy on average: diagonal entries agree within a few sigma
    const double sd = est.stderr_abs.diagonal().maxCoeff();
    CHECK(std::abs(est.mean(0, 0) - est.mean(1, 1)) < 8.0 * sd);
}

TEST_CASE("validation rejects mismatched media") {
    const auto p = small_params();
    const auto est = ensemble_average(p, 4, 5, 1);
    MaxwellGarnettMedium wrong;
    wrong.rho = 2.0 * p.rho;
    wrong.alpha_tilde = p.alpha_tilde;
    wrong.xi = p.xi;
    PhiFactors phi;
    phi.k = p.k;
    CHECK_THROWS_AS(validate_against_analytic(est, phi, wrong), ConfigError);
}

}  // TEST_SUITE
