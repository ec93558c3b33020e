#include "emvac/emission.hpp"

#include <cmath>

namespace emvac {

namespace {

std::vector<double> medium_poles(const SusceptibilityModel& m, double k) {
    const cdouble eps = 1.0 + m.chi_perp(0.0, k);
    const double n_eff = passive_sqrt(eps).sqrt_eps.real();
    std::vector<double> poles = {k, n_eff * k};
    for (double bp : m.q_breakpoints(k)) poles.push_back(bp);
    return poles;
}

}  // namespace

EmissionBreakdown emission_decomposition(const SusceptibilityModel& m,
                                         double k,
                                         const QuadratureSpec& spec) {
    spec.validate();
    if (!(k > 0.0)) throw ConfigError("emission_decomposition: k must be > 0");
    const cdouble x = m.rho_alpha(k);
    // the vertex chi/x of an empty medium is the limit chi -> 0, which is
    // unity; the decomposition then reproduces free-space emission through
    // the same quadrature
    const bool empty = (x == cdouble(0.0, 0.0));

    const auto poles = medium_poles(m, k);
    const double norm = -2.0 * pi / k;  // units of the free-space power

    auto transverse = [&m, &x, empty, k](double q, double eta,
                                         int which) -> cdouble {
        const cdouble lff = empty ? cdouble(1.0, 0.0) : m.chi_perp(q, k) / x;
        const cdouble g =
            1.0 / (k2_retarded(k, eta) * (1.0 + m.chi_perp(q, k)) - q * q);
        switch (which) {
            case 0: return std::real(lff) * std::imag(g);  // coherent
            case 1: return std::imag(lff) * std::real(g);  // extinction
            default: return lff * g;                       // total channel
        }
    };
    auto longitudinal = [&m, &x, empty, k](double q, double,
                                           int which) -> cdouble {
        const cdouble chi = m.chi_par(q, k);
        const cdouble den = 1.0 + chi;
        if (std::abs(den) < 1e-12)
            throw NumericError("emission_decomposition: longitudinal resonance");
        const cdouble lff = empty ? cdouble(1.0, 0.0) : chi / x;
        const cdouble g = 1.0 / (k * k * den);
        switch (which) {
            case 0: return std::real(lff) * std::imag(g);
            case 1: return std::imag(lff) * std::real(g);
            default: return lff * g;
        }
    };

    auto run = [&](auto&& f, int which, bool regularised) {
        QuadratureSpec s = spec;
        if (!regularised) s.eta = 0.0;
        auto wrapped = [&f, which](double q, double eta) {
            return f(q, eta, which);
        };
        return radial_integral(wrapped, s, k, poles).value;
    };

    EmissionBreakdown out;
    out.k = k;
    out.w_coh_perp = 2.0 * norm * std::real(run(transverse, 0, true));
    out.w_ext_perp = 2.0 * norm * std::real(run(transverse, 1, true));
    out.w_coh_par = norm * std::real(run(longitudinal, 0, false));
    out.w_ext_par = norm * std::real(run(longitudinal, 1, false));

    // independent total: single complex integrals of the full channels
    const cdouble tot_t = run(transverse, 2, true);
    const cdouble tot_l = run(longitudinal, 2, false);
    out.w_total = norm * (2.0 * std::imag(tot_t) + std::imag(tot_l));

    // direct: Dyson trace, the power launched radiatively into the medium
    auto dyson_t = [&m, k](double q, double eta) {
        return 1.0 / (k2_retarded(k, eta) * (1.0 + m.chi_perp(q, k)) - q * q);
    };
    auto dyson_l = [&m, k](double q, double) {
        return 1.0 / (k * k * (1.0 + m.chi_par(q, k)));
    };
    QuadratureSpec s_l = spec;
    s_l.eta = 0.0;
    const cdouble tr_t = radial_integral(dyson_t, spec, k, poles).value;
    const cdouble tr_l = radial_integral(dyson_l, s_l, k, poles).value;
    out.w_direct = norm * (2.0 * std::imag(tr_t) + std::imag(tr_l));
    out.w_indirect = (out.w_coh_perp + out.w_coh_par) - out.w_direct;

    const double pieces =
        out.w_coh_perp + out.w_ext_perp + out.w_coh_par + out.w_ext_par;
    if (std::abs(pieces - out.w_total) >
        1e-8 * std::max(1.0, std::abs(out.w_total)))
        throw ValidationError(
            "emission_decomposition: additivity violated, pieces sum to " +
            std::to_string(pieces) + " vs total " +
            std::to_string(out.w_total));
    return out;
}

double ldos_free(double k) {
    if (!(k > 0.0)) throw ConfigError("ldos_free: k must be > 0");
    return k * k / (pi * pi);
}

double ldos_light(const SusceptibilityModel& m, double k,
                  const QuadratureSpec& spec) {
    spec.validate();
    if (!(k > 0.0)) throw ConfigError("ldos_light: k must be > 0");
    auto dyson_t = [&m, k](double q, double eta) {
        return 1.0 / (k2_retarded(k, eta) * (1.0 + m.chi_perp(q, k)) - q * q);
    };
    const IntegralResult r =
        radial_integral(dyson_t, spec, k, medium_poles(m, k));
    return -(4.0 * k / pi) * std::imag(r.value);
}

double ldos_emission(const PhiFactors& phi) {
    if (!(phi.k > 0.0)) throw ConfigError("ldos_emission: invalid phi factors");
    return -(2.0 * phi.k / pi) * std::imag(phi.sum_total());
}

double ldos_coherent_mg(const MaxwellGarnettMedium& m, double k) {
    m.validate();
    const cdouble eps = 1.0 + chi_mg(m.rho * m.alpha_tilde);
    const cdouble s = passive_sqrt(eps).sqrt_eps;
    return ((std::real(eps) + 2.0) / 3.0) * std::real(s) * ldos_free(k);
}

LdosReport ldos_report(const MaxwellGarnettMedium& m, double k,
                       const QuadratureSpec& spec) {
    m.validate();
    LdosReport out;
    out.k = k;
    out.n_free = ldos_free(k);

    const MgEffectiveModel model(m);
    out.n_light = ldos_light(model, k, spec);
    out.n_coh = ldos_coherent_mg(m, k);

    out.phi = phi_factors(model, k, spec);
    out.phi.phi_sc_par = phi_par_mg_longwave(m, k, spec);
    out.n_emis = ldos_emission(out.phi);
    return out;
}

std::vector<double> renormalization_residues(const SusceptibilityModel& m,
                                             double k,
                                             const DispersionRoots& roots) {
    const cdouble x = m.rho_alpha(k);
    if (x == cdouble(0.0, 0.0))
        throw ConfigError("renormalization_residues: empty medium");
    std::vector<double> out;
    out.reserve(roots.q_perp.size());
    for (const cdouble& q : roots.q_perp)
        out.push_back(std::real(m.chi_perp(std::real(q), k) / x));
    return out;
}

double beer_lambert_farfield(double w_coh, cdouble eps, double k, double r) {
    if (!(k > 0.0)) throw ConfigError("beer_lambert_farfield: k must be > 0");
    if (!(r >= 0.0)) throw ConfigError("beer_lambert_farfield: r must be >= 0");
    const double kappa = passive_sqrt(eps).sqrt_eps.imag();
    return w_coh * std::exp(-2.0 * kappa * k * r);
}

}  // namespace emvac
