#include "emvac/propagators.hpp"

#include <algorithm>
#include <cmath>

namespace emvac {

namespace {

cdouble require_rho_alpha(const SusceptibilityModel& m, double k) {
    const cdouble x = m.rho_alpha(k);
    if (x == cdouble(0.0, 0.0))
        throw ConfigError("empty medium: vertex chi/(rho*alpha) is undefined");
    return x;
}

}  // namespace

cdouble dyson_perp(double q, double k, const SusceptibilityModel& m,
                   double eta) {
    if (!(k > 0.0)) throw ConfigError("dyson_perp: k must be > 0");
    const cdouble chi = m.chi_perp(q, k);
    return 1.0 / (k2_retarded(k, eta) * (1.0 + chi) - q * q);
}

cdouble dyson_par(double q, double k, const SusceptibilityModel& m) {
    if (!(k > 0.0)) throw ConfigError("dyson_par: k must be > 0");
    const cdouble den = 1.0 + m.chi_par(q, k);
    if (std::abs(den) < 1e-14)
        throw NumericError("dyson_par: longitudinal resonance, 1 + chi = 0");
    return 1.0 / (k * k * den);
}

cdouble gvc_perp(double q, double k, const SusceptibilityModel& m,
                 GvcRoute route, double eta) {
    const cdouble x = require_rho_alpha(m, k);
    const cdouble chi = m.chi_perp(q, k);
    const cdouble k2 = k2_retarded(k, eta);
    const cdouble g = 1.0 / (k2 * (1.0 + chi) - q * q);
    const cdouble g0 = 1.0 / (k2 - q * q);
    switch (route) {
        case GvcRoute::lff:
            return (chi / x) * g;
        case GvcRoute::difference:
            return (1.0 - g / g0) / (k2 * x);
        case GvcRoute::tmatrix: {
            const cdouble t = (g - g0) / (g0 * g0);
            return -t * g0 / (k2 * x);
        }
    }
    throw ConfigError("gvc_perp: unknown route");
}

cdouble gvc_par(double q, double k, const SusceptibilityModel& m,
                GvcRoute route) {
    const cdouble x = require_rho_alpha(m, k);
    const cdouble chi = m.chi_par(q, k);
    const double k2 = k * k;
    const cdouble den = 1.0 + chi;
    if (std::abs(den) < 1e-14)
        throw NumericError("gvc_par: longitudinal resonance, 1 + chi = 0");
    const cdouble g = 1.0 / (k2 * den);
    const double g0 = 1.0 / k2;
    switch (route) {
        case GvcRoute::lff:
            return (chi / x) * g;
        case GvcRoute::difference:
            return (1.0 - g / g0) / (k2 * x);
        case GvcRoute::tmatrix: {
            const cdouble t = (g - g0) / (g0 * g0);
            return -t * g0 / (k2 * x);
        }
    }
    throw ConfigError("gvc_par: unknown route");
}

cdouble kernel_xi_perp(double q, double k, const SusceptibilityModel& m,
                       double eta) {
    const cdouble x = require_rho_alpha(m, k);
    const cdouble chi = m.chi_perp(q, k);
    if (chi == cdouble(0.0, 0.0))
        throw ConfigError("kernel_xi_perp: kernel undefined for chi = 0");
    const cdouble k2 = k2_retarded(k, eta);
    const cdouble g0 = 1.0 / (k2 - q * q);
    return (-x / (chi * g0)) * (1.0 - chi / x + k2 * chi * g0);
}

cdouble kernel_xi_par(double q, double k, const SusceptibilityModel& m) {
    const cdouble x = require_rho_alpha(m, k);
    const cdouble chi = m.chi_par(q, k);
    if (chi == cdouble(0.0, 0.0))
        throw ConfigError("kernel_xi_par: kernel undefined for chi = 0");
    const double k2 = k * k;
    const cdouble g0 = 1.0 / k2;
    return (-x / (chi * g0)) * (1.0 - chi / x + k2 * chi * g0);
}

namespace {

// effective low-q refractive index, used to locate the collective pole
double effective_index(const SusceptibilityModel& m, double k) {
    const cdouble eps = 1.0 + m.chi_perp(0.0, k);
    return passive_sqrt(eps).sqrt_eps.real();
}

bool model_is_passive(const SusceptibilityModel& m, double k, double q_max) {
    if (std::imag(m.rho_alpha(k)) < -1e-15) return false;
    for (double q : {0.0, 0.3 * q_max, 0.7 * q_max, q_max}) {
        if (std::imag(m.chi_perp(q, k)) < -1e-12) return false;
        if (std::imag(m.chi_par(q, k)) < -1e-12) return false;
    }
    return true;
}

}  // namespace

PhiFactors phi_factors(const SusceptibilityModel& m, double k,
                       const QuadratureSpec& spec) {
    spec.validate();
    if (!(k > 0.0)) throw ConfigError("phi_factors: k must be > 0");

    PhiFactors out;
    out.k = k;
    out.phi0_perp = phi0_perp(k);

    const cdouble x = m.rho_alpha(k);
    if (x == cdouble(0.0, 0.0)) {
        out.provenance = m.descriptor() + " empty medium, sc parts zero";
        return out;
    }

    // the retarded pole shift assumes response poles in the upper half
    // plane; a gain medium moves them across the contour
    if (!model_is_passive(m, k, spec.q_max))
        throw ValidationError("phi_factors: model has gain (Im chi < 0); "
                              "the retarded prescription requires passivity");

    const double n_eff = effective_index(m, k);
    const double pole_max = std::max(k, n_eff * k);
    if (!(spec.q_max > 1.2 * pole_max))
        throw NumericError(
            "phi_factors: q_max = " + std::to_string(spec.q_max) +
            " does not enclose the propagating pole at q = " +
            std::to_string(pole_max));

    std::vector<double> poles = {k, n_eff * k};
    for (double bp : m.q_breakpoints(k)) poles.push_back(bp);

    // (chi/x) G - G0 written subtraction-free as (chi/x - 1) G - k^2 chi G0 G,
    // so weak media do not lose the result to cancellation between kernels
    auto f_perp = [&m, &x, k](double q, double eta) {
        const cdouble chi = m.chi_perp(q, k);
        const cdouble k2 = k2_retarded(k, eta);
        const cdouble g = 1.0 / (k2 * (1.0 + chi) - q * q);
        const cdouble g0 = 1.0 / (k2 - q * q);
        return (chi / x - 1.0) * g - k2 * chi * g0 * g;
    };
    const IntegralResult r_perp = radial_integral(f_perp, spec, k, poles);

    // the longitudinal integrand has no propagating pole; no regularisation
    QuadratureSpec spec_par = spec;
    spec_par.eta = 0.0;
    auto f_par = [&m, &x, k](double q, double) {
        const cdouble chi = m.chi_par(q, k);
        const cdouble den = 1.0 + chi;
        if (std::abs(den) < 1e-12)
            throw NumericError("phi_factors: longitudinal resonance crossed");
        return (chi / x - den) / (k * k * den);
    };
    const IntegralResult r_par = radial_integral(f_par, spec_par, k, poles);

    out.phi_sc_perp = r_perp.value;
    out.phi_sc_par = r_par.value;
    if (!std::isfinite(std::abs(out.phi_sc_perp)) ||
        !std::isfinite(std::abs(out.phi_sc_par)))
        throw NumericError("phi_factors: non-finite scattering integral; "
                           "model requires regularisation");

    out.provenance = m.descriptor() + " q_max=" + std::to_string(spec.q_max) +
                     " eta=" + std::to_string(spec.eta) +
                     " re_cutoff_sensitive";

    if (std::imag(out.sum_total()) > 1e-10 * k)
        throw ValidationError(
            "phi_factors: passive medium produced net gain, Im sum = " +
            std::to_string(std::imag(out.sum_total())));
    return out;
}

PhiFactors phi_factors_hole(const MaxwellGarnettMedium& m, double k,
                            QuadratureSpec spec) {
    m.validate();
    const double q_c = calibrated_hole_qc(m.xi);
    spec.q_max = q_c;
    return phi_factors(windowed_mg_susceptibility(m, q_c), k, spec);
}

cdouble phi_par_mg_longwave(const MaxwellGarnettMedium& m, double k,
                            const QuadratureSpec& spec) {
    m.validate();
    spec.validate();
    if (!(k > 0.0)) throw ConfigError("phi_par_mg_longwave: k must be > 0");

    const cdouble x = m.rho * m.alpha_tilde;
    if (x == cdouble(0.0, 0.0)) return {0.0, 0.0};

    if (k * m.xi > 0.3)
        warn("phi_par_mg_longwave: k*xi = " + std::to_string(k * m.xi) +
             " outside the long-wavelength regime");

    const cdouble eps = 1.0 + chi_mg(x);
    const cdouble lff = lff_ll(eps);
    const double n_eff = passive_sqrt(eps).sqrt_eps.real();

    auto f_eff = [&eps, k](double q, double eta) {
        return 1.0 / (k2_retarded(k, eta) * eps - q * q);
    };
    const IntegralResult r =
        radial_integral(f_eff, spec, k, {n_eff * k});
    return 2.0 * lff * (lff - 1.0) * r.value;
}

// ---------------------------------------------------------------------------
// Dispersion roots via winding number + Newton polish. The continuation off
// the real q axis holds chi constant within each region bounded by the
// model's breakpoints, which is exact for the piecewise-constant models
// shipped here; models with genuine q dependence are rejected.
// ---------------------------------------------------------------------------

namespace {

struct Region {
    double lo, hi;
    cdouble chi;
};

// winding number of F around the rectangle [re_lo,re_hi] x [im_lo,im_hi]
int winding_number(const std::function<cdouble(cdouble)>& F, double re_lo,
                   double re_hi, double im_lo, double im_hi) {
    const cdouble corners[5] = {{re_lo, im_lo},
                                {re_hi, im_lo},
                                {re_hi, im_hi},
                                {re_lo, im_hi},
                                {re_lo, im_lo}};
    for (int refine = 0; refine < 8; ++refine) {
        const int n_per_edge = 32 << refine;
        double total = 0.0;
        bool ok = true;
        for (int e = 0; e < 4 && ok; ++e) {
            cdouble prev = F(corners[e]);
            for (int i = 1; i <= n_per_edge; ++i) {
                const double t = double(i) / n_per_edge;
                const cdouble z = corners[e] + t * (corners[e + 1] - corners[e]);
                const cdouble cur = F(z);
                if (std::abs(cur) == 0.0)
                    throw NumericError("dispersion_roots: zero on contour");
                const double dphi = std::arg(cur / prev);
                if (std::abs(dphi) > 0.5 * pi) {
                    ok = false;
                    break;
                }
                total += dphi;
                prev = cur;
            }
        }
        if (!ok) continue;
        const double w = total / (2.0 * pi);
        if (std::abs(w - std::round(w)) < 0.05) return int(std::round(w));
    }
    throw NumericError("dispersion_roots: winding number did not stabilise");
}

// subdivide until each cell holds at most one zero, then Newton-polish
void locate_roots(const std::function<cdouble(cdouble)>& F, double lo,
                  double hi, double h_lo, double h_hi, double scale, int depth,
                  std::vector<cdouble>& roots, std::vector<double>& residuals,
                  int expected) {
    if (expected == 0) return;
    if (expected == 1 || depth >= 10) {
        cdouble z(0.5 * (lo + hi), 0.5 * (h_lo + h_hi));
        const double step = 1e-7 * scale;
        for (int it = 0; it < 80; ++it) {
            const cdouble f = F(z);
            const cdouble df = (F(z + step) - F(z - step)) / (2.0 * step);
            if (std::abs(df) == 0.0) break;
            const cdouble dz = f / df;
            z -= dz;
            if (std::abs(dz) < 1e-13 * scale) break;
        }
        const double resid = std::abs(F(z)) / (scale * scale);
        if (resid > 1e-9)
            throw NumericError("dispersion_roots: Newton residual " +
                               std::to_string(resid));
        roots.push_back(z);
        residuals.push_back(resid);
        return;
    }
    // split along the longer side
    if (hi - lo >= h_hi - h_lo) {
        const double mid = 0.5 * (lo + hi);
        const int wl = winding_number(F, lo, mid, h_lo, h_hi);
        locate_roots(F, lo, mid, h_lo, h_hi, scale, depth + 1, roots,
                     residuals, wl);
        locate_roots(F, mid, hi, h_lo, h_hi, scale, depth + 1, roots,
                     residuals, expected - wl);
    } else {
        const double mid = 0.5 * (h_lo + h_hi);
        const int wl = winding_number(F, lo, hi, h_lo, mid);
        locate_roots(F, lo, hi, h_lo, mid, scale, depth + 1, roots, residuals,
                     wl);
        locate_roots(F, lo, hi, mid, h_hi, scale, depth + 1, roots, residuals,
                     expected - wl);
    }
}

}  // namespace

DispersionRoots dispersion_roots(const SusceptibilityModel& m, double k,
                                 double re_min, double re_max,
                                 double im_halfwidth) {
    if (!(k > 0.0)) throw ConfigError("dispersion_roots: k must be > 0");
    if (re_max <= 0.0) re_max = 5.0 * k;
    if (re_min <= 0.0) re_min = 1e-6 * k;
    if (im_halfwidth <= 0.0) im_halfwidth = 2.0 * k;
    if (!(re_max > re_min))
        throw ConfigError("dispersion_roots: empty search interval");

    // carve the real-q interval into regions of constant susceptibility
    std::vector<double> edges = {re_min, re_max};
    for (double bp : m.q_breakpoints(k))
        if (bp > re_min && bp < re_max) edges.push_back(bp);
    std::sort(edges.begin(), edges.end());

    DispersionRoots out;
    out.k = k;

    for (size_t i = 0; i + 1 < edges.size(); ++i) {
        const double lo = edges[i] + 1e-9 * k;
        const double hi = edges[i + 1] - 1e-9 * k;
        if (hi <= lo) continue;
        const double mid = 0.5 * (lo + hi);
        const cdouble chi_t = m.chi_perp(mid, k);
        const cdouble chi_l = m.chi_par(mid, k);
        // verify the region really is constant
        for (double t : {0.1, 0.35, 0.65, 0.9}) {
            const double q = lo + t * (hi - lo);
            if (std::abs(m.chi_perp(q, k) - chi_t) >
                    1e-12 * (1.0 + std::abs(chi_t)) ||
                std::abs(m.chi_par(q, k) - chi_l) >
                    1e-12 * (1.0 + std::abs(chi_l)))
                throw ConfigError(
                    "dispersion_roots: susceptibility varies inside a region; "
                    "only piecewise-constant models are supported");
        }

        const double scale = std::max(k, hi);
        auto F_perp = [k, chi_t](cdouble z) {
            return k * k * (1.0 + chi_t) - z * z;
        };
        const int w_t =
            winding_number(F_perp, lo, hi, -im_halfwidth, im_halfwidth);
        std::vector<cdouble> roots;
        std::vector<double> resid;
        locate_roots(F_perp, lo, hi, -im_halfwidth, im_halfwidth, scale, 0,
                     roots, resid, w_t);
        if (int(roots.size()) != w_t)
            throw NumericError("dispersion_roots: winding count " +
                               std::to_string(w_t) + " but " +
                               std::to_string(roots.size()) +
                               " transverse roots converged");
        out.q_perp.insert(out.q_perp.end(), roots.begin(), roots.end());
        out.residual_perp.insert(out.residual_perp.end(), resid.begin(),
                                 resid.end());

        auto F_par = [chi_l](cdouble) { return 1.0 + chi_l; };
        if (std::abs(1.0 + chi_l) < 1e-14)
            throw NumericError(
                "dispersion_roots: longitudinal branch degenerate, 1+chi = 0");
        const int w_l =
            winding_number(F_par, lo, hi, -im_halfwidth, im_halfwidth);
        if (w_l != 0)
            throw NumericError(
                "dispersion_roots: unexpected longitudinal winding");
    }
    return out;
}

}  // namespace emvac
