#include "emvac/vacuum_energy.hpp"

#include <algorithm>
#include <cmath>

namespace emvac {

namespace {

double index_of(cdouble eps) { return passive_sqrt(eps).sqrt_eps.real(); }

// ---------------------------------------------------------------------------
// Frequency integral of the unwound Im log of a complex-valued curve.
// The phase is threaded through recursive bisection: a parent step is
// accepted only when its two half-steps reproduce it, every accepted step is
// below pi/8, and the Simpson/trapezoid difference meets the tolerance.
// ---------------------------------------------------------------------------

struct PhasePoint {
    double w;
    cdouble z;
    double theta;  // unwound Im log
};

struct ThreadState {
    double rel_tol;
    long budget;
    double max_jump = 0.0;
    double scale = 0.0;  // running magnitude for the tolerance floor
};

// principal-branch phase step between two samples, as a wrapped difference
// of atan2 values: division-free, and an underflowed z = (+0, +0) keeps the
// direction of a curve decaying along the positive real axis
double principal_step(const cdouble& za, const cdouble& zb) {
    return std::remainder(std::arg(zb) - std::arg(za), 2.0 * pi);
}

// integrates theta over [a.w, b.w]; a.theta is trusted, and on return
// b.theta carries the continuously threaded phase so the caller can anchor
// the next segment on it
double thread_segment(const std::function<cdouble(double)>& z_of,
                      const PhasePoint& a, PhasePoint& b,
                      ThreadState& st, int depth) {
    if (--st.budget < 0)
        throw NumericError(
            "im_log integral: refinement budget exhausted (branch jump "
            "cannot be reduced below pi/8)");
    PhasePoint m;
    m.w = 0.5 * (a.w + b.w);
    m.z = z_of(m.w);
    const double step1 = principal_step(a.z, m.z);
    const double step2 = principal_step(m.z, b.z);
    m.theta = a.theta + step1;
    const double theta_b_refined = m.theta + step2;

    const bool consistent =
        std::abs(theta_b_refined - b.theta) < 1e-9 + 1e-9 * std::abs(b.theta);
    const bool small_steps =
        std::abs(step1) < pi / 8.0 && std::abs(step2) < pi / 8.0;

    const double trap = 0.5 * (a.theta + b.theta) * (b.w - a.w);
    const double simp =
        (a.theta + 4.0 * m.theta + theta_b_refined) / 6.0 * (b.w - a.w);
    const double local_scale =
        std::max(st.scale, std::abs(simp)) + 1e-300;
    const bool accurate = std::abs(simp - trap) <= st.rel_tol * local_scale;

    if (consistent && small_steps && accurate && depth >= 3) {
        st.max_jump = std::max({st.max_jump, std::abs(step1), std::abs(step2)});
        st.scale = std::max(st.scale, std::abs(simp));
        b.theta = theta_b_refined;
        return simp;
    }
    if (depth > 48)
        throw NumericError("im_log integral: branch jump persisted at max "
                           "refinement depth");
    const double left = thread_segment(z_of, a, m, st, depth + 1);
    // m.theta now threaded; reseed b before refining the right half
    b.theta = m.theta + principal_step(m.z, b.z);
    const double right = thread_segment(z_of, m, b, st, depth + 1);
    return left + right;
}

struct ImLogIntegral {
    double value;
    double max_jump;
};

ImLogIntegral integrate_im_log(const std::function<cdouble(double)>& z_of,
                               double a, double b, double rel_tol,
                               std::vector<double> breakpoints = {}) {
    if (!(b > a)) throw ConfigError("integrate_im_log: requires b > a");
    breakpoints.push_back(a);
    breakpoints.push_back(b);
    std::sort(breakpoints.begin(), breakpoints.end());
    breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()),
                      breakpoints.end());

    ThreadState st{rel_tol, 4'000'000, 0.0, 0.0};
    double total = 0.0;
    PhasePoint left;
    left.w = a;
    left.z = z_of(a);
    left.theta = std::arg(left.z);
    for (size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        const double lo = breakpoints[i];
        const double hi = breakpoints[i + 1];
        if (hi <= a || lo >= b) continue;
        PhasePoint right;
        right.w = std::min(hi, b);
        right.z = z_of(right.w);
        right.theta = left.theta + principal_step(left.z, right.z);
        total += thread_segment(z_of, left, right, st, 0);
        // right.theta was refined in place; the next segment threads from it
        left = right;
    }
    return {total, st.max_jump};
}

}  // namespace

double schwinger_bulk(const std::function<cdouble(double)>& eps_of_omega,
                      double omega_max, const QuadratureSpec& spec) {
    spec.validate();
    if (!(omega_max > 0.0))
        throw ConfigError("schwinger_bulk: omega_max must be > 0");

    auto integrand = [&eps_of_omega](double w) -> cdouble {
        const double n = index_of(eps_of_omega(w));
        return w * w * w * (1.0 - n * n * n);
    };
    const IntegralResult r = integrate_gk(integrand, 0.0, omega_max,
                                          spec.rel_tol, spec.max_subdivisions);
    const double value = std::real(r.value) / (6.0 * pi * pi);

    const double n_end = index_of(eps_of_omega(omega_max));
    const double defect = std::abs(1.0 - n_end * n_end * n_end);
    if (defect >= 1e-8)
        throw CutoffError("schwinger_bulk: |1 - n^3| = " +
                              std::to_string(defect) +
                              " at omega_max; integral is cutoff-dominated",
                          value);
    return value;
}

double ldos_schwinger_bulk(double omega, cdouble eps) {
    if (!(omega > 0.0))
        throw ConfigError("ldos_schwinger_bulk: omega must be > 0");
    const double n = index_of(eps);
    return omega * omega * n * n * n / (3.0 * pi * pi);
}

namespace {

VacuumEnergyDensity mg_energy_density(const LorentzianDielectric& d,
                                      double rho, const QuadratureSpec& spec,
                                      double omega_max, bool divide_by_eps,
                                      double estimate) {
    d.validate();
    if (!(rho > 0.0)) throw ConfigError("vacuum energy: rho must be > 0");
    if (d.f > 0.1)
        warn("vacuum energy estimate assumes f << 1, got f = " +
             std::to_string(d.f));
    if (omega_max <= 0.0) omega_max = 50.0 * d.omega_res;

    auto z_of = [&d, divide_by_eps](double w) -> cdouble {
        const cdouble eps = eps_lorentzian(w, d);
        const cdouble lff = lff_ll(eps);
        const cdouble l3 = lff * lff * lff;
        return divide_by_eps ? l3 / eps : l3;
    };
    std::vector<double> bps;
    for (double m : {1.0 - 10.0 * d.gamma / d.omega_res,
                     1.0 - d.gamma / d.omega_res, 1.0,
                     1.0 + d.gamma / d.omega_res,
                     1.0 + 10.0 * d.gamma / d.omega_res,
                     std::sqrt(1.0 + d.f)})
        if (m > 0.0 && m * d.omega_res < omega_max)
            bps.push_back(m * d.omega_res);

    const ImLogIntegral I =
        integrate_im_log(z_of, 1e-12 * d.omega_res, omega_max,
                         std::max(spec.rel_tol, 1e-10), bps);
    const double numeric = -rho * I.value / (2.0 * pi);

    VacuumEnergyDensity out;
    out.magnitude = std::abs(numeric);
    out.raw_sign = numeric > 0.0 ? 1 : (numeric < 0.0 ? -1 : 0);
    out.estimate = estimate;
    out.omega_max = omega_max;
    return out;
}

}  // namespace

VacuumEnergyDensity delta_f_mg(const LorentzianDielectric& d, double rho,
                               const QuadratureSpec& spec, double omega_max) {
    const double est = (rho * d.f * d.f / 12.0) *
                       (0.5 * d.omega_res + d.gamma / (2.0 * pi));
    return mg_energy_density(d, rho, spec, omega_max, true, est);
}

VacuumEnergyDensity f_lff_mg(const LorentzianDielectric& d, double rho,
                             const QuadratureSpec& spec, double omega_max) {
    const double est =
        (rho * d.f / 2.0) * (0.5 * d.omega_res + d.gamma / (2.0 * pi));
    return mg_energy_density(d, rho, spec, omega_max, false, est);
}

VacuumEnergyDecomposition vacuum_energy_decomposition(
    const std::function<cdouble(double)>& chi_of_omega,
    const std::function<cdouble(double)>& alpha_prime_of_omega,
    const std::function<cdouble(double)>& alpha_of_omega, double rho,
    double omega_max, const QuadratureSpec& spec) {
    spec.validate();
    if (!(rho > 0.0))
        throw ConfigError("vacuum_energy_decomposition: rho must be > 0");
    if (!(omega_max > 0.0))
        throw ConfigError("vacuum_energy_decomposition: omega_max must be > 0");

    const double w_lo = 1e-12 * omega_max;
    const double tol = std::max(spec.rel_tol, 1e-10);
    double max_jump = 0.0;

    auto saturated = [&](const std::function<cdouble(double)>& z_of,
                         double weight) {
        const ImLogIntegral I = integrate_im_log(z_of, w_lo, omega_max, tol);
        max_jump = std::max(max_jump, I.max_jump);
        return -rho * weight * I.value / (2.0 * pi);
    };

    VacuumEnergyDecomposition out;
    out.omega_max = omega_max;
    out.alpha_term = saturated(
        [&](double w) { return alpha_prime_of_omega(w) / alpha_of_omega(w); },
        3.0);
    out.chi_perp_term = saturated(chi_of_omega, 2.0);
    out.chi_par_term = saturated(
        [&](double w) {
            const cdouble chi = chi_of_omega(w);
            return chi / (1.0 + chi);
        },
        1.0);

    // transverse bulk term: full momentum integral of 2 Im ln(G0/G). Both
    // inverse propagators stay in the upper half plane for eta > 0, so their
    // phase difference is the principal branch of arg(1 - k^2 chi G); that
    // form evaluates the tail from the small quantity itself instead of as a
    // rounding-level difference of two phases near pi.
    auto q_integral = [&](double w) -> cdouble {
        const cdouble chi = chi_of_omega(w);
        auto f = [&chi, w](double q, double eta) -> cdouble {
            const cdouble k2 = k2_retarded(w, eta);
            const cdouble g = 1.0 / (k2 * (1.0 + chi) - q * q);
            return 2.0 * std::arg(1.0 - k2 * chi * g);
        };
        const double n_eff = index_of(1.0 + chi);
        return radial_integral(f, spec, w, {w, n_eff * w}).value;
    };
    const IntegralResult bulk =
        integrate_gk([&](double w) { return q_integral(w); }, w_lo, omega_max,
                     std::max(spec.rel_tol, 1e-8), spec.max_subdivisions);
    out.bulk_term = -std::real(bulk.value) / (2.0 * pi);

    out.total =
        out.alpha_term + out.chi_perp_term + out.chi_par_term + out.bulk_term;
    out.branch_max_jump = max_jump;
    if (max_jump >= pi / 8.0)
        throw NumericError(
            "vacuum_energy_decomposition: branch jump " +
            std::to_string(max_jump) + " not reduced below pi/8");
    return out;
}

double lamb_shift_res(const std::function<cdouble(cdouble)>& sum_sc_of_k,
                      double mu2, double k_res, double gamma) {
    if (!(mu2 >= 0.0)) throw ConfigError("lamb_shift_res: mu2 must be >= 0");
    if (!(k_res > 0.0)) throw ConfigError("lamb_shift_res: k_res must be > 0");
    if (!(gamma >= 0.0)) throw ConfigError("lamb_shift_res: gamma must be >= 0");
    const cdouble kc(k_res, gamma);
    return (mu2 / 3.0) * std::real(kc * kc * sum_sc_of_k(kc));
}

double lamb_shift_off(const std::function<cdouble(cdouble)>& sum_sc_of_k,
                      const LorentzianPolarizability& pol, double u_max,
                      const QuadratureSpec& spec) {
    pol.validate();
    spec.validate();
    if (!(u_max > 0.0)) throw ConfigError("lamb_shift_off: u_max must be > 0");

    auto integrand = [&](double u) -> double {
        if (u == 0.0) return 0.0;
        const cdouble iu_k(0.0, u);
        const cdouble alpha_sum =
            alpha_lorentzian(iu_k, pol) + alpha_lorentzian(-iu_k, pol);
        const cdouble val =
            u * u * sum_sc_of_k(iu_k) * alpha_sum;
        return std::real(val);
    };

    // locate the decay point on a log grid
    const int n_scan = 96;
    const double u_lo = 1e-3 * pol.k_res;
    double peak = 0.0;
    std::vector<std::pair<double, double>> samples;
    for (int i = 0; i <= n_scan; ++i) {
        const double u =
            u_lo * std::pow(u_max / u_lo, double(i) / n_scan);
        const double m = std::abs(integrand(u));
        samples.emplace_back(u, m);
        peak = std::max(peak, m);
    }
    int last_live = -1;
    for (int i = 0; i < int(samples.size()); ++i)
        if (samples[i].second > 1e-10 * peak) last_live = i;
    if (last_live == int(samples.size()) - 1)
        throw NumericError(
            "lamb_shift_off: integrand not decayed to 1e-10 of peak at u_max");
    const double u_star =
        last_live < 0 ? samples.front().first : samples[last_live + 1].first;

    const IntegralResult r = integrate_gk(
        [&](double u) -> cdouble { return integrand(u); }, 0.0, u_star,
        spec.rel_tol, spec.max_subdivisions, {pol.k_res});
    return -std::real(r.value) / (4.0 * pi);
}

}  // namespace emvac
