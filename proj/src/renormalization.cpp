#include "emvac/renormalization.hpp"

#include <algorithm>
#include <cmath>

namespace emvac {

cdouble renormalize_alpha(cdouble alpha0, const PhiFactors& phi) {
    if (alpha0 == cdouble(0.0, 0.0))
        throw ConfigError("renormalize_alpha: alpha0 must be nonzero");
    const double k2 = phi.k * phi.k;
    const cdouble den = 1.0 + (k2 / 3.0) * alpha0 * phi.sum_total();
    if (std::abs(den) < 1e-12)
        throw NumericError(
            "renormalize_alpha: resonance singularity, |denominator| = " +
            std::to_string(std::abs(den)));
    return alpha0 / den;
}

PowerBalance stimulated_power(cdouble alpha0, const PhiFactors& phi,
                              double E0_mag2) {
    if (!(E0_mag2 >= 0.0))
        throw ConfigError("stimulated_power: |E0|^2 must be >= 0");
    const double k = phi.k;
    const cdouble alpha = renormalize_alpha(alpha0, phi);
    const double a2 = std::norm(alpha);

    PowerBalance out;
    out.total = 0.5 * k * E0_mag2 * std::imag(alpha);
    // radiated: dressed dipole against the imaginary self-field
    out.radiated =
        0.5 * k * E0_mag2 * a2 * (-(k * k) / 3.0) * std::imag(phi.sum_total());
    // absorbed: bare dissipation driven by the local field (alpha/alpha0) E0
    out.absorbed = 0.5 * k * E0_mag2 * a2 * std::imag(alpha0) / std::norm(alpha0);
    return out;
}

namespace {

double resonance_residual(double k, double k0, double alpha0,
                          const PhiFactors& phi) {
    const double r = k / k0;
    return r * r - 1.0 -
           (alpha0 * k * k / 3.0) * std::real(phi.sum_sc());
}

}  // namespace

RenormalizedPolarizability solve_kres(
    double alpha0, double k0,
    const std::function<PhiFactors(double)>& phi_of_k, double bracket_lo,
    double bracket_hi) {
    if (!(alpha0 > 0.0)) throw ConfigError("solve_kres: alpha0 must be > 0");
    if (!(k0 > 0.0)) throw ConfigError("solve_kres: k0 must be > 0");
    if (!(bracket_lo > 0.0) || !(bracket_hi > bracket_lo))
        throw ConfigError("solve_kres: invalid bracket");

    RenormalizedPolarizability out;
    out.k0 = k0;
    out.gamma0 = alpha0 * k0 * k0 * k0 * k0 / (6.0 * pi);

    // closed-form path: no scattering response anywhere near k0
    const PhiFactors phi_k0 = phi_of_k(k0);
    if (phi_k0.sum_sc() == cdouble(0.0, 0.0)) {
        out.k_res = k0;
        out.gamma = out.gamma0;
        out.alpha0_tilde = alpha0;
        out.alpha_tilde = alpha_lorentzian(
            k0, LorentzianPolarizability{alpha0, k0, out.gamma});
        out.iterations = 0;
        out.residual = 0.0;
        out.k_res_all = {k0};
        return out;
    }

    // bracket scan
    const int n_scan = 256;
    const double lo = bracket_lo * k0;
    const double hi = bracket_hi * k0;
    std::vector<std::pair<double, double>> brackets;
    double prev_k = lo;
    double prev_f = resonance_residual(lo, k0, alpha0, phi_of_k(lo));
    for (int i = 1; i <= n_scan; ++i) {
        const double kk = lo + (hi - lo) * double(i) / n_scan;
        const double ff = resonance_residual(kk, k0, alpha0, phi_of_k(kk));
        if (ff == 0.0) {
            brackets.emplace_back(kk, kk);
        } else if (prev_f * ff < 0.0) {
            brackets.emplace_back(prev_k, kk);
        }
        prev_k = kk;
        prev_f = ff;
    }
    if (brackets.empty())
        throw NumericError("solve_kres: no resonance in bracket [" +
                           std::to_string(lo) + ", " + std::to_string(hi) + "]");

    int total_iters = 0;
    for (auto [a, b] : brackets) {
        double fa = resonance_residual(a, k0, alpha0, phi_of_k(a));
        double root;
        if (a == b) {
            root = a;
        } else {
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (a + b);
                if (mid == a || mid == b) break;
                const double fm =
                    resonance_residual(mid, k0, alpha0, phi_of_k(mid));
                ++total_iters;
                if (fm == 0.0) {
                    a = b = mid;
                    break;
                }
                if (fa * fm < 0.0) {
                    b = mid;
                } else {
                    a = mid;
                    fa = fm;
                }
                if ((b - a) < 1e-13 * k0) break;
            }
            root = 0.5 * (a + b);
        }
        out.k_res_all.push_back(root);
    }
    std::sort(out.k_res_all.begin(), out.k_res_all.end());

    out.k_res = out.k_res_all.front();
    const PhiFactors phi_res = phi_of_k(out.k_res);
    out.alpha0_tilde = alpha0 * (k0 / out.k_res) * (k0 / out.k_res);
    out.gamma = -(out.alpha0_tilde / 3.0) * std::pow(out.k_res, 3) *
                std::imag(phi_res.sum_total());
    out.alpha_tilde = alpha_lorentzian(
        out.k_res, LorentzianPolarizability{out.alpha0_tilde, out.k_res,
                                            std::max(out.gamma, 0.0)});
    out.iterations = total_iters;
    out.residual =
        std::abs(resonance_residual(out.k_res, k0, alpha0, phi_res));
    return out;
}

SelfConsistentMedium self_consistent_medium(double rho, double alpha0,
                                            double k0, double xi,
                                            QuadratureSpec spec) {
    if (!(rho >= 0.0)) throw ConfigError("self_consistent_medium: rho >= 0");
    if (!(k0 > 0.0)) throw ConfigError("self_consistent_medium: k0 > 0");
    if (!(xi > 0.0)) throw ConfigError("self_consistent_medium: xi > 0");
    spec.validate();

    // the hole-calibrated self-field keeps the map contractive: without the
    // q_c truncation the longitudinal contact tail grows like q_max^3 and
    // the iteration has no physical fixed point
    auto phi_of_alpha = [&](cdouble alpha) {
        return phi_factors_hole(MaxwellGarnettMedium{rho, alpha, xi}, k0,
                                spec);
    };

    cdouble alpha = alpha0;  // bare start
    std::vector<cdouble> history = {alpha};
    const double lambda = 0.5;
    int it = 0;
    double resid = 0.0;
    for (; it < 200; ++it) {
        const cdouble target = renormalize_alpha(alpha0, phi_of_alpha(alpha));
        const cdouble next = (1.0 - lambda) * alpha + lambda * target;
        resid = std::abs(next - alpha) / std::max(std::abs(next), 1e-300);
        history.push_back(next);
        alpha = next;
        if (resid <= 1e-10) break;
    }
    if (resid > 1e-10)
        throw FixedPointError(
            "self_consistent_medium: fixed point not reached after 200 "
            "iterations (residual " + std::to_string(resid) + ")",
            history);

    // undamped polish: exact when the map is constant (zero density), and a
    // further contraction otherwise; the reported residual is the defect of
    // the map at the returned point
    alpha = renormalize_alpha(alpha0, phi_of_alpha(alpha));
    history.push_back(alpha);

    SelfConsistentMedium out;
    out.medium = MaxwellGarnettMedium{rho, alpha, xi};
    out.medium.validate();
    out.phi = phi_of_alpha(alpha);
    out.alpha_tilde = alpha;
    const cdouble check = renormalize_alpha(alpha0, out.phi);
    out.iterations = it + 2;
    out.residual =
        std::abs(check - alpha) / std::max(std::abs(check), 1e-300);
    return out;
}

}  // namespace emvac
