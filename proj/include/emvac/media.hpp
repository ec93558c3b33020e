#pragma once

#include <memory>
#include <string>

#include "emvac/types.hpp"

namespace emvac {

// ---------------------------------------------------------------------------
// Parameter bundles.
// ---------------------------------------------------------------------------

// Random medium of identical point dipoles with a hard correlation hole:
// no two dipoles approach closer than xi. rho = 0 describes empty space.
struct MaxwellGarnettMedium {
    double rho = 0.0;                 // number density
    cdouble alpha_tilde{0.0, 0.0};    // renormalized polarizability
    double xi = 1.0;                  // correlation-hole diameter

    void validate() const;
    double packing_fraction() const { return rho * (4.0 * pi / 3.0) * 0.125 * xi * xi * xi; }
};

// Single-resonance dielectric eps(omega) = 1 + f w_r^2 / (w_r^2 - w^2 - i w g).
struct LorentzianDielectric {
    double f = 0.0;          // oscillator strength, in (0, 1)
    double omega_res = 0.0;  // resonance frequency
    double gamma = 0.0;      // damping rate

    void validate() const;
};

// Single-resonance polarizability with radiative linewidth gamma:
//   alpha(k) = (1/3) alpha0_tilde k_res^2 / (k_res^2 - k^2 - i g k^3 / k_res^2).
struct LorentzianPolarizability {
    double alpha0_tilde = 0.0;  // static strength; alpha(0) = alpha0_tilde / 3
    double k_res = 0.0;         // dressed resonance wavenumber
    double gamma = 0.0;         // linewidth, >= 0

    void validate() const;
};

// ---------------------------------------------------------------------------
// Scalar model functions.
// ---------------------------------------------------------------------------

// Maxwell Garnett bulk susceptibility chi = x / (1 - x/3) with x = rho*alpha.
// The Lorentz-local-field pole x = 3 is rejected as a singular medium.
cdouble chi_mg(cdouble rho_alpha);

// Local-field factors connecting macroscopic and cavity fields.
cdouble lff_ll(cdouble eps);  // Lorenz-Lorentz: (eps + 2) / 3
cdouble lff_ob(cdouble eps);  // Onsager-Boettcher: 3 eps / (2 eps + 1)

cdouble eps_lorentzian(double omega, const LorentzianDielectric& m);

// Root of eps(omega) = 0 in the lower half plane with Re > 0 (longitudinal
// mode frequency): sqrt((1+f) w_r^2 - g^2/4) - i g/2.
cdouble longitudinal_eps_zero(const LorentzianDielectric& m);

cdouble alpha_lorentzian(cdouble k, const LorentzianPolarizability& m);

// Quasi-static polarizability of a small sphere: 4 pi a^3 (e-1)/(e+2).
cdouble alpha0_nanoparticle(double a, cdouble eps_e);

// Bare two-level polarizability (1/3) alpha0 w0^2 / (w0^2 - w^2); the pole
// at w = w0 is a domain error, not a resonance to be evaluated.
double alpha_bare_atom(double omega, double omega0, double alpha0);

// ---------------------------------------------------------------------------
// Susceptibility models consumed by the propagator layer.
// ---------------------------------------------------------------------------

class SusceptibilityModel {
  public:
    virtual ~SusceptibilityModel() = default;
    virtual cdouble chi_perp(double q, double k) const = 0;
    virtual cdouble chi_par(double q, double k) const = 0;
    // rho * alpha_tilde entering the vertex chi / (rho alpha); zero marks an
    // empty medium.
    virtual cdouble rho_alpha(double k) const = 0;
    virtual std::string descriptor() const = 0;
    // q values where the susceptibility is discontinuous (quadrature seeds)
    virtual std::vector<double> q_breakpoints(double /*k*/) const { return {}; }
};

// chi = 0 everywhere.
class VacuumModel final : public SusceptibilityModel {
  public:
    cdouble chi_perp(double, double) const override { return {0.0, 0.0}; }
    cdouble chi_par(double, double) const override { return {0.0, 0.0}; }
    cdouble rho_alpha(double) const override { return {0.0, 0.0}; }
    std::string descriptor() const override { return "vacuum"; }
};

// q-independent susceptibility (effective-medium limit).
class UniformChiModel final : public SusceptibilityModel {
  public:
    UniformChiModel(cdouble chi, cdouble rho_alpha)
        : chi_(chi), rho_alpha_(rho_alpha) {}
    // bulk medium of given permittivity, rho*alpha from MG inversion
    static UniformChiModel from_eps(cdouble eps);
    // dilute limit chi = rho*alpha
    static UniformChiModel from_dilute(cdouble rho_alpha);

    cdouble chi_perp(double, double) const override { return chi_; }
    cdouble chi_par(double, double) const override { return chi_; }
    cdouble rho_alpha(double) const override { return rho_alpha_; }
    std::string descriptor() const override;

  private:
    cdouble chi_, rho_alpha_;
};

// Maxwell Garnett effective medium of a dipole ensemble (no q structure).
class MgEffectiveModel final : public SusceptibilityModel {
  public:
    explicit MgEffectiveModel(MaxwellGarnettMedium m);

    cdouble chi_perp(double, double) const override { return chi_; }
    cdouble chi_par(double, double) const override { return chi_; }
    cdouble rho_alpha(double) const override { return ra_; }
    std::string descriptor() const override;
    const MaxwellGarnettMedium& medium() const { return medium_; }

  private:
    MaxwellGarnettMedium medium_;
    cdouble chi_, ra_;
};

// Correlation-hole model: collective MG response below the momentum cutoff
// q_c, bare single-dipole response above it. The sharp window is a crude
// stand-in for the structure factor of the hole.
class WindowedMgModel final : public SusceptibilityModel {
  public:
    WindowedMgModel(MaxwellGarnettMedium m, double q_c);

    cdouble chi_perp(double q, double k) const override;
    cdouble chi_par(double q, double k) const override;
    cdouble rho_alpha(double) const override { return ra_; }
    std::string descriptor() const override;
    std::vector<double> q_breakpoints(double) const override { return {q_c_}; }
    double q_c() const { return q_c_; }
    const MaxwellGarnettMedium& medium() const { return medium_; }

  private:
    MaxwellGarnettMedium medium_;
    double q_c_;
    cdouble chi_low_, ra_;
};

// Default window cutoff: one reciprocal hole diameter.
inline double default_hole_qc(double xi) {
    if (!(xi > 0.0)) throw ConfigError("default_hole_qc: xi must be > 0");
    return 2.0 * pi / xi;
}

// Cutoff calibrated so the sharp window reproduces the static limit of the
// exact correlation-hole exclusion integral
//     -rho*alpha k^2 Int_{r>xi} Tr{G0 G0} d^3r -> -rho*alpha / (2 pi k^2 xi^3),
// which fixes q_c^3 / (9 pi^2) = 1 / (2 pi xi^3), i.e. q_c = (9 pi/2)^{1/3}/xi.
// The default 2 pi/xi window badly over-counts the longitudinal contact
// region; use this cutoff (with q_max = q_c) when quantitative agreement
// with an explicit dipole ensemble is required.
inline double calibrated_hole_qc(double xi) {
    if (!(xi > 0.0)) throw ConfigError("calibrated_hole_qc: xi must be > 0");
    return std::cbrt(4.5 * pi) / xi;
}

// Factory; q_c = 0 selects the default cutoff 2 pi / xi.
WindowedMgModel windowed_mg_susceptibility(MaxwellGarnettMedium m, double q_c = 0.0);

}  // namespace emvac
