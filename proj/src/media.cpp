#include "emvac/media.hpp"

#include <cmath>

namespace emvac {

void MaxwellGarnettMedium::validate() const {
    if (!(rho >= 0.0) || !std::isfinite(rho))
        throw ConfigError("MaxwellGarnettMedium: rho must be >= 0");
    if (!(xi > 0.0)) throw ConfigError("MaxwellGarnettMedium: xi must be > 0");
    if (!std::isfinite(std::abs(alpha_tilde)))
        throw ConfigError("MaxwellGarnettMedium: alpha_tilde must be finite");
    if (std::abs(1.0 - rho * alpha_tilde / 3.0) < 1e-12)
        throw ConfigError(
            "MaxwellGarnettMedium: rho*alpha/3 = 1 is the local-field pole");
    if (!(packing_fraction() < 0.64))
        throw ConfigError(
            "MaxwellGarnettMedium: packing fraction exceeds random close packing");
}

void LorentzianDielectric::validate() const {
    if (!(f > 0.0) || !(f < 1.0))
        throw ConfigError("LorentzianDielectric: f must lie in (0, 1)");
    if (!(omega_res > 0.0))
        throw ConfigError("LorentzianDielectric: omega_res must be > 0");
    if (!(gamma > 0.0))
        throw ConfigError("LorentzianDielectric: gamma must be > 0");
}

void LorentzianPolarizability::validate() const {
    if (alpha0_tilde == 0.0 || !std::isfinite(alpha0_tilde))
        throw ConfigError("LorentzianPolarizability: alpha0_tilde must be nonzero");
    if (!(k_res > 0.0))
        throw ConfigError("LorentzianPolarizability: k_res must be > 0");
    if (!(gamma >= 0.0))
        throw ConfigError("LorentzianPolarizability: gamma must be >= 0");
}

cdouble chi_mg(cdouble rho_alpha) {
    const cdouble den = 1.0 - rho_alpha / 3.0;
    if (std::abs(den) < 1e-12)
        throw ConfigError("chi_mg: singular medium (rho*alpha/3 -> 1)");
    return rho_alpha / den;
}

cdouble lff_ll(cdouble eps) { return (eps + 2.0) / 3.0; }

cdouble lff_ob(cdouble eps) {
    const cdouble den = 2.0 * eps + 1.0;
    if (std::abs(den) < 1e-12)
        throw ConfigError("lff_ob: pole at 2*eps + 1 = 0");
    return 3.0 * eps / den;
}

cdouble eps_lorentzian(double omega, const LorentzianDielectric& m) {
    m.validate();
    const double wr2 = m.omega_res * m.omega_res;
    return 1.0 + m.f * wr2 / (wr2 - omega * omega - iu * omega * m.gamma);
}

cdouble longitudinal_eps_zero(const LorentzianDielectric& m) {
    m.validate();
    const double wr2 = m.omega_res * m.omega_res;
    const double disc = (1.0 + m.f) * wr2 - 0.25 * m.gamma * m.gamma;
    if (!(disc > 0.0))
        throw ConfigError("longitudinal_eps_zero: overdamped resonance");
    return cdouble(std::sqrt(disc), -0.5 * m.gamma);
}

cdouble alpha_lorentzian(cdouble k, const LorentzianPolarizability& m) {
    m.validate();
    const double kr2 = m.k_res * m.k_res;
    const cdouble den = kr2 - k * k - iu * m.gamma * k * k * k / kr2;
    if (std::abs(den) < 1e-300)
        throw ConfigError("alpha_lorentzian: undamped resonance pole");
    return (m.alpha0_tilde / 3.0) * kr2 / den;
}

cdouble alpha0_nanoparticle(double a, cdouble eps_e) {
    if (!(a > 0.0)) throw ConfigError("alpha0_nanoparticle: a must be > 0");
    const cdouble den = eps_e + 2.0;
    if (std::abs(den) < 1e-12)
        throw ConfigError("alpha0_nanoparticle: Froehlich pole eps_e = -2");
    return 4.0 * pi * a * a * a * (eps_e - 1.0) / den;
}

double alpha_bare_atom(double omega, double omega0, double alpha0) {
    if (!(omega0 > 0.0)) throw ConfigError("alpha_bare_atom: omega0 must be > 0");
    const double den = omega0 * omega0 - omega * omega;
    if (std::abs(den) < 1e-12 * omega0 * omega0)
        throw ConfigError("alpha_bare_atom: pole at omega = omega0");
    return (alpha0 / 3.0) * omega0 * omega0 / den;
}

UniformChiModel UniformChiModel::from_eps(cdouble eps) {
    const cdouble chi = eps - 1.0;
    // invert chi = x / (1 - x/3)
    const cdouble ra = chi / (1.0 + chi / 3.0);
    return UniformChiModel(chi, ra);
}

UniformChiModel UniformChiModel::from_dilute(cdouble rho_alpha) {
    return UniformChiModel(rho_alpha, rho_alpha);
}

std::string UniformChiModel::descriptor() const {
    return "uniform-chi(chi=" + std::to_string(chi_.real()) + "+" +
           std::to_string(chi_.imag()) + "i)";
}

MgEffectiveModel::MgEffectiveModel(MaxwellGarnettMedium m) : medium_(m) {
    medium_.validate();
    ra_ = medium_.rho * medium_.alpha_tilde;
    chi_ = chi_mg(ra_);
}

std::string MgEffectiveModel::descriptor() const {
    return "mg-effective(rho=" + std::to_string(medium_.rho) +
           ",xi=" + std::to_string(medium_.xi) + ")";
}

WindowedMgModel::WindowedMgModel(MaxwellGarnettMedium m, double q_c)
    : medium_(m), q_c_(q_c) {
    medium_.validate();
    if (!(q_c_ > 0.0)) throw ConfigError("WindowedMgModel: q_c must be > 0");
    ra_ = medium_.rho * medium_.alpha_tilde;
    chi_low_ = chi_mg(ra_);
}

cdouble WindowedMgModel::chi_perp(double q, double) const {
    return q <= q_c_ ? chi_low_ : ra_;
}

cdouble WindowedMgModel::chi_par(double q, double) const {
    return q <= q_c_ ? chi_low_ : ra_;
}

std::string WindowedMgModel::descriptor() const {
    return "windowed-mg(rho=" + std::to_string(medium_.rho) +
           ",xi=" + std::to_string(medium_.xi) +
           ",q_c=" + std::to_string(q_c_) + ")";
}

WindowedMgModel windowed_mg_susceptibility(MaxwellGarnettMedium m, double q_c) {
    if (q_c == 0.0) q_c = default_hole_qc(m.xi);
    return WindowedMgModel(m, q_c);
}

}  // namespace emvac
