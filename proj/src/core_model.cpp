#include "polcav/core_model.hpp"

#include <cmath>

namespace polcav {

void OpticalMode::validate() const {
    if (!(linewidth > 0.0)) throw ValidationError("kappa", "must be > 0");
    if (!(input_power >= 0.0)) throw ValidationError("input_power", "must be >= 0");
    if (!(wavelength > 0.0)) throw ValidationError("wavelength", "must be > 0");
    if (!(coupling_efficiency >= 0.0 && coupling_efficiency <= 1.0))
        throw ValidationError("coupling_efficiency", "must be in [0, 1]");
    if (!std::isfinite(detuning)) throw ValidationError("detuning", "must be finite");
}

void MechanicalMode::validate() const {
    if (!(omega_m > 0.0)) throw ValidationError("omega_m", "must be > 0");
    if (!(gamma_m > 0.0)) throw ValidationError("gamma_m", "must be > 0");
    if (!(effective_mass > 0.0)) throw ValidationError("m_eff", "must be > 0");
    if (!(bath_temperature >= 0.0)) throw ValidationError("t_bath", "must be >= 0");
    if (!std::isfinite(quality_factor())) throw ValidationError("gamma_m", "Q must be finite");
}

double intracavity_photon_number(const OpticalMode& mode) {
    mode.validate();
    const double half_k = 0.5 * mode.linewidth;
    const double denom = kHbar * mode.laser_angular_frequency() *
                         (half_k * half_k + mode.detuning * mode.detuning);
    return mode.coupling_efficiency * mode.linewidth * mode.input_power / denom;
}

namespace {

// Lorentzian denominators at the two sideband frequencies.
struct SidebandDenominators {
    double plus;   // (kappa/2)^2 + (Delta + Omega_m)^2, anti-Stokes side
    double minus;  // (kappa/2)^2 + (Delta - Omega_m)^2, Stokes side
};

SidebandDenominators sideband_denominators(double kappa, double detuning, double omega_m) {
    const double half_k2 = 0.25 * kappa * kappa;
    const double dp = detuning + omega_m;
    const double dm = detuning - omega_m;
    return {half_k2 + dp * dp, half_k2 + dm * dm};
}

}  // namespace

double optical_damping(const OpticalMode& mode, const MechanicalMode& mech, double g0) {
    mech.validate();
    if (!(g0 >= 0.0)) throw ValidationError("g0", "must be >= 0");
    const double n = intracavity_photon_number(mode);
    const auto d = sideband_denominators(mode.linewidth, mode.detuning, mech.omega_m);
    return n * g0 * g0 * (mode.linewidth / d.plus - mode.linewidth / d.minus);
}

double optical_spring(const OpticalMode& mode, const MechanicalMode& mech, double g0) {
    mech.validate();
    if (!(g0 >= 0.0)) throw ValidationError("g0", "must be >= 0");
    const double n = intracavity_photon_number(mode);
    const auto d = sideband_denominators(mode.linewidth, mode.detuning, mech.omega_m);
    return n * g0 * g0 *
           ((mode.detuning + mech.omega_m) / d.plus + (mode.detuning - mech.omega_m) / d.minus);
}

double minimum_phonon_number(double kappa, double omega_m) {
    if (!(kappa >= 0.0)) throw ValidationError("kappa", "must be >= 0");
    if (!(omega_m > 0.0)) throw ValidationError("omega_m", "must be > 0");
    const double r = kappa / (4.0 * omega_m);
    return r * r;
}

double thermal_occupation(double temperature, double omega_m) {
    if (!(temperature >= 0.0)) throw ValidationError("temperature", "must be >= 0");
    if (!(omega_m > 0.0)) throw ValidationError("omega_m", "must be > 0");
    if (temperature == 0.0) return 0.0;
    // expm1 keeps precision in the high-temperature regime where x ~ 1e-8.
    return 1.0 / std::expm1(kHbar * omega_m / (kBoltzmann * temperature));
}

double effective_temperature(double gamma_m, double gamma_opt, double n_th,
                             double n_min, double omega_m) {
    if (!(gamma_m > 0.0)) throw ValidationError("gamma_m", "must be > 0");
    if (!(omega_m > 0.0)) throw ValidationError("omega_m", "must be > 0");
    if (!(n_th >= 0.0)) throw ValidationError("n_th", "must be >= 0");
    if (!(n_min >= 0.0)) throw ValidationError("n_min", "must be >= 0");
    const double total = gamma_m + gamma_opt;
    if (!(total > 0.0))
        throw InstabilityError("anti-damping at or past the instability threshold: "
                               "gamma_m + gamma_opt <= 0");
    return kHbar * omega_m / kBoltzmann * (n_th * gamma_m + n_min * gamma_opt) / total;
}

double cooperativity(double n_cav, double g0, double kappa, double gamma_m) {
    if (!(kappa > 0.0)) throw ValidationError("kappa", "must be > 0");
    if (!(gamma_m > 0.0)) throw ValidationError("gamma_m", "must be > 0");
    if (!(n_cav >= 0.0)) throw ValidationError("n_cav", "must be >= 0");
    return 4.0 * n_cav * g0 * g0 / (kappa * gamma_m);
}

}  // namespace polcav
