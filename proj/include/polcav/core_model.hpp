#ifndef POLCAV_CORE_MODEL_HPP
#define POLCAV_CORE_MODEL_HPP

#include "polcav/constants.hpp"
#include "polcav/errors.hpp"

namespace polcav {

enum class Polarization { H, V };

// One polarization eigenmode of the cavity as seen by the drive laser.
// Sign convention: detuning = omega_laser - omega_mode, red detuning negative.
struct OpticalMode {
    double detuning = 0.0;             // rad/s
    double linewidth = 0.0;            // rad/s, FWHM (kappa)
    double input_power = 0.0;          // W
    double wavelength = 1064e-9;       // m
    double coupling_efficiency = 1.0;  // dimensionless, in [0, 1]
    Polarization polarization = Polarization::H;

    void validate() const;
    double laser_angular_frequency() const { return kTwoPi * kSpeedOfLight / wavelength; }
};

struct MechanicalMode {
    double omega_m = 0.0;            // rad/s
    double gamma_m = 0.0;            // rad/s, intrinsic FWHM
    double effective_mass = 1e-10;   // kg
    double bath_temperature = 300.0; // K

    void validate() const;
    double quality_factor() const { return omega_m / gamma_m; }
};

// Mean intracavity photon number for a coherent drive at the mode's detuning.
//   n_cav = eta kappa P / (hbar omega_L ((kappa/2)^2 + Delta^2))
double intracavity_photon_number(const OpticalMode& mode);

// Optically induced damping Gamma_opt (rad/s). Positive for red detuning
// (cooling), negative for blue (driving); odd in the detuning.
double optical_damping(const OpticalMode& mode, const MechanicalMode& mech, double g0);

// Optical spring: light-induced mechanical frequency shift (rad/s).
double optical_spring(const OpticalMode& mode, const MechanicalMode& mech, double g0);

// Sideband-cooling backaction limit, (kappa / 4 omega_m)^2.
double minimum_phonon_number(double kappa, double omega_m);

// Bose-Einstein occupation of the mechanical mode at temperature T; 0 at T=0.
double thermal_occupation(double temperature, double omega_m);

// Weighted-bath effective temperature:
//   T_eff = (hbar omega_m / k_B) (n_th Gamma_m + n_min Gamma_opt) / (Gamma_m + Gamma_opt)
// Throws InstabilityError when Gamma_m + Gamma_opt <= 0.
double effective_temperature(double gamma_m, double gamma_opt, double n_th,
                             double n_min, double omega_m);

// Multi-photon cooperativity C = 4 n_cav g0^2 / (kappa Gamma_m).
double cooperativity(double n_cav, double g0, double kappa, double gamma_m);

}  // namespace polcav

#endif
