#ifndef POLCAV_TWO_MODE_HPP
#define POLCAV_TWO_MODE_HPP

#include <cstddef>
#include <utility>
#include <vector>

#include "polcav/core_model.hpp"

namespace polcav {

// The polarization-split cavity: two optical modes sharing kappa and lambda,
// separated by `splitting` (omega_V - omega_H > 0), one mechanical mode,
// one single-photon coupling rate.
//
// Detunings are referenced to the lower-frequency H mode throughout:
// at reference detuning x the H mode sees x and the V mode sees x - splitting.
struct TwoModeSystem {
    OpticalMode mode_h;
    OpticalMode mode_v;
    double splitting = 0.0;  // rad/s, > 0
    double g0 = 0.0;         // rad/s
    MechanicalMode mech;

    void validate() const;
    OpticalMode mode_h_at(double detuning_ref) const;
    OpticalMode mode_v_at(double detuning_ref) const;
};

// Convenience constructor; detuning_ref sets the stored laser position.
TwoModeSystem make_two_mode_system(double kappa, double splitting, double power_h,
                                   double power_v, double wavelength, double eta,
                                   double g0, const MechanicalMode& mech,
                                   double detuning_ref = 0.0);

struct CombinedResponse {
    double delta_omega;  // rad/s, summed optical spring
    double gamma_eff;    // rad/s, Gamma_opt,H + Gamma_opt,V + Gamma_m
};

// Sum of the two single-mode contributions at the given reference detuning.
CombinedResponse combined_response(const TwoModeSystem& sys, double detuning_ref);

// Summed optical damping / spring alone (no Gamma_m).
double combined_optical_damping(const TwoModeSystem& sys, double detuning_ref);
double combined_optical_spring(const TwoModeSystem& sys, double detuning_ref);

struct SweepPoint {
    double detuning_ref = 0.0;       // rad/s
    double delta_omega_total = 0.0;  // rad/s
    double gamma_eff_total = 0.0;    // rad/s
    double t_eff = 0.0;              // K, NaN when unstable
    double n_eff = 0.0;              // dimensionless, NaN when unstable
    bool unstable = false;           // gamma_m + gamma_opt <= 0 at this point
};

struct SweepResult {
    std::vector<SweepPoint> points;
    TwoModeSystem system;
    std::size_t unstable_count = 0;
};

// One SweepPoint per grid entry; grid must be strictly increasing.
// Blue-detuned instability is recorded per point, never fatal.
SweepResult sweep(const TwoModeSystem& sys, const std::vector<double>& grid);

// Root of the total optical damping strictly between the mode centers,
// by bisection. Throws NoCancellation if the sign does not change.
double cancellation_detuning(const TwoModeSystem& sys);

// Bare-cavity transmission vs laser offset from the H mode:
//   T = cos^2(theta) L_H + sin^2(theta) L_V, unit-peak Lorentzians of FWHM kappa.
std::vector<std::pair<double, double>> transmission_scan(const TwoModeSystem& sys,
                                                         const std::vector<double>& laser_offsets,
                                                         double input_pol_angle);

// Candidate parameters for a shorter-cavity design (human units).
struct DesignCandidate {
    double cavity_length = 0.01;  // m
    double kappa_hz = 85e3;       // Hz
    double omega_m_hz = 250e3;    // Hz
    double quality_factor = 5e5;
    double g0_hz = 8.0;           // Hz
    double input_power = 50e-6;   // W
    double temperature = 1.0;     // K
    double wavelength = 1064e-9;  // m
};

struct FeasibilityReport {
    double photon_number = 0.0;        // n_cav at Delta = -Omega_m
    double cooperativity = 0.0;        // C
    double thermal_occupation = 0.0;   // n_th
    double cooperativity_ratio = 0.0;  // C / n_th
    bool sideband_resolved = false;    // kappa < 4 Omega_m
    double predicted_splitting_hz = 0.0;  // reference splitting scaled by 1/L
};

// Reference for the 1/L splitting scaling: the demonstrated 5 cm device.
inline constexpr double kReferenceSplittingHz = 83e3;
inline constexpr double kReferenceCavityLength = 0.05;  // m

FeasibilityReport design_feasibility(const DesignCandidate& candidate);

}  // namespace polcav

#endif
