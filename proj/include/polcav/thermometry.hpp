#ifndef POLCAV_THERMOMETRY_HPP
#define POLCAV_THERMOMETRY_HPP

#include "polcav/two_mode.hpp"

namespace polcav {

// Cavity transfer weights for the motional sidebands: each is the unit-peak
// Lorentzian response evaluated at the sideband's offset from the mode
// resonance, (Delta_j -/+ Omega_m) for Stokes / anti-Stokes.
struct SidebandWeights {
    double stokes_h = 0.0;
    double anti_stokes_h = 0.0;
    double stokes_v = 0.0;
    double anti_stokes_v = 0.0;

    // Fully resolved target configuration: co-resonant sidebands pass,
    // cross sidebands rejected.
    static SidebandWeights ideal() { return {1.0, 0.0, 0.0, 1.0}; }
};

// Weights from the system's stored laser position (mode detunings).
SidebandWeights sideband_weights(const TwoModeSystem& sys);

// H/V scattered-power ratio at phonon occupation n:
//   [(n+1) t_S,H + n t_AS,H] / [(n+1) t_S,V + n t_AS,V]
// Reduces to 1 + 1/n for the ideal configuration. Strictly decreasing in n
// whenever t_S,H t_AS,V > t_AS,H t_S,V.
double polarization_ratio(const SidebandWeights& w, double n);
double polarization_ratio(const TwoModeSystem& sys, double n);

// Large-n limit of the ratio, (t_S,H + t_AS,H) / (t_S,V + t_AS,V).
double ratio_asymptote(const SidebandWeights& w);

// Unique n >= 0 with polarization_ratio(w, n) == ratio, by bisection to 1e-9
// relative. Throws OutOfRange when the ratio is outside the invertible range.
double estimate_phonon_number(double ratio, const SidebandWeights& w);
double estimate_phonon_number(double ratio, const TwoModeSystem& sys);

// Photodetector components behind a 45-degree polarizer. Field magnitudes:
// a_S = sqrt((n+1) t_S), a_AS = sqrt(n t_AS) with t_S, t_AS the summed
// projected weights; the Omega_m component beats each sideband against the
// carrier with opposing signs, the 2 Omega_m component is the sideband beat.
struct DetectorSignal {
    double s_omega = 0.0;    // arbitrary detector units
    double s_2omega = 0.0;   // arbitrary detector units
};
DetectorSignal detector_signal_components(const SidebandWeights& w, double n,
                                          double carrier_amplitude);
DetectorSignal detector_signal_components(const TwoModeSystem& sys, double n,
                                          double carrier_amplitude);

struct ThermometryResult {
    double ratio_hv = 0.0;
    double n_est = 0.0;
    double s_omega = 0.0;
    double s_2omega = 0.0;
};

}  // namespace polcav

#endif
