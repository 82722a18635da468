#ifndef POLCAV_SPECTRA_HPP
#define POLCAV_SPECTRA_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "polcav/two_mode.hpp"

namespace polcav {

struct SpectrumMetadata {
    double detuning_ref = 0.0;  // rad/s
    std::uint64_t seed = 0;
    double rbw = 0.0;  // Hz, grid resolution
};

// One-sided displacement noise spectrum around the mechanical resonance.
struct NoiseSpectrum {
    std::vector<double> freq_hz;  // strictly increasing
    std::vector<double> psd;      // m^2 / Hz, >= 0
    SpectrumMetadata meta;
};

// Thermal-noise spectrum of the driven system at one detuning:
// a Lorentzian of FWHM Gamma_eff centered on the shifted mechanical frequency,
// normalized so its full-line frequency integral is <x^2> = k_B T_eff / (m Omega_m^2),
// with per-bin multiplicative Gaussian noise of relative size noise_fraction.
// Throws InstabilityError when Gamma_eff <= 0 at this detuning.
NoiseSpectrum synthesize_spectrum(const TwoModeSystem& sys, double detuning_ref,
                                  const std::vector<double>& freq_grid_hz,
                                  double noise_fraction, std::uint64_t seed,
                                  double offset = 0.0);

struct LorentzianFit {
    double center_hz = 0.0;
    double fwhm_hz = 0.0;
    double area = 0.0;    // same units as psd * Hz
    double offset = 0.0;  // constant background
    double center_err = 0.0;
    double fwhm_err = 0.0;
    double area_err = 0.0;
    double offset_err = 0.0;
    double residual_rms = 0.0;
};

// Nonlinear least squares of a Lorentzian plus constant offset.
// Initial guesses: argmax center, half-maximum-crossing FWHM,
// background-subtracted trapezoid area.
LorentzianFit fit_lorentzian(const NoiseSpectrum& spec);

// Equipartition: T = m_eff Omega_m^2 * area / k_B.
double temperature_from_fit(const LorentzianFit& fit, const MechanicalMode& mech);

struct RingdownFit {
    double kappa_hz = 0.0;  // FWHM linewidth, 1 / (2 pi tau)
    double tau = 0.0;       // s
    double amplitude = 0.0;
    double background = 0.0;
};

// Exponential fit I(t) = I0 exp(-t/tau) + b on the post-peak segment.
// Throws NotDecaying when no decaying component is found.
RingdownFit ringdown_fit(const std::vector<std::pair<double, double>>& time_series);

}  // namespace polcav

#endif
