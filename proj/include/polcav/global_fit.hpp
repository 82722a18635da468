#ifndef POLCAV_GLOBAL_FIT_HPP
#define POLCAV_GLOBAL_FIT_HPP

#include <array>
#include <vector>

#include "polcav/two_mode.hpp"

namespace polcav {

// One measured point of the detuning sweep (all rad/s).
struct Observation {
    double detuning_ref;  // reference detuning, H-mode convention
    double delta_omega;   // mechanical frequency shift
    double gamma_eff;     // effective damping including gamma_m
};

// Quantities held fixed during the four-parameter fit.
struct GlobalFitFixed {
    MechanicalMode mech;
    double g0 = 0.0;          // rad/s
    double wavelength = 1064e-9;
    double eta = 1.0;
};

struct GlobalFitResult {
    double kappa_hz = 0.0;
    double splitting_hz = 0.0;
    double power_h = 0.0;  // W
    double power_v = 0.0;  // W
    std::array<std::array<double, 4>, 4> covariance{};  // in (Hz, Hz, W, W) units
    double residual_rms = 0.0;
    int iterations = 0;
};

// Model value and its derivatives with respect to (kappa, splitting, P_h, P_v);
// exposed for the Jacobian finite-difference check.
struct ResponseGradient {
    double delta_omega;
    double gamma_opt;  // without gamma_m
    std::array<double, 4> d_delta_omega;
    std::array<double, 4> d_gamma_opt;
};
ResponseGradient combined_response_gradient(double kappa, double splitting, double power_h,
                                            double power_v, const GlobalFitFixed& fixed,
                                            double detuning_ref);

// Single simultaneous fit of (kappa, splitting, P_h, P_v) against both
// observables, each normalized by its sample standard deviation, by damped
// least squares. init = {kappa, splitting, P_h, P_v} in rad/s, rad/s, W, W.
GlobalFitResult global_fit(const std::vector<Observation>& observations,
                           const GlobalFitFixed& fixed, const std::array<double, 4>& init);

}  // namespace polcav

#endif
