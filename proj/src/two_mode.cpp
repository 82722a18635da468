#include "polcav/two_mode.hpp"

#include <cmath>
#include <limits>

#include "polcav/root_finding.hpp"

namespace polcav {

void TwoModeSystem::validate() const {
    mode_h.validate();
    mode_v.validate();
    mech.validate();
    if (!(splitting > 0.0)) throw ValidationError("splitting", "must be > 0");
    if (!(g0 >= 0.0)) throw ValidationError("g0", "must be >= 0");
    if (mode_h.linewidth != mode_v.linewidth)
        throw ValidationError("kappa", "both modes must share the linewidth");
    if (mode_h.wavelength != mode_v.wavelength)
        throw ValidationError("wavelength", "both modes must share the wavelength");
    const double gap = mode_h.detuning - mode_v.detuning;
    if (std::abs(gap - splitting) > 1e-9 * splitting)
        throw ValidationError("splitting", "mode detunings must differ by the splitting");
}

OpticalMode TwoModeSystem::mode_h_at(double detuning_ref) const {
    OpticalMode m = mode_h;
    m.detuning = detuning_ref;
    return m;
}

OpticalMode TwoModeSystem::mode_v_at(double detuning_ref) const {
    OpticalMode m = mode_v;
    m.detuning = detuning_ref - splitting;
    return m;
}

TwoModeSystem make_two_mode_system(double kappa, double splitting, double power_h,
                                   double power_v, double wavelength, double eta,
                                   double g0, const MechanicalMode& mech,
                                   double detuning_ref) {
    TwoModeSystem sys;
    sys.mode_h = {detuning_ref, kappa, power_h, wavelength, eta, Polarization::H};
    sys.mode_v = {detuning_ref - splitting, kappa, power_v, wavelength, eta, Polarization::V};
    sys.splitting = splitting;
    sys.g0 = g0;
    sys.mech = mech;
    sys.validate();
    return sys;
}

double combined_optical_damping(const TwoModeSystem& sys, double detuning_ref) {
    return optical_damping(sys.mode_h_at(detuning_ref), sys.mech, sys.g0) +
           optical_damping(sys.mode_v_at(detuning_ref), sys.mech, sys.g0);
}

double combined_optical_spring(const TwoModeSystem& sys, double detuning_ref) {
    return optical_spring(sys.mode_h_at(detuning_ref), sys.mech, sys.g0) +
           optical_spring(sys.mode_v_at(detuning_ref), sys.mech, sys.g0);
}

CombinedResponse combined_response(const TwoModeSystem& sys, double detuning_ref) {
    sys.validate();
    if (!std::isfinite(detuning_ref)) throw ValidationError("detuning_ref", "must be finite");
    return {combined_optical_spring(sys, detuning_ref),
            combined_optical_damping(sys, detuning_ref) + sys.mech.gamma_m};
}

SweepResult sweep(const TwoModeSystem& sys, const std::vector<double>& grid) {
    sys.validate();
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw ValidationError("grid", "must be strictly increasing");

    const double n_th = thermal_occupation(sys.mech.bath_temperature, sys.mech.omega_m);
    const double n_min = minimum_phonon_number(sys.mode_h.linewidth, sys.mech.omega_m);
    const double nan = std::numeric_limits<double>::quiet_NaN();

    SweepResult result;
    result.system = sys;
    result.points.reserve(grid.size());
    for (double x : grid) {
        SweepPoint p;
        p.detuning_ref = x;
        const double gamma_opt = combined_optical_damping(sys, x);
        p.delta_omega_total = combined_optical_spring(sys, x);
        p.gamma_eff_total = gamma_opt + sys.mech.gamma_m;
        if (p.gamma_eff_total > 0.0) {
            p.n_eff = (n_th * sys.mech.gamma_m + n_min * gamma_opt) / p.gamma_eff_total;
            p.t_eff = kHbar * sys.mech.omega_m * p.n_eff / kBoltzmann;
        } else {
            p.unstable = true;
            p.t_eff = nan;
            p.n_eff = nan;
            ++result.unstable_count;
        }
        result.points.push_back(p);
    }
    return result;
}

double cancellation_detuning(const TwoModeSystem& sys) {
    sys.validate();
    if (!(sys.mode_h.input_power > 0.0) || !(sys.mode_v.input_power > 0.0))
        throw NoCancellation("both mode powers must be > 0 for an interior zero");

    auto f = [&sys](double x) { return combined_optical_damping(sys, x); };
    // Inset avoids the exact zeros each mode contributes at its own center.
    const double inset = 1e-9 * sys.splitting;
    const double a = inset;
    const double b = sys.splitting - inset;
    const double fa = f(a);
    const double fb = f(b);
    if (!(fa > 0.0 && fb < 0.0) && !(fa < 0.0 && fb > 0.0))
        throw NoCancellation("total optical damping does not change sign between the modes");

    const double root = bisect(f, a, b);
    // Contract: |Gamma_opt| < 1e-6 Gamma_m at the returned detuning. The
    // bisection runs to bracket collapse, which lands far below that bound.
    return root;
}

std::vector<std::pair<double, double>> transmission_scan(const TwoModeSystem& sys,
                                                         const std::vector<double>& laser_offsets,
                                                         double input_pol_angle) {
    sys.validate();
    if (!(input_pol_angle >= 0.0 && input_pol_angle <= kTwoPi / 4.0))
        throw ValidationError("input_pol_angle", "must be in [0, pi/2]");

    const double c2 = std::cos(input_pol_angle) * std::cos(input_pol_angle);
    const double s2 = 1.0 - c2;
    const double half_k2 = 0.25 * sys.mode_h.linewidth * sys.mode_h.linewidth;

    std::vector<std::pair<double, double>> scan;
    scan.reserve(laser_offsets.size());
    for (double w : laser_offsets) {
        const double dv = w - sys.splitting;
        const double lh = half_k2 / (half_k2 + w * w);
        const double lv = half_k2 / (half_k2 + dv * dv);
        scan.emplace_back(w, c2 * lh + s2 * lv);
    }
    return scan;
}

FeasibilityReport design_feasibility(const DesignCandidate& c) {
    if (!(c.cavity_length > 0.0)) throw ValidationError("cavity_length", "must be > 0");
    if (!(c.kappa_hz > 0.0)) throw ValidationError("kappa", "must be > 0");
    if (!(c.omega_m_hz > 0.0)) throw ValidationError("omega_m", "must be > 0");
    if (!(c.quality_factor > 0.0)) throw ValidationError("quality_factor", "must be > 0");
    if (!(c.g0_hz >= 0.0)) throw ValidationError("g0", "must be >= 0");
    if (!(c.input_power > 0.0)) throw ValidationError("input_power", "must be > 0");
    if (!(c.temperature > 0.0)) throw ValidationError("temperature", "must be > 0");
    if (!(c.wavelength > 0.0)) throw ValidationError("wavelength", "must be > 0");

    const double kappa = rad_from_hz(c.kappa_hz);
    const double omega_m = rad_from_hz(c.omega_m_hz);
    const double gamma_m = omega_m / c.quality_factor;
    const double g0 = rad_from_hz(c.g0_hz);

    OpticalMode drive;
    drive.detuning = -omega_m;  // optimal cooling point
    drive.linewidth = kappa;
    drive.input_power = c.input_power;
    drive.wavelength = c.wavelength;
    drive.coupling_efficiency = 1.0;

    FeasibilityReport report;
    report.photon_number = intracavity_photon_number(drive);
    report.cooperativity = cooperativity(report.photon_number, g0, kappa, gamma_m);
    report.thermal_occupation = thermal_occupation(c.temperature, omega_m);
    report.cooperativity_ratio =
        report.thermal_occupation > 0.0
            ? report.cooperativity / report.thermal_occupation
            : std::numeric_limits<double>::infinity();
    report.sideband_resolved = kappa < 4.0 * omega_m;
    report.predicted_splitting_hz =
        kReferenceSplittingHz * kReferenceCavityLength / c.cavity_length;
    return report;
}

}  // namespace polcav
