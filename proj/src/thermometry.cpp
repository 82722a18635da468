#include "polcav/thermometry.hpp"

#include <cmath>
#include <limits>

#include "polcav/root_finding.hpp"

namespace polcav {

namespace {

double unit_peak_response(double kappa, double offset) {
    const double half_k2 = 0.25 * kappa * kappa;
    return half_k2 / (half_k2 + offset * offset);
}

void check_occupation(double n) {
    if (!(n >= 0.0)) throw ValidationError("n", "phonon occupation must be >= 0");
}

}  // namespace

SidebandWeights sideband_weights(const TwoModeSystem& sys) {
    sys.validate();
    const double kappa = sys.mode_h.linewidth;
    const double omega_m = sys.mech.omega_m;
    SidebandWeights w;
    // Stokes sideband sits at laser - Omega_m, i.e. at offset Delta_j - Omega_m
    // from mode j; anti-Stokes at Delta_j + Omega_m.
    w.stokes_h = unit_peak_response(kappa, sys.mode_h.detuning - omega_m);
    w.anti_stokes_h = unit_peak_response(kappa, sys.mode_h.detuning + omega_m);
    w.stokes_v = unit_peak_response(kappa, sys.mode_v.detuning - omega_m);
    w.anti_stokes_v = unit_peak_response(kappa, sys.mode_v.detuning + omega_m);
    return w;
}

double polarization_ratio(const SidebandWeights& w, double n) {
    check_occupation(n);
    const double numerator = (n + 1.0) * w.stokes_h + n * w.anti_stokes_h;
    const double denominator = (n + 1.0) * w.stokes_v + n * w.anti_stokes_v;
    if (denominator == 0.0)
        throw DivisionDegenerate("no light in the V mode at this occupation");
    return numerator / denominator;
}

double polarization_ratio(const TwoModeSystem& sys, double n) {
    return polarization_ratio(sideband_weights(sys), n);
}

double ratio_asymptote(const SidebandWeights& w) {
    const double denominator = w.stokes_v + w.anti_stokes_v;
    if (denominator == 0.0)
        throw DivisionDegenerate("no light in the V mode");
    return (w.stokes_h + w.anti_stokes_h) / denominator;
}

double estimate_phonon_number(double ratio, const SidebandWeights& w) {
    if (!(ratio > 0.0)) throw ValidationError("ratio", "must be > 0");
    const double asymptote = ratio_asymptote(w);
    if (!(ratio > asymptote))
        throw OutOfRange("ratio at or below the large-n asymptote; occupation too high "
                         "to resolve or calibration error");

    // Ratio at n = 0 is the upper end of the attainable range.
    const double at_zero = w.stokes_v > 0.0
                               ? w.stokes_h / w.stokes_v
                               : std::numeric_limits<double>::infinity();
    if (ratio >= at_zero) {
        if (ratio == at_zero) return 0.0;
        throw OutOfRange("ratio above the n = 0 value; not attainable for these weights");
    }

    // The ratio is strictly decreasing in n: expand until bracketed, bisect.
    double hi = 1.0;
    while (polarization_ratio(w, hi) > ratio) {
        hi *= 2.0;
        if (hi > 1e18) throw OutOfRange("ratio too close to the asymptote to invert");
    }
    double lo = 0.0;
    if (w.stokes_v == 0.0) {
        // The ratio diverges at n = 0 for these weights; back the lower
        // bracket off zero.
        lo = hi;
        do {
            lo *= 0.5;
            if (lo < 1e-300) throw OutOfRange("ratio not attainable for these weights");
        } while (!(polarization_ratio(w, lo) > ratio));
    }
    auto f = [&w, ratio](double n) { return polarization_ratio(w, n) - ratio; };
    return bisect(f, lo, hi);
}

double estimate_phonon_number(double ratio, const TwoModeSystem& sys) {
    return estimate_phonon_number(ratio, sideband_weights(sys));
}

DetectorSignal detector_signal_components(const SidebandWeights& w, double n,
                                          double carrier_amplitude) {
    check_occupation(n);
    if (!(carrier_amplitude > 0.0))
        throw ValidationError("carrier_amplitude", "must be > 0");
    // The common 45-degree projection factor is absorbed into the arbitrary
    // detector units.
    const double t_s = w.stokes_h + w.stokes_v;
    const double t_as = w.anti_stokes_h + w.anti_stokes_v;
    const double a_s = std::sqrt((n + 1.0) * t_s);
    const double a_as = std::sqrt(n * t_as);
    return {carrier_amplitude * std::abs(a_s - a_as), a_s * a_as};
}

DetectorSignal detector_signal_components(const TwoModeSystem& sys, double n,
                                          double carrier_amplitude) {
    return detector_signal_components(sideband_weights(sys), n, carrier_amplitude);
}

}  // namespace polcav
