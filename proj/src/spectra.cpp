#include "polcav/spectra.hpp"

#include <algorithm>
#include <cmath>

#include "polcav/least_squares.hpp"
#include "polcav/rng.hpp"

namespace polcav {

namespace {

constexpr double kPi = 3.14159265358979323846;

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + mid, v.end());
    double hi = v[mid];
    if (v.size() % 2 == 1) return hi;
    std::nth_element(v.begin(), v.begin() + mid - 1, v.end());
    return 0.5 * (hi + v[mid - 1]);
}

// Unit-area Lorentzian in ordinary frequency, FWHM w.
double lorentzian(double f, double center, double w) {
    const double u = (f - center) / w;
    return 2.0 / (kPi * w) / (1.0 + 4.0 * u * u);
}

}  // namespace

NoiseSpectrum synthesize_spectrum(const TwoModeSystem& sys, double detuning_ref,
                                  const std::vector<double>& freq_grid_hz,
                                  double noise_fraction, std::uint64_t seed,
                                  double offset) {
    sys.validate();
    if (freq_grid_hz.size() < 2) throw ValidationError("freq_grid", "needs at least 2 points");
    for (std::size_t i = 1; i < freq_grid_hz.size(); ++i)
        if (!(freq_grid_hz[i] > freq_grid_hz[i - 1]))
            throw ValidationError("freq_grid", "must be strictly increasing");
    if (!(noise_fraction >= 0.0)) throw ValidationError("noise_fraction", "must be >= 0");
    if (!(offset >= 0.0)) throw ValidationError("offset", "must be >= 0");

    const CombinedResponse resp = combined_response(sys, detuning_ref);
    const double gamma_eff = resp.gamma_eff;
    if (!(gamma_eff > 0.0))
        throw InstabilityError("effective damping <= 0 at this detuning; no stationary spectrum");

    const double gamma_opt = gamma_eff - sys.mech.gamma_m;
    const double n_th = thermal_occupation(sys.mech.bath_temperature, sys.mech.omega_m);
    const double n_min = minimum_phonon_number(sys.mode_h.linewidth, sys.mech.omega_m);
    const double t_eff =
        effective_temperature(sys.mech.gamma_m, gamma_opt, n_th, n_min, sys.mech.omega_m);

    const double x2 = kBoltzmann * t_eff /
                      (sys.mech.effective_mass * sys.mech.omega_m * sys.mech.omega_m);
    const double f_eff = hz_from_rad(sys.mech.omega_m + resp.delta_omega);
    const double fwhm_hz = hz_from_rad(gamma_eff);

    NoiseSpectrum spec;
    spec.freq_hz = freq_grid_hz;
    spec.psd.resize(freq_grid_hz.size());
    spec.meta.detuning_ref = detuning_ref;
    spec.meta.seed = seed;
    spec.meta.rbw = freq_grid_hz[1] - freq_grid_hz[0];

    GaussianStream rng(seed);
    for (std::size_t i = 0; i < freq_grid_hz.size(); ++i) {
        double s = x2 * lorentzian(freq_grid_hz[i], f_eff, fwhm_hz) + offset;
        if (noise_fraction > 0.0) s *= 1.0 + noise_fraction * rng.normal();
        spec.psd[i] = std::max(s, 0.0);
    }
    return spec;
}

LorentzianFit fit_lorentzian(const NoiseSpectrum& spec) {
    const std::size_t n = spec.freq_hz.size();
    if (n < 8) throw ValidationError("spectrum", "too few bins to fit");
    if (spec.psd.size() != n) throw ValidationError("spectrum", "grid/psd size mismatch");
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0 && !(spec.freq_hz[i] > spec.freq_hz[i - 1]))
            throw ValidationError("spectrum", "grid must be strictly increasing");
        if (!(spec.psd[i] >= 0.0))
            throw ValidationError("spectrum", "psd must be non-negative");
    }

    // Background and noise scale from the outer quarter of the grid.
    std::vector<double> edges;
    const std::size_t q = std::max<std::size_t>(n / 8, 2);
    for (std::size_t i = 0; i < q; ++i) {
        edges.push_back(spec.psd[i]);
        edges.push_back(spec.psd[n - 1 - i]);
    }
    const double background = median(edges);
    double var = 0.0;
    for (double e : edges) var += (e - background) * (e - background);
    const double noise_sigma = std::sqrt(var / edges.size());

    const std::size_t peak_idx = static_cast<std::size_t>(
        std::max_element(spec.psd.begin(), spec.psd.end()) - spec.psd.begin());
    const double peak = spec.psd[peak_idx];
    if (!(peak - background > 3.0 * noise_sigma) || !(peak > background))
        throw NoPeak("no local maximum above 3x the noise estimate");

    // Half-maximum crossings, linearly interpolated.
    const double half = background + 0.5 * (peak - background);
    double left = spec.freq_hz.front();
    bool have_left = false;
    for (std::size_t i = peak_idx; i-- > 0;) {
        if (spec.psd[i] < half) {
            const double t = (half - spec.psd[i]) / (spec.psd[i + 1] - spec.psd[i]);
            left = spec.freq_hz[i] + t * (spec.freq_hz[i + 1] - spec.freq_hz[i]);
            have_left = true;
            break;
        }
    }
    double right = spec.freq_hz.back();
    bool have_right = false;
    for (std::size_t i = peak_idx + 1; i < n; ++i) {
        if (spec.psd[i] < half) {
            const double t = (spec.psd[i - 1] - half) / (spec.psd[i - 1] - spec.psd[i]);
            right = spec.freq_hz[i - 1] + t * (spec.freq_hz[i] - spec.freq_hz[i - 1]);
            have_right = true;
            break;
        }
    }
    const double center0 = spec.freq_hz[peak_idx];
    double fwhm0;
    if (have_left && have_right) fwhm0 = right - left;
    else if (have_left) fwhm0 = 2.0 * (center0 - left);
    else if (have_right) fwhm0 = 2.0 * (right - center0);
    else fwhm0 = 0.1 * (spec.freq_hz.back() - spec.freq_hz.front());
    const double grid_step = spec.freq_hz[1] - spec.freq_hz[0];
    fwhm0 = std::max(fwhm0, 2.0 * grid_step);

    // Background-subtracted trapezoid for the area guess.
    double area0 = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        const double y0 = std::max(spec.psd[i - 1] - background, 0.0);
        const double y1 = std::max(spec.psd[i] - background, 0.0);
        area0 += 0.5 * (y0 + y1) * (spec.freq_hz[i] - spec.freq_hz[i - 1]);
    }
    if (!(area0 > 0.0)) area0 = (peak - background) * fwhm0;

    const auto model = [&spec](const std::vector<double>& p, std::size_t i) {
        return p[2] * lorentzian(spec.freq_hz[i], p[0], p[1]) + p[3];
    };
    const lsq::ResidualFn residual = [&](const std::vector<double>& p) {
        std::vector<double> r(n);
        for (std::size_t i = 0; i < n; ++i) r[i] = model(p, i) - spec.psd[i];
        return r;
    };
    const lsq::JacobianFn jacobian = [&](const std::vector<double>& p) {
        std::vector<double> jac(n * 4);
        const double c = p[0], w = p[1], a = p[2];
        for (std::size_t i = 0; i < n; ++i) {
            const double d = spec.freq_hz[i] - c;
            const double u2 = 4.0 * d * d / (w * w);
            const double l = 1.0 / (1.0 + u2);
            const double amp = 2.0 / (kPi * w);
            jac[i * 4 + 0] = a * amp * l * l * 8.0 * d / (w * w);
            jac[i * 4 + 1] = a * (2.0 / kPi) / (w * w) * (-l + u2 * l * l * 2.0);
            jac[i * 4 + 2] = amp * l;
            jac[i * 4 + 3] = 1.0;
        }
        return jac;
    };
    const lsq::ValidatorFn validator = [](const std::vector<double>& p) {
        return p[1] > 0.0 && p[2] > 0.0;
    };

    lsq::Options opts;
    opts.max_iterations = 200;
    opts.step_tolerance = 1e-10;
    opts.scales = {std::max(std::abs(center0), fwhm0), fwhm0, area0, peak};

    const lsq::Result res =
        lsq::fit(residual, jacobian, {center0, fwhm0, area0, std::max(background, 0.0)},
                 opts, validator);

    LorentzianFit fit;
    fit.center_hz = res.params[0];
    fit.fwhm_hz = res.params[1];
    fit.area = res.params[2];
    fit.offset = res.params[3];
    fit.center_err = res.std_errors[0];
    fit.fwhm_err = res.std_errors[1];
    fit.area_err = res.std_errors[2];
    fit.offset_err = res.std_errors[3];
    fit.residual_rms = res.residual_rms;
    return fit;
}

double temperature_from_fit(const LorentzianFit& fit, const MechanicalMode& mech) {
    mech.validate();
    if (!(fit.area >= 0.0)) throw ValidationError("area", "must be >= 0");
    return mech.effective_mass * mech.omega_m * mech.omega_m * fit.area / kBoltzmann;
}

RingdownFit ringdown_fit(const std::vector<std::pair<double, double>>& series) {
    const std::size_t n = series.size();
    if (n < 8) throw ValidationError("time_series", "too few samples");
    for (std::size_t i = 1; i < n; ++i)
        if (!(series[i].first > series[i - 1].first))
            throw ValidationError("time_series", "times must be strictly increasing");

    std::size_t peak_idx = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (series[i].second > series[peak_idx].second) peak_idx = i;
    if (n - peak_idx < 8) throw NotDecaying("peak too close to the end of the record");

    // Background from the last tenth of the record.
    const std::size_t tail = std::max<std::size_t>(n / 10, 3);
    double b0 = 0.0;
    for (std::size_t i = n - tail; i < n; ++i) b0 += series[i].second;
    b0 /= tail;

    const double peak_val = series[peak_idx].second;
    const double a0 = peak_val - b0;
    const double scale = std::max(std::abs(peak_val), std::abs(b0));
    if (!(a0 > 1e-12 * std::max(scale, 1e-300)))
        throw NotDecaying("no decaying component above the background");

    // Log-linear regression for the decay-time guess.
    const double t0 = series[peak_idx].first;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t count = 0;
    for (std::size_t i = peak_idx; i < n; ++i) {
        const double y = series[i].second - b0;
        if (y > 0.05 * a0) {
            const double t = series[i].first - t0;
            const double ly = std::log(y);
            sx += t; sy += ly; sxx += t * t; sxy += t * ly;
            ++count;
        }
    }
    if (count < 3) throw NotDecaying("too few samples above the background to fit a decay");
    const double denom = count * sxx - sx * sx;
    if (!(denom > 0.0)) throw NotDecaying("decay segment has no temporal extent");
    const double slope = (count * sxy - sx * sy) / denom;
    if (!(slope < 0.0)) throw NotDecaying("best-fit decay time is not positive");
    const double tau0 = -1.0 / slope;

    // Refine on the post-peak segment with the full model.
    std::vector<double> t(n - peak_idx), y(n - peak_idx);
    for (std::size_t i = peak_idx; i < n; ++i) {
        t[i - peak_idx] = series[i].first - t0;
        y[i - peak_idx] = series[i].second;
    }
    const std::size_t m = t.size();
    const lsq::ResidualFn residual = [&](const std::vector<double>& p) {
        std::vector<double> r(m);
        for (std::size_t i = 0; i < m; ++i)
            r[i] = p[0] * std::exp(-t[i] / p[1]) + p[2] - y[i];
        return r;
    };
    const lsq::JacobianFn jacobian = [&](const std::vector<double>& p) {
        std::vector<double> jac(m * 3);
        for (std::size_t i = 0; i < m; ++i) {
            const double e = std::exp(-t[i] / p[1]);
            jac[i * 3 + 0] = e;
            jac[i * 3 + 1] = p[0] * e * t[i] / (p[1] * p[1]);
            jac[i * 3 + 2] = 1.0;
        }
        return jac;
    };
    const lsq::ValidatorFn validator = [](const std::vector<double>& p) { return p[1] > 0.0; };

    lsq::Options opts;
    opts.scales = {std::abs(a0), tau0, std::max(std::abs(b0), std::abs(a0))};
    const lsq::Result res = lsq::fit(residual, jacobian, {a0, tau0, b0}, opts, validator);
    if (!(res.params[1] > 0.0)) throw NotDecaying("best-fit decay time is not positive");

    RingdownFit fit;
    fit.amplitude = res.params[0];
    fit.tau = res.params[1];
    fit.background = res.params[2];
    fit.kappa_hz = 1.0 / (kTwoPi * fit.tau);
    return fit;
}

}  // namespace polcav
