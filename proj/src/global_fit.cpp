#include "polcav/global_fit.hpp"

#include <cmath>

#include "polcav/least_squares.hpp"

namespace polcav {

namespace {

// Single-mode spring/damping and partials with respect to (kappa, Delta, P).
struct SingleModeGradient {
    double spring;
    double damping;
    double d_spring[3];   // d/d{kappa, Delta, P}
    double d_damping[3];
};

SingleModeGradient single_mode_gradient(double kappa, double detuning, double power,
                                        const GlobalFitFixed& fixed) {
    const double omega_l = kTwoPi * kSpeedOfLight / fixed.wavelength;
    const double g2 = fixed.g0 * fixed.g0;
    const double omega_m = fixed.mech.omega_m;

    const double half_k2 = 0.25 * kappa * kappa;
    const double d0 = half_k2 + detuning * detuning;
    const double dp_arg = detuning + omega_m;
    const double dm_arg = detuning - omega_m;
    const double dp = half_k2 + dp_arg * dp_arg;
    const double dm = half_k2 + dm_arg * dm_arg;

    const double n = fixed.eta * kappa * power / (kHbar * omega_l * d0);
    const double dn_dk = n * (1.0 / kappa - 0.5 * kappa / d0);
    const double dn_dd = -n * 2.0 * detuning / d0;
    const double dn_dp = power > 0.0 ? n / power
                                     : fixed.eta * kappa / (kHbar * omega_l * d0);

    const double b_gamma = kappa * (1.0 / dp - 1.0 / dm);
    const double db_gamma_dk = (1.0 / dp - 1.0 / dm) +
                               kappa * 0.5 * kappa * (-1.0 / (dp * dp) + 1.0 / (dm * dm));
    const double db_gamma_dd =
        kappa * (-2.0 * dp_arg / (dp * dp) + 2.0 * dm_arg / (dm * dm));

    const double b_spring = dp_arg / dp + dm_arg / dm;
    const double db_spring_dk =
        -0.5 * kappa * (dp_arg / (dp * dp) + dm_arg / (dm * dm));
    const double db_spring_dd = (dp - 2.0 * dp_arg * dp_arg) / (dp * dp) +
                                (dm - 2.0 * dm_arg * dm_arg) / (dm * dm);

    SingleModeGradient g;
    g.spring = n * g2 * b_spring;
    g.damping = n * g2 * b_gamma;
    g.d_spring[0] = g2 * (dn_dk * b_spring + n * db_spring_dk);
    g.d_spring[1] = g2 * (dn_dd * b_spring + n * db_spring_dd);
    g.d_spring[2] = g2 * dn_dp * b_spring;
    g.d_damping[0] = g2 * (dn_dk * b_gamma + n * db_gamma_dk);
    g.d_damping[1] = g2 * (dn_dd * b_gamma + n * db_gamma_dd);
    g.d_damping[2] = g2 * dn_dp * b_gamma;
    return g;
}

}  // namespace

ResponseGradient combined_response_gradient(double kappa, double splitting, double power_h,
                                            double power_v, const GlobalFitFixed& fixed,
                                            double detuning_ref) {
    const SingleModeGradient h = single_mode_gradient(kappa, detuning_ref, power_h, fixed);
    const SingleModeGradient v =
        single_mode_gradient(kappa, detuning_ref - splitting, power_v, fixed);

    ResponseGradient r;
    r.delta_omega = h.spring + v.spring;
    r.gamma_opt = h.damping + v.damping;
    // theta = (kappa, splitting, P_h, P_v); Delta_V = detuning_ref - splitting.
    r.d_delta_omega = {h.d_spring[0] + v.d_spring[0], -v.d_spring[1], h.d_spring[2],
                       v.d_spring[2]};
    r.d_gamma_opt = {h.d_damping[0] + v.d_damping[0], -v.d_damping[1], h.d_damping[2],
                     v.d_damping[2]};
    return r;
}

GlobalFitResult global_fit(const std::vector<Observation>& observations,
                           const GlobalFitFixed& fixed, const std::array<double, 4>& init) {
    if (observations.size() < 8)
        throw ValidationError("observations", "need at least 8 points");
    fixed.mech.validate();
    for (double p : init)
        if (!(p > 0.0)) throw ValidationError("init", "all four initial values must be > 0");

    // Per-observable normalization by the sample standard deviation.
    const std::size_t n_obs = observations.size();
    double mean_w = 0.0, mean_g = 0.0;
    for (const auto& o : observations) {
        mean_w += o.delta_omega;
        mean_g += o.gamma_eff;
    }
    mean_w /= n_obs;
    mean_g /= n_obs;
    double var_w = 0.0, var_g = 0.0;
    for (const auto& o : observations) {
        var_w += (o.delta_omega - mean_w) * (o.delta_omega - mean_w);
        var_g += (o.gamma_eff - mean_g) * (o.gamma_eff - mean_g);
    }
    const double sd_w = std::sqrt(var_w / (n_obs - 1));
    const double sd_g = std::sqrt(var_g / (n_obs - 1));
    if (!(sd_w > 0.0) || !(sd_g > 0.0))
        throw DegenerateFit("observations carry no variation in one observable");

    // Optimize dimensionless multipliers of the initial guess.
    const auto to_physical = [&init](const std::vector<double>& m) {
        return std::array<double, 4>{m[0] * init[0], m[1] * init[1], m[2] * init[2],
                                     m[3] * init[3]};
    };
    const lsq::ResidualFn residual = [&](const std::vector<double>& m) {
        const auto p = to_physical(m);
        std::vector<double> r(2 * n_obs);
        for (std::size_t i = 0; i < n_obs; ++i) {
            const ResponseGradient g =
                combined_response_gradient(p[0], p[1], p[2], p[3], fixed,
                                           observations[i].detuning_ref);
            r[2 * i] = (g.delta_omega - observations[i].delta_omega) / sd_w;
            r[2 * i + 1] =
                (g.gamma_opt + fixed.mech.gamma_m - observations[i].gamma_eff) / sd_g;
        }
        return r;
    };
    const lsq::JacobianFn jacobian = [&](const std::vector<double>& m) {
        const auto p = to_physical(m);
        std::vector<double> jac(2 * n_obs * 4);
        for (std::size_t i = 0; i < n_obs; ++i) {
            const ResponseGradient g =
                combined_response_gradient(p[0], p[1], p[2], p[3], fixed,
                                           observations[i].detuning_ref);
            for (int j = 0; j < 4; ++j) {
                jac[(2 * i) * 4 + j] = g.d_delta_omega[j] * init[j] / sd_w;
                jac[(2 * i + 1) * 4 + j] = g.d_gamma_opt[j] * init[j] / sd_g;
            }
        }
        return jac;
    };
    const lsq::ValidatorFn validator = [](const std::vector<double>& m) {
        for (double v : m)
            if (!(v > 0.0)) return false;
        return true;
    };

    lsq::Options opts;
    opts.max_iterations = 200;
    opts.step_tolerance = 1e-12;
    opts.scales = {1.0, 1.0, 1.0, 1.0};
    const lsq::Result res = lsq::fit(residual, jacobian, {1.0, 1.0, 1.0, 1.0}, opts, validator);
    // Healthy sweeps sit at variance inflation of a few; unconstrained
    // parameter directions (data missing a mode or both sidebands) land
    // orders of magnitude higher.
    if (!res.covariance_ok || res.max_variance_inflation > 1e3)
        throw DegenerateFit("covariance is singular; the data do not constrain all four "
                            "parameters");

    const auto p = to_physical(res.params);
    GlobalFitResult out;
    out.kappa_hz = hz_from_rad(p[0]);
    out.splitting_hz = hz_from_rad(p[1]);
    out.power_h = p[2];
    out.power_v = p[3];
    out.residual_rms = res.residual_rms;
    out.iterations = res.iterations;
    // Covariance back in physical units, frequencies as Hz.
    const double unit[4] = {init[0] / kTwoPi, init[1] / kTwoPi, init[2], init[3]};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            out.covariance[i][j] = res.covariance[i][j] * unit[i] * unit[j];
    return out;
}

}  // namespace polcav
