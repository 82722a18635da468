#include "polcav/least_squares.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

#include "polcav/errors.hpp"

namespace polcav::lsq {

namespace {

double sum_of_squares(const std::vector<double>& r) {
    double s = 0.0;
    for (double v : r) s += v * v;
    return s;
}

bool all_finite(const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

bool cholesky_solve(std::vector<double> a, std::vector<double> b, int n,
                    std::vector<double>& x) {
    // In-place lower Cholesky of a (row-major, symmetric).
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = a[i * n + j];
            for (int k = 0; k < j; ++k) s -= a[i * n + k] * a[j * n + k];
            if (i == j) {
                if (!(s > 0.0) || !std::isfinite(s)) return false;
                a[i * n + i] = std::sqrt(s);
            } else {
                a[i * n + j] = s / a[j * n + j];
            }
        }
    }
    // Forward then back substitution.
    for (int i = 0; i < n; ++i) {
        double s = b[i];
        for (int k = 0; k < i; ++k) s -= a[i * n + k] * b[k];
        b[i] = s / a[i * n + i];
    }
    x.assign(n, 0.0);
    for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int k = i + 1; k < n; ++k) s -= a[k * n + i] * x[k];
        x[i] = s / a[i * n + i];
    }
    return true;
}

bool spd_inverse(const std::vector<double>& a, int n, std::vector<double>& inv) {
    inv.assign(static_cast<std::size_t>(n) * n, 0.0);
    std::vector<double> e(n, 0.0), col;
    for (int j = 0; j < n; ++j) {
        std::fill(e.begin(), e.end(), 0.0);
        e[j] = 1.0;
        if (!cholesky_solve(a, e, n, col)) return false;
        for (int i = 0; i < n; ++i) inv[i * n + j] = col[i];
    }
    return true;
}

Result fit(const ResidualFn& residual, const JacobianFn& jacobian,
           std::vector<double> initial, const Options& options,
           const ValidatorFn& validator) {
    const int n = static_cast<int>(initial.size());
    std::vector<double> scales = options.scales;
    if (scales.empty()) {
        scales.resize(n);
        for (int i = 0; i < n; ++i) scales[i] = std::max(std::abs(initial[i]), 1.0);
    }

    Result res;
    res.params = std::move(initial);
    std::vector<double> r = residual(res.params);
    const int m = static_cast<int>(r.size());
    double rss = sum_of_squares(r);
    if (!std::isfinite(rss)) throw NoConvergence("residual not finite at the initial guess");
    double damping = options.initial_damping;

    std::vector<double> jtj(static_cast<std::size_t>(n) * n);
    std::vector<double> jtr(n), step, trial(n);

    int iter = 0;
    for (; iter < options.max_iterations; ++iter) {
        const std::vector<double> jac = jacobian(res.params);
        // Normal equations J^T J and J^T r.
        for (int i = 0; i < n; ++i) {
            jtr[i] = 0.0;
            for (int j = i; j < n; ++j) {
                double s = 0.0;
                for (int k = 0; k < m; ++k) s += jac[k * n + i] * jac[k * n + j];
                jtj[i * n + j] = s;
                jtj[j * n + i] = s;
            }
            for (int k = 0; k < m; ++k) jtr[i] += jac[k * n + i] * r[k];
        }

        bool stepped = false;
        while (damping <= options.max_damping) {
            // Damp with lambda * diag(J^T J) so the schedule is scale-free.
            std::vector<double> a = jtj;
            for (int i = 0; i < n; ++i)
                a[i * n + i] += damping * std::max(jtj[i * n + i], 1e-300);
            std::vector<double> rhs(n);
            for (int i = 0; i < n; ++i) rhs[i] = -jtr[i];
            if (!cholesky_solve(a, rhs, n, step)) {
                damping *= options.damping_increase;
                continue;
            }
            for (int i = 0; i < n; ++i) trial[i] = res.params[i] + step[i];
            if ((validator && !validator(trial)) || !all_finite(trial)) {
                damping *= options.damping_increase;
                continue;
            }
            const std::vector<double> r_trial = residual(trial);
            const double rss_trial = sum_of_squares(r_trial);
            if (std::isfinite(rss_trial) && rss_trial < rss) {
                res.params = trial;
                r = r_trial;
                rss = rss_trial;
                damping = std::max(damping * options.damping_decrease, 1e-15);
                stepped = true;
                break;
            }
            damping *= options.damping_increase;
        }
        if (!stepped) break;  // stalled: no damping level yields an acceptable step

        double max_rel_step = 0.0;
        for (int i = 0; i < n; ++i)
            max_rel_step = std::max(
                max_rel_step, std::abs(step[i]) / std::max(std::abs(res.params[i]), scales[i]));
        if (max_rel_step < options.step_tolerance) {
            res.converged = true;
            ++iter;
            break;
        }
    }

    res.iterations = iter;
    res.rss = rss;
    res.residual_rms = m > 0 ? std::sqrt(rss / m) : 0.0;
    if (!std::isfinite(rss)) throw NoConvergence("damped least squares diverged");

    // Covariance s^2 (J^T J)^{-1} from the Jacobian at the optimum.
    const std::vector<double> jac = jacobian(res.params);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < m; ++k) s += jac[k * n + i] * jac[k * n + j];
            jtj[i * n + j] = s;
            jtj[j * n + i] = s;
        }
    std::vector<double> inv;
    res.covariance.assign(n, std::vector<double>(n, 0.0));
    res.std_errors.assign(n, 0.0);
    if (spd_inverse(jtj, n, inv)) {
        const double dof = std::max(m - n, 1);
        const double s2 = rss / dof;
        res.covariance_ok = true;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) res.covariance[i][j] = s2 * inv[i * n + j];
            res.std_errors[i] = std::sqrt(std::max(res.covariance[i][i], 0.0));
        }
        double worst = 0.0;
        for (int i = 0; i < n; ++i) worst = std::max(worst, jtj[i * n + i] * inv[i * n + i]);
        res.max_variance_inflation = worst;
    }
    return res;
}

}  // namespace polcav::lsq
