#ifndef POLCAV_LEAST_SQUARES_HPP
#define POLCAV_LEAST_SQUARES_HPP

#include <functional>
#include <vector>

namespace polcav::lsq {

// Residual vector r(theta), length m (model minus data, already weighted).
using ResidualFn = std::function<std::vector<double>(const std::vector<double>&)>;
// Row-major m x n Jacobian of r.
using JacobianFn = std::function<std::vector<double>(const std::vector<double>&)>;
// Optional step gate; a trial point failing it is treated as a rejected step.
using ValidatorFn = std::function<bool(const std::vector<double>&)>;

struct Options {
    int max_iterations = 200;
    double step_tolerance = 1e-10;   // relative parameter step for convergence
    double initial_damping = 1e-3;   // Levenberg-style schedule
    double damping_increase = 10.0;  // on residual increase
    double damping_decrease = 0.1;   // on residual decrease
    double max_damping = 1e12;
    // Characteristic parameter scales for the step-size test; defaults to
    // max(|initial value|, 1) per parameter when empty.
    std::vector<double> scales;
};

struct Result {
    std::vector<double> params;
    std::vector<double> std_errors;              // sqrt of covariance diagonal
    std::vector<std::vector<double>> covariance; // s^2 (J^T J)^{-1}
    double rss = 0.0;                            // sum of squared residuals
    double residual_rms = 0.0;                   // sqrt(rss / m)
    int iterations = 0;
    bool converged = false;
    bool covariance_ok = false;  // false when J^T J is singular at the optimum
    // Largest diag(J^T J) * diag((J^T J)^{-1}) entry: ~1 for well-conditioned
    // problems, explodes when a parameter direction is unconstrained.
    double max_variance_inflation = 0.0;
};

// Solve A x = b for a symmetric positive-definite A (row-major n x n) by
// Cholesky. Returns false when A is not numerically positive definite.
bool cholesky_solve(std::vector<double> a, std::vector<double> b, int n,
                    std::vector<double>& x);

// Invert a symmetric positive-definite matrix; false on failure.
bool spd_inverse(const std::vector<double>& a, int n, std::vector<double>& inv);

// Damped least squares with the Levenberg-style schedule above, diagonal
// scaling of the damping term, and step validation.
Result fit(const ResidualFn& residual, const JacobianFn& jacobian,
           std::vector<double> initial, const Options& options = {},
           const ValidatorFn& validator = nullptr);

}  // namespace polcav::lsq

#endif
