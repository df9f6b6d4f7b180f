#pragma once

#include <functional>
#include <string>
#include <vector>

#include "retrack/types.hpp"

namespace retrack {

/// Maps parameters to a residual vector; the solver minimizes 0.5*|r(x)|^2.
using ResidualFn = std::function<std::vector<double>(const std::vector<double>&)>;

struct LmOptions {
    double initial_lambda = 1e-3;
    double lambda_up = 10.0;
    double lambda_down = 10.0;
    double step_tolerance = 1e-9;
    double cost_tolerance = 1e-12;  // relative decrease per accepted step
    int max_iterations = 100;
    double fd_step = 1e-6;  // relative forward-difference step
};

struct LmResult {
    std::vector<double> x;
    double cost = 0.0;                  // 0.5 * |r|^2 at x
    int iterations = 0;
    bool converged = false;
    std::string message;
    std::vector<double> cost_history;  // cost after each accepted step
};

/// Damped Gauss-Newton (Levenberg-Marquardt) with forward-difference
/// Jacobians. Rejected steps raise the damping tenfold, accepted steps lower
/// it tenfold. Throws NumericalError when residuals become non-finite.
LmResult lm_minimize(const ResidualFn& residual, std::vector<double> x0,
                     const LmOptions& opts = {});

/// Forward-difference Jacobian, row r per residual, column c per parameter.
std::vector<std::vector<double>> forward_jacobian(const ResidualFn& residual,
                                                  const std::vector<double>& x,
                                                  double rel_step = 1e-6);

/// Central-difference Jacobian (used to cross-check forward differences).
std::vector<std::vector<double>> central_jacobian(const ResidualFn& residual,
                                                  const std::vector<double>& x,
                                                  double rel_step = 1e-6);

}  // namespace retrack
