#include "retrack/lm.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <sstream>

namespace retrack {

namespace {

Eigen::VectorXd eval(const ResidualFn& residual, const std::vector<double>& x) {
    const std::vector<double> r = residual(x);
    Eigen::VectorXd out(static_cast<Eigen::Index>(r.size()));
    for (std::size_t i = 0; i < r.size(); ++i) out[static_cast<Eigen::Index>(i)] = r[i];
    return out;
}

std::string format_iterate(const std::vector<double>& x, int iteration) {
    std::ostringstream os;
    os << "iteration " << iteration << ", x = [";
    for (std::size_t i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
    os << "]";
    return os.str();
}

}  // namespace

std::vector<std::vector<double>> forward_jacobian(const ResidualFn& residual,
                                                  const std::vector<double>& x,
                                                  double rel_step) {
    const std::vector<double> r0 = residual(x);
    const std::size_t m = r0.size();
    const std::size_t n = x.size();
    std::vector<std::vector<double>> jac(m, std::vector<double>(n, 0.0));
    std::vector<double> xp = x;
    for (std::size_t c = 0; c < n; ++c) {
        const double h = rel_step * std::max(std::abs(x[c]), 1.0);
        xp[c] = x[c] + h;
        const std::vector<double> r1 = residual(xp);
        xp[c] = x[c];
        for (std::size_t rr = 0; rr < m; ++rr) jac[rr][c] = (r1[rr] - r0[rr]) / h;
    }
    return jac;
}

std::vector<std::vector<double>> central_jacobian(const ResidualFn& residual,
                                                  const std::vector<double>& x,
                                                  double rel_step) {
    const std::size_t m = residual(x).size();
    const std::size_t n = x.size();
    std::vector<std::vector<double>> jac(m, std::vector<double>(n, 0.0));
    std::vector<double> xp = x;
    for (std::size_t c = 0; c < n; ++c) {
        const double h = rel_step * std::max(std::abs(x[c]), 1.0);
        xp[c] = x[c] + h;
        const std::vector<double> rp = residual(xp);
        xp[c] = x[c] - h;
        const std::vector<double> rm = residual(xp);
        xp[c] = x[c];
        for (std::size_t rr = 0; rr < m; ++rr) jac[rr][c] = (rp[rr] - rm[rr]) / (2.0 * h);
    }
    return jac;
}

LmResult lm_minimize(const ResidualFn& residual, std::vector<double> x0,
                     const LmOptions& opts) {
    const int n = static_cast<int>(x0.size());
    LmResult res;
    res.x = std::move(x0);

    Eigen::VectorXd r = eval(residual, res.x);
    if (!r.allFinite())
        throw NumericalError("lm_minimize: non-finite residual at " +
                             format_iterate(res.x, 0));
    double cost = 0.5 * r.squaredNorm();
    res.cost_history.push_back(cost);

    double lambda = opts.initial_lambda;
    for (int iter = 1; iter <= opts.max_iterations; ++iter) {
        res.iterations = iter;

        // Forward-difference Jacobian around the current iterate.
        Eigen::MatrixXd jac(r.size(), n);
        std::vector<double> xp = res.x;
        for (int c = 0; c < n; ++c) {
            const double h = opts.fd_step * std::max(std::abs(res.x[c]), 1.0);
            xp[c] = res.x[c] + h;
            const Eigen::VectorXd r1 = eval(residual, xp);
            if (!r1.allFinite())
                throw NumericalError("lm_minimize: non-finite residual at " +
                                     format_iterate(xp, iter));
            xp[c] = res.x[c];
            jac.col(c) = (r1 - r) / h;
        }

        const Eigen::MatrixXd jtj = jac.transpose() * jac;
        const Eigen::VectorXd jtr = jac.transpose() * r;
        if (jtr.lpNorm<Eigen::Infinity>() < 1e-15) {
            res.converged = true;
            res.message = "gradient below tolerance";
            break;
        }

        bool accepted = false;
        while (!accepted) {
            Eigen::MatrixXd damped = jtj;
            for (int d = 0; d < n; ++d)
                damped(d, d) += lambda * std::max(jtj(d, d), 1e-12);
            const Eigen::VectorXd step = damped.ldlt().solve(-jtr);

            std::vector<double> x_try = res.x;
            for (int d = 0; d < n; ++d) x_try[d] += step[d];
            const Eigen::VectorXd r_try = eval(residual, x_try);
            if (!r_try.allFinite())
                throw NumericalError("lm_minimize: non-finite residual at " +
                                     format_iterate(x_try, iter));
            const double cost_try = 0.5 * r_try.squaredNorm();

            if (cost_try <= cost) {
                const double decrease = cost - cost_try;
                res.x = std::move(x_try);
                r = r_try;
                const double prev = cost;
                cost = cost_try;
                res.cost_history.push_back(cost);
                lambda = std::max(lambda / opts.lambda_down, 1e-15);
                accepted = true;
                if (step.norm() < opts.step_tolerance) {
                    res.converged = true;
                    res.message = "step below tolerance";
                } else if (prev > 0.0 && decrease < opts.cost_tolerance * prev) {
                    res.converged = true;
                    res.message = "cost decrease below tolerance";
                }
            } else {
                lambda *= opts.lambda_up;
                if (lambda > 1e12) {
                    // Damping exhausted; keep the best iterate seen so far.
                    res.message = "damping limit reached";
                    accepted = true;
                    res.converged = step.norm() < opts.step_tolerance;
                }
            }
        }
        if (res.converged || res.message == "damping limit reached") break;
    }

    res.cost = cost;
    if (!res.converged && res.message.empty()) res.message = "iteration limit reached";
    return res;
}

}  // namespace retrack
