#pragma once

#include <Eigen/Dense>
#include <functional>

namespace qmetro {

struct NelderMeadResult {
    Eigen::VectorXd x;
    double value = 0.0;
    double spread = 0.0;  // max-min function value across the final simplex
    int evals = 0;
    bool converged = false;
};

/// Downhill simplex minimization with standard reflection/expansion/
/// contraction/shrink coefficients. Converges when the simplex function
/// spread falls below tol.
NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                             const Eigen::VectorXd& x0, double step, double tol,
                             int max_iter);

/// Golden-section search for a unimodal minimum on [a, b]; returns the argmin
/// to within tol.
double golden_section(const std::function<double(double)>& f, double a, double b,
                      double tol);

}  // namespace qmetro
