#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "qmetro/bounds.hpp"
#include "qmetro/model.hpp"

namespace qmetro {

/// Free real parameters of the locally-unbiased observable family restricted
/// to the derivative subspace: 3 for the single-mode model, 15 for two-mode.
struct SubspaceFreeParams {
    Model model;
    Eigen::VectorXd values;

    SubspaceFreeParams(Model m, Eigen::VectorXd v);
    static int expected_size(Model m) { return m == Model::single_mode ? 3 : 15; }
};

/// Hermitian 3x3 matrix Z_{jk} = <psi| X_j X_k |psi>.
struct ZMatrix {
    Eigen::Matrix3cd entries;
};

struct MinimizerConfig {
    int restarts = 24;
    double tol = 1e-10;
    int max_iter = 20000;
    std::uint64_t seed = 20240214;
};

/// Trace norm Tr[sqrt(M^dag M)] of a Hermitian matrix: sum of |eigenvalues|.
double trace_norm_hermitian(const Eigen::MatrixXcd& m);

/// Matrix elements <psi|X_j|b_i> of the three parametrized observables over
/// the derivative-subspace basis (excluding |psi> itself, where they vanish);
/// rows indexed by j, columns by basis vector. Z = A A^dag.
Eigen::MatrixXcd x_first_row_elements(double r, const SubspaceFreeParams& fp);

ZMatrix z_matrix_single(double r, const SubspaceFreeParams& fp);
ZMatrix z_matrix_two(double r, const SubspaceFreeParams& fp);

/// h(Z) = Tr[Re Z] + || Im Z ||_1, with Re/Im taken entrywise.
double h_value(const ZMatrix& z);

struct HcrbResult {
    double value;
    SubspaceFreeParams argmin;
};

/// Numerical bound: seeded multi-start simplex minimization of h over the
/// free parameters, with a smoothing homotopy on the trace-norm term.
HcrbResult minimize_h(const ModelPoint& p, const MinimizerConfig& cfg = {});

/// Closed forms: single mode (cosh 2r + 2)/2; two mode 1/4 + e^{-2r}
/// (the latter is inferred from the numerical minimum, not proven).
double hcrb_closed(const ModelPoint& p);

/// Excess of the best general-dyne precision over the single-mode bound;
/// strictly positive for all z > 0, r >= 0.
double gendyne_gap(double z, double r);

/// Minimizes gendyne_gap over log z in [-6, 6].
GendyneOptimum optimal_gendyne(double r, const MinimizerConfig& cfg = {});

/// Full report at a model point (bounds, incompatibility, and the
/// model-appropriate measurement precisions).
BoundsReport compute_bounds(const ModelPoint& p, const MinimizerConfig& cfg = {});

}  // namespace qmetro
