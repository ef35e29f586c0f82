#pragma once

#include <Eigen/Dense>
#include <array>

#include "qmetro/model.hpp"

namespace qmetro {

struct TruncationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TruncationPolicy {
    int dim = 160;          // Fock levels per mode
    double tail_tol = 1e-10;
    double fd_step = 1e-5;

    TruncationPolicy() = default;
    TruncationPolicy(int n, double tail = 1e-10, double h = 1e-5)
        : dim(n), tail_tol(tail), fd_step(h) {
        if (dim < 20) throw std::invalid_argument("TruncationPolicy: dim must be >= 20");
        if (!(tail_tol > 0.0) || !(fd_step > 0.0))
            throw std::invalid_argument("TruncationPolicy: tolerances must be positive");
    }
};

/// State vector in a truncated Fock space; two-mode amplitudes are stored
/// row-major with the first mode as the major index.
struct FockVector {
    int modes;
    int dim;
    Eigen::VectorXcd amplitudes;

    /// Total weight on the top 10% of Fock levels (either mode).
    double tail_weight() const;
};

/// Throws TruncationError if v's tail weight exceeds the policy budget.
void enforce_tail_budget(const FockVector& v, const TruncationPolicy& policy);

Eigen::MatrixXcd mode_lowering_matrix(int n);

/// exp(G) for anti-Hermitian G, via eigendecomposition of iG.
Eigen::MatrixXcd unitary_from_generator(const Eigen::MatrixXcd& g);

Eigen::MatrixXcd displacement_matrix(int n, std::complex<double> alpha);
Eigen::MatrixXcd squeeze_matrix(int n, double r);

/// Model state: single mode D(alpha)S(r)|0>; two mode the displaced two-mode
/// squeezed vacuum (D(alpha) x I) S2(r)|0,0>.
FockVector model_state(const ModelPoint& theta, const TruncationPolicy& policy);

/// Beam-splitter-factored form of the two-mode model:
/// D(alpha/sqrt2)S(r)|0> (x) D(-alpha/sqrt2)S(-r)|0>.
FockVector factored_two_mode_state(const ModelPoint& theta,
                                   const TruncationPolicy& policy);

/// Applies the balanced beam splitter exp(pi/4 (a^dag b - a b^dag)),
/// blockwise over total-photon-number subspaces.
FockVector apply_balanced_bs(const FockVector& v);

/// || U_BS |psi> - factored product ||.
double bs_factorization_check(const ModelPoint& theta, const TruncationPolicy& policy);

/// Central finite differences of the model state over theta. Two-mode
/// derivatives are taken on the beam-splitter-factored form.
std::array<FockVector, 3> fd_derivatives(const ModelPoint& theta,
                                         const TruncationPolicy& policy);

struct OracleCurvature {
    Eigen::Matrix3d qfi;
    Eigen::Matrix3d uhlmann;
};

/// QFI and Uhlmann matrices recomputed from finite-difference derivatives:
/// Q = 4 Re G, D = 4 Im G with G the projected overlap matrix.
OracleCurvature oracle_qfi_uhlmann(const ModelPoint& theta,
                                   const TruncationPolicy& policy);

}  // namespace qmetro
