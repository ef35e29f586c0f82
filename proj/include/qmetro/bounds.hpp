#pragma once

#include <optional>
#include <vector>

#include "qmetro/gaussian.hpp"

namespace qmetro {

struct FisherMatrix {
    enum class Kind { classical, quantum };
    Eigen::Matrix3d entries;
    Kind kind;
};

/// Antisymmetric mean-commutator curvature matrix.
struct UhlmannMatrix {
    Eigen::Matrix3d entries;
};

/// Classical Fisher information of a (possibly rank-deficient) Gaussian
/// outcome distribution:
///   F_{mu,nu} = dmean_mu^T L dmean_nu + 1/2 Tr[L dSigma_mu L dSigma_nu]
/// with L the inverse-on-support precision matrix.
FisherMatrix gaussian_fisher(const std::vector<Eigen::VectorXd>& d_mean,
                             const GaussianDistribution& dist,
                             const std::vector<Eigen::MatrixXd>& d_sigma);

/// Quantum Fisher information of the model at p; independent of theta1, theta2.
FisherMatrix qfi_matrix(const ModelPoint& p);

/// Tr[Q^{-1}] with identity weight.
double sld_crb(const ModelPoint& p);

UhlmannMatrix uhlmann_matrix(const ModelPoint& p);

/// Incompatibility R = ||i Q^{-1} D||_inf, in [0, 1].
double quantumness(const FisherMatrix& q, const UhlmannMatrix& d);

/// Fisher information of the squeezed general-dyne measurement diag(z, 1/z)
/// on the single-mode model.
FisherMatrix gendyne_fisher_single(double r, double z);

/// Tr[F^{-1}] of gendyne_fisher_single in closed form.
double gendyne_precision_single(double r, double z);

/// gendyne_precision_single at z = 1: 2 cosh^4 r / cosh 2r.
double heterodyne_precision(double r);

/// Fisher information of double homodyne on the two-mode model,
/// diag(2e^{2r}, 2e^{2r}, 4); evaluated through gaussian_fisher with the
/// exact homodyne-limit precision.
FisherMatrix double_homodyne_fisher_two(double r);

struct GendyneOptimum {
    double z_opt;
    double f_opt;
};

struct BoundsReport {
    double c_s = 0.0;
    double c_h = 0.0;
    double r_quantumness = 0.0;
    std::optional<GendyneOptimum> gendyne_best;
    std::optional<double> heterodyne;
    std::optional<double> double_homodyne;
};

}  // namespace qmetro
