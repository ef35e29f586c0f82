#pragma once

#include <Eigen/Dense>
#include <vector>

#include "qmetro/model.hpp"

namespace qmetro {

/// Symplectic form for d modes, quadrature ordering (q1,p1,...,qd,pd).
Eigen::MatrixXd symplectic_form(int modes);

/// Covariance of a squeezed vacuum state: diag(e^{2r}, e^{-2r}).
Eigen::Matrix2d squeezed_vacuum_cov(double r);

/// Symplectic (and orthogonal) matrix of a balanced beam splitter,
/// a -> (a+b)/sqrt(2), b -> (b-a)/sqrt(2).
Eigen::Matrix4d balanced_bs_symplectic();

/// Symplectic eigenvalues of a covariance matrix (moduli of eig(i*Omega*cov)).
Eigen::VectorXd symplectic_eigenvalues(const Eigen::MatrixXd& cov);

struct CovarianceVerdict {
    bool valid = false;
    bool pure = false;
    double symmetry_defect = 0.0;
    double min_physicality_eig = 0.0;  // smallest eigenvalue of cov + i*Omega
    Eigen::VectorXd sympl_eigenvalues;
};

CovarianceVerdict validate_covariance(const Eigen::MatrixXd& cov);

/// Gaussian state: first moments + covariance, vacuum cov = identity.
struct GaussianState {
    int modes;
    Eigen::VectorXd mean;  // length 2*modes
    Eigen::MatrixXd cov;   // 2*modes x 2*modes

    GaussianState(Eigen::VectorXd mean_, Eigen::MatrixXd cov_);
    bool pure(double tol = 1e-10) const;
};

GaussianState single_mode_model_gaussian(const ModelPoint& theta);
GaussianState two_mode_model_gaussian(const ModelPoint& theta);

/// General-dyne measurement described by the covariance of a pure Gaussian
/// state. Homodyne limits are carried exactly: `infinite_noise` lists the
/// quadrature indices whose measurement noise diverges (the conjugate
/// quadrature is read out sharply); cov_m rows/columns at those indices are
/// ignored.
struct GendyneMeasurement {
    Eigen::MatrixXd cov_m;
    std::vector<int> infinite_noise;

    static GendyneMeasurement heterodyne(int modes);
    /// Single-mode squeezed general-dyne, cov_m = diag(z, 1/z), z > 0.
    static GendyneMeasurement single_mode_squeezed(double z);
    /// p-quadrature homodyne on mode 1, q-quadrature homodyne on mode 2.
    static GendyneMeasurement double_homodyne();
};

/// Outcome statistics of a general-dyne measurement. For homodyne limits the
/// covariance is rank deficient on support: `rank_deficient_directions` are
/// the directions of diverging variance, where the precision matrix vanishes.
struct GaussianDistribution {
    Eigen::VectorXd mean;
    Eigen::MatrixXd sigma;  // (cov + cov_m)/2 on the finite support
    std::vector<int> rank_deficient_directions;

    /// Inverse-on-support of sigma: zero on rank-deficient directions.
    Eigen::MatrixXd precision() const;
};

GaussianDistribution gendyne_distribution(const GaussianState& state,
                                          const GendyneMeasurement& m);

}  // namespace qmetro
