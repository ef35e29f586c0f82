#include "qmetro/gaussian.hpp"

#include <cmath>
#include <complex>

namespace qmetro {

Eigen::MatrixXd symplectic_form(int modes) {
    if (modes < 1) throw std::invalid_argument("symplectic_form: modes must be >= 1");
    Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
    for (int j = 0; j < modes; ++j) {
        omega(2 * j, 2 * j + 1) = 1.0;
        omega(2 * j + 1, 2 * j) = -1.0;
    }
    return omega;
}

Eigen::Matrix2d squeezed_vacuum_cov(double r) {
    if (!std::isfinite(r)) throw std::invalid_argument("squeezed_vacuum_cov: r must be finite");
    Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
    cov(0, 0) = std::exp(2.0 * r);
    cov(1, 1) = std::exp(-2.0 * r);
    return cov;
}

Eigen::Matrix4d balanced_bs_symplectic() {
    const double s = 1.0 / std::sqrt(2.0);
    Eigen::Matrix4d bs;
    // Quadratures transform like the mode operators: q1' = (q1+q2)/sqrt(2), etc.
    bs << s, 0, s, 0,
          0, s, 0, s,
         -s, 0, s, 0,
          0, -s, 0, s;
    return bs;
}

Eigen::VectorXd symplectic_eigenvalues(const Eigen::MatrixXd& cov) {
    const int n = static_cast<int>(cov.rows());
    if (n % 2 != 0 || cov.cols() != n)
        throw std::invalid_argument("symplectic_eigenvalues: even square matrix required");
    Eigen::MatrixXcd m = std::complex<double>(0, 1) * symplectic_form(n / 2) * cov;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
    std::vector<double> mods;
    for (int i = 0; i < n; ++i) mods.push_back(std::abs(es.eigenvalues()(i)));
    std::sort(mods.begin(), mods.end());
    // eigenvalues come in +-nu pairs; keep one of each
    Eigen::VectorXd out(n / 2);
    for (int i = 0; i < n / 2; ++i) out(i) = 0.5 * (mods[2 * i] + mods[2 * i + 1]);
    return out;
}

CovarianceVerdict validate_covariance(const Eigen::MatrixXd& cov) {
    const int n = static_cast<int>(cov.rows());
    if (n % 2 != 0 || cov.cols() != n)
        throw std::invalid_argument("validate_covariance: even square matrix required");
    CovarianceVerdict v;
    v.symmetry_defect = (cov - cov.transpose()).cwiseAbs().maxCoeff();
    Eigen::MatrixXcd phys = cov.cast<std::complex<double>>()
        + std::complex<double>(0, 1) * symplectic_form(n / 2);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(phys);
    v.min_physicality_eig = es.eigenvalues().minCoeff();
    v.sympl_eigenvalues = symplectic_eigenvalues(cov);
    v.valid = v.symmetry_defect <= 1e-12 && v.min_physicality_eig >= -1e-10;
    v.pure = v.valid && (v.sympl_eigenvalues.array() - 1.0).abs().maxCoeff() <= 1e-10;
    return v;
}

GaussianState::GaussianState(Eigen::VectorXd mean_, Eigen::MatrixXd cov_)
    : modes(static_cast<int>(mean_.size()) / 2), mean(std::move(mean_)), cov(std::move(cov_)) {
    if (mean.size() % 2 != 0 || cov.rows() != mean.size() || cov.cols() != mean.size())
        throw std::invalid_argument("GaussianState: inconsistent dimensions");
    if (!mean.allFinite()) throw std::invalid_argument("GaussianState: mean must be finite");
    CovarianceVerdict v = validate_covariance(cov);
    if (!v.valid) throw std::invalid_argument("GaussianState: unphysical covariance");
}

bool GaussianState::pure(double tol) const {
    return (symplectic_eigenvalues(cov).array() - 1.0).abs().maxCoeff() <= tol;
}

GaussianState single_mode_model_gaussian(const ModelPoint& theta) {
    if (theta.model != Model::single_mode)
        throw std::invalid_argument("single_mode_model_gaussian: wrong model");
    Eigen::VectorXd mean(2);
    mean << std::sqrt(2.0) * theta.theta1, std::sqrt(2.0) * theta.theta2;
    return GaussianState(mean, squeezed_vacuum_cov(theta.r));
}

GaussianState two_mode_model_gaussian(const ModelPoint& theta) {
    if (theta.model != Model::two_mode)
        throw std::invalid_argument("two_mode_model_gaussian: wrong model");
    // Beam-splitter-factored form: per-mode displacements +-alpha/sqrt(2),
    // opposite single-mode squeezings. The sqrt(2) factors cancel in the means.
    Eigen::VectorXd mean(4);
    mean << theta.theta1, theta.theta2, -theta.theta1, -theta.theta2;
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(4, 4);
    cov.topLeftCorner<2, 2>() = squeezed_vacuum_cov(theta.r);
    cov.bottomRightCorner<2, 2>() = squeezed_vacuum_cov(-theta.r);
    return GaussianState(mean, cov);
}

GendyneMeasurement GendyneMeasurement::heterodyne(int modes) {
    return {Eigen::MatrixXd::Identity(2 * modes, 2 * modes), {}};
}

GendyneMeasurement GendyneMeasurement::single_mode_squeezed(double z) {
    if (!(z > 0.0)) throw std::invalid_argument("single_mode_squeezed: z must be > 0");
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(2, 2);
    cov(0, 0) = z;
    cov(1, 1) = 1.0 / z;
    return {cov, {}};
}

GendyneMeasurement GendyneMeasurement::double_homodyne() {
    // Mode 1 reads p (q noise diverges), mode 2 reads q (p noise diverges).
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(4, 4);
    return {cov, {0, 3}};
}

Eigen::MatrixXd GaussianDistribution::precision() const {
    const int n = static_cast<int>(sigma.rows());
    std::vector<int> support;
    for (int i = 0; i < n; ++i) {
        if (std::find(rank_deficient_directions.begin(), rank_deficient_directions.end(), i)
            == rank_deficient_directions.end())
            support.push_back(i);
    }
    const int s = static_cast<int>(support.size());
    Eigen::MatrixXd block(s, s);
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) block(i, j) = sigma(support[i], support[j]);
    Eigen::MatrixXd inv = block.inverse();
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) out(support[i], support[j]) = inv(i, j);
    return out;
}

GaussianDistribution gendyne_distribution(const GaussianState& state,
                                          const GendyneMeasurement& m) {
    const int n = 2 * state.modes;
    if (m.cov_m.rows() != n || m.cov_m.cols() != n)
        throw std::invalid_argument("gendyne_distribution: dimension mismatch");
    GaussianDistribution dist;
    dist.mean = state.mean;
    dist.sigma = 0.5 * (state.cov + m.cov_m);
    dist.rank_deficient_directions = m.infinite_noise;
    // On diverging directions only the state contributes a finite part; the
    // stored value there is never used by precision().
    for (int idx : m.infinite_noise)
        for (int j = 0; j < n; ++j) {
            dist.sigma(idx, j) = 0.5 * state.cov(idx, j);
            dist.sigma(j, idx) = 0.5 * state.cov(j, idx);
        }
    return dist;
}

}  // namespace qmetro
