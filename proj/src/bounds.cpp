#include "qmetro/bounds.hpp"

#include <cmath>

namespace qmetro {

FisherMatrix gaussian_fisher(const std::vector<Eigen::VectorXd>& d_mean,
                             const GaussianDistribution& dist,
                             const std::vector<Eigen::MatrixXd>& d_sigma) {
    const int npar = static_cast<int>(d_mean.size());
    if (npar != 3 || d_sigma.size() != 3)
        throw std::invalid_argument("gaussian_fisher: three parameters expected");
    const int n = static_cast<int>(dist.sigma.rows());
    for (int mu = 0; mu < npar; ++mu) {
        if (d_mean[mu].size() != n || d_sigma[mu].rows() != n || d_sigma[mu].cols() != n)
            throw std::invalid_argument("gaussian_fisher: dimension mismatch");
    }
    // A parameter whose signal lives entirely on diverging-noise directions is
    // invisible in the homodyne limit; reject rather than return a singular F.
    if (!dist.rank_deficient_directions.empty()) {
        for (int mu = 0; mu < npar; ++mu) {
            bool any_signal = d_mean[mu].cwiseAbs().maxCoeff() > 0.0
                || d_sigma[mu].cwiseAbs().maxCoeff() > 0.0;
            if (!any_signal) continue;
            Eigen::MatrixXd prec = dist.precision();
            bool visible = (prec * d_mean[mu]).cwiseAbs().maxCoeff() > 0.0
                || (prec * d_sigma[mu] * prec).cwiseAbs().maxCoeff() > 0.0;
            if (!visible)
                throw std::invalid_argument(
                    "gaussian_fisher: parameter signal lost in homodyne limit");
        }
    }
    const Eigen::MatrixXd prec = dist.precision();
    FisherMatrix f{Eigen::Matrix3d::Zero(), FisherMatrix::Kind::classical};
    for (int mu = 0; mu < npar; ++mu) {
        for (int nu = mu; nu < npar; ++nu) {
            double val = d_mean[mu].dot(prec * d_mean[nu])
                + 0.5 * (prec * d_sigma[mu] * prec * d_sigma[nu]).trace();
            f.entries(mu, nu) = val;
            f.entries(nu, mu) = val;
        }
    }
    return f;
}

FisherMatrix qfi_matrix(const ModelPoint& p) {
    FisherMatrix q{Eigen::Matrix3d::Zero(), FisherMatrix::Kind::quantum};
    if (p.model == Model::single_mode) {
        q.entries(0, 0) = 4.0 * std::exp(-2.0 * p.r);
        q.entries(1, 1) = 4.0 * std::exp(2.0 * p.r);
        q.entries(2, 2) = 2.0;
    } else {
        q.entries(0, 0) = 4.0 * std::cosh(2.0 * p.r);
        q.entries(1, 1) = 4.0 * std::cosh(2.0 * p.r);
        q.entries(2, 2) = 4.0;
    }
    return q;
}

double sld_crb(const ModelPoint& p) {
    if (p.model == Model::single_mode)
        return 0.5 * (1.0 + std::cosh(2.0 * p.r));
    return 0.25 + 0.5 / std::cosh(2.0 * p.r);
}

UhlmannMatrix uhlmann_matrix(const ModelPoint&) {
    // Identical for both models: only the displacement pair is incompatible.
    Eigen::Matrix3d d = Eigen::Matrix3d::Zero();
    d(0, 1) = 4.0;
    d(1, 0) = -4.0;
    return {d};
}

double quantumness(const FisherMatrix& q, const UhlmannMatrix& d) {
    Eigen::FullPivLU<Eigen::Matrix3d> lu(q.entries);
    if (!lu.isInvertible()) throw std::invalid_argument("quantumness: singular QFI");
    // Spectrum of i Q^{-1} D is +-imag parts of eig(Q^{-1} D); all real parts vanish.
    Eigen::Matrix3d m = lu.solve(d.entries);
    Eigen::EigenSolver<Eigen::Matrix3d> es(m, false);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

FisherMatrix gendyne_fisher_single(double r, double z) {
    if (!(z > 0.0)) throw std::invalid_argument("gendyne_fisher_single: z must be > 0");
    const double e2r = std::exp(2.0 * r);
    FisherMatrix f{Eigen::Matrix3d::Zero(), FisherMatrix::Kind::classical};
    f.entries(0, 0) = 4.0 / (e2r + z);
    f.entries(1, 1) = 4.0 / (1.0 / e2r + 1.0 / z);
    f.entries(2, 2) = 2.0 * (e2r * e2r + z * z) / ((e2r + z) * (e2r + z));
    return f;
}

double gendyne_precision_single(double r, double z) {
    if (!(z > 0.0)) throw std::invalid_argument("gendyne_precision_single: z must be > 0");
    const double e2r = std::exp(2.0 * r);
    return 0.25 * (2.0 + 1.0 / e2r + z + 1.0 / z
                   + e2r * (1.0 + 4.0 * z / (e2r * e2r + z * z)));
}

double heterodyne_precision(double r) {
    const double c = std::cosh(r);
    return 2.0 * c * c * c * c / std::cosh(2.0 * r);
}

FisherMatrix double_homodyne_fisher_two(double r) {
    ModelPoint p(Model::two_mode, 0.3, -0.4, r);  // F is displacement independent
    GaussianState state = two_mode_model_gaussian(p);
    GaussianDistribution dist =
        gendyne_distribution(state, GendyneMeasurement::double_homodyne());
    std::vector<Eigen::VectorXd> d_mean(3, Eigen::VectorXd::Zero(4));
    d_mean[0] << 1, 0, -1, 0;
    d_mean[1] << 0, 1, 0, -1;
    std::vector<Eigen::MatrixXd> d_sigma(3, Eigen::MatrixXd::Zero(4, 4));
    // dSigma = (d cov)/2 = diag(e^{2r}, -e^{-2r}, -e^{-2r}, e^{2r})
    Eigen::Vector4d dsig(std::exp(2.0 * r), -std::exp(-2.0 * r),
                         -std::exp(-2.0 * r), std::exp(2.0 * r));
    d_sigma[2] = dsig.asDiagonal();
    return gaussian_fisher(d_mean, dist, d_sigma);
}

}  // namespace qmetro
