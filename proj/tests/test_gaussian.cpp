#include <doctest.h>

#include <cmath>
#include <random>

#include "qmetro/gaussian.hpp"

using namespace qmetro;
using doctest::Approx;

TEST_CASE("symplectic form") {
    Eigen::MatrixXd omega = symplectic_form(1);
    CHECK(omega(0, 1) == 1.0);
    CHECK(omega(1, 0) == -1.0);
    CHECK((omega * omega + Eigen::Matrix2d::Identity()).norm() == Approx(0.0));

    Eigen::MatrixXd omega2 = symplectic_form(2);
    CHECK(omega2.rows() == 4);
    CHECK((omega2 + omega2.transpose()).norm() == Approx(0.0));
}

TEST_CASE("squeezed vacuum covariance") {
    Eigen::Matrix2d cov = squeezed_vacuum_cov(0.5);
    CHECK(cov(0, 0) == Approx(std::exp(1.0)));
    CHECK(cov(1, 1) == Approx(std::exp(-1.0)));
    CHECK(cov(0, 1) == 0.0);

    auto verdict = validate_covariance(cov);
    CHECK(verdict.valid);
    CHECK(verdict.pure);
    CHECK(verdict.sympl_eigenvalues(0) == Approx(1.0));
}

TEST_CASE("balanced beam splitter is symplectic and orthogonal") {
    Eigen::Matrix4d s = balanced_bs_symplectic();
    Eigen::MatrixXd omega = symplectic_form(2);
    CHECK((s * omega * s.transpose() - omega).norm() < 1e-14);
    CHECK((s * s.transpose() - Eigen::Matrix4d::Identity()).norm() < 1e-14);
}

TEST_CASE("beam splitter factorizes the two-mode squeezed vacuum") {
    const double r = 0.7, c = std::cosh(1.4), sh = std::sinh(1.4);
    Eigen::Matrix4d tmsv;
    tmsv <<  c, 0, sh,  0,
             0, c,  0, -sh,
            sh, 0,  c,  0,
             0, -sh, 0, c;
    Eigen::Matrix4d s = balanced_bs_symplectic();
    Eigen::Matrix4d rotated = s * tmsv * s.transpose();
    // The rotated state is a product of +r and -r squeezed modes, which is
    // exactly the covariance the model uses directly.
    GaussianState state = two_mode_model_gaussian(ModelPoint(Model::two_mode, 0.2, -0.1, r));
    CHECK((rotated - state.cov).norm() < 1e-12);

    Eigen::Vector4d pre_bs_mean(0.2 * std::sqrt(2.0), -0.1 * std::sqrt(2.0), 0, 0);
    CHECK((s * pre_bs_mean - state.mean).norm() < 1e-12);
}

TEST_CASE("symplectic eigenvalues") {
    // Thermal-like covariance has both symplectic eigenvalues at 2.
    Eigen::MatrixXd thermal = 2.0 * Eigen::Matrix4d::Identity();
    Eigen::VectorXd nu = symplectic_eigenvalues(thermal);
    CHECK(nu(0) == Approx(2.0));
    CHECK(nu(1) == Approx(2.0));

    // Squeezing via a symplectic congruence leaves them at 1.
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unif(-0.8, 0.8);
    for (int trial = 0; trial < 10; ++trial) {
        Eigen::Matrix4d local = Eigen::Matrix4d::Identity();
        local.block<2, 2>(0, 0) =
            Eigen::Vector2d(std::exp(unif(rng)), 1.0 / std::exp(unif(rng)))
                .asDiagonal();
        double r1 = unif(rng);
        local.block<2, 2>(0, 0) =
            Eigen::Vector2d(std::exp(r1), std::exp(-r1)).asDiagonal();
        double r2 = unif(rng);
        local.block<2, 2>(2, 2) =
            Eigen::Vector2d(std::exp(r2), std::exp(-r2)).asDiagonal();
        Eigen::Matrix4d s = balanced_bs_symplectic() * local;
        Eigen::VectorXd pure_nu = symplectic_eigenvalues(s * s.transpose());
        CHECK(pure_nu.maxCoeff() == Approx(1.0).epsilon(1e-10));
        CHECK(pure_nu.minCoeff() == Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("covariance validation rejects unphysical matrices") {
    CHECK_FALSE(validate_covariance(0.5 * Eigen::Matrix2d::Identity()).valid);

    Eigen::Matrix2d asym;
    asym << 1.0, 0.2, -0.2, 1.0;
    CHECK_FALSE(validate_covariance(asym).valid);

    auto mixed = validate_covariance(3.0 * Eigen::Matrix2d::Identity());
    CHECK(mixed.valid);
    CHECK_FALSE(mixed.pure);
}

TEST_CASE("single-mode model state") {
    ModelPoint p(Model::single_mode, 0.3, -0.4, 0.6);
    GaussianState state = single_mode_model_gaussian(p);
    // D(alpha) displaces the quadrature means by sqrt(2) (Re, Im) alpha.
    CHECK(state.mean(0) == Approx(std::sqrt(2.0) * 0.3));
    CHECK(state.mean(1) == Approx(std::sqrt(2.0) * -0.4));
    CHECK(state.cov(0, 0) == Approx(std::exp(1.2)));
    CHECK(state.cov(1, 1) == Approx(std::exp(-1.2)));
    CHECK(state.pure());
}

TEST_CASE("two-mode model state") {
    ModelPoint p(Model::two_mode, 0.5, 0.2, 0.3);
    GaussianState state = two_mode_model_gaussian(p);
    Eigen::Vector4d mean(0.5, 0.2, -0.5, -0.2);
    CHECK((state.mean - mean).norm() < 1e-14);
    Eigen::Vector4d diag(std::exp(0.6), std::exp(-0.6), std::exp(-0.6),
                         std::exp(0.6));
    CHECK((state.cov - Eigen::Matrix4d(diag.asDiagonal())).norm() < 1e-14);
    CHECK(state.pure());
}

TEST_CASE("state constructor validates input") {
    CHECK_THROWS_AS(GaussianState(Eigen::VectorXd::Zero(3),
                                  Eigen::Matrix2d::Identity()),
                    std::invalid_argument);
    CHECK_THROWS_AS(GaussianState(Eigen::VectorXd::Zero(2),
                                  0.1 * Eigen::Matrix2d::Identity()),
                    std::invalid_argument);
}

TEST_CASE("heterodyne distribution") {
    ModelPoint p(Model::single_mode, 0.1, 0.0, 0.4);
    GaussianState state = single_mode_model_gaussian(p);
    GaussianDistribution dist =
        gendyne_distribution(state, GendyneMeasurement::heterodyne(1));
    CHECK(dist.rank_deficient_directions.empty());
    CHECK(dist.sigma(0, 0) == Approx(0.5 * (std::exp(0.8) + 1.0)));
    CHECK(dist.sigma(1, 1) == Approx(0.5 * (std::exp(-0.8) + 1.0)));
    CHECK((dist.precision() - dist.sigma.inverse()).norm() < 1e-12);
}

TEST_CASE("squeezed general-dyne requires positive z") {
    CHECK_THROWS_AS(GendyneMeasurement::single_mode_squeezed(0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(GendyneMeasurement::single_mode_squeezed(-2.0),
                    std::invalid_argument);
    auto m = GendyneMeasurement::single_mode_squeezed(0.25);
    CHECK(m.cov_m(0, 0) == Approx(0.25));
    CHECK(m.cov_m(1, 1) == Approx(4.0));
}

TEST_CASE("double homodyne distribution is rank deficient on q1, p2") {
    ModelPoint p(Model::two_mode, 0.0, 0.0, 0.5);
    GaussianState state = two_mode_model_gaussian(p);
    GaussianDistribution dist =
        gendyne_distribution(state, GendyneMeasurement::double_homodyne());
    REQUIRE(dist.rank_deficient_directions.size() == 2);
    CHECK(dist.rank_deficient_directions[0] == 0);
    CHECK(dist.rank_deficient_directions[1] == 3);

    Eigen::MatrixXd prec = dist.precision();
    // Precision vanishes on the diverging directions, and inverts the
    // remaining support block: sigma there is cov/2.
    CHECK(prec.row(0).norm() == 0.0);
    CHECK(prec.row(3).norm() == 0.0);
    CHECK(prec(1, 1) == Approx(2.0 * std::exp(0.5 * 2.0)).epsilon(1e-12));
    CHECK(prec(2, 2) == Approx(2.0 * std::exp(1.0)).epsilon(1e-12));
}
