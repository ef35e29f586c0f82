#include <doctest.h>

#include <cmath>
#include <complex>

#include "qmetro/bounds.hpp"
#include "qmetro/fock.hpp"

using namespace qmetro;
using doctest::Approx;
using std::complex;

namespace {

const TruncationPolicy kSmall(60);

Eigen::VectorXcd basis_state(int n, complex<double> alpha, double r, int level) {
    return displacement_matrix(n, alpha)
        * (squeeze_matrix(n, r) * Eigen::VectorXcd::Unit(n, level).eval());
}

}  // namespace

TEST_CASE("mode lowering matrix") {
    Eigen::MatrixXcd a = mode_lowering_matrix(3);
    CHECK(a(0, 1) == complex<double>(1, 0));
    CHECK(a(1, 2).real() == Approx(std::sqrt(2.0)));
    CHECK(a.row(2).norm() == 0.0);

    // a|1> = |0>
    Eigen::VectorXcd one = Eigen::VectorXcd::Unit(3, 1);
    CHECK((a * one - Eigen::VectorXcd::Unit(3, 0)).norm() == 0.0);

    // Truncation corner defect of [a, a^dag].
    const int n = 12;
    Eigen::MatrixXcd an = mode_lowering_matrix(n);
    Eigen::MatrixXcd comm =
        an * an.adjoint() - an.adjoint() * an - Eigen::MatrixXcd::Identity(n, n);
    CHECK(comm(n - 1, n - 1).real() == Approx(-n));
    comm(n - 1, n - 1) = 0.0;
    CHECK(comm.norm() < 1e-12);

    CHECK_THROWS_AS(mode_lowering_matrix(1), std::invalid_argument);
}

TEST_CASE("unitary from generator") {
    CHECK((unitary_from_generator(Eigen::MatrixXcd::Zero(5, 5))
           - Eigen::MatrixXcd::Identity(5, 5))
              .norm() < 1e-12);

    Eigen::MatrixXcd not_anti = Eigen::MatrixXcd::Identity(3, 3);
    CHECK_THROWS_AS(unitary_from_generator(not_anti), std::invalid_argument);

    // Unitarity on a random-ish anti-Hermitian generator.
    Eigen::MatrixXcd a20 = mode_lowering_matrix(20);
    Eigen::MatrixXcd g = a20 - a20.adjoint();
    Eigen::MatrixXcd u = unitary_from_generator(g);
    CHECK((u * u.adjoint() - Eigen::MatrixXcd::Identity(20, 20)).norm() < 1e-9);
}

TEST_CASE("displacement matches the coherent-state series") {
    const int n = 40;
    const complex<double> alpha(0.3, 0.0);
    Eigen::VectorXcd psi =
        displacement_matrix(n, alpha) * Eigen::VectorXcd::Unit(n, 0).eval();
    double log_fact = 0.0;
    for (int k = 0; k < 12; ++k) {
        if (k > 0) log_fact += std::log(static_cast<double>(k));
        complex<double> expected = std::exp(-0.5 * std::norm(alpha))
            * std::pow(alpha, k) / std::exp(0.5 * log_fact);
        CHECK(std::abs(psi(k) - expected) < 1e-10);
    }
}

TEST_CASE("squeezed vacuum has only even Fock amplitudes") {
    const int n = 40;
    Eigen::VectorXcd psi =
        squeeze_matrix(n, 0.4) * Eigen::VectorXcd::Unit(n, 0).eval();
    for (int k = 1; k < n; k += 2) CHECK(std::abs(psi(k)) < 1e-12);
    CHECK(std::abs(psi(0)) == Approx(1.0 / std::sqrt(std::cosh(0.4))).epsilon(1e-10));
}

TEST_CASE("model states") {
    FockVector vac = model_state(ModelPoint(Model::single_mode, 0, 0, 0), kSmall);
    CHECK(std::abs(vac.amplitudes(0) - 1.0) < 1e-12);
    CHECK(vac.amplitudes.tail(59).norm() < 1e-12);

    // <e_2|psi> = 0: the model state is e_0 of its own displaced-squeezed basis.
    ModelPoint p(Model::single_mode, 0.3, -0.2, 0.6);
    FockVector psi = model_state(p, kSmall);
    Eigen::VectorXcd e2 = basis_state(kSmall.dim, {0.3, -0.2}, 0.6, 2);
    CHECK(std::abs(e2.dot(psi.amplitudes)) < 1e-10);
    CHECK(psi.amplitudes.norm() == Approx(1.0).epsilon(1e-10));
}

TEST_CASE("two-mode squeezed vacuum Schmidt coefficients") {
    FockVector psi = model_state(ModelPoint(Model::two_mode, 0, 0, 0.5), kSmall);
    const int n = kSmall.dim;
    const double th = std::tanh(0.5), ch = std::cosh(0.5);
    double offdiag = 0.0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (a != b) offdiag += std::norm(psi.amplitudes(a * n + b));
    CHECK(offdiag < 1e-20);
    for (int k = 0; k < 10; ++k)
        CHECK(std::abs(psi.amplitudes(k * n + k) - std::pow(th, k) / ch) < 1e-10);
}

TEST_CASE("truncation policy enforcement") {
    CHECK_THROWS_AS(TruncationPolicy(10), std::invalid_argument);
    CHECK_THROWS_AS(model_state(ModelPoint(Model::single_mode, 0, 0, 2.0),
                                TruncationPolicy(20)),
                    TruncationError);
}

TEST_CASE("beam splitter factorization") {
    CHECK(bs_factorization_check(ModelPoint(Model::two_mode, 0, 0, 0), kSmall)
          < 1e-12);

    const TruncationPolicy big(220);
    CHECK(bs_factorization_check(ModelPoint(Model::two_mode, 0.5, 0.5, 0.8), big)
          < 1e-8);
    CHECK(bs_factorization_check(ModelPoint(Model::two_mode, 1.0, 0.0, 1.2), big)
          < 1e-8);
}

TEST_CASE("finite-difference derivatives match the closed coefficients") {
    auto d0 = fd_derivatives(ModelPoint(Model::single_mode, 0, 0, 0), kSmall);
    Eigen::VectorXcd e2 = Eigen::VectorXcd::Unit(kSmall.dim, 2);
    CHECK((d0[2].amplitudes - e2 / std::sqrt(2.0)).norm() < 1e-9);

    auto d = fd_derivatives(ModelPoint(Model::single_mode, 0.3, 0.7, 0.5), kSmall);
    Eigen::VectorXcd e1 = basis_state(kSmall.dim, {0.3, 0.7}, 0.5, 1);
    CHECK(std::abs(e1.dot(d[0].amplitudes) - std::exp(-0.5)) < 1e-9);

    auto d2 = fd_derivatives(ModelPoint(Model::two_mode, 0.2, 0.1, 0.4), kSmall);
    const int n = kSmall.dim;
    complex<double> half_alpha = complex<double>(0.2, 0.1) / std::sqrt(2.0);
    Eigen::VectorXcd e1f = basis_state(n, half_alpha, 0.4, 1);
    Eigen::VectorXcd f0 = basis_state(n, -half_alpha, -0.4, 0);
    complex<double> coeff = 0.0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            coeff += std::conj(e1f(a) * f0(b)) * d2[1].amplitudes(a * n + b);
    CHECK(std::abs(coeff - complex<double>(0, 1) * std::exp(0.4) / std::sqrt(2.0))
          < 1e-8);
}

TEST_CASE("oracle QFI and Uhlmann curvature") {
    OracleCurvature r0 =
        oracle_qfi_uhlmann(ModelPoint(Model::single_mode, 0, 0, 0), kSmall);
    CHECK((r0.qfi - Eigen::Vector3d(4, 4, 2).asDiagonal().toDenseMatrix())
              .cwiseAbs()
              .maxCoeff() < 1e-6);
    CHECK(r0.uhlmann(0, 1) == Approx(4.0).epsilon(1e-6));
    CHECK((r0.uhlmann + r0.uhlmann.transpose()).norm() < 1e-6);

    OracleCurvature any =
        oracle_qfi_uhlmann(ModelPoint(Model::single_mode, 0.4, -0.3, 0.5), kSmall);
    CHECK(any.uhlmann(0, 1) == Approx(4.0).epsilon(1e-6));

    const TruncationPolicy two_pol(100);
    OracleCurvature two =
        oracle_qfi_uhlmann(ModelPoint(Model::two_mode, 0, 0, 0.7), two_pol);
    double c = 4.0 * std::cosh(1.4);
    CHECK((two.qfi - Eigen::Vector3d(c, c, 4).asDiagonal().toDenseMatrix())
              .cwiseAbs()
              .maxCoeff() < 1e-6);
}

TEST_CASE("oracle curvature is displacement independent") {
    const TruncationPolicy pol(80);
    OracleCurvature a =
        oracle_qfi_uhlmann(ModelPoint(Model::single_mode, 0, 0, 0.5), pol);
    OracleCurvature b =
        oracle_qfi_uhlmann(ModelPoint(Model::single_mode, 0.3, 0.7, 0.5), pol);
    CHECK((a.qfi - b.qfi).cwiseAbs().maxCoeff() < 1e-6);
    CHECK((a.uhlmann - b.uhlmann).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("pure-state SLDs satisfy the Lyapunov equation") {
    const int n = kSmall.dim;
    ModelPoint p(Model::single_mode, 0.2, 0.1, 0.3);
    FockVector psi = model_state(p, kSmall);
    auto d = fd_derivatives(p, kSmall);
    Eigen::MatrixXcd rho = psi.amplitudes * psi.amplitudes.adjoint();
    for (int mu = 0; mu < 3; ++mu) {
        Eigen::MatrixXcd drho = d[mu].amplitudes * psi.amplitudes.adjoint()
            + psi.amplitudes * d[mu].amplitudes.adjoint();
        Eigen::MatrixXcd sld = 2.0 * drho;  // L = 2 d rho for pure states
        Eigen::MatrixXcd defect = 0.5 * (sld * rho + rho * sld) - drho;
        CHECK(defect.cwiseAbs().maxCoeff() < 1e-6);
    }
}

TEST_CASE("fock oracle agrees with the closed-form QFI on the grid") {
    const TruncationPolicy pol(160);
    for (double r : {0.0, 0.5, 1.25}) {
        for (Model m : {Model::single_mode, Model::two_mode}) {
            ModelPoint p(m, 0.3, 0.7, r);
            OracleCurvature oc = oracle_qfi_uhlmann(p, pol);
            CHECK((oc.qfi - qfi_matrix(p).entries).cwiseAbs().maxCoeff() < 1e-6);
            CHECK((oc.uhlmann - uhlmann_matrix(p).entries).cwiseAbs().maxCoeff()
                  < 1e-6);
        }
    }
}
