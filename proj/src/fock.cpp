#include "qmetro/fock.hpp"

#include <cmath>
#include <complex>

namespace qmetro {

namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using std::complex;

constexpr complex<double> kI{0.0, 1.0};

VectorXcd vacuum(int n) {
    VectorXcd v = VectorXcd::Zero(n);
    v(0) = 1.0;
    return v;
}

/// Squeezed coherent single-mode state D(alpha)S(r)|0>.
VectorXcd displaced_squeezed(int n, complex<double> alpha, double r) {
    return displacement_matrix(n, alpha) * (squeeze_matrix(n, r) * vacuum(n));
}

/// Two-mode squeezed vacuum S2(r)|0,0> lives on the |n,n> diagonal; its
/// generator restricted there is antisymmetric tridiagonal with
/// K[n+1,n] = r(n+1).
VectorXcd two_mode_squeezed_diagonal(int n, double r) {
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i + 1 < n; ++i) {
        k(i + 1, i) = r * (i + 1);
        k(i, i + 1) = -r * (i + 1);
    }
    MatrixXcd u = unitary_from_generator(k.cast<complex<double>>());
    return u.col(0);
}

/// y <- exp(K) y for antisymmetric tridiagonal K with K[i+1,i] = offd[i],
/// by repeated short Taylor steps.
void expmv_tridiag_antisym(const Eigen::VectorXd& offd, VectorXcd& y) {
    const int m = static_cast<int>(y.size());
    if (m == 1) return;
    double norm_est = 2.0 * offd.cwiseAbs().maxCoeff();
    int steps = static_cast<int>(std::ceil(norm_est)) + 1;
    const double inv_steps = 1.0 / steps;
    VectorXcd term(m), next(m);
    for (int s = 0; s < steps; ++s) {
        term = y;
        for (int k = 1; k <= 60; ++k) {
            next.setZero();
            for (int i = 0; i + 1 < m; ++i) {
                next(i + 1) += offd(i) * term(i);
                next(i) -= offd(i) * term(i + 1);
            }
            term = next * (inv_steps / k);
            y += term;
            if (term.norm() < 1e-18 * y.norm()) break;
        }
    }
}

}  // namespace

double FockVector::tail_weight() const {
    const int cut = dim - dim / 10;  // first index counted as tail
    double w = 0.0;
    if (modes == 1) {
        for (int i = cut; i < dim; ++i) w += std::norm(amplitudes(i));
    } else {
        for (int m = 0; m < dim; ++m)
            for (int n = 0; n < dim; ++n)
                if (m >= cut || n >= cut) w += std::norm(amplitudes(m * dim + n));
    }
    return w;
}

void enforce_tail_budget(const FockVector& v, const TruncationPolicy& policy) {
    double w = v.tail_weight();
    if (w > policy.tail_tol)
        throw TruncationError("truncation budget exceeded: tail weight "
                              + std::to_string(w) + " > "
                              + std::to_string(policy.tail_tol));
    double norm = v.amplitudes.norm();
    if (norm > 1.0 + 1e-9 || norm * norm < 1.0 - 10.0 * policy.tail_tol - 1e-12)
        throw TruncationError("truncation budget exceeded: state norm "
                              + std::to_string(norm));
}

Eigen::MatrixXcd mode_lowering_matrix(int n) {
    if (n < 2) throw std::invalid_argument("mode_lowering_matrix: n must be >= 2");
    MatrixXcd a = MatrixXcd::Zero(n, n);
    for (int k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
    return a;
}

Eigen::MatrixXcd unitary_from_generator(const Eigen::MatrixXcd& g) {
    if (g.rows() != g.cols())
        throw std::invalid_argument("unitary_from_generator: square matrix required");
    double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
    if ((g + g.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale)
        throw std::invalid_argument("unitary_from_generator: generator not anti-Hermitian");
    MatrixXcd h = -kI * g;  // Hermitian
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(h);
    VectorXcd phases(h.rows());
    for (int i = 0; i < h.rows(); ++i)
        phases(i) = std::exp(kI * es.eigenvalues()(i));
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

Eigen::MatrixXcd displacement_matrix(int n, std::complex<double> alpha) {
    MatrixXcd a = mode_lowering_matrix(n);
    return unitary_from_generator(alpha * a.adjoint() - std::conj(alpha) * a);
}

Eigen::MatrixXcd squeeze_matrix(int n, double r) {
    MatrixXcd a = mode_lowering_matrix(n);
    MatrixXcd a2 = a * a;
    return unitary_from_generator(0.5 * r * (a2.adjoint() - a2));
}

FockVector model_state(const ModelPoint& theta, const TruncationPolicy& policy) {
    const int n = policy.dim;
    const complex<double> alpha(theta.theta1, theta.theta2);
    FockVector out;
    out.dim = n;
    if (theta.model == Model::single_mode) {
        out.modes = 1;
        out.amplitudes = displaced_squeezed(n, alpha, theta.r);
    } else {
        out.modes = 2;
        VectorXcd diag = two_mode_squeezed_diagonal(n, theta.r);
        MatrixXcd d = displacement_matrix(n, alpha);
        out.amplitudes = VectorXcd::Zero(n * n);
        for (int col = 0; col < n; ++col)
            for (int row = 0; row < n; ++row)
                out.amplitudes(row * n + col) = d(row, col) * diag(col);
    }
    enforce_tail_budget(out, policy);
    return out;
}

FockVector factored_two_mode_state(const ModelPoint& theta,
                                   const TruncationPolicy& policy) {
    if (theta.model != Model::two_mode)
        throw std::invalid_argument("factored_two_mode_state: two-mode model required");
    const int n = policy.dim;
    const complex<double> half_alpha =
        complex<double>(theta.theta1, theta.theta2) / std::sqrt(2.0);
    VectorXcd u = displaced_squeezed(n, half_alpha, theta.r);
    VectorXcd v = displaced_squeezed(n, -half_alpha, -theta.r);
    FockVector out;
    out.modes = 2;
    out.dim = n;
    out.amplitudes = VectorXcd::Zero(n * n);
    for (int m = 0; m < n; ++m)
        for (int k = 0; k < n; ++k) out.amplitudes(m * n + k) = u(m) * v(k);
    enforce_tail_budget(out, policy);
    return out;
}

FockVector apply_balanced_bs(const FockVector& v) {
    if (v.modes != 2)
        throw std::invalid_argument("apply_balanced_bs: two-mode vector required");
    const int n = v.dim;
    FockVector out{2, n, VectorXcd::Zero(n * n)};
    // The generator conserves total photon number; within the block of total
    // photons t with basis |k, t-k>, it is tridiagonal antisymmetric with
    // element sqrt((k+1)(t-k)) (times pi/4).
    for (int t = 0; t <= 2 * (n - 1); ++t) {
        const int k_lo = std::max(0, t - n + 1);
        const int k_hi = std::min(t, n - 1);
        const int m = k_hi - k_lo + 1;
        VectorXcd block(m);
        for (int i = 0; i < m; ++i) {
            int k = k_lo + i;
            block(i) = v.amplitudes(k * n + (t - k));
        }
        Eigen::VectorXd offd(std::max(m - 1, 0));
        for (int i = 0; i + 1 < m; ++i) {
            int k = k_lo + i;
            offd(i) = 0.25 * M_PI
                * std::sqrt(static_cast<double>(k + 1) * static_cast<double>(t - k));
        }
        expmv_tridiag_antisym(offd, block);
        for (int i = 0; i < m; ++i) {
            int k = k_lo + i;
            out.amplitudes(k * n + (t - k)) = block(i);
        }
    }
    return out;
}

double bs_factorization_check(const ModelPoint& theta,
                              const TruncationPolicy& policy) {
    if (theta.model != Model::two_mode)
        throw std::invalid_argument("bs_factorization_check: two-mode model required");
    FockVector pre = model_state(theta, policy);
    FockVector rotated = apply_balanced_bs(pre);
    FockVector product = factored_two_mode_state(theta, policy);
    return (rotated.amplitudes - product.amplitudes).norm();
}

std::array<FockVector, 3> fd_derivatives(const ModelPoint& theta,
                                         const TruncationPolicy& policy) {
    // Built directly from the operator products so the stencil may step to
    // slightly negative r, where the state is still well defined.
    auto eval = [&](double t1, double t2, double r) {
        const int n = policy.dim;
        const complex<double> alpha(t1, t2);
        FockVector out;
        out.dim = n;
        if (theta.model == Model::single_mode) {
            out.modes = 1;
            out.amplitudes = displaced_squeezed(n, alpha, r);
        } else {
            out.modes = 2;
            VectorXcd u = displaced_squeezed(n, alpha / std::sqrt(2.0), r);
            VectorXcd v = displaced_squeezed(n, -alpha / std::sqrt(2.0), -r);
            out.amplitudes = VectorXcd::Zero(n * n);
            for (int m = 0; m < n; ++m)
                for (int k = 0; k < n; ++k)
                    out.amplitudes(m * n + k) = u(m) * v(k);
        }
        enforce_tail_budget(out, policy);
        return out;
    };
    const double h = policy.fd_step;
    std::array<FockVector, 3> out;
    for (int mu = 0; mu < 3; ++mu) {
        double d1 = mu == 0 ? h : 0.0, d2 = mu == 1 ? h : 0.0, d3 = mu == 2 ? h : 0.0;
        FockVector plus = eval(theta.theta1 + d1, theta.theta2 + d2, theta.r + d3);
        FockVector minus = eval(theta.theta1 - d1, theta.theta2 - d2, theta.r - d3);
        out[mu] = plus;
        out[mu].amplitudes = (plus.amplitudes - minus.amplitudes) / (2.0 * h);
    }
    return out;
}

OracleCurvature oracle_qfi_uhlmann(const ModelPoint& theta,
                                   const TruncationPolicy& policy) {
    FockVector psi = theta.model == Model::single_mode
        ? model_state(theta, policy)
        : factored_two_mode_state(theta, policy);
    std::array<FockVector, 3> d = fd_derivatives(theta, policy);
    OracleCurvature out;
    for (int mu = 0; mu < 3; ++mu) {
        for (int nu = 0; nu < 3; ++nu) {
            complex<double> overlap = d[mu].amplitudes.dot(d[nu].amplitudes);
            complex<double> proj = d[mu].amplitudes.dot(psi.amplitudes)
                * psi.amplitudes.dot(d[nu].amplitudes);
            complex<double> g = overlap - proj;
            out.qfi(mu, nu) = 4.0 * g.real();
            out.uhlmann(mu, nu) = 4.0 * g.imag();
        }
    }
    return out;
}

}  // namespace qmetro
