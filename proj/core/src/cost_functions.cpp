// Copyright 2026 The cvplateau Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "cvplateau/cost_functions.hpp"

#include "cvplateau/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace cvplateau {

namespace {

constexpr double kSymmetryTolerance = 1e-12;

void require_same_dim(const MeanVector &u, const OrthogonalMatrix &a,
                      const OrthogonalMatrix &b) {
    if (a.dim() != u.dim() || b.dim() != u.dim()) {
        throw DimensionError("circuit acts on " + std::to_string(a.dim() / 2) +
                             " modes, state has " + std::to_string(u.modes()));
    }
}

void require_generator_dim(const Eigen::MatrixXd &d, int dim) {
    if (d.rows() != dim || d.cols() != dim) {
        throw DimensionError("generator size does not match the state");
    }
}

bool is_symmetric(const Eigen::MatrixXd &m) {
    return (m - m.transpose()).norm() <=
           kSymmetryTolerance * std::max(1.0, m.norm());
}

/// log sinh(s) for s > 0.
double log_sinh(double s) {
    return s + std::log1p(-std::exp(-2.0 * s)) - std::numbers::ln2;
}

} // namespace

QuadraticHamiltonian::QuadraticHamiltonian(Eigen::MatrixXd eta)
    : eta_(std::move(eta)) {
    if (eta_.rows() != eta_.cols() || eta_.rows() == 0 || eta_.rows() % 2 != 0) {
        throw DimensionError("eta must be 2m x 2m");
    }
    if (!is_symmetric(eta_)) {
        throw DomainError("eta must be symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(eta_,
                                                      Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-12) {
        throw DomainError("eta must be positive semidefinite");
    }
}

BkMatrix::BkMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols() || entries_.rows() % 2 != 0) {
        throw DimensionError("B_k must be 2m x 2m");
    }
    if (!is_symmetric(entries_)) {
        throw DomainError("B_k must be symmetric");
    }
}

// --- toy model ----------------------------------------------------------------

double toy_cost(const Eigen::Vector2d &u_single, const Eigen::VectorXd &theta) {
    const double s = u_single.squaredNorm();
    const double m = static_cast<double>(theta.size());
    return -std::expm1(s * (theta.array().cos().sum() - m));
}

double toy_grad(const Eigen::Vector2d &u_single, const Eigen::VectorXd &theta,
                int j) {
    if (j < 0 || j >= theta.size()) {
        throw DomainError("toy gradient index out of range");
    }
    const double s = u_single.squaredNorm();
    const double m = static_cast<double>(theta.size());
    return s * std::sin(theta[j]) *
           std::exp(s * (theta.array().cos().sum() - m));
}

LogScaled toy_grad_abs_expectation(double s, int modes) {
    if (!(s >= 0.0) || modes < 1) {
        throw DomainError("toy expectation needs s >= 0 and m >= 1");
    }
    if (s == 0.0) {
        return LogScaled::zero();
    }
    const double log_i0 = bessel_i(0, s).log_value;
    return {std::log(2.0 / std::numbers::pi) - modes * s +
            (modes - 1) * log_i0 + log_sinh(s)};
}

// --- compiling ----------------------------------------------------------------

double compiling_cost(const MeanVector &u, const OrthogonalMatrix &minus,
                      const OrthogonalMatrix &plus) {
    require_same_dim(u, minus, plus);
    const Eigen::VectorXd v =
        plus.matrix().transpose() * (minus.matrix().transpose() * u.values());
    return -std::expm1(-0.5 * (u.values() - v).squaredNorm());
}

double compiling_grad(const MeanVector &u, const Eigen::MatrixXd &d_k,
                      const OrthogonalMatrix &minus,
                      const OrthogonalMatrix &plus) {
    require_same_dim(u, minus, plus);
    require_generator_dim(d_k, u.dim());
    const double two_e = u.values().squaredNorm();
    const Eigen::VectorXd y = minus.matrix().transpose() * u.values();
    const Eigen::VectorXd b = plus.matrix() * u.values();
    return -y.dot(d_k * b) * std::exp(b.dot(y) - two_e);
}

// --- measurement-based --------------------------------------------------------

MeanVector photon_count_target(const MeanVector &u, std::span<const int> counts) {
    if (static_cast<int>(counts.size()) != u.modes()) {
        throw DimensionError("need one photon count per mode");
    }
    long total = 0;
    for (int n : counts) {
        if (n < 0) {
            throw DomainError("photon counts must be nonnegative");
        }
        total += n;
    }
    if (total == 0) {
        throw DomainError("photon counts are all zero");
    }
    const double e = intensity(u).value();
    if (e <= 0.0) {
        throw DomainError("photon-count target needs a nonzero input intensity");
    }
    Eigen::VectorXd v = Eigen::VectorXd::Zero(u.dim());
    for (int j = 0; j < u.modes(); ++j) {
        v[2 * j] = std::sqrt(2.0 * e * counts[j] / static_cast<double>(total));
    }
    return MeanVector(std::move(v));
}

double measurement_cost(const MeanVector &u, const MeanVector &n,
                        const OrthogonalMatrix &minus,
                        const OrthogonalMatrix &plus) {
    require_same_dim(u, minus, plus);
    if (n.dim() != u.dim()) {
        throw DimensionError("outcome and input have different mode counts");
    }
    const Eigen::VectorXd v =
        plus.matrix().transpose() * (minus.matrix().transpose() * u.values());
    return -std::expm1(-0.5 * (v - n.values()).squaredNorm());
}

double measurement_grad(const MeanVector &u, const MeanVector &n,
                        const Eigen::MatrixXd &d_k,
                        const OrthogonalMatrix &minus,
                        const OrthogonalMatrix &plus) {
    require_same_dim(u, minus, plus);
    if (n.dim() != u.dim()) {
        throw DimensionError("outcome and input have different mode counts");
    }
    require_generator_dim(d_k, u.dim());
    const double e_sum =
        0.5 * (u.values().squaredNorm() + n.values().squaredNorm());
    const Eigen::VectorXd y = minus.matrix().transpose() * u.values();
    const Eigen::VectorXd b = plus.matrix() * n.values();
    return -y.dot(d_k * b) * std::exp(b.dot(y) - e_sum);
}

Intensity attenuated_intensity(Intensity e0, double k, int layers) {
    if (!(k > 0.0 && k < 1.0)) {
        throw DomainError("attenuation factor k must lie in (0, 1)");
    }
    if (layers < 0) {
        throw DomainError("number of attenuation layers must be nonnegative");
    }
    return Intensity(e0.value() * std::pow(k, 2.0 * layers));
}

// --- quadratic ----------------------------------------------------------------

double quadratic_cost(const MeanVector &u, const QuadraticHamiltonian &h,
                      const OrthogonalMatrix &minus,
                      const OrthogonalMatrix &plus) {
    require_same_dim(u, minus, plus);
    if (h.eta().rows() != u.dim()) {
        throw DimensionError("Hamiltonian and state have different mode counts");
    }
    const Eigen::VectorXd v =
        plus.matrix().transpose() * (minus.matrix().transpose() * u.values());
    return v.dot(h.eta() * v) + 0.5 * h.eta().trace();
}

BkMatrix bk_matrix(const Eigen::MatrixXd &eps_k, const Eigen::MatrixXd &eta_tilde) {
    if (eps_k.rows() != eps_k.cols() || eps_k.rows() % 2 != 0 ||
        eta_tilde.rows() != eps_k.rows() || eta_tilde.cols() != eps_k.cols()) {
        throw DimensionError("eps_k and eta~ must both be 2m x 2m");
    }
    if (!is_symmetric(eps_k)) {
        throw DomainError("eps_k must be symmetric");
    }
    if (!is_symmetric(eta_tilde)) {
        throw DomainError("eta~ must be symmetric");
    }
    const Eigen::MatrixXd delta = symplectic_form(static_cast<int>(eps_k.rows() / 2));
    if ((eps_k * delta - delta * eps_k).norm() >
        kSymmetryTolerance * std::max(1.0, eps_k.norm())) {
        throw DomainError("eps_k must commute with the symplectic form");
    }
    Eigen::MatrixXd b = 2.0 * (eps_k * delta * eta_tilde) -
                        2.0 * (eta_tilde * delta * eps_k);
    return BkMatrix(0.5 * (b + b.transpose()));
}

BkMatrix bk_matrix(const GeneratorPair &gate, const QuadraticHamiltonian &h,
                   const OrthogonalMatrix &plus) {
    if (plus.dim() != h.eta().rows()) {
        throw DimensionError("O_+ and eta have different sizes");
    }
    Eigen::MatrixXd eta_tilde = plus.matrix() * h.eta() * plus.matrix().transpose();
    eta_tilde = 0.5 * (eta_tilde + eta_tilde.transpose()).eval();
    return bk_matrix(gate.eps(), eta_tilde);
}

double quadratic_form(const MeanVector &u, const Eigen::MatrixXd &m,
                      const OrthogonalMatrix &minus) {
    if (minus.dim() != u.dim() || m.rows() != u.dim() || m.cols() != u.dim()) {
        throw DimensionError("quadratic form operands disagree in size");
    }
    const Eigen::VectorXd y = minus.matrix().transpose() * u.values();
    return y.dot(m * y);
}

double quadratic_grad(const MeanVector &u, const QuadraticHamiltonian &h,
                      const GeneratorPair &gate, const OrthogonalMatrix &minus,
                      const OrthogonalMatrix &plus) {
    require_same_dim(u, minus, plus);
    const BkMatrix b = bk_matrix(gate, h, plus);
    // D = -2 Delta eps, so d eta~/d theta = D eta~ - eta~ D = -B_k.
    return -quadratic_form(u, b.matrix(), minus);
}

} // namespace cvplateau
