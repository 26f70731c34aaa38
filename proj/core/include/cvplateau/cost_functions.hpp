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
/**
 * @file cost_functions.hpp
 * Cost functions of linear-optical circuits on coherent inputs, each with its
 * exact value and analytic derivative in the split-layer parameter.
 *
 * All circuit-dependent costs take the split action (O_-, O_+) of a layered
 * circuit; the derivative is with respect to the parameter of the gate that
 * leads O_+ (see LayeredCircuit).
 */
#pragma once

#include "cvplateau/linear_optics.hpp"
#include "cvplateau/phase_space.hpp"
#include "cvplateau/special_functions.hpp"

#include <Eigen/Dense>

#include <span>

namespace cvplateau {

/// H = R eta R^T with eta symmetric positive semidefinite.
class QuadraticHamiltonian {
  public:
    explicit QuadraticHamiltonian(Eigen::MatrixXd eta);
    [[nodiscard]] const Eigen::MatrixXd &eta() const { return eta_; }
    [[nodiscard]] int modes() const { return static_cast<int>(eta_.rows() / 2); }

  private:
    Eigen::MatrixXd eta_;
};

/// B_k = 2 eps_k Delta eta~ - 2 eta~ Delta eps_k, symmetric.
class BkMatrix {
  public:
    explicit BkMatrix(Eigen::MatrixXd entries);
    [[nodiscard]] const Eigen::MatrixXd &matrix() const { return entries_; }
    [[nodiscard]] double trace() const { return entries_.trace(); }
    [[nodiscard]] int modes() const { return static_cast<int>(entries_.rows() / 2); }

  private:
    Eigen::MatrixXd entries_;
};

// --- local phase-shifter toy model -------------------------------------------
//
// Input (u_1, u_2)^{(+)m}, circuit exp(-i sum_j theta_j n_j), H = I - |u><u|.
// With |alpha|^2 = (u_1^2 + u_2^2)/2 the cost is
// 1 - exp(-2m|alpha|^2) prod_j exp(2|alpha|^2 cos theta_j).

[[nodiscard]] double toy_cost(const Eigen::Vector2d &u_single,
                              const Eigen::VectorXd &theta);

/// d toy_cost / d theta_j.
[[nodiscard]] double toy_grad(const Eigen::Vector2d &u_single,
                              const Eigen::VectorXd &theta, int j = 0);

/// E|d C / d theta_1| over uniform angles,
/// (2/pi) exp(-m s) I_0(s)^{m-1} sinh(s) with s = u_1^2 + u_2^2.
[[nodiscard]] LogScaled toy_grad_abs_expectation(double s, int modes);

// --- compiling ----------------------------------------------------------------

/// 1 - exp(-||u (I - O_- O_+)||^2 / 2).
[[nodiscard]] double compiling_cost(const MeanVector &u,
                                    const OrthogonalMatrix &minus,
                                    const OrthogonalMatrix &plus);

/// With y = O_-^T u^T, b = O_+ u^T and E = ||u||^2/2:
/// -exp(-2E) (y^T D_k b) exp(b^T y).
[[nodiscard]] double compiling_grad(const MeanVector &u,
                                    const Eigen::MatrixXd &d_k,
                                    const OrthogonalMatrix &minus,
                                    const OrthogonalMatrix &plus);

// --- measurement-based costs -------------------------------------------------

/// Coherent target with per-mode intensity E n_j / N and zero phases.
[[nodiscard]] MeanVector photon_count_target(const MeanVector &u,
                                             std::span<const int> counts);

/// 1 - |<u|U|n>|^2 = 1 - exp(-||u O_- O_+ - n||^2 / 2).
[[nodiscard]] double measurement_cost(const MeanVector &u, const MeanVector &n,
                                      const OrthogonalMatrix &minus,
                                      const OrthogonalMatrix &plus);

/// -exp(-(E_0 + E_1)) (y^T D_k b) exp(b^T y) with b = O_+ n^T.
[[nodiscard]] double measurement_grad(const MeanVector &u, const MeanVector &n,
                                      const Eigen::MatrixXd &d_k,
                                      const OrthogonalMatrix &minus,
                                      const OrthogonalMatrix &plus);

/// k^{2L} E_0 after L quantum-limited attenuators of amplitude factor k.
[[nodiscard]] Intensity attenuated_intensity(Intensity e0, double k, int layers);

// --- quadratic mean-field energy ---------------------------------------------

/// Coherent-state mean of R eta R^T after the circuit: v eta v^T + tr(eta)/2
/// with v = u O_- O_+. The trace term is the vacuum contribution and does not
/// depend on the circuit.
[[nodiscard]] double quadratic_cost(const MeanVector &u,
                                    const QuadraticHamiltonian &h,
                                    const OrthogonalMatrix &minus,
                                    const OrthogonalMatrix &plus);

[[nodiscard]] BkMatrix bk_matrix(const Eigen::MatrixXd &eps_k,
                                 const Eigen::MatrixXd &eta_tilde);

/// B_k for a gate and fixed O_+: eta~ = O_+ eta O_+^T.
[[nodiscard]] BkMatrix bk_matrix(const GeneratorPair &gate,
                                 const QuadraticHamiltonian &h,
                                 const OrthogonalMatrix &plus);

/// u O_- M O_-^T u^T.
[[nodiscard]] double quadratic_form(const MeanVector &u, const Eigen::MatrixXd &m,
                                    const OrthogonalMatrix &minus);

/// d quadratic_cost / d theta_k = -u O_- B_k O_-^T u^T.
[[nodiscard]] double quadratic_grad(const MeanVector &u,
                                    const QuadraticHamiltonian &h,
                                    const GeneratorPair &gate,
                                    const OrthogonalMatrix &minus,
                                    const OrthogonalMatrix &plus);

} // namespace cvplateau
