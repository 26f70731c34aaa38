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
 * @file linear_optics.hpp
 * Energy-conserving linear optics in the Heisenberg picture.
 *
 * A unitary U acts on the row vector of canonical operators as U*RU = RT with
 * T orthogonal and symplectic, hence on coherent states as U|u> = |uT>.
 * Products follow the row convention: applying A then B gives T_A T_B.
 *
 * A gate U(theta) = exp(-i theta R eps R^T) has Heisenberg action exp(theta D)
 * with D = -2 Delta eps. For the single-mode phase shifter (eps = I/2 on one
 * mode) this is the rotation (q, p) -> (q cos + p sin, -q sin + p cos), i.e.
 * alpha -> exp(-i theta) alpha.
 */
#pragma once

#include "cvplateau/phase_space.hpp"

#include <Eigen/Dense>

#include <string>
#include <string_view>
#include <vector>

namespace cvplateau {

/// Block-diagonal sum of m copies of [[0, 1], [-1, 0]].
[[nodiscard]] Eigen::MatrixXd symplectic_form(int modes);

/// Real 2m x 2m orthogonal matrix.
class OrthogonalMatrix {
  public:
    static constexpr double kTolerance = 1e-10;

    /// Throws DomainError unless ||T^T T - I||_F <= kTolerance.
    explicit OrthogonalMatrix(Eigen::MatrixXd entries);

    /// Skips the orthogonality check. For values produced by products of
    /// orthogonal matrices, QR factors and matrix exponentials of skew
    /// generators.
    static OrthogonalMatrix unchecked(Eigen::MatrixXd entries);

    static OrthogonalMatrix identity(int dim);

    [[nodiscard]] const Eigen::MatrixXd &matrix() const { return entries_; }
    [[nodiscard]] int dim() const { return static_cast<int>(entries_.rows()); }
    [[nodiscard]] OrthogonalMatrix transpose() const;
    [[nodiscard]] double orthogonality_defect() const;

    friend OrthogonalMatrix operator*(const OrthogonalMatrix &a,
                                      const OrthogonalMatrix &b);

  private:
    struct Trusted {};
    OrthogonalMatrix(Eigen::MatrixXd entries, Trusted);
    Eigen::MatrixXd entries_;
};

enum class GateKind { PhaseShifter, TwoModePhase, Beamsplitter, Custom };

struct GateLabel {
    GateKind kind = GateKind::Custom;
    int mode_a = -1;
    int mode_b = -1;

    [[nodiscard]] std::string to_string() const;
    bool operator==(const GateLabel &) const = default;
};

[[nodiscard]] std::string_view gate_kind_name(GateKind kind);
[[nodiscard]] GateKind parse_gate_kind(std::string_view name);

/**
 * Skew-symmetric Heisenberg generator D paired with the symmetric quadratic
 * Hamiltonian matrix eps. Construction enforces eps = eps^T and
 * [eps, Delta] = 0, so exp(theta D) is orthogonal and symplectic.
 */
class GeneratorPair {
  public:
    static GeneratorPair from_hamiltonian(Eigen::MatrixXd eps,
                                          GateLabel label = {});

    [[nodiscard]] const Eigen::MatrixXd &d() const { return d_; }
    [[nodiscard]] const Eigen::MatrixXd &eps() const { return eps_; }
    [[nodiscard]] const GateLabel &label() const { return label_; }
    [[nodiscard]] int modes() const { return static_cast<int>(d_.rows() / 2); }

  private:
    GeneratorPair(Eigen::MatrixXd d, Eigen::MatrixXd eps, GateLabel label);
    Eigen::MatrixXd d_;
    Eigen::MatrixXd eps_;
    GateLabel label_;
};

/**
 * Phase shifter on mode_a: eps = I/2 on that mode.
 * Two-mode phase on (a, b): eps = +I/2 on a, -I/2 on b.
 * Beamsplitter on (a, b): the 50:50 conjugate of the two-mode phase,
 * generator a_a* a_b + a_b* a_a.
 */
[[nodiscard]] GeneratorPair make_generator(const GateLabel &label, int modes);

/// All-mode phase shifter, eps = I/2. Every column of D has unit norm.
[[nodiscard]] GeneratorPair uniform_phase_generator(int modes);

/// exp(theta D).
[[nodiscard]] OrthogonalMatrix gate_action(const GeneratorPair &gate,
                                           double theta);

struct Layer {
    GeneratorPair gate;
    OrthogonalMatrix fixed;
};

/**
 * L layers, each contributing exp(theta_l D_l) W_l to the row-convention
 * product. The split index k (1-based) separates O_- (layers 1..k-1) from
 * O_+ (layers k..L), so the layer-k gate is the leading factor of O_+.
 */
class LayeredCircuit {
  public:
    LayeredCircuit(int modes, std::vector<Layer> layers, Eigen::VectorXd theta,
                   int split = 1);

    [[nodiscard]] int modes() const { return modes_; }
    [[nodiscard]] int depth() const { return static_cast<int>(layers_.size()); }
    [[nodiscard]] int split() const { return split_; }
    [[nodiscard]] const Eigen::VectorXd &theta() const { return theta_; }
    [[nodiscard]] const std::vector<Layer> &layers() const { return layers_; }

    [[nodiscard]] LayeredCircuit with_theta(Eigen::VectorXd theta) const;
    [[nodiscard]] LayeredCircuit with_split(int split) const;

    /// Heisenberg action of layer l (0-based): exp(theta_l D_l) W_l.
    [[nodiscard]] OrthogonalMatrix layer_action(int l) const;

    /// Full action O_- O_+.
    [[nodiscard]] OrthogonalMatrix action() const;

  private:
    int modes_;
    std::vector<Layer> layers_;
    Eigen::VectorXd theta_;
    int split_;
};

struct SplitAction {
    OrthogonalMatrix minus;
    OrthogonalMatrix plus;
};

[[nodiscard]] SplitAction circuit_action(const LayeredCircuit &circuit);

/// circuit_action for every split k = 1..L, sharing prefix/suffix products.
[[nodiscard]] std::vector<SplitAction>
all_split_actions(const LayeredCircuit &circuit);

/// {m, L, k, layers:[{kind, modes, W, eps?}], theta}; W row-major.
[[nodiscard]] std::string circuit_to_json(const LayeredCircuit &circuit);
[[nodiscard]] LayeredCircuit circuit_from_json(std::string_view text);

} // namespace cvplateau
