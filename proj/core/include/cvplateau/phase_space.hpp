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
 * @file phase_space.hpp
 * Coherent states as phase-space mean vectors.
 *
 * Quadratures follow q = (a + a*)/sqrt(2), p = (-ia + ia*)/sqrt(2), stored
 * interleaved as (q_1, p_1, ..., q_m, p_m). With this normalization a
 * coherent state has covariance I/2 and total intensity ||u||^2 / 2.
 */
#pragma once

#include <Eigen/Dense>

namespace cvplateau {

/// Mean vector of an m-mode coherent state, length 2m.
class MeanVector {
  public:
    explicit MeanVector(Eigen::VectorXd values);

    static MeanVector vacuum(int modes);

    /// Per-mode amplitudes (q_j, p_j) placed into an m-mode vector.
    static MeanVector from_quadratures(const Eigen::VectorXd &q,
                                       const Eigen::VectorXd &p);

    [[nodiscard]] int modes() const {
        return static_cast<int>(values_.size() / 2);
    }
    [[nodiscard]] int dim() const { return static_cast<int>(values_.size()); }
    [[nodiscard]] const Eigen::VectorXd &values() const { return values_; }
    [[nodiscard]] double operator[](int i) const { return values_[i]; }

    /// Row action u -> uT of a linear-optical Heisenberg matrix T.
    [[nodiscard]] MeanVector transformed(const Eigen::MatrixXd &t) const;

    /// Intensity of mode j, (q_j^2 + p_j^2) / 2.
    [[nodiscard]] double mode_intensity(int j) const;

  private:
    Eigen::VectorXd values_;
};

/// Total mean photon number E >= 0.
class Intensity {
  public:
    explicit Intensity(double value);
    [[nodiscard]] double value() const { return value_; }
    auto operator<=>(const Intensity &) const = default;

  private:
    double value_;
};

/// E = ||u||^2 / 2.
[[nodiscard]] Intensity intensity(const MeanVector &u);

/// |<u|v>|^2 = exp(-||u - v||^2 / 2).
[[nodiscard]] double overlap_fidelity(const MeanVector &u, const MeanVector &v);

} // namespace cvplateau
