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
 * @file sampling.hpp
 * Reproducible random sources: Haar measure on O(2m), the uniform measure on
 * spheres, and uniform angles.
 */
#pragma once

#include "cvplateau/linear_optics.hpp"
#include "cvplateau/phase_space.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <random>
#include <vector>

namespace cvplateau {

/**
 * xoshiro256** (Blackman & Vigna) seeded through splitmix64.
 *
 * The state for (seed, stream) is four consecutive splitmix64 outputs started
 * at mix(seed) ^ mix(stream + 0x9e3779b97f4a7c15). Substreams are used as one
 * per Monte Carlo chunk.
 */
class RandomSource {
  public:
    using result_type = std::uint64_t;

    explicit RandomSource(std::uint64_t seed, std::uint64_t stream = 0);

    [[nodiscard]] std::uint64_t seed() const { return seed_; }
    [[nodiscard]] std::uint64_t stream() const { return stream_; }

    /// Independent source for (seed, index).
    [[nodiscard]] RandomSource substream(std::uint64_t index) const {
        return RandomSource(seed_, index);
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }
    result_type operator()();

    /// Standard normal variate.
    double normal() { return normal_(*this); }
    /// Uniform on [lo, hi).
    double uniform(double lo, double hi);

  private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::array<std::uint64_t, 4> state_{};
    std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Haar-distributed T in O(2m): QR of a Gaussian matrix with R's diagonal
/// made positive.
[[nodiscard]] OrthogonalMatrix haar_orthogonal(int modes, RandomSource &rng);

/// Uniform point on the sphere of the given radius in R^{2m}.
[[nodiscard]] MeanVector uniform_sphere(int modes, double radius,
                                        RandomSource &rng);

/// m i.i.d. angles uniform on [-pi, pi].
[[nodiscard]] Eigen::VectorXd uniform_angles(int modes, RandomSource &rng);

/// G G^T / (2m) with G a 2m x 2m standard Gaussian matrix.
[[nodiscard]] Eigen::MatrixXd random_psd(int modes, RandomSource &rng);

/// Circuit with the given gate sequence, Haar-random fixed layers and
/// uniform angles, all drawn from rng in layer order.
[[nodiscard]] LayeredCircuit
random_layered_circuit(int modes, const std::vector<GateLabel> &gates,
                       RandomSource &rng, int split = 1);

} // namespace cvplateau
