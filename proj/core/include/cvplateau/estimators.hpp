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
 * @file estimators.hpp
 * Monte Carlo estimates of gradient moments over Haar-random circuit halves
 * (or uniform angles for the toy model).
 *
 * Samples are partitioned into fixed-size chunks; chunk c draws from
 * RandomSource(seed, c). Chunks may run on any number of threads and are
 * merged in chunk order, so results depend only on (instance, n, seed,
 * chunk size).
 */
#pragma once

#include "cvplateau/cost_functions.hpp"
#include "cvplateau/linear_optics.hpp"
#include "cvplateau/phase_space.hpp"
#include "cvplateau/sampling.hpp"

#include <cstdint>
#include <string_view>
#include <variant>

namespace cvplateau {

/// Local phase shifters on (u_1, u_2)^{(+)m}, s = u_1^2 + u_2^2; the gradient
/// is taken in theta_1.
struct ToyInstance {
    int modes = 1;
    double s = 0.0;
};

/// Compiling cost with Haar (O_-, O_+).
struct CompilingInstance {
    MeanVector input;
    GeneratorPair gate;
};

/// Heterodyne/coherent-target cost with Haar (O_-, O_+).
struct HeterodyneInstance {
    MeanVector input;
    MeanVector outcome;
    GeneratorPair gate;
};

/// Quadratic mean-field cost with Haar O_- and a fixed O_+.
struct QuadraticInstance {
    MeanVector input;
    QuadraticHamiltonian hamiltonian;
    GeneratorPair gate;
    OrthogonalMatrix plus;
};

using Instance = std::variant<ToyInstance, CompilingInstance,
                              HeterodyneInstance, QuadraticInstance>;

enum class CostFamily { Toy, Compiling, Heterodyne, Quadratic };

[[nodiscard]] CostFamily family_of(const Instance &instance);
[[nodiscard]] std::string_view family_name(CostFamily family);
/// Throws DomainError for an unknown family name.
[[nodiscard]] CostFamily parse_cost_family(std::string_view name);

struct EstimatorOptions {
    std::uint64_t n_samples = 100'000;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    std::uint64_t chunk_size = 4096;
};

inline constexpr std::uint64_t kMinSamples = 1000;

struct MomentEstimate {
    std::uint64_t n_samples = 0;
    double mean = 0.0;
    double second_moment = 0.0;
    double std_error_mean = 0.0;
    double std_error_second = 0.0;
    std::uint64_t seed = 0;

    bool operator==(const MomentEstimate &) const = default;
};

struct TailEstimate {
    std::uint64_t n_samples = 0;
    double frequency = 0.0;
    double std_error = 0.0;
    std::uint64_t seed = 0;
};

/// One gradient sample: draws the random circuit halves (or angles) from rng.
[[nodiscard]] double sample_gradient(const Instance &instance,
                                     RandomSource &rng);

/// Gradient of the instance's cost at a given split action. Not defined for
/// the toy family (throws DomainError).
[[nodiscard]] double gradient_at(const Instance &instance,
                                 const OrthogonalMatrix &minus,
                                 const OrthogonalMatrix &plus);

/// Moments of the signed gradient dC.
[[nodiscard]] MomentEstimate estimate_grad_moments(const Instance &instance,
                                                   const EstimatorOptions &opts);

/// Moments of |dC|.
[[nodiscard]] MomentEstimate estimate_abs_grad(const Instance &instance,
                                               const EstimatorOptions &opts);

/// Fraction of samples with |dC| >= epsilon and its binomial standard error.
[[nodiscard]] TailEstimate tail_frequency(const Instance &instance,
                                          double epsilon,
                                          const EstimatorOptions &opts);

} // namespace cvplateau
