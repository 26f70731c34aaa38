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
 * @file trainer.hpp
 * Plain gradient descent over every layer parameter of a LayeredCircuit.
 */
#pragma once

#include "cvplateau/cost_functions.hpp"
#include "cvplateau/linear_optics.hpp"
#include "cvplateau/phase_space.hpp"

#include <Eigen/Dense>

#include <iosfwd>
#include <span>
#include <variant>
#include <vector>

namespace cvplateau {

/// Compile the identity on |u>: C = 1 - |<u|U|u>|^2.
struct CompilingObjective {
    MeanVector input;
};

/// Mean-field energy of R eta R^T.
struct QuadraticObjective {
    MeanVector input;
    QuadraticHamiltonian hamiltonian;
};

using Objective = std::variant<CompilingObjective, QuadraticObjective>;

struct TrainConfig {
    double lr = 0.1;
    int max_iters = 2000;
    /// Stop once the gradient norm falls to this value.
    double tol = 1e-8;
    /// Number of step-size halvings allowed when a step raises the cost.
    int max_backoffs = 3;
};

struct TrainRecord {
    int iteration = 0;
    double cost = 0.0;
    double grad_norm = 0.0;
    Eigen::VectorXd theta;
};

/// Layer l is a phase shifter on mode (l/2) mod m for even l and a beamsplitter
/// on ((l/2) mod (m-1), +1) for odd l. Single-mode circuits use phase shifters
/// only.
[[nodiscard]] std::vector<GateLabel> alternating_gate_pattern(int modes, int depth);

[[nodiscard]] double objective_cost(const LayeredCircuit &circuit,
                                    const Objective &objective);

/// Analytic gradient in every theta_l, each from the split at layer l.
[[nodiscard]] Eigen::VectorXd objective_gradient(const LayeredCircuit &circuit,
                                                 const Objective &objective);

/// Records iteration 0 (initial point) and every accepted step. Throws
/// NumericalError on a non-finite cost or gradient.
[[nodiscard]] std::vector<TrainRecord> train(const LayeredCircuit &circuit,
                                             const Objective &objective,
                                             const TrainConfig &config);

/// iteration,cost,grad_norm
void write_trace_csv(std::ostream &out, std::span<const TrainRecord> trace);

} // namespace cvplateau
