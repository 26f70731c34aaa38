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
#include "cvplateau/trainer.hpp"

#include "cvplateau/errors.hpp"

#include <cmath>
#include <ostream>
#include <string>

namespace cvplateau {

namespace {

template <class... Ts> struct Overloaded : Ts... {
    using Ts::operator()...;
};

const MeanVector &objective_input(const Objective &objective) {
    return std::visit([](const auto &o) -> const MeanVector & { return o.input; },
                      objective);
}

void check_finite(double cost, const Eigen::VectorXd &grad, int iteration) {
    if (!std::isfinite(cost) || !grad.allFinite()) {
        throw NumericalError("non-finite cost or gradient at iteration " +
                             std::to_string(iteration));
    }
}

} // namespace

std::vector<GateLabel> alternating_gate_pattern(int modes, int depth) {
    if (modes < 1 || depth < 1) {
        throw DomainError("gate pattern needs m >= 1 and L >= 1");
    }
    std::vector<GateLabel> gates;
    gates.reserve(static_cast<std::size_t>(depth));
    for (int l = 0; l < depth; ++l) {
        const int slot = l / 2;
        if (l % 2 == 0 || modes == 1) {
            gates.push_back({GateKind::PhaseShifter, slot % modes, -1});
        } else {
            const int a = slot % (modes - 1);
            gates.push_back({GateKind::Beamsplitter, a, a + 1});
        }
    }
    return gates;
}

double objective_cost(const LayeredCircuit &circuit, const Objective &objective) {
    const auto [minus, plus] = circuit_action(circuit);
    return std::visit(
        Overloaded{
            [&](const CompilingObjective &c) {
                return compiling_cost(c.input, minus, plus);
            },
            [&](const QuadraticObjective &q) {
                return quadratic_cost(q.input, q.hamiltonian, minus, plus);
            },
        },
        objective);
}

Eigen::VectorXd objective_gradient(const LayeredCircuit &circuit,
                                   const Objective &objective) {
    const auto splits = all_split_actions(circuit);
    Eigen::VectorXd grad(circuit.depth());
    for (int l = 0; l < circuit.depth(); ++l) {
        const auto &gate = circuit.layers()[static_cast<std::size_t>(l)].gate;
        const auto &[minus, plus] = splits[static_cast<std::size_t>(l)];
        grad[l] = std::visit(
            Overloaded{
                [&](const CompilingObjective &c) {
                    return compiling_grad(c.input, gate.d(), minus, plus);
                },
                [&](const QuadraticObjective &q) {
                    return quadratic_grad(q.input, q.hamiltonian, gate, minus, plus);
                },
            },
            objective);
    }
    return grad;
}

std::vector<TrainRecord> train(const LayeredCircuit &circuit,
                               const Objective &objective,
                               const TrainConfig &config) {
    if (!(config.lr > 0.0)) {
        throw DomainError("learning rate must be positive");
    }
    if (config.max_iters < 0 || config.max_backoffs < 0) {
        throw DomainError("max_iters and max_backoffs must be nonnegative");
    }
    if (objective_input(objective).modes() != circuit.modes()) {
        throw DimensionError("objective and circuit mode counts differ");
    }

    LayeredCircuit current = circuit;
    double cost = objective_cost(current, objective);
    Eigen::VectorXd grad = objective_gradient(current, objective);
    check_finite(cost, grad, 0);

    std::vector<TrainRecord> trace;
    trace.push_back({0, cost, grad.norm(), current.theta()});

    double lr = config.lr;
    int backoffs = 0;
    int iteration = 0;
    while (iteration < config.max_iters && grad.norm() > config.tol) {
        LayeredCircuit candidate = current.with_theta(current.theta() - lr * grad);
        const double next_cost = objective_cost(candidate, objective);
        if (!std::isfinite(next_cost)) {
            throw NumericalError("non-finite cost at iteration " +
                                 std::to_string(iteration + 1));
        }
        if (next_cost > cost && backoffs < config.max_backoffs) {
            lr *= 0.5;
            ++backoffs;
            continue;
        }
        ++iteration;
        current = std::move(candidate);
        cost = next_cost;
        grad = objective_gradient(current, objective);
        check_finite(cost, grad, iteration);
        trace.push_back({iteration, cost, grad.norm(), current.theta()});
    }
    return trace;
}

void write_trace_csv(std::ostream &out, std::span<const TrainRecord> trace) {
    const auto old_precision = out.precision(17);
    out << "iteration,cost,grad_norm\n";
    for (const auto &r : trace) {
        out << r.iteration << ',' << r.cost << ',' << r.grad_norm << '\n';
    }
    out.precision(old_precision);
}

} // namespace cvplateau
