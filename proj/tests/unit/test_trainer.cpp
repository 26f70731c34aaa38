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
#include "cvplateau/errors.hpp"
#include "cvplateau/sampling.hpp"
#include "cvplateau/trainer.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

using namespace cvplateau;
using cvplateau::testing::central_difference;

namespace {

LayeredCircuit identity_circuit(int m, int depth) {
    std::vector<Layer> layers;
    for (const auto &g : alternating_gate_pattern(m, depth)) {
        layers.push_back({make_generator(g, m), OrthogonalMatrix::identity(2 * m)});
    }
    return {m, layers, Eigen::VectorXd::Zero(depth)};
}

} // namespace

TEST_CASE("alternating gate pattern") {
    const auto g = alternating_gate_pattern(3, 6);
    REQUIRE(g.size() == 6);
    CHECK(g[0] == GateLabel{GateKind::PhaseShifter, 0, -1});
    CHECK(g[1] == GateLabel{GateKind::Beamsplitter, 0, 1});
    CHECK(g[2] == GateLabel{GateKind::PhaseShifter, 1, -1});
    CHECK(g[3] == GateLabel{GateKind::Beamsplitter, 1, 2});
    CHECK(g[5] == GateLabel{GateKind::Beamsplitter, 0, 1});
    for (const auto &l : alternating_gate_pattern(1, 3)) {
        CHECK(l.kind == GateKind::PhaseShifter);
    }
    CHECK_THROWS_AS((void)alternating_gate_pattern(0, 2), DomainError);
}

TEST_CASE("already at the optimum: no iterations") {
    RandomSource rng(1);
    const auto u = uniform_sphere(2, 1.0, rng);
    const auto trace = train(identity_circuit(2, 4), CompilingObjective{u}, {});
    REQUIRE(trace.size() == 1);
    CHECK(trace[0].iteration == 0);
    CHECK(trace[0].cost == 0.0);
    CHECK(trace[0].grad_norm == 0.0);
}

TEST_CASE("objective gradient against finite differences in every layer") {
    RandomSource rng(2);
    for (int trial = 0; trial < 10; ++trial) {
        const int m = 1 + trial % 4;
        const auto c = random_layered_circuit(m, alternating_gate_pattern(m, 5), rng);
        const auto u = uniform_sphere(m, 1.2, rng);
        const QuadraticHamiltonian h(random_psd(m, rng));
        for (const Objective obj : {Objective{CompilingObjective{u}},
                                    Objective{QuadraticObjective{u, h}}}) {
            const auto g = objective_gradient(c, obj);
            for (int l = 0; l < c.depth(); ++l) {
                auto f = [&](double t) {
                    Eigen::VectorXd th = c.theta();
                    th[l] = t;
                    return objective_cost(c.with_theta(th), obj);
                };
                const double fd = central_difference(f, c.theta()[l]);
                CHECK(std::abs(g[l] - fd) <= 1e-6 * std::max(std::abs(fd), 1e-4));
            }
        }
    }
}

TEST_CASE("cost decreases monotonically for a small step") {
    for (int seed = 0; seed < 10; ++seed) {
        RandomSource rng(100 + seed);
        const int m = 1 + seed % 3;
        const auto c = random_layered_circuit(m, alternating_gate_pattern(m, 4), rng);
        const auto u = uniform_sphere(m, 1.0, rng);
        TrainConfig cfg;
        cfg.lr = 0.05;
        cfg.max_iters = 200;
        const auto trace = train(c, CompilingObjective{u}, cfg);
        for (std::size_t i = 1; i < trace.size(); ++i) {
            CHECK(trace[i].cost <= trace[i - 1].cost + 1e-15);
            CHECK(trace[i].iteration == static_cast<int>(i));
        }
    }
}

TEST_CASE("quadratic objective descends") {
    RandomSource rng(3);
    const int m = 2;
    const auto c = random_layered_circuit(m, alternating_gate_pattern(m, 6), rng);
    const auto u = uniform_sphere(m, 1.5, rng);
    const QuadraticHamiltonian h(random_psd(m, rng));
    TrainConfig cfg;
    cfg.lr = 0.05;
    cfg.max_iters = 300;
    const auto trace = train(c, QuadraticObjective{u, h}, cfg);
    CHECK(trace.back().cost < trace.front().cost);
    // never below the vacuum contribution
    CHECK(trace.back().cost >= h.eta().trace() / 2 - 1e-12);
}

TEST_CASE("compiling at m = 2, E = 0.5 converges from random starts") {
    int converged = 0;
    for (int seed = 0; seed < 10; ++seed) {
        RandomSource rng(seed);
        const auto c = random_layered_circuit(2, alternating_gate_pattern(2, 4), rng);
        const auto u = uniform_sphere(2, 1.0, rng);
        const auto trace = train(c, CompilingObjective{u}, {});
        converged += trace.back().cost < 1e-3 ? 1 : 0;
        CHECK(trace.size() <= 2001);
    }
    CHECK(converged >= 8);
}

TEST_CASE("trainer argument checks") {
    RandomSource rng(4);
    const auto c = random_layered_circuit(2, alternating_gate_pattern(2, 2), rng);
    const auto u = uniform_sphere(2, 1.0, rng);
    TrainConfig bad;
    bad.lr = 0.0;
    CHECK_THROWS_AS((void)train(c, CompilingObjective{u}, bad), DomainError);
    bad.lr = 0.1;
    bad.max_iters = -1;
    CHECK_THROWS_AS((void)train(c, CompilingObjective{u}, bad), DomainError);
    CHECK_THROWS_AS(
        (void)train(c, CompilingObjective{uniform_sphere(3, 1.0, rng)}, {}),
        DimensionError);

    Eigen::VectorXd nan_theta = c.theta();
    nan_theta[0] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS((void)train(c.with_theta(nan_theta), CompilingObjective{u}, {}),
                    NumericalError);
}

TEST_CASE("trace CSV") {
    std::vector<TrainRecord> trace = {{0, 0.5, 0.25, {}}, {1, 0.125, 1.0 / 3.0, {}}};
    std::ostringstream out;
    write_trace_csv(out, trace);
    CHECK(out.str() ==
          "iteration,cost,grad_norm\n0,0.5,0.25\n1,0.125,0.33333333333333331\n");
}
