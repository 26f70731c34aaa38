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
#include "cvplateau/linear_optics.hpp"
#include "cvplateau/sampling.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

using namespace cvplateau;

namespace {

bool is_symplectic(const Eigen::MatrixXd &t) {
    const auto j = symplectic_form(static_cast<int>(t.rows() / 2));
    return (t * j * t.transpose() - j).norm() < 1e-10;
}

std::vector<GateLabel> all_gates(int m) {
    std::vector<GateLabel> out;
    for (int a = 0; a < m; ++a) {
        out.push_back({GateKind::PhaseShifter, a, -1});
        for (int b = a + 1; b < m; ++b) {
            out.push_back({GateKind::TwoModePhase, a, b});
            out.push_back({GateKind::Beamsplitter, a, b});
        }
    }
    return out;
}

} // namespace

TEST_CASE("symplectic form") {
    Eigen::MatrixXd one(2, 2);
    one << 0, 1, -1, 0;
    CHECK(symplectic_form(1) == one);
    const auto d4 = symplectic_form(4);
    CHECK((d4 * d4.transpose()).isIdentity());
    const auto d3 = symplectic_form(3);
    CHECK(d3.transpose() == -d3);
    CHECK((d3 * d3).isApprox(-Eigen::MatrixXd::Identity(6, 6)));
}

TEST_CASE("orthogonal matrix checks") {
    CHECK_THROWS_AS(OrthogonalMatrix(Eigen::MatrixXd::Constant(2, 2, 1.0)),
                    DomainError);
    CHECK_THROWS_AS(OrthogonalMatrix(Eigen::MatrixXd::Identity(2, 3)),
                    DimensionError);
    const auto id = OrthogonalMatrix::identity(4);
    CHECK(id.orthogonality_defect() == 0.0);
    CHECK_THROWS_AS((void)(id * OrthogonalMatrix::identity(2)), DimensionError);
}

TEST_CASE("gate kind names round-trip") {
    for (auto k : {GateKind::PhaseShifter, GateKind::TwoModePhase,
                   GateKind::Beamsplitter, GateKind::Custom}) {
        CHECK(parse_gate_kind(gate_kind_name(k)) == k);
    }
    CHECK_THROWS_AS((void)parse_gate_kind("mirror"), DomainError);
}

TEST_CASE("generator invariants for every gate kind") {
    const int m = 4;
    const auto delta = symplectic_form(m);
    for (const auto &label : all_gates(m)) {
        CAPTURE(label.to_string());
        const auto g = make_generator(label, m);
        CHECK((g.d() + g.d().transpose()).norm() < 1e-14);
        CHECK((g.eps() - g.eps().transpose()).norm() < 1e-14);
        CHECK((g.eps() * delta - delta * g.eps()).norm() < 1e-14);
        CHECK((g.d() + 2.0 * delta * g.eps()).norm() < 1e-14);
        CHECK(g.label() == label);
    }
}

TEST_CASE("invalid gate labels") {
    CHECK_THROWS_AS((void)make_generator({GateKind::PhaseShifter, 3, -1}, 3),
                    DomainError);
    CHECK_THROWS_AS((void)make_generator({GateKind::Beamsplitter, 1, 1}, 3),
                    DomainError);
    CHECK_THROWS_AS((void)make_generator({GateKind::TwoModePhase, 0, 5}, 3),
                    DomainError);
    CHECK_THROWS_AS((void)make_generator({GateKind::Custom, 0, -1}, 3),
                    DomainError);
}

TEST_CASE("from_hamiltonian rejects bad matrices") {
    Eigen::MatrixXd asym(2, 2);
    asym << 1, 2, 0, 1;
    CHECK_THROWS_AS((void)GeneratorPair::from_hamiltonian(asym), DomainError);
    // squeezing-type eps does not commute with Delta
    Eigen::MatrixXd sq(2, 2);
    sq << 1, 0, 0, -1;
    CHECK_THROWS_AS((void)GeneratorPair::from_hamiltonian(sq), DomainError);
    CHECK_THROWS_AS((void)GeneratorPair::from_hamiltonian(Eigen::MatrixXd(3, 3)),
                    DimensionError);
}

TEST_CASE("phase shifter convention: alpha -> exp(-i theta) alpha") {
    const auto g = make_generator({GateKind::PhaseShifter, 0, -1}, 1);
    for (double theta : {0.3, -1.2, 2.9}) {
        Eigen::VectorXd v(2);
        v << 0.7, -0.4;
        const auto w = MeanVector(v).transformed(gate_action(g, theta).matrix());
        const std::complex<double> a(v[0], v[1]);
        const std::complex<double> b(w[0], w[1]);
        const auto expect = std::exp(std::complex<double>(0.0, -theta)) * a;
        CHECK(std::abs(b - expect) < 1e-13);
    }
    Eigen::MatrixXd quarter(2, 2);
    quarter << 0, -1, 1, 0;
    CHECK(gate_action(g, std::numbers::pi / 2).matrix().isApprox(quarter, 1e-15));
}

TEST_CASE("Heisenberg generator from the exact phase-shifter action") {
    // d/dtheta of the rotation at 0, computed from cos/sin directly
    const double h = 1e-5;
    auto rot = [](double t) {
        Eigen::MatrixXd r(2, 2);
        r << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
        return r;
    };
    const Eigen::MatrixXd fd = (rot(h) - rot(-h)) / (2 * h);
    const auto g = make_generator({GateKind::PhaseShifter, 0, -1}, 1);
    CHECK((fd - g.d()).norm() < 1e-9);
    CHECK((gate_action(g, 0.77).matrix() - rot(0.77)).norm() < 1e-14);
}

TEST_CASE("gate actions are orthogonal and symplectic") {
    RandomSource rng(3);
    const int m = 3;
    for (const auto &label : all_gates(m)) {
        const auto g = make_generator(label, m);
        CHECK(gate_action(g, 0.0).matrix().isIdentity(1e-15));
        for (int i = 0; i < 100; ++i) {
            const double theta = rng.uniform(-10.0, 10.0);
            const auto t = gate_action(g, theta).matrix();
            CHECK((t.transpose() * t).isIdentity(1e-12));
            CHECK(is_symplectic(t));
            const auto back = gate_action(g, -theta).matrix();
            CHECK((t * back).isIdentity(1e-12));
        }
    }
}

TEST_CASE("beamsplitter at pi/2 swaps modes up to phase") {
    const auto g = make_generator({GateKind::Beamsplitter, 0, 1}, 2);
    const auto t = gate_action(g, std::numbers::pi / 2).matrix();
    Eigen::VectorXd v(4);
    v << 1, 0, 0, 0;
    const auto w = MeanVector(v).transformed(t);
    CHECK(w.mode_intensity(0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(w.mode_intensity(1) == doctest::Approx(0.5));
}

TEST_CASE("commutator identity for Delta-commuting symmetric matrices") {
    RandomSource rng(5);
    const int m = 3;
    const auto delta = symplectic_form(m);
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::MatrixXd x(2 * m, 2 * m), y(2 * m, 2 * m);
        for (int i = 0; i < 2 * m; ++i) {
            for (int j = 0; j < 2 * m; ++j) {
                x(i, j) = rng.normal();
                y(i, j) = rng.normal();
            }
        }
        const auto mm = cvplateau::testing::commuting_symmetric(x + x.transpose());
        const auto nn = cvplateau::testing::commuting_symmetric(y + y.transpose());
        const Eigen::MatrixXd c = 2.0 * (mm * delta * nn - nn * delta * mm);
        CHECK(std::abs(c.trace()) < 1e-10);
        CHECK((c - c.transpose()).norm() < 1e-10);
    }
}

TEST_CASE("layered circuit composition order") {
    RandomSource rng(17);
    const int m = 2;
    const std::vector<GateLabel> gates = {{GateKind::PhaseShifter, 0, -1},
                                          {GateKind::Beamsplitter, 0, 1},
                                          {GateKind::TwoModePhase, 0, 1}};
    const auto c = random_layered_circuit(m, gates, rng, 2);
    Eigen::MatrixXd brute = Eigen::MatrixXd::Identity(4, 4);
    for (int l = 0; l < c.depth(); ++l) {
        const auto &layer = c.layers()[l];
        const Eigen::MatrixXd step =
            gate_action(layer.gate, c.theta()[l]).matrix() * layer.fixed.matrix();
        brute = brute * step;
        CHECK((c.layer_action(l).matrix() - step).norm() < 1e-12);
    }
    CHECK((c.action().matrix() - brute).norm() < 1e-12);

    const auto split = circuit_action(c);
    CHECK((split.minus.matrix() - c.layer_action(0).matrix()).norm() < 1e-12);
    CHECK(((split.minus * split.plus).matrix() - brute).norm() < 1e-12);
}

TEST_CASE("single layer: O_- is the identity and O_+ the gate") {
    const auto g = make_generator({GateKind::PhaseShifter, 0, -1}, 1);
    Eigen::VectorXd theta(1);
    theta << 0.4;
    LayeredCircuit c(1, {{g, OrthogonalMatrix::identity(2)}}, theta, 1);
    const auto s = circuit_action(c);
    CHECK(s.minus.matrix().isIdentity());
    CHECK((s.plus.matrix() - gate_action(g, 0.4).matrix()).norm() < 1e-15);
}

TEST_CASE("zero angles and identity layers give the identity") {
    const int m = 3;
    std::vector<Layer> layers;
    for (const auto &label : all_gates(m)) {
        layers.push_back({make_generator(label, m), OrthogonalMatrix::identity(6)});
    }
    const auto n = static_cast<Eigen::Index>(layers.size());
    LayeredCircuit c(m, layers, Eigen::VectorXd::Zero(n), 4);
    const auto s = circuit_action(c);
    CHECK(s.minus.matrix().isIdentity());
    CHECK(s.plus.matrix().isIdentity());
}

TEST_CASE("perturbing theta_k multiplies O_+ by exp(delta D_k) on the left") {
    RandomSource rng(23);
    const int m = 3;
    const std::vector<GateLabel> gates = {{GateKind::Beamsplitter, 0, 1},
                                          {GateKind::PhaseShifter, 2, -1},
                                          {GateKind::Beamsplitter, 1, 2},
                                          {GateKind::TwoModePhase, 0, 2}};
    const auto c = random_layered_circuit(m, gates, rng);
    for (int k = 1; k <= c.depth(); ++k) {
        const auto ck = c.with_split(k);
        const auto base = circuit_action(ck);
        Eigen::VectorXd th = ck.theta();
        th[k - 1] += 0.31;
        const auto bumped = ck.with_theta(th).action().matrix();
        const Eigen::MatrixXd expect =
            base.minus.matrix() * gate_action(ck.layers()[k - 1].gate, 0.31).matrix() *
            base.plus.matrix();
        CHECK((bumped - expect).norm() < 1e-12);
    }
}

TEST_CASE("all_split_actions agrees with circuit_action at each split") {
    RandomSource rng(29);
    const int m = 2;
    std::vector<GateLabel> gates(6, {GateKind::Beamsplitter, 0, 1});
    gates[1] = {GateKind::PhaseShifter, 1, -1};
    const auto c = random_layered_circuit(m, gates, rng);
    const auto all = all_split_actions(c);
    REQUIRE(all.size() == 6);
    for (int k = 1; k <= 6; ++k) {
        const auto s = circuit_action(c.with_split(k));
        CHECK((all[k - 1].minus.matrix() - s.minus.matrix()).norm() < 1e-12);
        CHECK((all[k - 1].plus.matrix() - s.plus.matrix()).norm() < 1e-12);
    }
}

TEST_CASE("layered circuit argument checks") {
    const auto g = make_generator({GateKind::PhaseShifter, 0, -1}, 1);
    const std::vector<Layer> one = {{g, OrthogonalMatrix::identity(2)}};
    CHECK_THROWS_AS(LayeredCircuit(1, one, Eigen::VectorXd::Zero(1), 0), DomainError);
    CHECK_THROWS_AS(LayeredCircuit(1, one, Eigen::VectorXd::Zero(1), 2), DomainError);
    CHECK_THROWS_AS(LayeredCircuit(1, one, Eigen::VectorXd::Zero(2), 1),
                    DimensionError);
    CHECK_THROWS_AS(LayeredCircuit(2, one, Eigen::VectorXd::Zero(1), 1),
                    DimensionError);
    CHECK_THROWS_AS(LayeredCircuit(1, {}, Eigen::VectorXd::Zero(0), 1), DomainError);
}

TEST_CASE("circuit JSON round-trip") {
    RandomSource rng(31);
    const int m = 2;
    Eigen::MatrixXd eps = Eigen::MatrixXd::Zero(4, 4);
    eps.block(0, 0, 2, 2) = 0.3 * Eigen::MatrixXd::Identity(2, 2);
    eps.block(2, 2, 2, 2) = -0.1 * Eigen::MatrixXd::Identity(2, 2);
    const auto custom = GeneratorPair::from_hamiltonian(eps);
    std::vector<Layer> layers = {
        {make_generator({GateKind::Beamsplitter, 0, 1}, m), haar_orthogonal(m, rng)},
        {custom, haar_orthogonal(m, rng)},
        {make_generator({GateKind::PhaseShifter, 1, -1}, m),
         OrthogonalMatrix::identity(4)}};
    Eigen::VectorXd theta(3);
    theta << 0.1, -2.0, 1.0 / 3.0;
    const LayeredCircuit c(m, layers, theta, 3);

    const auto text = circuit_to_json(c);
    const auto back = circuit_from_json(text);
    CHECK(back.modes() == 2);
    CHECK(back.depth() == 3);
    CHECK(back.split() == 3);
    CHECK(back.theta() == c.theta());
    for (int l = 0; l < 3; ++l) {
        CHECK(back.layers()[l].gate.d() == c.layers()[l].gate.d());
        CHECK(back.layers()[l].fixed.matrix() == c.layers()[l].fixed.matrix());
        CHECK(back.layers()[l].gate.label() == c.layers()[l].gate.label());
    }
    CHECK(circuit_to_json(back) == text);
}

TEST_CASE("malformed circuit JSON") {
    CHECK_THROWS_AS((void)circuit_from_json("{"), DomainError);
    CHECK_THROWS_AS((void)circuit_from_json(R"({"m": 1})"), DomainError);
    CHECK_THROWS_AS(
        (void)circuit_from_json(
            R"({"m":1,"L":1,"k":1,"theta":[0],"layers":[{"kind":"phase-shifter","modes":[0],"W":[2,0,0,1]}]})"),
        DomainError);
}
