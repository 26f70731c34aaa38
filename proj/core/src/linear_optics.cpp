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
#include "cvplateau/linear_optics.hpp"

#include "cvplateau/errors.hpp"

#include <json.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <string>
#include <utility>

namespace cvplateau {

namespace {

constexpr double kGeneratorTolerance = 1e-12;

void require_square(const Eigen::MatrixXd &m, const char *what) {
    if (m.rows() != m.cols() || m.rows() == 0 || m.rows() % 2 != 0) {
        throw DimensionError(std::string(what) + " must be 2m x 2m, got " +
                             std::to_string(m.rows()) + "x" +
                             std::to_string(m.cols()));
    }
}

void require_mode(int j, int modes) {
    if (j < 0 || j >= modes) {
        throw DomainError("mode index " + std::to_string(j) +
                          " out of range for " + std::to_string(modes) +
                          " modes");
    }
}

void set_block(Eigen::MatrixXd &m, int row_mode, int col_mode, double diag) {
    m.block<2, 2>(2 * row_mode, 2 * col_mode) =
        diag * Eigen::Matrix2d::Identity();
}

} // namespace

Eigen::MatrixXd symplectic_form(int modes) {
    if (modes < 1) {
        throw DomainError("mode count must be positive");
    }
    Eigen::MatrixXd delta = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
    for (int j = 0; j < modes; ++j) {
        delta(2 * j, 2 * j + 1) = 1.0;
        delta(2 * j + 1, 2 * j) = -1.0;
    }
    return delta;
}

// --- OrthogonalMatrix ---------------------------------------------------------

OrthogonalMatrix::OrthogonalMatrix(Eigen::MatrixXd entries, Trusted)
    : entries_(std::move(entries)) {}

OrthogonalMatrix::OrthogonalMatrix(Eigen::MatrixXd entries)
    : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols() || entries_.rows() == 0) {
        throw DimensionError("orthogonal matrix must be square and non-empty");
    }
    if (orthogonality_defect() > kTolerance) {
        throw DomainError("matrix is not orthogonal: ||T^T T - I||_F = " +
                          std::to_string(orthogonality_defect()));
    }
}

OrthogonalMatrix OrthogonalMatrix::unchecked(Eigen::MatrixXd entries) {
    return {std::move(entries), Trusted{}};
}

OrthogonalMatrix OrthogonalMatrix::identity(int dim) {
    return {Eigen::MatrixXd::Identity(dim, dim), Trusted{}};
}

OrthogonalMatrix OrthogonalMatrix::transpose() const {
    return {entries_.transpose(), Trusted{}};
}

double OrthogonalMatrix::orthogonality_defect() const {
    const auto n = entries_.rows();
    return (entries_.transpose() * entries_ - Eigen::MatrixXd::Identity(n, n))
        .norm();
}

OrthogonalMatrix operator*(const OrthogonalMatrix &a, const OrthogonalMatrix &b) {
    if (a.dim() != b.dim()) {
        throw DimensionError("product of orthogonal matrices of different size");
    }
    return {a.entries_ * b.entries_, OrthogonalMatrix::Trusted{}};
}

// --- generators ---------------------------------------------------------------

std::string_view gate_kind_name(GateKind kind) {
    switch (kind) {
    case GateKind::PhaseShifter:
        return "phase-shifter";
    case GateKind::TwoModePhase:
        return "two-mode-phase";
    case GateKind::Beamsplitter:
        return "beamsplitter";
    case GateKind::Custom:
        return "custom";
    }
    return "custom";
}

GateKind parse_gate_kind(std::string_view name) {
    for (auto k : {GateKind::PhaseShifter, GateKind::TwoModePhase,
                   GateKind::Beamsplitter, GateKind::Custom}) {
        if (gate_kind_name(k) == name) {
            return k;
        }
    }
    throw DomainError("unknown gate kind '" + std::string(name) + "'");
}

std::string GateLabel::to_string() const {
    std::string s(gate_kind_name(kind));
    if (kind == GateKind::Custom) {
        return s;
    }
    s += "(" + std::to_string(mode_a);
    if (mode_b >= 0) {
        s += "," + std::to_string(mode_b);
    }
    return s + ")";
}

GeneratorPair::GeneratorPair(Eigen::MatrixXd d, Eigen::MatrixXd eps,
                             GateLabel label)
    : d_(std::move(d)), eps_(std::move(eps)), label_(label) {}

GeneratorPair GeneratorPair::from_hamiltonian(Eigen::MatrixXd eps,
                                              GateLabel label) {
    require_square(eps, "eps");
    const double scale = std::max(1.0, eps.norm());
    if ((eps - eps.transpose()).norm() > kGeneratorTolerance * scale) {
        throw DomainError("eps must be symmetric");
    }
    const Eigen::MatrixXd delta = symplectic_form(static_cast<int>(eps.rows() / 2));
    if ((eps * delta - delta * eps).norm() > kGeneratorTolerance * scale) {
        throw DomainError("eps must commute with the symplectic form "
                          "(energy-conserving generator)");
    }
    Eigen::MatrixXd d = -2.0 * delta * eps;
    // Exact skew-symmetry; rounding in the product can leave ~1e-16 residue.
    d = 0.5 * (d - d.transpose()).eval();
    return {std::move(d), std::move(eps), label};
}

GeneratorPair make_generator(const GateLabel &label, int modes) {
    if (modes < 1) {
        throw DomainError("mode count must be positive");
    }
    Eigen::MatrixXd eps = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
    switch (label.kind) {
    case GateKind::PhaseShifter:
        require_mode(label.mode_a, modes);
        set_block(eps, label.mode_a, label.mode_a, 0.5);
        break;
    case GateKind::TwoModePhase:
    case GateKind::Beamsplitter:
        require_mode(label.mode_a, modes);
        require_mode(label.mode_b, modes);
        if (label.mode_a == label.mode_b) {
            throw DomainError("two-mode gate needs distinct modes");
        }
        if (label.kind == GateKind::TwoModePhase) {
            set_block(eps, label.mode_a, label.mode_a, 0.5);
            set_block(eps, label.mode_b, label.mode_b, -0.5);
        } else {
            set_block(eps, label.mode_a, label.mode_b, 0.5);
            set_block(eps, label.mode_b, label.mode_a, 0.5);
        }
        break;
    case GateKind::Custom:
        throw DomainError("custom gates are built with from_hamiltonian");
    }
    return GeneratorPair::from_hamiltonian(std::move(eps), label);
}

GeneratorPair uniform_phase_generator(int modes) {
    if (modes < 1) {
        throw DomainError("mode count must be positive");
    }
    return GeneratorPair::from_hamiltonian(
        0.5 * Eigen::MatrixXd::Identity(2 * modes, 2 * modes));
}

OrthogonalMatrix gate_action(const GeneratorPair &gate, double theta) {
    if (theta == 0.0) {
        return OrthogonalMatrix::identity(2 * gate.modes());
    }
    Eigen::MatrixXd t = (theta * gate.d()).exp();
    return OrthogonalMatrix::unchecked(std::move(t));
}

// --- LayeredCircuit -----------------------------------------------------------

LayeredCircuit::LayeredCircuit(int modes, std::vector<Layer> layers,
                               Eigen::VectorXd theta, int split)
    : modes_(modes), layers_(std::move(layers)), theta_(std::move(theta)),
      split_(split) {
    if (modes_ < 1) {
        throw DomainError("mode count must be positive");
    }
    if (layers_.empty()) {
        throw DomainError("circuit needs at least one layer");
    }
    if (theta_.size() != static_cast<Eigen::Index>(layers_.size())) {
        throw DimensionError("theta has " + std::to_string(theta_.size()) +
                             " entries for " + std::to_string(layers_.size()) +
                             " layers");
    }
    if (split_ < 1 || split_ > depth()) {
        throw DomainError("split index k must satisfy 1 <= k <= L");
    }
    for (const auto &layer : layers_) {
        if (layer.gate.modes() != modes_ || layer.fixed.dim() != 2 * modes_) {
            throw DimensionError("layer does not act on " +
                                 std::to_string(modes_) + " modes");
        }
    }
}

LayeredCircuit LayeredCircuit::with_theta(Eigen::VectorXd theta) const {
    return {modes_, layers_, std::move(theta), split_};
}

LayeredCircuit LayeredCircuit::with_split(int split) const {
    return {modes_, layers_, theta_, split};
}

OrthogonalMatrix LayeredCircuit::layer_action(int l) const {
    const auto &layer = layers_.at(static_cast<std::size_t>(l));
    return gate_action(layer.gate, theta_[l]) * layer.fixed;
}

OrthogonalMatrix LayeredCircuit::action() const {
    auto t = OrthogonalMatrix::identity(2 * modes_);
    for (int l = 0; l < depth(); ++l) {
        t = t * layer_action(l);
    }
    return t;
}

SplitAction circuit_action(const LayeredCircuit &circuit) {
    const int dim = 2 * circuit.modes();
    auto minus = OrthogonalMatrix::identity(dim);
    auto plus = OrthogonalMatrix::identity(dim);
    for (int l = 0; l < circuit.depth(); ++l) {
        if (l < circuit.split() - 1) {
            minus = minus * circuit.layer_action(l);
        } else {
            plus = plus * circuit.layer_action(l);
        }
    }
    return {std::move(minus), std::move(plus)};
}

std::vector<SplitAction> all_split_actions(const LayeredCircuit &circuit) {
    const int depth = circuit.depth();
    const int dim = 2 * circuit.modes();
    std::vector<OrthogonalMatrix> layer;
    layer.reserve(static_cast<std::size_t>(depth));
    for (int l = 0; l < depth; ++l) {
        layer.push_back(circuit.layer_action(l));
    }
    // prefix[l] = T_0 ... T_{l-1}; suffix[l] = T_l ... T_{L-1}
    std::vector<OrthogonalMatrix> prefix(static_cast<std::size_t>(depth) + 1,
                                         OrthogonalMatrix::identity(dim));
    std::vector<OrthogonalMatrix> suffix(static_cast<std::size_t>(depth) + 1,
                                         OrthogonalMatrix::identity(dim));
    for (int l = 0; l < depth; ++l) {
        prefix[l + 1] = prefix[l] * layer[l];
    }
    for (int l = depth - 1; l >= 0; --l) {
        suffix[l] = layer[l] * suffix[l + 1];
    }
    std::vector<SplitAction> out;
    out.reserve(static_cast<std::size_t>(depth));
    for (int l = 0; l < depth; ++l) {
        out.push_back({prefix[l], suffix[l]});
    }
    return out;
}

// --- JSON ---------------------------------------------------------------------

namespace {

nlohmann::json matrix_to_json(const Eigen::MatrixXd &m) {
    auto arr = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            arr.push_back(m(r, c));
        }
    }
    return arr;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json &j, int dim,
                                 const char *field) {
    if (!j.is_array() || j.size() != static_cast<std::size_t>(dim) * dim) {
        throw DimensionError(std::string("field '") + field + "' must hold " +
                             std::to_string(dim * dim) + " numbers");
    }
    Eigen::MatrixXd m(dim, dim);
    for (int r = 0; r < dim; ++r) {
        for (int c = 0; c < dim; ++c) {
            m(r, c) = j[static_cast<std::size_t>(r * dim + c)].get<double>();
        }
    }
    return m;
}

} // namespace

std::string circuit_to_json(const LayeredCircuit &circuit) {
    nlohmann::json doc;
    doc["m"] = circuit.modes();
    doc["L"] = circuit.depth();
    doc["k"] = circuit.split();
    auto layers = nlohmann::json::array();
    for (const auto &layer : circuit.layers()) {
        nlohmann::json jl;
        const auto &label = layer.gate.label();
        jl["kind"] = gate_kind_name(label.kind);
        auto modes = nlohmann::json::array();
        if (label.mode_a >= 0) {
            modes.push_back(label.mode_a);
        }
        if (label.mode_b >= 0) {
            modes.push_back(label.mode_b);
        }
        jl["modes"] = modes;
        jl["W"] = matrix_to_json(layer.fixed.matrix());
        if (label.kind == GateKind::Custom) {
            jl["eps"] = matrix_to_json(layer.gate.eps());
        }
        layers.push_back(std::move(jl));
    }
    doc["layers"] = std::move(layers);
    doc["theta"] = std::vector<double>(circuit.theta().data(),
                                       circuit.theta().data() +
                                           circuit.theta().size());
    return doc.dump(2);
}

LayeredCircuit circuit_from_json(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
        const int m = doc.at("m").get<int>();
        const int depth = doc.at("L").get<int>();
        const int split = doc.at("k").get<int>();
        const auto &jlayers = doc.at("layers");
        if (!jlayers.is_array() || static_cast<int>(jlayers.size()) != depth) {
            throw DimensionError("'layers' must hold L entries");
        }
        std::vector<Layer> layers;
        for (const auto &jl : jlayers) {
            GateLabel label;
            label.kind = parse_gate_kind(jl.at("kind").get<std::string>());
            const auto modes = jl.at("modes").get<std::vector<int>>();
            if (!modes.empty()) {
                label.mode_a = modes[0];
            }
            if (modes.size() > 1) {
                label.mode_b = modes[1];
            }
            auto gate = label.kind == GateKind::Custom
                            ? GeneratorPair::from_hamiltonian(
                                  matrix_from_json(jl.at("eps"), 2 * m, "eps"),
                                  label)
                            : make_generator(label, m);
            OrthogonalMatrix w(matrix_from_json(jl.at("W"), 2 * m, "W"));
            layers.push_back({std::move(gate), std::move(w)});
        }
        const auto theta = doc.at("theta").get<std::vector<double>>();
        Eigen::VectorXd th =
            Eigen::Map<const Eigen::VectorXd>(theta.data(),
                                              static_cast<Eigen::Index>(theta.size()));
        return {m, std::move(layers), std::move(th), split};
    } catch (const nlohmann::json::exception &e) {
        throw DomainError(std::string("invalid circuit JSON: ") + e.what());
    }
}

} // namespace cvplateau
