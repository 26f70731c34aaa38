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
#include "cvplateau/sampling.hpp"

#include "cvplateau/errors.hpp"

#include <cmath>
#include <numbers>
#include <utility>

namespace cvplateau {

namespace {

std::uint64_t splitmix64(std::uint64_t &state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t mix(std::uint64_t x) { return splitmix64(x); }

constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

} // namespace

RandomSource::RandomSource(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream) {
    std::uint64_t sm = mix(seed) ^ mix(stream + 0x9e3779b97f4a7c15ULL);
    for (auto &s : state_) {
        s = splitmix64(sm);
    }
}

RandomSource::result_type RandomSource::operator()() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double RandomSource::uniform(double lo, double hi) {
    // 53 high bits -> [0, 1)
    const double u = static_cast<double>((*this)() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

OrthogonalMatrix haar_orthogonal(int modes, RandomSource &rng) {
    if (modes < 1) {
        throw DomainError("mode count must be positive");
    }
    const int n = 2 * modes;
    Eigen::MatrixXd g(n, n);
    for (int c = 0; c < n; ++c) {
        for (int r = 0; r < n; ++r) {
            g(r, c) = rng.normal();
        }
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ();
    const auto &r = qr.matrixQR();
    for (int j = 0; j < n; ++j) {
        if (r(j, j) < 0.0) {
            q.col(j) = -q.col(j);
        }
    }
    return OrthogonalMatrix::unchecked(std::move(q));
}

MeanVector uniform_sphere(int modes, double radius, RandomSource &rng) {
    if (modes < 1) {
        throw DomainError("mode count must be positive");
    }
    if (!(radius >= 0.0)) {
        throw DomainError("sphere radius must be nonnegative");
    }
    Eigen::VectorXd v(2 * modes);
    for (auto &x : v) {
        x = rng.normal();
    }
    if (radius == 0.0) {
        return MeanVector(Eigen::VectorXd::Zero(2 * modes));
    }
    return MeanVector(v * (radius / v.norm()));
}

Eigen::VectorXd uniform_angles(int modes, RandomSource &rng) {
    if (modes < 1) {
        throw DomainError("mode count must be positive");
    }
    Eigen::VectorXd theta(modes);
    for (auto &t : theta) {
        t = rng.uniform(-std::numbers::pi, std::numbers::pi);
    }
    return theta;
}

Eigen::MatrixXd random_psd(int modes, RandomSource &rng) {
    const int n = 2 * modes;
    Eigen::MatrixXd g(n, n);
    for (int c = 0; c < n; ++c) {
        for (int r = 0; r < n; ++r) {
            g(r, c) = rng.normal();
        }
    }
    Eigen::MatrixXd eta = g * g.transpose() / static_cast<double>(n);
    return 0.5 * (eta + eta.transpose());
}

LayeredCircuit random_layered_circuit(int modes,
                                      const std::vector<GateLabel> &gates,
                                      RandomSource &rng, int split) {
    std::vector<Layer> layers;
    layers.reserve(gates.size());
    Eigen::VectorXd theta(static_cast<Eigen::Index>(gates.size()));
    for (std::size_t l = 0; l < gates.size(); ++l) {
        auto gate = make_generator(gates[l], modes);
        auto w = haar_orthogonal(modes, rng);
        layers.push_back({std::move(gate), std::move(w)});
        theta[static_cast<Eigen::Index>(l)] =
            rng.uniform(-std::numbers::pi, std::numbers::pi);
    }
    return {modes, std::move(layers), std::move(theta), split};
}

} // namespace cvplateau
