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
#include "cvplateau/phase_space.hpp"

#include "cvplateau/errors.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace cvplateau {

MeanVector::MeanVector(Eigen::VectorXd values) : values_(std::move(values)) {
    if (values_.size() == 0 || values_.size() % 2 != 0) {
        throw DimensionError("mean vector length must be 2m with m >= 1, got " +
                             std::to_string(values_.size()));
    }
}

MeanVector MeanVector::vacuum(int modes) {
    if (modes < 1) {
        throw DomainError("mode count must be positive");
    }
    return MeanVector(Eigen::VectorXd::Zero(2 * modes));
}

MeanVector MeanVector::from_quadratures(const Eigen::VectorXd &q,
                                        const Eigen::VectorXd &p) {
    if (q.size() != p.size()) {
        throw DimensionError("q and p must have the same length");
    }
    Eigen::VectorXd v(2 * q.size());
    for (Eigen::Index j = 0; j < q.size(); ++j) {
        v[2 * j] = q[j];
        v[2 * j + 1] = p[j];
    }
    return MeanVector(std::move(v));
}

MeanVector MeanVector::transformed(const Eigen::MatrixXd &t) const {
    if (t.rows() != dim() || t.cols() != dim()) {
        throw DimensionError("transform is " + std::to_string(t.rows()) + "x" +
                             std::to_string(t.cols()) + ", mean vector has " +
                             std::to_string(dim()) + " entries");
    }
    return MeanVector(t.transpose() * values_);
}

double MeanVector::mode_intensity(int j) const {
    if (j < 0 || j >= modes()) {
        throw DomainError("mode index out of range");
    }
    return 0.5 * (values_[2 * j] * values_[2 * j] +
                  values_[2 * j + 1] * values_[2 * j + 1]);
}

Intensity::Intensity(double value) : value_(value) {
    if (!(value >= 0.0) || !std::isfinite(value)) {
        throw DomainError("intensity must be finite and nonnegative");
    }
}

Intensity intensity(const MeanVector &u) {
    return Intensity(0.5 * u.values().squaredNorm());
}

double overlap_fidelity(const MeanVector &u, const MeanVector &v) {
    if (u.dim() != v.dim()) {
        throw DimensionError("overlap of states with different mode counts");
    }
    return std::exp(-0.5 * (u.values() - v.values()).squaredNorm());
}

} // namespace cvplateau
