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
#include "cvplateau/closed_forms.hpp"

#include "cvplateau/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cvplateau {

namespace {

void require_modes(int modes) {
    if (modes < 1) {
        throw DomainError("mode count must be positive");
    }
}

MomentInterval scale_interval(LogScaled prefactor, const XiBounds &xi) {
    return {prefactor, prefactor * LogScaled::from_value(xi.min),
            prefactor * LogScaled::from_value(xi.max)};
}

/// log of exp(-2(E0+E1)) Gamma(m) I_nu(4g) / (c (2g)^{m-p}).
LogScaled bessel_moment(int modes, double e0, double e1, int nu, double c,
                        int p) {
    const double g = std::sqrt(e0 * e1);
    if (g == 0.0) {
        return LogScaled::zero();
    }
    return {-2.0 * (e0 + e1) + log_gamma(modes) + bessel_i(nu, 4.0 * g).log_value -
            std::log(c) - (modes - p) * std::log(2.0 * g)};
}

} // namespace

XiBounds xi_bounds(const Eigen::MatrixXd &d_k) {
    if (d_k.rows() != d_k.cols() || d_k.rows() == 0) {
        throw DimensionError("generator must be square and non-empty");
    }
    const Eigen::VectorXd norms = d_k.colwise().squaredNorm().transpose();
    return {norms.minCoeff(), norms.maxCoeff(), norms.mean()};
}

bool MomentInterval::contains(double v, double slack) const {
    return v >= lo.value() - slack && v <= hi.value() + slack;
}

LogScaled prop1_prefactor(int modes, Intensity e) {
    require_modes(modes);
    return bessel_moment(modes, e.value(), e.value(), modes - 1, 2.0 * modes, 3);
}

MomentInterval prop1_interval(int modes, Intensity e, const Eigen::MatrixXd &d_k) {
    if (d_k.rows() != 2 * modes) {
        throw DimensionError("generator size does not match the mode count");
    }
    return scale_interval(prop1_prefactor(modes, e), xi_bounds(d_k));
}

LogScaled heterodyne_prefactor(int modes, Intensity e0, Intensity e1) {
    require_modes(modes);
    return bessel_moment(modes, e0.value(), e1.value(), modes - 1, 2.0 * modes, 3);
}

MomentInterval heterodyne_interval(int modes, Intensity e0, Intensity e1,
                                   const Eigen::MatrixXd &d_k) {
    if (d_k.rows() != 2 * modes) {
        throw DimensionError("generator size does not match the mode count");
    }
    return scale_interval(heterodyne_prefactor(modes, e0, e1), xi_bounds(d_k));
}

LogScaled exact_compiling_second_moment(int modes, Intensity e0, Intensity e1,
                                        const Eigen::MatrixXd &d_k) {
    require_modes(modes);
    if (d_k.rows() != 2 * modes) {
        throw DimensionError("generator size does not match the mode count");
    }
    // y = |y|(cos phi e_1 + sin phi w) with e_1 = b/|b|; skewness of D_k makes
    // D_k e_1 orthogonal to e_1, so E[(y^T D b)^2] = |y|^2 |b|^2
    // E[sin^2 phi e^{4g cos phi}] E|D e_1|^2 / (2m - 1), and the phi integral
    // is a Gegenbauer/Bessel integral of order m.
    const LogScaled base =
        bessel_moment(modes, e0.value(), e1.value(), modes, 2.0, 2);
    return base * LogScaled::from_value(xi_bounds(d_k).mean);
}

Prop2Forms prop2_forms(const MeanVector &u, const BkMatrix &b) {
    if (b.matrix().rows() != u.dim()) {
        throw DimensionError("B_k and state have different mode counts");
    }
    if (std::abs(b.trace()) > kTracelessTolerance) {
        throw DomainError("B_k must be traceless, tr B = " +
                          std::to_string(b.trace()));
    }
    const double n = u.dim();
    const double norm4 = std::pow(u.values().squaredNorm(), 2);
    const double g = 1.0 / (n * (n + 2.0));
    const double frob = b.matrix().squaredNorm();
    const double tr_sq = (b.matrix() * b.matrix()).trace();
    return {norm4 * g * (tr_sq + frob), norm4 * g * 2.0 * frob};
}

double prop2_value(const MeanVector &u, const BkMatrix &b) {
    return prop2_forms(u, b).trace_form;
}

double linear_intensity_rate(double a) {
    if (!(a > 0.0)) {
        throw DomainError("linear intensity coefficient must be positive");
    }
    const double s = std::sqrt(16.0 * a * a + 1.0);
    return -(4.0 * a + 1.0 - s) + std::log(2.0 / (1.0 + s));
}

std::string_view regime_name(Regime r) {
    return r == Regime::BarrenPlateau ? "BPL" : "trainable";
}

RegimeFit classify_log_bounds(std::span<const int> m_grid,
                              std::span<const double> log_bounds) {
    if (m_grid.size() != log_bounds.size()) {
        throw DimensionError("m grid and bound series differ in length");
    }
    if (m_grid.size() < 6) {
        throw DomainError("regime fit needs at least 6 grid points");
    }
    for (std::size_t i = 0; i < m_grid.size(); ++i) {
        if (m_grid[i] < 1 || (i > 0 && m_grid[i] <= m_grid[i - 1])) {
            throw DomainError("m grid must be positive and strictly ascending");
        }
        if (!std::isfinite(log_bounds[i])) {
            throw DomainError("non-finite log bound at m = " +
                              std::to_string(m_grid[i]));
        }
    }
    const auto [lo, hi] = std::minmax_element(log_bounds.begin(), log_bounds.end());
    if (*hi - *lo <= 1e-12 * std::max(1.0, std::abs(*hi))) {
        throw DomainError("degenerate regime fit: bound is constant over the grid");
    }
    const auto n = static_cast<Eigen::Index>(m_grid.size());
    Eigen::MatrixXd design(n, 4);
    Eigen::VectorXd rhs(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double m = m_grid[static_cast<std::size_t>(i)];
        design.row(i) << 1.0, m, std::sqrt(m), std::log(m);
        rhs[i] = log_bounds[static_cast<std::size_t>(i)];
    }
    RegimeFit fit;
    fit.coefficients = design.colPivHouseholderQr().solve(rhs);
    fit.rate = fit.coefficients[1];
    fit.residual_rms = std::sqrt((design * fit.coefficients - rhs).squaredNorm() /
                                 static_cast<double>(n));
    fit.regime = fit.rate <= kBarrenPlateauSlope ? Regime::BarrenPlateau
                                                 : Regime::Trainable;
    fit.m_grid.assign(m_grid.begin(), m_grid.end());
    fit.log_bounds.assign(log_bounds.begin(), log_bounds.end());
    return fit;
}

RegimeFit classify_regime(const IntensityLaw &law, std::span<const int> m_grid) {
    std::vector<double> bounds;
    bounds.reserve(m_grid.size());
    for (int m : m_grid) {
        const auto interval = prop1_interval(m, Intensity(law(m)),
                                             uniform_phase_generator(m).d());
        bounds.push_back(interval.lo.log_value);
    }
    return classify_log_bounds(m_grid, bounds);
}

RegimeFit classify_noise_regime(const IntensityLaw &e0_law, double k,
                                const DepthLaw &depth,
                                std::span<const int> m_grid) {
    std::vector<double> bounds;
    bounds.reserve(m_grid.size());
    for (int m : m_grid) {
        const Intensity e0(e0_law(m));
        const Intensity e1 = attenuated_intensity(e0, k, depth(m));
        const auto interval =
            heterodyne_interval(m, e0, e1, uniform_phase_generator(m).d());
        bounds.push_back(interval.lo.log_value);
    }
    return classify_log_bounds(m_grid, bounds);
}

double chebyshev_bound(double moment, int order, double epsilon) {
    if (order != 1 && order != 2) {
        throw DomainError("Chebyshev bound order must be 1 or 2");
    }
    if (!(epsilon > 0.0)) {
        throw DomainError("Chebyshev bound needs epsilon > 0");
    }
    if (!(moment >= 0.0)) {
        throw DomainError("moment must be nonnegative");
    }
    const double bound = moment / std::pow(epsilon, order);
    return std::clamp(bound, 0.0, 1.0);
}

} // namespace cvplateau
