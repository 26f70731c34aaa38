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
 * @file closed_forms.hpp
 * Closed-form gradient-moment predictions for Haar-random linear optics and
 * the regime classifier built on them.
 *
 * prop1_prefactor is the published prefactor
 *     exp(-4E) Gamma(m) I_{m-1}(4E) / (2m (2E)^{m-3}).
 * exact_compiling_second_moment is the exact Haar average of the squared
 * compiling gradient,
 *     mean_j ||d_j||^2 exp(-4E) Gamma(m) I_m(4E) / (2 (2E)^{m-2}),
 * obtained by integrating over the polar angle between y and b directly.
 * The two agree as E -> 0; for E of order one and above the published
 * prefactor is larger by (2E/m) I_{m-1}(4E)/I_m(4E) > 1.
 */
#pragma once

#include "cvplateau/cost_functions.hpp"
#include "cvplateau/phase_space.hpp"
#include "cvplateau/scaling_laws.hpp"
#include "cvplateau/special_functions.hpp"

#include <Eigen/Dense>

#include <span>
#include <string_view>
#include <vector>

namespace cvplateau {

/// Extreme squared column norms of a generator D_k.
struct XiBounds {
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
};

[[nodiscard]] XiBounds xi_bounds(const Eigen::MatrixXd &d_k);

/// prefactor * [xi_min, xi_max].
struct MomentInterval {
    LogScaled prefactor;
    LogScaled lo;
    LogScaled hi;

    [[nodiscard]] bool is_point() const { return lo.log_value == hi.log_value; }
    [[nodiscard]] bool contains(double v, double slack = 0.0) const;
};

[[nodiscard]] LogScaled prop1_prefactor(int modes, Intensity e);

/// Returns the point 0 when E = 0.
[[nodiscard]] MomentInterval prop1_interval(int modes, Intensity e,
                                            const Eigen::MatrixXd &d_k);

/// exp(-2(E0+E1)) Gamma(m) I_{m-1}(4g) / (2m (2g)^{m-3}), g = sqrt(E0 E1).
/// Zero (log -inf) when E0 E1 = 0, the g -> 0 limit for every m: the cost
/// no longer depends on the circuit.
[[nodiscard]] LogScaled heterodyne_prefactor(int modes, Intensity e0,
                                             Intensity e1);

[[nodiscard]] MomentInterval heterodyne_interval(int modes, Intensity e0,
                                                 Intensity e1,
                                                 const Eigen::MatrixXd &d_k);

/// Exact E_{O+,O-}[(dC)^2] for the compiling (e0 == e1) and heterodyne costs.
[[nodiscard]] LogScaled exact_compiling_second_moment(int modes, Intensity e0,
                                                      Intensity e1,
                                                      const Eigen::MatrixXd &d_k);

/// Both algebraic forms of ||u||^4 (tr B^2 + ||B||_F^2) / (2m (2m + 2)).
struct Prop2Forms {
    double trace_form = 0.0;     ///< with tr(B^2) + ||B||_F^2
    double frobenius_form = 0.0; ///< with 2 ||B||_F^2
};

inline constexpr double kTracelessTolerance = 1e-8;

/// Throws DomainError if |tr B| > kTracelessTolerance.
[[nodiscard]] Prop2Forms prop2_forms(const MeanVector &u, const BkMatrix &b);
[[nodiscard]] double prop2_value(const MeanVector &u, const BkMatrix &b);

/// Exponential rate of prop1_prefactor for E = a (m - 1):
/// -(4a + 1 - sqrt(16a^2 + 1)) + log(2 / (1 + sqrt(16a^2 + 1))).
[[nodiscard]] double linear_intensity_rate(double a);

enum class Regime { BarrenPlateau, Trainable };

[[nodiscard]] std::string_view regime_name(Regime r);

/// Slope threshold on the fitted linear-in-m coefficient, nats per mode.
inline constexpr double kBarrenPlateauSlope = -0.05;

/**
 * Fit of log(lower bound) = c0 + c1 m + c2 sqrt(m) + c3 log(m) over the grid.
 * The linear coefficient c1 is the exponential rate; the sqrt and log terms
 * absorb stretched-exponential and polynomial factors.
 */
struct RegimeFit {
    Regime regime = Regime::Trainable;
    double rate = 0.0;
    Eigen::Vector4d coefficients = Eigen::Vector4d::Zero();
    double residual_rms = 0.0;
    std::vector<int> m_grid;
    std::vector<double> log_bounds;
};

/// Throws DomainError for fewer than 6 ascending points, non-finite values
/// or a degenerate (constant) series.
[[nodiscard]] RegimeFit classify_log_bounds(std::span<const int> m_grid,
                                            std::span<const double> log_bounds);

/// Classifies the compiling cost under E = law(m). The bound is
/// xi_min * prop1_prefactor for the all-mode phase generator (xi = 1).
[[nodiscard]] RegimeFit classify_regime(const IntensityLaw &law,
                                        std::span<const int> m_grid);

/// Heterodyne target after depth(m) attenuators: E1 = k^{2L} E0.
[[nodiscard]] RegimeFit classify_noise_regime(const IntensityLaw &e0_law,
                                              double k, const DepthLaw &depth,
                                              std::span<const int> m_grid);

/// moment / epsilon^order, clamped to [0, 1].
[[nodiscard]] double chebyshev_bound(double moment, int order, double epsilon);

} // namespace cvplateau
