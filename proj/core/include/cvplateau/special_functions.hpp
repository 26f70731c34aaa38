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
 * @file special_functions.hpp
 * Modified Bessel functions of the first kind and log-Gamma, evaluated in
 * log scale so that products like exp(-4E) Gamma(m) I_{m-1}(4E) / (2E)^{m-3}
 * stay finite far beyond the range of double.
 */
#pragma once

#include <limits>

namespace cvplateau {

/// A positive quantity stored as its natural logarithm. Zero is log = -inf.
struct LogScaled {
    double log_value = -std::numeric_limits<double>::infinity();

    static LogScaled zero() { return {}; }
    static LogScaled from_value(double v);

    [[nodiscard]] bool is_zero() const;
    [[nodiscard]] double value() const;

    friend LogScaled operator*(LogScaled a, LogScaled b);
    friend LogScaled operator/(LogScaled a, LogScaled b);
    friend bool operator<(LogScaled a, LogScaled b) {
        return a.log_value < b.log_value;
    }
    friend bool operator<=(LogScaled a, LogScaled b) {
        return a.log_value <= b.log_value;
    }
};

/// Evaluation route used by bessel_i for a given (nu, x).
enum class BesselRoute { Series, Hankel, Debye };

/// Largest index of the dominant power-series term for which the series is
/// used; beyond it an asymptotic expansion takes over. Validated against
/// 40-digit references on both sides of the switch.
inline constexpr double kBesselSeriesPeakLimit = 2000.0;
/// Below this order the large-argument (Hankel) expansion is used past the
/// series region; at or above it, Debye's uniform expansion.
inline constexpr int kBesselDebyeMinOrder = 30;

[[nodiscard]] BesselRoute bessel_route(int nu, double x);

/// log I_nu(x), nu >= 0, x >= 0.
[[nodiscard]] LogScaled bessel_i(int nu, double x);

/// log I_nu(x) through a specific route, for cross-validation.
[[nodiscard]] LogScaled bessel_i_via(BesselRoute route, int nu, double x);

/// Leading-order uniform asymptotic of I_nu(nu z), z = x / nu:
/// nu eta(z) - log(2 pi nu)/2 - log(1 + z^2)/4.
[[nodiscard]] LogScaled uniform_asymptotic_i(int nu, double x);

/// (x/2)^nu / Gamma(nu + 1).
[[nodiscard]] LogScaled small_arg_asymptotic_i(int nu, double x);

/// log Gamma(x), x > 0.
[[nodiscard]] double log_gamma(double x);

} // namespace cvplateau
