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
#include "cvplateau/special_functions.hpp"

#include "cvplateau/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace cvplateau {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = std::numeric_limits<double>::epsilon();

void check_args(int nu, double x) {
    if (nu < 0) {
        throw DomainError("Bessel order must be nonnegative, got " +
                          std::to_string(nu));
    }
    if (!(x >= 0.0) || !std::isfinite(x)) {
        throw DomainError("Bessel argument must be finite and nonnegative");
    }
}

/// Index of the largest term of sum_k (x^2/4)^k / (k! (k+nu)!).
double series_peak(int nu, double x) {
    const double n = nu;
    return 0.25 * x * x / (0.5 * (std::sqrt(n * n + x * x) + n));
}

// All terms are positive, so the only hazard is overflow of the partial sum;
// it is rescaled by kRescale whenever it grows past kBig.
LogScaled series(int nu, double x) {
    constexpr double kBig = 1e280;
    const double log_rescale = std::log(kBig);
    const double q = 0.25 * x * x;
    const double peak = series_peak(nu, x);
    double term = 1.0;
    double sum = 1.0;
    double offset = 0.0;
    for (long k = 0;; ++k) {
        term *= q / (static_cast<double>(k + 1) * static_cast<double>(k + 1 + nu));
        sum += term;
        if (sum > kBig) {
            sum /= kBig;
            term /= kBig;
            offset += log_rescale;
        }
        if (static_cast<double>(k) > peak && term < 0.25 * kEps * sum) {
            break;
        }
    }
    return {nu * std::log(0.5 * x) - log_gamma(nu + 1.0) + std::log(sum) +
            offset};
}

// Large-argument expansion e^x / sqrt(2 pi x) sum_k (-1)^k a_k(nu) / x^k.
LogScaled hankel(int nu, double x) {
    const double mu = 4.0 * static_cast<double>(nu) * nu;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 200; ++k) {
        const double odd = 2.0 * k - 1.0;
        const double next = -term * (mu - odd * odd) / (8.0 * k * x);
        if (std::abs(next) >= std::abs(term)) {
            break;
        }
        term = next;
        sum += term;
        if (std::abs(term) < 0.25 * kEps * std::abs(sum)) {
            break;
        }
    }
    return {x - 0.5 * std::log(2.0 * std::numbers::pi * x) + std::log(sum)};
}

struct DebyeTerms {
    double eta;
    double sq; // sqrt(1 + z^2)
    double t;  // 1 / sq
};

DebyeTerms debye_terms(int nu, double x) {
    const double z = x / nu;
    const double sq = std::sqrt(1.0 + z * z);
    return {sq + std::log(z / (1.0 + sq)), sq, 1.0 / sq};
}

// Debye's uniform expansion with u_1..u_4.
LogScaled debye(int nu, double x) {
    const auto [eta, sq, t] = debye_terms(nu, x);
    const double t2 = t * t;
    const double u1 = t * (3.0 - 5.0 * t2) / 24.0;
    const double u2 = t2 * (81.0 + t2 * (-462.0 + t2 * 385.0)) / 1152.0;
    const double u3 =
        t * t2 *
        (30375.0 + t2 * (-369603.0 + t2 * (765765.0 - t2 * 425425.0))) /
        414720.0;
    const double u4 =
        t2 * t2 *
        (4465125.0 +
         t2 * (-94121676.0 +
               t2 * (349922430.0 + t2 * (-446185740.0 + t2 * 185910725.0)))) /
        39813120.0;
    const double inv = 1.0 / nu;
    const double corr = 1.0 + inv * (u1 + inv * (u2 + inv * (u3 + inv * u4)));
    return {nu * eta - 0.5 * std::log(2.0 * std::numbers::pi * nu) -
            0.5 * std::log(sq) + std::log(corr)};
}

} // namespace

LogScaled LogScaled::from_value(double v) {
    if (v < 0.0 || std::isnan(v)) {
        throw DomainError("LogScaled holds nonnegative values only");
    }
    return {v == 0.0 ? -kInf : std::log(v)};
}

bool LogScaled::is_zero() const { return log_value == -kInf; }

double LogScaled::value() const { return std::exp(log_value); }

LogScaled operator*(LogScaled a, LogScaled b) {
    if (a.is_zero() || b.is_zero()) {
        return LogScaled::zero();
    }
    return {a.log_value + b.log_value};
}

LogScaled operator/(LogScaled a, LogScaled b) {
    if (b.is_zero()) {
        throw DomainError("division by a zero LogScaled");
    }
    if (a.is_zero()) {
        return a;
    }
    return {a.log_value - b.log_value};
}

BesselRoute bessel_route(int nu, double x) {
    if (series_peak(nu, x) <= kBesselSeriesPeakLimit) {
        return BesselRoute::Series;
    }
    return nu < kBesselDebyeMinOrder ? BesselRoute::Hankel : BesselRoute::Debye;
}

LogScaled bessel_i_via(BesselRoute route, int nu, double x) {
    check_args(nu, x);
    if (x == 0.0) {
        return nu == 0 ? LogScaled{0.0} : LogScaled::zero();
    }
    switch (route) {
    case BesselRoute::Series:
        return series(nu, x);
    case BesselRoute::Hankel:
        return hankel(nu, x);
    case BesselRoute::Debye:
        if (nu == 0) {
            throw DomainError("Debye expansion needs nu >= 1");
        }
        return debye(nu, x);
    }
    return series(nu, x);
}

LogScaled bessel_i(int nu, double x) {
    check_args(nu, x);
    return bessel_i_via(bessel_route(nu, x), nu, x);
}

LogScaled uniform_asymptotic_i(int nu, double x) {
    if (nu < 1) {
        throw DomainError("uniform asymptotic needs nu >= 1");
    }
    check_args(nu, x);
    if (x == 0.0) {
        return LogScaled::zero();
    }
    const auto [eta, sq, t] = debye_terms(nu, x);
    (void)t;
    return {nu * eta - 0.5 * std::log(2.0 * std::numbers::pi * nu) -
            0.5 * std::log(sq)};
}

LogScaled small_arg_asymptotic_i(int nu, double x) {
    check_args(nu, x);
    if (x == 0.0) {
        return nu == 0 ? LogScaled{0.0} : LogScaled::zero();
    }
    return {nu * std::log(0.5 * x) - log_gamma(nu + 1.0)};
}

double log_gamma(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw DomainError("log_gamma needs a finite positive argument");
    }
#if defined(__GLIBC__)
    int sign = 0;
    return ::lgamma_r(x, &sign);
#else
    return std::lgamma(x);
#endif
}

} // namespace cvplateau
