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
#include "cvplateau/linear_optics.hpp"
#include "cvplateau/sampling.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

using namespace cvplateau;
using cvplateau::testing::bessel_i_series;
using cvplateau::testing::simpson;

namespace {

std::vector<int> grid(int lo, int hi, int step) {
    std::vector<int> g;
    for (int m = lo; m <= hi; m += step) {
        g.push_back(m);
    }
    return g;
}

/// Haar second moment of the compiling/heterodyne gradient by quadrature over
/// the angle between y and b: the angle has density sin^{2m-2} on [0, pi],
/// and (y^T D b)^2 = |y|^2 |b|^2 sin^2 (w^T D e)^2 with E(w^T D e)^2 =
/// mean_j |d_j|^2 / (2m - 1).
double angular_second_moment(int m, double e0, double e1, double xi_mean) {
    const double x = 4.0 * std::sqrt(e0 * e1);
    const double num = simpson(
        [&](double phi) {
            return std::pow(std::sin(phi), 2 * m) * std::exp(x * std::cos(phi) - x);
        },
        0.0, std::numbers::pi, 200000);
    const double den = simpson(
        [&](double phi) { return std::pow(std::sin(phi), 2 * m - 2); }, 0.0,
        std::numbers::pi, 200000);
    return std::exp(-2.0 * (e0 + e1) + x) * 4.0 * e0 * e1 * xi_mean / (2 * m - 1) *
           num / den;
}

} // namespace

TEST_CASE("xi bounds of the standard generators") {
    const auto ps = make_generator({GateKind::PhaseShifter, 1, -1}, 3);
    const auto xi = xi_bounds(ps.d());
    CHECK(xi.min == 0.0);
    CHECK(xi.max == doctest::Approx(1.0));
    CHECK(xi.mean == doctest::Approx(1.0 / 3.0));

    const auto uni = xi_bounds(uniform_phase_generator(5).d());
    CHECK(uni.min == doctest::Approx(1.0));
    CHECK(uni.max == doctest::Approx(1.0));

    // column norms by explicit loops
    const auto bs = make_generator({GateKind::Beamsplitter, 0, 1}, 2).d();
    double lo = 1e300;
    double hi = 0.0;
    for (int c = 0; c < 4; ++c) {
        double s = 0.0;
        for (int r = 0; r < 4; ++r) {
            s += bs(r, c) * bs(r, c);
        }
        lo = std::min(lo, s);
        hi = std::max(hi, s);
    }
    CHECK(xi_bounds(bs).min == doctest::Approx(lo));
    CHECK(xi_bounds(bs).max == doctest::Approx(hi));
    CHECK_THROWS_AS((void)xi_bounds(Eigen::MatrixXd(2, 3)), DimensionError);
}

TEST_CASE("published prefactor at m = 1 against an independent Bessel series") {
    for (double e : {0.05, 0.5, 1.0, 2.5}) {
        const double i0 = static_cast<double>(bessel_i_series(0, 4.0 * e));
        const double expect = std::exp(-4 * e) * i0 * 4 * e * e / 2.0;
        CHECK(prop1_prefactor(1, Intensity(e)).value() ==
              doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("exact second moment against angular quadrature") {
    for (int m : {1, 2, 3, 6}) {
        for (double e : {0.1, 1.0, 3.0}) {
            CAPTURE(m);
            CAPTURE(e);
            for (const auto &d : {uniform_phase_generator(m).d(),
                                  make_generator({GateKind::PhaseShifter, 0, -1}, m).d()}) {
                const double want = angular_second_moment(m, e, e, xi_bounds(d).mean);
                CHECK(exact_compiling_second_moment(m, Intensity(e), Intensity(e), d)
                          .value() == doctest::Approx(want).epsilon(1e-8));
            }
        }
    }
    // heterodyne, unequal intensities
    const auto d = uniform_phase_generator(2).d();
    CHECK(exact_compiling_second_moment(2, Intensity(0.3), Intensity(1.7), d).value() ==
          doctest::Approx(angular_second_moment(2, 0.3, 1.7, 1.0)).epsilon(1e-8));
}

TEST_CASE("published prefactor and the exact moment") {
    // Equal at leading order as E -> 0, with the exact ratio
    // (2E/m) I_{m-1}(4E) / I_m(4E) in general.
    for (int m : {1, 2, 5, 20}) {
        const auto d = uniform_phase_generator(m).d();
        const double small = 1e-4;
        CHECK(prop1_prefactor(m, Intensity(small)).value() ==
              doctest::Approx(
                  exact_compiling_second_moment(m, Intensity(small), Intensity(small), d)
                      .value())
                  .epsilon(1e-3));
        for (double e : {0.5, 1.0, 4.0}) {
            const double ratio =
                (prop1_prefactor(m, Intensity(e)) /
                 exact_compiling_second_moment(m, Intensity(e), Intensity(e), d))
                    .value();
            const double expect =
                2 * e / m *
                std::exp(bessel_i(m - 1, 4 * e).log_value - bessel_i(m, 4 * e).log_value);
            CHECK(ratio == doctest::Approx(expect).epsilon(1e-12));
            CHECK(ratio > 1.0);
        }
    }
}

TEST_CASE("prop1 interval") {
    const auto ps = make_generator({GateKind::PhaseShifter, 0, -1}, 3);
    const auto iv = prop1_interval(3, Intensity(1.0), ps.d());
    CHECK(iv.lo.is_zero());
    CHECK(iv.hi.value() == doctest::Approx(iv.prefactor.value()));
    CHECK(iv.contains(0.0));
    CHECK_FALSE(iv.is_point());

    const auto uni = prop1_interval(3, Intensity(1.0), uniform_phase_generator(3).d());
    CHECK(uni.is_point());

    const auto zero = prop1_interval(4, Intensity(0.0), uniform_phase_generator(4).d());
    CHECK(zero.lo.is_zero());
    CHECK(zero.hi.is_zero());
    CHECK_THROWS_AS((void)prop1_interval(2, Intensity(1.0), ps.d()), DimensionError);
    CHECK_THROWS_AS((void)prop1_prefactor(0, Intensity(1.0)), DomainError);
}

TEST_CASE("heterodyne prefactor") {
    for (int m : {1, 3, 10}) {
        for (double e : {0.2, 1.0, 7.0}) {
            CHECK(heterodyne_prefactor(m, Intensity(e), Intensity(e)).log_value ==
                  doctest::Approx(prop1_prefactor(m, Intensity(e)).log_value)
                      .epsilon(1e-12));
        }
        CHECK(heterodyne_prefactor(m, Intensity(2.0), Intensity(0.0)).is_zero());
    }
    // symmetric in (E0, E1)
    CHECK(heterodyne_prefactor(4, Intensity(0.3), Intensity(2.0)).log_value ==
          doctest::Approx(
              heterodyne_prefactor(4, Intensity(2.0), Intensity(0.3)).log_value));
}

TEST_CASE("exponential rate for linearly growing intensity") {
    for (double a : {0.25, 1.0, 3.0}) {
        auto logp = [a](int m) {
            return prop1_prefactor(m, Intensity(a * (m - 1))).log_value;
        };
        const int m = 20000;
        const double slope = (logp(m + 1000) - logp(m)) / 1000.0;
        CAPTURE(a);
        CHECK(slope == doctest::Approx(linear_intensity_rate(a)).epsilon(2e-3));
        CHECK(linear_intensity_rate(a) < 0.0);
    }
    CHECK_THROWS_AS((void)linear_intensity_rate(0.0), DomainError);
}

TEST_CASE("prop2 forms") {
    RandomSource rng(1);
    const int m = 3;
    const QuadraticHamiltonian h(random_psd(m, rng));
    const auto g = make_generator({GateKind::Beamsplitter, 0, 2}, m);
    const auto b = bk_matrix(g, h, haar_orthogonal(m, rng));
    const auto u = uniform_sphere(m, 1.7, rng);
    const auto f = prop2_forms(u, b);
    CHECK(f.trace_form == doctest::Approx(f.frobenius_form).epsilon(1e-10));
    CHECK(f.trace_form > 0.0);
    // explicit formula
    const double n = 2 * m;
    const double norm4 = std::pow(u.values().squaredNorm(), 2);
    CHECK(prop2_value(u, b) ==
          doctest::Approx(norm4 * 2 * b.matrix().squaredNorm() / (n * (n + 2))));

    CHECK(prop2_value(MeanVector::vacuum(m), b) == 0.0);
    CHECK(prop2_value(u, BkMatrix(Eigen::MatrixXd::Zero(6, 6))) == 0.0);
    CHECK_THROWS_AS((void)prop2_value(u, BkMatrix(Eigen::MatrixXd::Identity(6, 6))),
                    DomainError);
    CHECK_THROWS_AS((void)prop2_value(MeanVector::vacuum(2), b), DimensionError);
}

TEST_CASE("regime classifier on the standard laws") {
    const auto g = grid(4, 64, 4);
    CHECK(kBarrenPlateauSlope == -0.05);
    CHECK(classify_regime(IntensityLaw::parse("linear:1"), g).regime ==
          Regime::BarrenPlateau);
    CHECK(classify_regime(IntensityLaw::parse("expdecay:1,2"), g).regime ==
          Regime::BarrenPlateau);
    CHECK(classify_regime(IntensityLaw::parse("power:1,0.5"), g).regime ==
          Regime::Trainable);
    CHECK(classify_regime(IntensityLaw::parse("logpower:1,-0.5"), g).regime ==
          Regime::Trainable);
    CHECK(regime_name(Regime::BarrenPlateau) == "BPL");
    CHECK(regime_name(Regime::Trainable) == "trainable");
}

TEST_CASE("noise regime depends on the depth scaling") {
    const auto g = grid(4, 64, 4);
    const auto e0 = IntensityLaw::parse("power:1,0.5");
    CHECK(classify_noise_regime(e0, 0.9, DepthLaw::parse("linear:1"), g).regime ==
          Regime::BarrenPlateau);
    CHECK(classify_noise_regime(e0, 0.9, DepthLaw::parse("sqrt:1"), g).regime ==
          Regime::Trainable);
}

TEST_CASE("classifier input validation") {
    const std::vector<int> g = {1, 2, 3, 4, 5};
    const std::vector<double> v = {1, 2, 3, 4, 5};
    CHECK_THROWS_AS((void)classify_log_bounds(g, v), DomainError);
    const std::vector<int> g6 = {1, 2, 3, 4, 5, 6};
    const std::vector<double> flat(6, -3.0);
    CHECK_THROWS_AS((void)classify_log_bounds(g6, flat), DomainError);
    const std::vector<int> unsorted = {1, 2, 3, 5, 4, 6};
    const std::vector<double> v6 = {1, 2, 3, 4, 5, 6};
    CHECK_THROWS_AS((void)classify_log_bounds(unsorted, v6), DomainError);
    std::vector<double> bad = v6;
    bad[2] = -std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS((void)classify_log_bounds(g6, bad), DomainError);
    CHECK_THROWS_AS((void)classify_log_bounds(g6, v), DimensionError);
    // constant intensity zero makes the bound identically zero
    CHECK_THROWS_AS((void)classify_regime(IntensityLaw::parse("constant:0"), grid(4, 40, 4)),
                    DomainError);
}

TEST_CASE("classifier recovers a planted linear rate") {
    std::vector<int> g = grid(2, 40, 2);
    std::vector<double> v;
    for (int m : g) {
        v.push_back(0.7 - 0.3 * m + 2.0 * std::log(m));
    }
    const auto fit = classify_log_bounds(g, v);
    CHECK(fit.rate == doctest::Approx(-0.3).epsilon(1e-8));
    CHECK(fit.residual_rms < 1e-9);
    CHECK(fit.regime == Regime::BarrenPlateau);
}

TEST_CASE("chebyshev bound") {
    CHECK(chebyshev_bound(0.0, 1, 0.1) == 0.0);
    CHECK(chebyshev_bound(0.01, 2, 0.1) == doctest::Approx(1.0));
    CHECK(chebyshev_bound(0.5, 2, 0.1) == 1.0);
    CHECK(chebyshev_bound(1e-4, 1, 0.1) == doctest::Approx(1e-3));
    CHECK_THROWS_AS((void)chebyshev_bound(0.1, 3, 0.1), DomainError);
    CHECK_THROWS_AS((void)chebyshev_bound(0.1, 2, 0.0), DomainError);
    CHECK_THROWS_AS((void)chebyshev_bound(-0.1, 2, 0.1), DomainError);
}
