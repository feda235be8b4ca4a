// SPDX-License-Identifier: Apache-2.0
//
// rbcom - resonant beam communication channel modelling library
// Copyright (C) 2026 The rbcom authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "rbcom/gain_medium.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

using namespace rbcom;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const GainMedium rod{};
constexpr double i_sat = 1.2e7;

// Newton iteration directly on G for F(G) = 2 i (G - 1) - I_s (g - ln G).
// F is concave and increasing with F(1) < 0, so iterates from G = 1 rise
// monotonically to the root.
double newton_gain(double i_in, double g)
{
    double G = 1.0;
    for (int k = 0; k < 500; ++k) {
        const double f = 2.0 * i_in * (G - 1.0) - i_sat * (g - std::log(G));
        const double df = 2.0 * i_in + i_sat / G;
        const double next = G - f / df;
        if (!(next > G))
            return G;
        G = next;
    }
    return G;
}

double relative_residual(double i_in, double G, double g)
{
    const double rhs = i_sat * (g - std::log(G)) / (2.0 * (G - 1.0));
    return std::abs(rhs - i_in) / i_in;
}

} // namespace

TEST_CASE("gain exponent and cross-section", "[gain]")
{
    CHECK_THAT(rod.cross_section() * i_sat, WithinRel(339.29200658769767, 1e-14));
    CHECK_THAT(gain_exponent(rod, PowerW(200.0)), WithinRel(0.82524785306908693, 1e-14));
    CHECK(gain_exponent(rod, PowerW(0.0)) == 0.0);
}

TEST_CASE("saturated gain frozen values", "[gain]")
{
    // 40-digit root of the gain relation, frozen.
    CHECK_THAT(power_gain(rod, PowerW(200.0), IntensityWm2(1.2e4)), WithinRel(2.2766261783264546, 1e-13));
    CHECK_THAT(power_gain(rod, PowerW(200.0), IntensityWm2(1.2e7)), WithinRel(1.2866161214425242, 1e-13));
    CHECK_THAT(power_gain(rod, PowerW(200.0), IntensityWm2(1.2e10)), WithinRel(1.0004124177601649, 1e-13));
}

TEST_CASE("saturated gain matches a Newton oracle", "[gain][property]")
{
    for (double p : {1.0, 50.0, 200.0, 400.0, 2000.0}) {
        const double g = gain_exponent(rod, PowerW(p));
        for (double e = -6.0; e <= 5.0; e += 0.1) {
            const double i_in = i_sat * std::pow(10.0, e);
            const double G = power_gain(rod, PowerW(p), IntensityWm2(i_in));
            REQUIRE_THAT(G, WithinRel(newton_gain(i_in, g), 1e-12));
            // Rounding G to a double alone moves the relation by about
            // eps (1 / (g - ln G) + G / (G - 1)); this dominates near unit
            // gain and near the small-signal limit.
            const double eps = 2.220446049250313e-16;
            const double floor = 8.0 * eps * (1.0 / (g - std::log(G)) + G / (G - 1.0));
            REQUIRE(relative_residual(i_in, G, g) < 1e-9 + floor);
        }
    }
}

TEST_CASE("gain lies in (1, exp g) and falls with input intensity", "[gain][property]")
{
    for (double p : {10.0, 200.0, 1000.0}) {
        const double g = gain_exponent(rod, PowerW(p));
        double prev_gain = std::exp(g);
        double prev_out = 0.0;
        for (double e = -8.0; e <= 4.0; e += 0.05) {
            const IntensityWm2 i_in(i_sat * std::pow(10.0, e));
            const double G = power_gain(rod, PowerW(p), i_in);
            REQUIRE(G > 1.0);
            REQUIRE(G < prev_gain);
            const double out = output_intensity(rod, PowerW(p), i_in).value();
            REQUIRE(out > prev_out);
            prev_gain = G;
            prev_out = out;
        }
    }
}

TEST_CASE("gain derivative matches implicit differentiation", "[gain]")
{
    // dG/di = (1 - G) / (i + I_s / (2 G)) from differentiating the relation.
    const PowerW p(200.0);
    for (double i_in : {1e4, 3e5, 1.2e7, 5e8}) {
        const double G = power_gain(rod, p, IntensityWm2(i_in));
        const double step = 1e-5 * i_in;
        const double fd = (power_gain(rod, p, IntensityWm2(i_in + step)) -
                           power_gain(rod, p, IntensityWm2(i_in - step))) /
                          (2.0 * step);
        const double analytic = (1.0 - G) / (i_in + i_sat / (2.0 * G));
        CHECK_THAT(fd, WithinRel(analytic, 1e-6));
    }
}

TEST_CASE("gain rises with pumping power and recovers small-signal limit", "[gain][property]")
{
    const IntensityWm2 i_in(1e6);
    double prev = 1.0;
    for (double p = 5.0; p <= 500.0; p += 5.0) {
        const double G = power_gain(rod, PowerW(p), i_in);
        REQUIRE(G > prev);
        prev = G;
    }
    const double g = gain_exponent(rod, PowerW(200.0));
    CHECK_THAT(power_gain(rod, PowerW(200.0), IntensityWm2(1e-3)), WithinRel(std::exp(g), 1e-8));
    CHECK(power_gain(rod, PowerW(0.0), i_in) == 1.0);
}

TEST_CASE("gain relation right-hand side inverts the solver", "[gain]")
{
    const PowerW p(200.0);
    for (double i_in : {1e3, 1e6, 1e9}) {
        const double G = power_gain(rod, p, IntensityWm2(i_in));
        CHECK_THAT(gain_equation_rhs(rod, p, G), WithinRel(i_in, 1e-9));
    }
}

TEST_CASE("gain medium validation", "[gain]")
{
    CHECK_THROWS_AS(power_gain(rod, PowerW(200.0), IntensityWm2(0.0)), domain_error);
    GainMedium bad = rod;
    bad.pump_efficiency = Ratio(1.5);
    CHECK_THROWS_AS(gain_exponent(bad, PowerW(1.0)), domain_error);
    bad = rod;
    bad.rod_radius = 0.0;
    CHECK_THROWS_AS(gain_exponent(bad, PowerW(1.0)), domain_error);
}
