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

#include "rbcom/link_gain.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace rbcom;
using Catch::Matchers::WithinRel;

namespace {

ChannelPhysics physics(double p_in, double alpha = 0.01, double delta = 0.5)
{
    return ChannelPhysics{GainMedium{}, PowerW(p_in), Ratio(alpha), Ratio(delta)};
}

// Gain by Newton's method on F(G) = 2 i (G - 1) - I_s (g - ln G). F is
// concave and increasing with F(1) < 0, so iterates from G = 1 rise
// monotonically to the root. Independent of the log-gain bisection.
double newton_gain(double i_in, double g)
{
    double G = 1.0;
    for (int k = 0; k < 500; ++k) {
        const double next = G - (2.0 * i_in * (G - 1.0) - 1.2e7 * (g - std::log(G))) / (2.0 * i_in + 1.2e7 / G);
        if (!(next > G))
            return G;
        G = next;
    }
    return G;
}

double h_oracle(double x, double p_in, double alpha, double delta)
{
    const double s0 = GainMedium{}.cross_section();
    const double g = 2.0 * 0.7 * p_in / (1.2e7 * s0);
    const double i1 = (1.0 - alpha) * delta * x * x / s0;
    const double i2 = delta * newton_gain(i1, g) * i1;
    return newton_gain(i2, g) * i2 * s0;
}

} // namespace

TEST_CASE("link gain frozen values", "[link]")
{
    const auto c = physics(200.0);
    CHECK_THAT(link_gain_h(c, Amplitude(1.0)).value(), WithinRel(1.2791695388059552, 1e-12));
    CHECK_THAT(link_gain_h(c, Amplitude(5.0)).value(), WithinRel(27.332123884583257, 1e-12));
    CHECK_THAT(link_gain_h(c, Amplitude(10.0)).value(), WithinRel(81.874344350132774, 1e-12));
}

TEST_CASE("link gain matches a Newton composition oracle", "[link][property]")
{
    for (double p : {150.0, 200.0, 400.0})
        for (double alpha : {0.001, 0.01, 0.1})
            for (double x = 0.05; x < 30.0; x *= 1.7)
                REQUIRE_THAT(link_gain_h(physics(p, alpha), Amplitude(x)).value(),
                             WithinRel(h_oracle(x, p, alpha, 0.5), 1e-10));
}

TEST_CASE("round trip stages are consistent", "[link]")
{
    const auto c = physics(200.0);
    const auto rt = round_trip(c, Amplitude(3.0));
    const double s0 = c.medium.cross_section();
    CHECK_THAT(rt.receiver_in, WithinRel(0.99 * 0.5 * 9.0 / s0, 1e-15));
    CHECK_THAT(rt.transmitter_in, WithinRel(0.5 * rt.receiver_out, 1e-15));
    CHECK_THAT(rt.power, WithinRel(rt.transmitter_out * s0, 1e-15));
    CHECK(rt.receiver_out > rt.receiver_in);
}

TEST_CASE("link gain increases and gain ratio decreases with amplitude", "[link][property]")
{
    for (double p : {150.0, 170.0, 200.0}) {
        const auto c = physics(p);
        const double bound = small_signal_gain_ratio(c);
        double prev_h = 0.0;
        double prev_ratio = bound;
        for (int k = 1; k <= 400; ++k) {
            const Amplitude x(0.05 * k);
            const double h = link_gain_h(c, x).value();
            const double ratio = gain_ratio(c, x);
            REQUIRE(h > prev_h);
            REQUIRE(ratio < prev_ratio);
            prev_h = h;
            prev_ratio = ratio;
        }
    }
}

TEST_CASE("gain ratio approaches its small-signal supremum", "[link]")
{
    const auto c = physics(200.0);
    const double g = gain_exponent(c.medium, c.pump_power);
    CHECK_THAT(small_signal_gain_ratio(c), WithinRel(0.99 * 0.25 * std::exp(2.0 * g), 1e-15));
    CHECK_THAT(gain_ratio(c, Amplitude(1e-5)), WithinRel(small_signal_gain_ratio(c), 1e-8));
}

TEST_CASE("link gain increases with pumping power", "[link][property]")
{
    for (double x = 0.1; x < 20.0; x *= 1.3) {
        const double h150 = link_gain_h(physics(150.0), Amplitude(x)).value();
        const double h170 = link_gain_h(physics(170.0), Amplitude(x)).value();
        const double h200 = link_gain_h(physics(200.0), Amplitude(x)).value();
        REQUIRE(h150 < h170);
        REQUIRE(h170 < h200);
    }
}

TEST_CASE("link gain inversion", "[link]")
{
    const auto c = physics(200.0);
    const PowerW p_t(43.002722235724689);
    for (double x : {0.3, 1.0, 4.0, 6.5}) {
        const Amplitude a(std::sqrt(link_gain_h(c, Amplitude(x)).value()));
        CHECK_THAT(invert_link_gain(c, a, p_t).value(), WithinRel(x, 1e-12));
    }
    CHECK_THROWS_AS(invert_link_gain(c, Amplitude(100.0), p_t), domain_error);
    CHECK_THROWS_AS(invert_link_gain(c, Amplitude(1.0), PowerW(0.0)), domain_error);
}

TEST_CASE("channel physics validation", "[link]")
{
    CHECK_THROWS_AS(link_gain_h(physics(200.0, 0.0), Amplitude(1.0)), domain_error);
    CHECK_THROWS_AS(link_gain_h(physics(200.0, 1.0), Amplitude(1.0)), domain_error);
    CHECK_THROWS_AS(link_gain_h(physics(200.0, 0.01, 1.5), Amplitude(1.0)), domain_error);
    CHECK_THROWS_AS(link_gain_h(physics(200.0, 0.01, 0.0), Amplitude(1.0)), domain_error);
    CHECK(link_gain_h(physics(200.0, 0.01, 1.0), Amplitude(1.0)).value() > 0.0);
    CHECK_THROWS_AS(link_gain_h(physics(200.0), Amplitude(0.0)), domain_error);
}
