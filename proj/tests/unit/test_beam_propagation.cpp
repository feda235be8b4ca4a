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

#include "rbcom/beam_propagation.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

using namespace rbcom;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

BeamGeometry geometry(double distance, double phi, double r0)
{
    BeamGeometry g;
    g.diffraction_angle = phi;
    g.distance = distance;
    g.receiver_area = std::numbers::pi * r0 * r0;
    return g;
}

// Independent route: captured fraction of a circular aperture of radius r in
// a Gaussian beam of radius w is 1 - exp(-2 r^2 / w^2), with w(L) taken from
// the far-field half-angle w^2 = w0^2 + (phi L)^2.
double aperture_oracle(double distance, double phi, double r0)
{
    const double w0 = 1064e-9 / (std::numbers::pi * phi);
    const double w_sq = w0 * w0 + phi * phi * distance * distance;
    return 1.0 - std::exp(-2.0 * r0 * r0 / w_sq);
}

} // namespace

TEST_CASE("beam waist and spot radius", "[beam]")
{
    CHECK_THAT(waist_radius(geometry(0, 0.2e-3, 3e-3)), WithinRel(1.6934085944977664e-3, 1e-14));
    CHECK_THAT(waist_radius(geometry(0, 0.3e-3, 3e-3)), WithinRel(1.1289390629985109e-3, 1e-14));
    CHECK_THAT(spot_radius_sq(geometry(15, 0.2e-3, 3e-3)), WithinRel(1.1867632667918901e-5, 1e-13));
    CHECK_THAT(spot_radius_sq(geometry(0, 0.2e-3, 3e-3)),
               WithinRel(std::pow(1.6934085944977664e-3, 2), 1e-13));
}

TEST_CASE("link loss frozen values", "[beam]")
{
    // 40-digit evaluations, frozen.
    CHECK_THAT(link_loss(geometry(15, 0.2e-3, 3e-3)).value(), WithinRel(0.78057185632898955, 1e-13));
    CHECK_THAT(link_loss(geometry(5, 0.2e-3, 3e-3)).value(), WithinRel(0.99047666057997593, 1e-13));
    CHECK_THAT(link_loss(geometry(15, 0.3e-3, 3e-3)).value(), WithinRel(0.56667022103758064, 1e-13));
    CHECK_THAT(link_loss(geometry(15, 0.2e-3, 5e-3)).value(), WithinRel(0.98520017876612057, 1e-13));
    CHECK_THAT(link_loss(geometry(30, 0.3e-3, 3e-3)).value(), WithinRel(0.19650137677972668, 1e-13));
    CHECK_THAT(link_loss_db(geometry(15, 0.2e-3, 3e-3)), WithinRel(-1.0758711134501167, 1e-12));
}

TEST_CASE("link loss agrees with the aperture-capture oracle", "[beam][property]")
{
    for (double phi : {0.1e-3, 0.2e-3, 0.3e-3, 1e-3})
        for (double r0 : {1e-3, 3e-3, 5e-3})
            for (double L = 0.0; L <= 60.0; L += 0.5)
                REQUIRE_THAT(link_loss(geometry(L, phi, r0)).value(),
                             WithinAbs(aperture_oracle(L, phi, r0), 1e-14));
}

TEST_CASE("link loss is strictly decreasing in distance", "[beam][property]")
{
    for (double phi : {0.2e-3, 0.3e-3}) {
        for (double r0 : {3e-3, 5e-3}) {
            double prev = link_loss(geometry(0.0, phi, r0)).value();
            for (double L = 0.25; L <= 200.0; L += 0.25) {
                const double d = link_loss(geometry(L, phi, r0)).value();
                REQUIRE(d > 0.0);
                // Close to the waist a wide rod captures the whole beam and
                // the fraction rounds to exactly one.
                if (prev < 1.0)
                    REQUIRE(d < prev);
                else
                    REQUIRE(d <= prev);
                prev = d;
            }
            CHECK(prev < 0.05);
        }
    }
}

TEST_CASE("larger aperture and narrower beam capture more", "[beam][property]")
{
    for (double L = 1.0; L <= 40.0; L += 1.0)
        CHECK(link_loss(geometry(L, 0.2e-3, 5e-3)) > link_loss(geometry(L, 0.2e-3, 3e-3)));
    // The wider waist of the narrower beam costs capture at short range;
    // the spot sizes cross where (0.3^2 - 0.2^2) L^2 mrad^2 = w0(0.2)^2 - w0(0.3)^2.
    const double w02 = std::pow(1064e-9 / (std::numbers::pi * 0.2e-3), 2);
    const double w03 = std::pow(1064e-9 / (std::numbers::pi * 0.3e-3), 2);
    const double crossover = std::sqrt((w02 - w03) / (0.09e-6 - 0.04e-6));
    CHECK_THAT(crossover, WithinRel(5.66, 1e-2));
    for (double L = 0.0; L <= 40.0; L += 0.5) {
        const auto narrow = link_loss(geometry(L, 0.2e-3, 3e-3));
        const auto wide = link_loss(geometry(L, 0.3e-3, 3e-3));
        if (L > crossover)
            CHECK(narrow > wide);
        else
            CHECK(narrow < wide);
    }
}

TEST_CASE("geometry validation", "[beam]")
{
    CHECK_THROWS_AS(link_loss(geometry(-1.0, 0.2e-3, 3e-3)), domain_error);
    CHECK_THROWS_AS(link_loss(geometry(1.0, 0.0, 3e-3)), domain_error);
    BeamGeometry g = geometry(1.0, 0.2e-3, 3e-3);
    g.receiver_area = 0.0;
    CHECK_THROWS_AS(link_loss(g), domain_error);
}
