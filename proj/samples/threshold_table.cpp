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

// Link loss and pumping threshold against distance for a 3 mm aperture.

#include "rbcom/beam_propagation.hpp"
#include "rbcom/csv.hpp"
#include "rbcom/gain_medium.hpp"
#include "rbcom/resonance.hpp"

#include <iostream>
#include <numbers>

int main()
{
    const double r0 = 3e-3;
    rbcom::BeamGeometry geo;
    geo.diffraction_angle = 0.2e-3;
    geo.receiver_area = std::numbers::pi * r0 * r0;
    const rbcom::GainMedium medium;

    std::cout << "L[m],delta[dimensionless],pth[W]\n";
    for (int l = 0; l <= 30; l += 5) {
        geo.distance = l;
        const auto d = rbcom::link_loss(geo);
        std::cout << l << ',' << rbcom::csv::number(d.value()) << ','
                  << rbcom::csv::number(rbcom::threshold_power(medium, d).value()) << '\n';
    }
}
