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

// Optimise a 15 m link on a coarse grid, then run the compensated channel
// and compare the measured mutual information with the lower bound.

#include "rbcom/channel_sim.hpp"
#include "rbcom/optimizer.hpp"

#include <iostream>
#include <numbers>

int main()
{
    rbcom::OptimizerConfig cfg;
    cfg.geometry.diffraction_angle = 0.2e-3;
    cfg.geometry.distance = 15.0;
    cfg.geometry.receiver_area = std::numbers::pi * 3e-3 * 3e-3;
    cfg.alpha_steps = 100;
    cfg.amplitude_steps = 100;

    const auto opt = rbcom::optimize(cfg);
    if (!opt.feasible()) {
        std::cerr << "no resonant beam at this distance\n";
        return 1;
    }
    std::cout << "alpha* = " << opt.alpha_star.value() << ", C_up* = " << opt.c_up_star
              << " bits, C_low* = " << opt.c_low_star << " bits\n";

    const auto scheme = rbcom::compensation_scheme(opt, cfg.noise_variance, 1);
    const auto phys = rbcom::optimum_physics(cfg, opt);
    const auto trace = rbcom::simulate(scheme, phys, cfg.noise_variance, 20000, 7);
    std::cout << "measured mutual information "
              << rbcom::empirical_mutual_information(trace, scheme, phys, cfg.noise_variance) << " bits over "
              << trace.samples.size() << " symbols\n";
}
