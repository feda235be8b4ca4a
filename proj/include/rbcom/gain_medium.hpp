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

#ifndef RBCOM_GAIN_MEDIUM_HPP
#define RBCOM_GAIN_MEDIUM_HPP

#include "rbcom/error.hpp"
#include "rbcom/units.hpp"

#include <cmath>
#include <numbers>

namespace rbcom {

/// Pumped rod gain medium. Only the product of rod length and small-signal
/// gain coefficient enters the saturated gain, so the rod length is not
/// modelled.
struct GainMedium {
    IntensityWm2 saturation_intensity{1.2e7};
    Ratio pump_efficiency{0.7};
    double rod_radius = 3e-3; // [m]

    double cross_section() const noexcept { return std::numbers::pi * rod_radius * rod_radius; }

    void validate() const
    {
        if (!(saturation_intensity.value() > 0.0))
            throw domain_error("saturation intensity must be positive");
        if (!(pump_efficiency.value() > 0.0) || pump_efficiency.value() > 1.0)
            throw domain_error("pump efficiency must lie in (0, 1]");
        if (!(rod_radius > 0.0) || !std::isfinite(rod_radius))
            throw domain_error("rod radius must be positive");
    }
};

/// Twice the small-signal round-trip gain exponent, 2*eta*P_in / (I_s*S_0).
/// The saturated single-pass power gain is bounded above by exp() of this.
inline double gain_exponent(const GainMedium& m, PowerW p_in)
{
    m.validate();
    return 2.0 * m.pump_efficiency.value() * p_in.value() /
           (m.saturation_intensity.value() * m.cross_section());
}

/// Input intensity consistent with power gain `gain` under the saturated
/// gain relation. Strictly decreasing in `gain` on (1, exp(gain_exponent)).
inline double gain_equation_rhs(const GainMedium& m, PowerW p_in, double gain)
{
    const double g = gain_exponent(m, p_in);
    const double t = std::log(gain);
    return 0.5 * m.saturation_intensity.value() * (g - t) / std::expm1(t);
}

namespace detail {

// Solves i_in * (e^t - 1) = I_s/2 * (g - t) for the log-gain t in (0, g).
// The left side increases and the right side decreases in t, so the root is
// unique and bisection on [0, g] always brackets it.
inline double solve_log_gain(double i_in, double i_sat, double g)
{
    double lo = 0.0;
    double hi = g;
    constexpr int max_iterations = 200;
    for (int it = 0; it < max_iterations; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi || hi - lo <= 4.0 * 2.220446049250313e-16 * hi)
            return 0.5 * (lo + hi);
        const double f = i_in * std::expm1(mid) - 0.5 * i_sat * (g - mid);
        if (f < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    throw numerical_failure("gain equation bisection did not converge", std::exp(lo), std::exp(hi));
}

} // namespace detail

/// Saturated power gain G of the medium for input intensity `i_in`.
///
/// Returns the unique G in (1, exp(gain_exponent)) satisfying
/// i_in = (2*eta*P_in - I_s*S_0*ln G) / (2*(G - 1)*S_0). The root is found
/// by bisection in ln G; G = 1 is returned for zero pump power.
inline double power_gain(const GainMedium& m, PowerW p_in, IntensityWm2 i_in)
{
    m.validate();
    if (!(i_in.value() > 0.0))
        throw domain_error("input intensity must be positive");
    if (p_in.value() == 0.0)
        return 1.0;
    const double g = gain_exponent(m, p_in);
    return std::exp(detail::solve_log_gain(i_in.value(), m.saturation_intensity.value(), g));
}

/// Output intensity G(i_in) * i_in; strictly increasing in i_in.
inline IntensityWm2 output_intensity(const GainMedium& m, PowerW p_in, IntensityWm2 i_in)
{
    return IntensityWm2(power_gain(m, p_in, i_in) * i_in.value());
}

} // namespace rbcom

#endif
