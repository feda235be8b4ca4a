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

#ifndef RBCOM_RESONANCE_HPP
#define RBCOM_RESONANCE_HPP

#include "rbcom/error.hpp"
#include "rbcom/gain_medium.hpp"
#include "rbcom/link_gain.hpp"
#include "rbcom/units.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>

namespace rbcom {

/// Self-consistent transmitter power where one round trip returns exactly
/// the power that was sent.
struct StablePoint {
    PowerW p_t;
    PowerW bracket_low;  // analytic lower bound
    PowerW bracket_high; // analytic upper bound
    double residual = 0.0; // |h(sqrt(p_t)) / p_t - 1|
    std::size_t iterations = 0;
};

/// Pump power [W] below which no resonant beam can form.
inline PowerW threshold_power(const GainMedium& m, Ratio delta)
{
    m.validate();
    const double d = delta.value();
    if (!(d > 0.0 && d <= 1.0))
        throw domain_error("link loss fraction must lie in (0, 1]");
    const double p = -m.saturation_intensity.value() * m.cross_section() * std::log(d) /
                     (2.0 * m.pump_efficiency.value());
    return PowerW(std::max(0.0, p)); // argument order turns -0 into +0
}

/// Exclusive upper limit u of the splitting ratio; resonance needs
/// 0 < alpha < u. Non-positive u means the pump is at or below threshold.
inline double alpha_upper_bound(const GainMedium& m, PowerW p_in, Ratio delta)
{
    const double d = delta.value();
    if (!(d > 0.0 && d <= 1.0))
        throw domain_error("link loss fraction must lie in (0, 1]");
    const double g = gain_exponent(m, p_in);
    return -std::expm1(-2.0 * g - 2.0 * std::log(d));
}

/// Analytic lower and upper bounds on the stable power.
inline std::pair<PowerW, PowerW> stable_power_bounds(const ChannelPhysics& c)
{
    c.validate();
    const double u = alpha_upper_bound(c.medium, c.pump_power, c.link_loss);
    const double alpha = c.split_ratio.value();
    if (!(alpha < u))
        throw domain_error("splitting ratio " + std::to_string(alpha) +
                           " is outside the resonance region (0, " + std::to_string(u) + ")");
    const double pump = 2.0 * c.medium.pump_efficiency.value() * c.pump_power.value();
    const double is_s0 = c.medium.saturation_intensity.value() * c.medium.cross_section();
    const double d = c.link_loss.value();
    const double lower = (pump + (std::log(d) + std::log1p(-alpha)) * is_s0) /
                         (2.0 * (1.0 - (1.0 - alpha) * d));
    double upper = 0.0;
    if (d < 1.0) {
        upper = (pump + is_s0 * std::log(d)) / (2.0 * (1.0 - d));
    } else {
        // A lossless link has no finite analytic upper bound; double a
        // trial power until the round-trip gain drops below one.
        upper = std::max(1.0, 2.0 * lower);
        for (int grow = 0; grow < 1000 && !(gain_ratio(c, Amplitude(std::sqrt(upper))) < 1.0); ++grow)
            upper *= 2.0;
    }
    return {PowerW(std::max(0.0, lower)), PowerW(upper)};
}

/// Stable power P_t solving h(sqrt(P_t)) = P_t.
///
/// Bisection on h(sqrt(P))/P - 1, which is strictly decreasing and positive
/// near zero, bracketed by stable_power_bounds().
inline StablePoint stable_power(const ChannelPhysics& c)
{
    const auto [low_bound, high_bound] = stable_power_bounds(c);
    auto excess = [&](double p) { return gain_ratio(c, Amplitude(std::sqrt(p))) - 1.0; };
    const double upper = high_bound.value();

    // The excess is positive as P -> 0, so a zero lower bound is replaced by
    // a small positive power, moved further down if the link loss is so
    // close to one that the upper bound is astronomically large.
    const bool zero_floor = !(low_bound.value() > 0.0);
    double lo = zero_floor ? 1e-9 * upper : low_bound.value();
    double f_lo = excess(lo);
    for (int shrink = 0; zero_floor && !(f_lo > 0.0) && shrink < 30; ++shrink) {
        lo *= 1e-3;
        f_lo = excess(lo);
    }
    double hi = upper;
    double f_hi = excess(hi);
    for (int grow = 0; grow < 10 && !(f_lo > 0.0 && f_hi < 0.0); ++grow) {
        if (!(f_lo > 0.0)) {
            lo *= 0.99;
            f_lo = excess(lo);
        }
        if (!(f_hi < 0.0)) {
            hi *= 1.01;
            f_hi = excess(hi);
        }
    }
    if (!(f_lo > 0.0 && f_hi < 0.0))
        throw numerical_failure("stable power not bracketed: excess gain " + std::to_string(f_lo) +
                                    " at low end, " + std::to_string(f_hi) + " at high end",
                                lo, hi);

    constexpr std::size_t max_iterations = 200;
    const double width_tol = 1e-9 * upper;
    for (std::size_t it = 1; it <= max_iterations; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double f = excess(mid);
        const bool collapsed = mid <= lo || mid >= hi;
        if ((hi - lo < width_tol && std::abs(f) < 1e-8) || collapsed || f == 0.0) {
            if (std::abs(f) >= 1e-8)
                throw numerical_failure("stable power residual " + std::to_string(f) +
                                            " above tolerance",
                                        lo, hi);
            return StablePoint{PowerW(mid), low_bound, high_bound, std::abs(f), it};
        }
        if (f > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    throw numerical_failure("stable power bisection did not converge", lo, hi);
}

} // namespace rbcom

#endif
