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

#ifndef RBCOM_LINK_GAIN_HPP
#define RBCOM_LINK_GAIN_HPP

#include "rbcom/error.hpp"
#include "rbcom/gain_medium.hpp"
#include "rbcom/units.hpp"

#include <cmath>
#include <string>

namespace rbcom {

/// Everything the round-trip link gain depends on. Both ends use the same
/// gain medium and pump power, and the return path has the same loss as
/// the forward path.
struct ChannelPhysics {
    GainMedium medium;
    PowerW pump_power{0.0};
    Ratio split_ratio{0.01};
    Ratio link_loss{0.5};

    void validate() const
    {
        medium.validate();
        const double a = split_ratio.value();
        const double d = link_loss.value();
        if (!(a > 0.0 && a < 1.0))
            throw domain_error("splitting ratio must lie in (0, 1), got " + std::to_string(a));
        if (!(d > 0.0 && d <= 1.0))
            throw domain_error("link loss fraction must lie in (0, 1], got " + std::to_string(d));
    }
};

/// Intermediate intensities of one round trip, transmitter -> receiver ->
/// transmitter, for a transmitted amplitude x.
struct RoundTrip {
    double receiver_in = 0.0;     // after the receiver splitter
    double receiver_out = 0.0;    // after the receiver gain medium
    double transmitter_in = 0.0;  // after the return path loss
    double transmitter_out = 0.0; // after the transmitter gain medium
    double power = 0.0;           // transmitter_out * S_0
};

inline RoundTrip round_trip(const ChannelPhysics& c, Amplitude x)
{
    c.validate();
    if (!(x.value() > 0.0))
        throw domain_error("transmitted amplitude must be positive");
    const double s0 = c.medium.cross_section();
    const double alpha = c.split_ratio.value();
    const double delta = c.link_loss.value();

    RoundTrip rt;
    rt.receiver_in = (1.0 - alpha) * delta * x.value() * x.value() / s0;
    rt.receiver_out = output_intensity(c.medium, c.pump_power, IntensityWm2(rt.receiver_in)).value();
    rt.transmitter_in = delta * rt.receiver_out;
    rt.transmitter_out =
        output_intensity(c.medium, c.pump_power, IntensityWm2(rt.transmitter_in)).value();
    rt.power = rt.transmitter_out * s0;
    return rt;
}

/// Power [W] arriving back at the modulator one frame after amplitude x was
/// transmitted. Strictly increasing in x.
inline PowerW link_gain_h(const ChannelPhysics& c, Amplitude x)
{
    return PowerW(round_trip(c, x).power);
}

/// h(x) / x^2; strictly decreasing in x.
inline double gain_ratio(const ChannelPhysics& c, Amplitude x)
{
    return link_gain_h(c, x).value() / (x.value() * x.value());
}

/// Supremum of gain_ratio, reached as x -> 0: (1-alpha) delta^2 exp(2 g).
inline double small_signal_gain_ratio(const ChannelPhysics& c)
{
    const double g = gain_exponent(c.medium, c.pump_power);
    const double d = c.link_loss.value();
    return (1.0 - c.split_ratio.value()) * d * d * std::exp(2.0 * g);
}

/// Pre-gain amplitude x with sqrt(h(x)) = a, searched on (0, sqrt(p_t)].
inline Amplitude invert_link_gain(const ChannelPhysics& c, Amplitude a, PowerW p_t)
{
    c.validate();
    if (!(p_t.value() > 0.0))
        throw domain_error("stable power must be positive to invert the link gain");
    const double root_pt = std::sqrt(p_t.value());
    double lo = 1e-12 * root_pt;
    double hi = root_pt * (1.0 + 1e-9);
    const double target = a.value() * a.value();
    const double h_lo = link_gain_h(c, Amplitude(lo)).value();
    const double h_hi = link_gain_h(c, Amplitude(hi)).value();
    if (!(target > h_lo && target <= h_hi))
        throw domain_error("amplitude " + std::to_string(a.value()) +
                           " outside achievable interval (" + std::to_string(std::sqrt(h_lo)) +
                           ", " + std::to_string(std::sqrt(h_hi)) + "]");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            return Amplitude(mid);
        if (link_gain_h(c, Amplitude(mid)).value() < target)
            lo = mid;
        else
            hi = mid;
    }
    return Amplitude(0.5 * (lo + hi));
}

} // namespace rbcom

#endif
