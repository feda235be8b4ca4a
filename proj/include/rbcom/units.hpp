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

#ifndef RBCOM_UNITS_HPP
#define RBCOM_UNITS_HPP

#include "rbcom/error.hpp"

#include <cmath>
#include <compare>
#include <string>

namespace rbcom {

/// Non-negative finite scalar tagged with its physical meaning. Quantities
/// with different tags do not mix; construct a new one explicitly.
template <typename Tag>
class quantity {
public:
    using tag_type = Tag;

    constexpr quantity() noexcept = default;

    explicit quantity(double value) : value_(checked(value)) {}

    constexpr double value() const noexcept { return value_; }

    friend constexpr auto operator<=>(const quantity&, const quantity&) = default;

    friend quantity operator+(quantity a, quantity b) { return quantity(a.value_ + b.value_); }
    friend quantity operator*(quantity a, double k) { return quantity(a.value_ * k); }
    friend quantity operator*(double k, quantity a) { return quantity(a.value_ * k); }

private:
    static double checked(double v)
    {
        if (!std::isfinite(v) || v < 0.0)
            throw domain_error(std::string(Tag::name) + " must be finite and non-negative, got " +
                               std::to_string(v));
        return v;
    }

    double value_ = 0.0;
};

struct power_tag { static constexpr const char* name = "power [W]"; };
struct amplitude_tag { static constexpr const char* name = "amplitude [sqrt(W)]"; };
struct intensity_tag { static constexpr const char* name = "intensity [W/m^2]"; };
struct ratio_tag { static constexpr const char* name = "ratio"; };

using PowerW = quantity<power_tag>;
using Amplitude = quantity<amplitude_tag>;
using IntensityWm2 = quantity<intensity_tag>;

/// Dimensionless fraction. Range limits beyond non-negativity are checked
/// where the ratio is used.
using Ratio = quantity<ratio_tag>;

inline PowerW dbm_to_watts(double dbm)
{
    if (!std::isfinite(dbm))
        throw domain_error("power in dBm must be finite");
    return PowerW(std::pow(10.0, (dbm - 30.0) / 10.0));
}

inline double watts_to_dbm(PowerW p)
{
    if (p.value() <= 0.0)
        throw domain_error("zero power has no dBm representation");
    return 10.0 * std::log10(p.value()) + 30.0;
}

} // namespace rbcom

#endif
