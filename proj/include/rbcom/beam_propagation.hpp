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

#ifndef RBCOM_BEAM_PROPAGATION_HPP
#define RBCOM_BEAM_PROPAGATION_HPP

#include "rbcom/error.hpp"
#include "rbcom/units.hpp"

#include <cmath>
#include <numbers>

namespace rbcom {

/// Free-space geometry of the resonant beam between the two retroreflectors.
/// All fields are SI: metres, radians, square metres.
struct BeamGeometry {
    double wavelength = 1064e-9;
    double diffraction_angle = 0.2e-3;
    double distance = 0.0;
    double receiver_area = 0.0;

    void validate() const
    {
        if (!(wavelength > 0.0) || !std::isfinite(wavelength))
            throw domain_error("wavelength must be positive");
        if (!(diffraction_angle > 0.0) || !std::isfinite(diffraction_angle))
            throw domain_error("diffraction angle must be positive");
        if (!(distance >= 0.0) || !std::isfinite(distance))
            throw domain_error("link distance must be non-negative");
        if (!(receiver_area > 0.0) || !std::isfinite(receiver_area))
            throw domain_error("receiver aperture area must be positive");
    }
};

/// Beam waist radius [m] implied by the far-field diffraction angle.
inline double waist_radius(const BeamGeometry& g)
{
    g.validate();
    return g.wavelength / (std::numbers::pi * g.diffraction_angle);
}

/// Squared Gaussian spot radius [m^2] at the receiver plane.
inline double spot_radius_sq(const BeamGeometry& g)
{
    const double w0 = waist_radius(g);
    const double w0_sq = w0 * w0;
    const double z = g.wavelength * g.distance / (std::numbers::pi * w0_sq);
    return w0_sq * (1.0 + z * z);
}

/// Fraction of the transmitted Gaussian beam power that lands on the
/// receiver aperture. Strictly decreasing in distance.
inline Ratio link_loss(const BeamGeometry& g)
{
    g.validate();
    const double pi = std::numbers::pi;
    const double phi_sq = g.diffraction_angle * g.diffraction_angle;
    const double denom = g.wavelength * g.wavelength / (pi * phi_sq) +
                         pi * phi_sq * g.distance * g.distance;
    return Ratio(-std::expm1(-2.0 * g.receiver_area / denom));
}

inline double link_loss_db(const BeamGeometry& g)
{
    return 10.0 * std::log10(link_loss(g).value());
}

} // namespace rbcom

#endif
