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

#ifndef RBCOM_CAPACITY_HPP
#define RBCOM_CAPACITY_HPP

#include "rbcom/error.hpp"
#include "rbcom/units.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>

namespace rbcom {

/// Peak received signal power against the noise variance.
struct PeakSnrPoint {
    PowerW p_peak{0.0};
    PowerW sigma2{1.0};

    double snr() const
    {
        if (!(sigma2.value() > 0.0))
            throw domain_error("noise variance must be positive");
        return p_peak.value() / sigma2.value();
    }
};

struct CapacityBounds {
    double c_up = 0.0;  // bits per channel use
    double c_low = 0.0; // bits per channel use
    std::uint64_t constellation_size = 2;
};

/// Peak power of the received amplitude interval: (1-mu1)^2 alpha delta a^2 / 4.
inline PowerW peak_power(Amplitude a, Ratio mu1, Ratio alpha, Ratio delta)
{
    const double m = mu1.value();
    if (!(m > 0.0 && m <= 1.0))
        throw domain_error("minimum information symbol must lie in (0, 1]");
    if (!(alpha.value() > 0.0 && alpha.value() < 1.0))
        throw domain_error("splitting ratio must lie in (0, 1)");
    if (!(delta.value() > 0.0 && delta.value() <= 1.0))
        throw domain_error("link loss fraction must lie in (0, 1]");
    const double span = 1.0 - m;
    return PowerW(span * span * alpha.value() * delta.value() * a.value() * a.value() / 4.0);
}

/// Peak SNR above which the high-SNR branch of the upper bound applies.
inline double upper_bound_branch_snr()
{
    const double pe = std::numbers::pi * std::numbers::e;
    const double k = 1.0 - 2.0 / pe;
    return 8.0 / (pe * k * k);
}

/// Upper bound [bits/use] on the amplitude-constrained AWGN capacity.
inline double capacity_upper(const PeakSnrPoint& pt)
{
    const double snr = pt.snr();
    if (snr > upper_bound_branch_snr())
        return std::log2(1.0 + std::sqrt(2.0 * snr / (std::numbers::pi * std::numbers::e)));
    return 0.5 * std::log1p(snr) / std::numbers::ln2;
}

/// Number of equally spaced input points used by the lower bound.
inline std::uint64_t constellation_size(const PeakSnrPoint& pt)
{
    const double snr = pt.snr();
    if (snr < 2.0)
        return 2;
    if (snr < 3.5)
        return 3;
    return static_cast<std::uint64_t>(std::ceil(snr));
}

/// Density of Y = X + N with X uniform over `count` equally spaced points on
/// [-half_width, half_width] and N standard normal. Lengths are in units of
/// the noise standard deviation.
///
/// Components whose weight is below exp(-window^2 / 2) times the nearest
/// one are dropped. When more than
/// `max_exact_terms` components fall inside the window the sum is replaced
/// by its midpoint-rule integral with the first Euler-Maclaurin correction;
/// the dropped terms are O(spacing^4) relative.
class MixtureDensity {
public:
    static constexpr double window = 12.0;
    static constexpr std::uint64_t max_exact_terms = 4096;

    MixtureDensity(double half_width, std::uint64_t count)
        : half_width_(half_width), count_(count)
    {
        if (!(half_width >= 0.0) || !std::isfinite(half_width))
            throw domain_error("mixture half width must be finite and non-negative");
        if (count == 0)
            throw domain_error("mixture needs at least one component");
        if (count == 1 || half_width == 0.0) {
            count_ = 1;
            half_width_ = 0.0;
            spacing_ = 0.0;
        } else {
            spacing_ = 2.0 * half_width / static_cast<double>(count - 1);
        }
    }

    double half_width() const noexcept { return half_width_; }
    std::uint64_t count() const noexcept { return count_; }
    double spacing() const noexcept { return spacing_; }

    double position(std::uint64_t i) const noexcept
    {
        if (count_ == 1)
            return 0.0;
        if (i == count_ - 1)
            return half_width_;
        return -half_width_ + static_cast<double>(i) * spacing_;
    }

    double log_density(double y) const
    {
        y = std::abs(y); // the constellation is symmetric
        if (count_ == 1)
            return -0.5 * y * y - log_sqrt_2pi;

        // Terms are kept within `window` of the nearest component, which
        // for y beyond the edge is further than `window` from y itself.
        const double gap = std::max(0.0, y - half_width_);
        const double reach = std::sqrt(gap * gap + window * window);
        const double first = std::ceil((y - reach + half_width_) / spacing_);
        const double last = std::floor((y + reach + half_width_) / spacing_);
        const double max_index = static_cast<double>(count_ - 1);
        double lo = std::clamp(first, 0.0, max_index);
        double hi = std::clamp(last, 0.0, max_index);
        if (lo > hi) {
            const double nearest = std::clamp(std::round((y + half_width_) / spacing_), 0.0, max_index);
            lo = hi = nearest;
        }
        if (hi - lo + 1.0 > static_cast<double>(max_exact_terms))
            return continuum_log_density(y);
        return exact_log_density(y, static_cast<std::uint64_t>(lo), static_cast<std::uint64_t>(hi));
    }

    double density(double y) const { return std::exp(log_density(y)); }

private:
    static constexpr double log_sqrt_2pi = 0.91893853320467274178;

    double exact_log_density(double y, std::uint64_t lo, std::uint64_t hi) const
    {
        double d_min = std::numeric_limits<double>::infinity();
        for (std::uint64_t i = lo; i <= hi; ++i)
            d_min = std::min(d_min, std::abs(y - position(i)));
        double acc = 0.0;
        for (std::uint64_t i = lo; i <= hi; ++i) {
            const double d = y - position(i);
            acc += std::exp(-0.5 * (d * d - d_min * d_min));
        }
        return -0.5 * d_min * d_min + std::log(acc) - std::log(static_cast<double>(count_)) -
               log_sqrt_2pi;
    }

    // y >= 0 here.
    double continuum_log_density(double y) const
    {
        const double a = -half_width_ - 0.5 * spacing_;
        const double b = half_width_ + 0.5 * spacing_;
        const double u = y - b; // <= y - a
        const double v = y - a;
        const double tail = 0.5 * (std::erfc(u / std::numbers::sqrt2) - std::erfc(v / std::numbers::sqrt2));
        auto pdf = [](double t) { return std::exp(-0.5 * t * t - log_sqrt_2pi); };
        // d/dt phi(y - t) = (y - t) phi(y - t)
        const double correction = spacing_ * spacing_ / 24.0 * (u * pdf(u) - v * pdf(v));
        const double sum = tail - correction;
        return std::log(sum) - std::log(static_cast<double>(count_) * spacing_);
    }

    double half_width_;
    std::uint64_t count_;
    double spacing_ = 0.0;
};

/// Integrals of a mixture density over the real line, in nats.
struct MixtureIntegrals {
    double mass = 0.0;
    double entropy = 0.0;
    double entropy_error = 0.0;
};

namespace detail {

// Bisects until the Gauss-Kronrod error estimate of each piece is below an
// absolute tolerance. Boost's adaptive mode uses a relative one, which never
// settles between well separated components where the integral underflows.
template <typename F>
double integrate_absolute(F& f, double a, double b, double tol, int depth, double& error)
{
    using rule = boost::math::quadrature::gauss_kronrod<double, 15>;
    double e = 0.0;
    const double v = rule::integrate(f, a, b, 0, 0.0, &e);
    if (e <= tol || depth == 0) {
        error += e;
        return v;
    }
    const double m = 0.5 * (a + b);
    return integrate_absolute(f, a, m, 0.5 * tol, depth - 1, error) +
           integrate_absolute(f, m, b, 0.5 * tol, depth - 1, error);
}

} // namespace detail

/// Normalisation and differential entropy of `mix` by 15-point
/// Gauss-Kronrod quadrature on [-(w + 10), w + 10], using symmetry.
inline MixtureIntegrals integrate_mixture(const MixtureDensity& mix, double rel_tol = 1e-8)
{
    const double reach = mix.half_width() + 10.0;
    const std::size_t panels =
        static_cast<std::size_t>(std::clamp(std::ceil(reach), 4.0, 2048.0));
    const double width = reach / static_cast<double>(panels);
    constexpr double panel_tol = 1e-13;
    constexpr int max_depth = 24;

    auto neg_f_log_f = [&](double y) {
        const double lf = mix.log_density(y);
        const double f = std::exp(lf);
        return f > 0.0 ? -f * lf : 0.0;
    };
    auto f = [&](double y) { return mix.density(y); };

    MixtureIntegrals out;
    double mass_error = 0.0;
    for (std::size_t k = 0; k < panels; ++k) {
        const double a = width * static_cast<double>(k);
        const double b = k + 1 == panels ? reach : a + width;
        out.entropy += detail::integrate_absolute(neg_f_log_f, a, b, panel_tol, max_depth, out.entropy_error);
        out.mass += detail::integrate_absolute(f, a, b, panel_tol, max_depth, mass_error);
    }
    out.entropy *= 2.0;
    out.entropy_error *= 2.0;
    out.mass *= 2.0;
    mass_error *= 2.0;
    if (out.entropy_error > rel_tol * std::max(1.0, std::abs(out.entropy)) ||
        mass_error > rel_tol)
        throw numerical_failure("mixture entropy quadrature did not reach tolerance " +
                                    std::to_string(rel_tol),
                                -reach, reach);
    return out;
}

/// Mutual information [bits/use] of a uniform input over `count` equally
/// spaced points spanning +-sqrt(snr) noise standard deviations.
inline double uniform_constellation_information(double snr, std::uint64_t count)
{
    if (!(snr >= 0.0) || !std::isfinite(snr))
        throw domain_error("peak SNR must be finite and non-negative");
    const MixtureDensity mix(std::sqrt(snr), count);
    const double noise_entropy = 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e);
    const double nats = integrate_mixture(mix).entropy - noise_entropy;
    return std::max(0.0, nats / std::numbers::ln2);
}

/// Lower bound [bits/use]: information rate of the equally spaced
/// constellation of constellation_size() points.
inline double capacity_lower(const PeakSnrPoint& pt)
{
    return uniform_constellation_information(pt.snr(), constellation_size(pt));
}

inline CapacityBounds capacity_bounds(const PeakSnrPoint& pt)
{
    CapacityBounds b;
    b.c_up = capacity_upper(pt);
    b.constellation_size = constellation_size(pt);
    b.c_low = capacity_lower(pt);
    return b;
}

} // namespace rbcom

#endif
