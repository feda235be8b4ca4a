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

#ifndef RBCOM_CHANNEL_SIM_HPP
#define RBCOM_CHANNEL_SIM_HPP

#include "rbcom/capacity.hpp"
#include "rbcom/error.hpp"
#include "rbcom/link_gain.hpp"
#include "rbcom/optimizer.hpp"
#include "rbcom/units.hpp"

#include <cmath>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

namespace rbcom {

/// M equally spaced information symbols on [lowest, 1]. Values are computed
/// on demand so very large constellations cost nothing to hold.
class Constellation {
public:
    Constellation(double lowest, std::uint64_t size) : lowest_(lowest), size_(size)
    {
        if (!(lowest > 0.0 && lowest <= 1.0))
            throw domain_error("lowest information symbol must lie in (0, 1]");
        if (size < 2)
            throw domain_error("constellation needs at least two points");
    }

    std::uint64_t size() const noexcept { return size_; }
    double lowest() const noexcept { return lowest_; }

    double value(std::uint64_t i) const noexcept
    {
        if (i + 1 >= size_)
            return 1.0;
        return lowest_ + (1.0 - lowest_) * static_cast<double>(i) / static_cast<double>(size_ - 1);
    }

private:
    double lowest_;
    std::uint64_t size_;
};

/// Compensated amplitude modulation for N parallel slots per frame.
struct FrameScheme {
    Amplitude a{0.0};      // constant channel coefficient A
    Ratio mu1{0.0};        // lowest information symbol
    PowerW p_t{0.0};       // stable power before communication starts
    std::size_t n_symbols = 1;
    Constellation constellation{1.0, 2};
};

struct FrameSample {
    std::uint32_t frame = 0; // 1-based
    std::uint32_t slot = 0;  // 1-based
    double s = 0.0;
    double m = 0.0;
    double x = 0.0;
    double y = 0.0;
};

struct FrameTrace {
    std::size_t frames = 0;
    std::size_t slots = 0;
    std::uint64_t seed = 0;
    std::string generator;
    std::vector<FrameSample> samples; // frame-major

    const FrameSample& at(std::size_t frame, std::size_t slot) const
    {
        return samples.at((frame - 1) * slots + (slot - 1));
    }
};

/// Random source used by the simulators. Uniform variates take the top 53
/// bits of a 64-bit Mersenne Twister output; normal variates use the
/// Box-Muller transform, cosine branch only, two uniforms per variate.
class SimulationRng {
public:
    static constexpr const char* algorithm = "mt19937_64;u=(r>>11)*2^-53;normal=box-muller(cos)";

    explicit SimulationRng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    std::uint64_t index(std::uint64_t n)
    {
        const auto i = static_cast<std::uint64_t>(uniform() * static_cast<double>(n));
        return i < n ? i : n - 1;
    }

    double normal()
    {
        const double u1 = 1.0 - uniform(); // (0, 1]
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::mt19937_64 engine_;
};

/// Scheme driven by an optimizer result: A, mu1 and P_t from the optimum
/// and the uniform constellation sized for its peak SNR.
inline FrameScheme compensation_scheme(const Optimum& opt, PowerW sigma2, std::size_t n_symbols)
{
    const auto mod = modulation_parameters(opt);
    const auto size = constellation_size(PeakSnrPoint{opt.p_peak_star, sigma2});
    return FrameScheme{mod.a, mod.mu1, mod.p_t, n_symbols, Constellation(mod.mu1.value(), size)};
}

/// Channel physics at the optimizer's chosen splitting ratio.
inline ChannelPhysics optimum_physics(const OptimizerConfig& cfg, const Optimum& opt)
{
    if (!opt.feasible())
        throw domain_error("no resonant beam at this operating point");
    return ChannelPhysics{cfg.medium, cfg.pump_power, opt.alpha_star, opt.link_loss};
}

/// One step of the uncompensated echo channel: x_k = sqrt(h(x_{k-1})) m,
/// or sqrt(P_t) m in the first frame.
inline Amplitude raw_markov_step(const ChannelPhysics& c, std::optional<Amplitude> x_prev, Ratio m,
                                 PowerW p_t)
{
    if (!(m.value() > 0.0 && m.value() <= 1.0))
        throw domain_error("modulated symbol must lie in (0, 1]");
    if (!x_prev)
        return Amplitude(std::sqrt(p_t.value()) * m.value());
    return Amplitude(std::sqrt(link_gain_h(c, *x_prev).value()) * m.value());
}

/// Modulated symbol that cancels the echo so that the transmitted amplitude
/// becomes A * s_k. Throws scheme_infeasible when the compensation weight
/// A / sqrt(h(A s_{k-1})) exceeds one.
inline Ratio compensated_modulated_symbol(const FrameScheme& sch, const ChannelPhysics& c, Ratio s_k,
                                          std::optional<Ratio> s_prev, std::size_t frame = 0,
                                          std::size_t slot = 0)
{
    const double a = sch.a.value();
    const double coefficient = s_prev ? std::sqrt(link_gain_h(c, Amplitude(a * s_prev->value())).value())
                                      : std::sqrt(sch.p_t.value());
    double weight = a / coefficient;
    // Rounding of A * mu1 against the inverse of h may leave the boundary
    // weight a few ulp above one.
    if (weight > 1.0 + 1e-12)
        throw scheme_infeasible("compensation weight " + std::to_string(weight) +
                                    " exceeds one; the lowest information symbol is below A_hat / A",
                                frame, slot, weight);
    weight = std::min(weight, 1.0);
    return Ratio(weight * s_k.value());
}

/// Monte-Carlo run of the compensated channel. Information symbols are
/// i.i.d. uniform over the scheme's constellation in every slot, and the
/// received sample is y = sqrt(alpha delta) x + noise.
inline FrameTrace simulate(const FrameScheme& sch, const ChannelPhysics& c, PowerW sigma2, std::size_t k_frames,
                           std::uint64_t seed)
{
    c.validate();
    if (k_frames < 1 || sch.n_symbols < 1)
        throw domain_error("simulation needs at least one frame and one slot");
    if (!(sch.a.value() > 0.0) || sch.a.value() > std::sqrt(sch.p_t.value()) * (1.0 + 1e-12))
        throw domain_error("amplitude constant must lie in (0, sqrt(P_t)]");

    FrameTrace trace;
    trace.frames = k_frames;
    trace.slots = sch.n_symbols;
    trace.seed = seed;
    trace.generator = SimulationRng::algorithm;
    trace.samples.reserve(k_frames * sch.n_symbols);

    SimulationRng rng(seed);
    const double gain = std::sqrt(c.split_ratio.value() * c.link_loss.value());
    const double sigma = std::sqrt(sigma2.value());
    std::vector<double> s_prev(sch.n_symbols, 0.0);
    std::vector<double> x_prev(sch.n_symbols, 0.0);

    for (std::size_t k = 1; k <= k_frames; ++k) {
        for (std::size_t n = 1; n <= sch.n_symbols; ++n) {
            const double s = sch.constellation.value(rng.index(sch.constellation.size()));
            const bool first = k == 1;
            const Ratio m = compensated_modulated_symbol(
                sch, c, Ratio(s), first ? std::nullopt : std::optional<Ratio>(Ratio(s_prev[n - 1])), k, n);
            const Amplitude x = raw_markov_step(
                c, first ? std::nullopt : std::optional<Amplitude>(Amplitude(x_prev[n - 1])), m, sch.p_t);
            const double noise = sigma > 0.0 ? sigma * rng.normal() : 0.0;

            FrameSample sample;
            sample.frame = static_cast<std::uint32_t>(k);
            sample.slot = static_cast<std::uint32_t>(n);
            sample.s = s;
            sample.m = m.value();
            sample.x = x.value();
            sample.y = gain * x.value() + noise;
            trace.samples.push_back(sample);
            s_prev[n - 1] = s;
            x_prev[n - 1] = x.value();
        }
    }
    return trace;
}

/// Uncompensated echo channel driven by i.i.d. modulated symbols uniform on
/// [m_min, 1]. Noise-free; y is left at sqrt(alpha delta) x.
inline FrameTrace simulate_uncompensated(const ChannelPhysics& c, PowerW p_t, std::size_t n_slots,
                                         std::size_t k_frames, double m_min, std::uint64_t seed)
{
    if (!(m_min > 0.0 && m_min <= 1.0))
        throw domain_error("lowest modulated symbol must lie in (0, 1]");
    FrameTrace trace;
    trace.frames = k_frames;
    trace.slots = n_slots;
    trace.seed = seed;
    trace.generator = SimulationRng::algorithm;
    trace.samples.reserve(k_frames * n_slots);

    SimulationRng rng(seed);
    const double gain = std::sqrt(c.split_ratio.value() * c.link_loss.value());
    std::vector<double> x_prev(n_slots, 0.0);
    for (std::size_t k = 1; k <= k_frames; ++k) {
        for (std::size_t n = 1; n <= n_slots; ++n) {
            const double m = m_min + (1.0 - m_min) * rng.uniform();
            const Amplitude x = raw_markov_step(
                c, k == 1 ? std::nullopt : std::optional<Amplitude>(Amplitude(x_prev[n - 1])), Ratio(m), p_t);
            FrameSample sample;
            sample.frame = static_cast<std::uint32_t>(k);
            sample.slot = static_cast<std::uint32_t>(n);
            sample.m = m;
            sample.x = x.value();
            sample.y = gain * x.value();
            trace.samples.push_back(sample);
            x_prev[n - 1] = x.value();
        }
    }
    return trace;
}

/// Plug-in estimate [bits/use] of I(s; y) from a compensated trace, using
/// the exact Gaussian-mixture output density of the scheme's constellation.
inline double empirical_mutual_information(const FrameTrace& trace, const FrameScheme& sch,
                                           const ChannelPhysics& c, PowerW sigma2)
{
    if (!(sigma2.value() > 0.0))
        throw domain_error("noise variance must be positive");
    if (trace.samples.empty())
        throw domain_error("empty trace");
    const double sigma = std::sqrt(sigma2.value());
    const double scale = std::sqrt(c.split_ratio.value() * c.link_loss.value()) * sch.a.value();
    const double lo = sch.constellation.lowest();
    const double center = scale * (1.0 + lo) / 2.0;
    const double half = scale * (1.0 - lo) / 2.0;
    const MixtureDensity output(half / sigma, sch.constellation.size());
    constexpr double log_sqrt_2pi = 0.91893853320467274178;

    double acc = 0.0;
    for (const auto& smp : trace.samples) {
        const double z = (smp.y - center) / sigma;
        const double r = z - (scale * smp.s - center) / sigma;
        acc += (-0.5 * r * r - log_sqrt_2pi) - output.log_density(z);
    }
    return acc / static_cast<double>(trace.samples.size()) / std::numbers::ln2;
}

/// Writes frame,slot,s,m,x,y with shortest round-trip formatting.
void write_trace_csv(std::ostream& os, const FrameTrace& trace);

} // namespace rbcom

#include "rbcom/csv.hpp"

namespace rbcom {

inline void write_trace_csv(std::ostream& os, const FrameTrace& trace)
{
    os << "frame,slot,s[dimensionless],m[dimensionless],x[sqrt(W)],y[sqrt(W)]\n";
    for (const auto& smp : trace.samples) {
        os << smp.frame << ',' << smp.slot << ',' << csv::number(smp.s) << ',' << csv::number(smp.m) << ','
           << csv::number(smp.x) << ',' << csv::number(smp.y) << '\n';
    }
}

} // namespace rbcom

#endif
