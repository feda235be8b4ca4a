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

#ifndef RBCOM_OPTIMIZER_HPP
#define RBCOM_OPTIMIZER_HPP

#include "rbcom/beam_propagation.hpp"
#include "rbcom/capacity.hpp"
#include "rbcom/error.hpp"
#include "rbcom/gain_medium.hpp"
#include "rbcom/link_gain.hpp"
#include "rbcom/resonance.hpp"
#include "rbcom/units.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace rbcom {

struct OptimizerConfig {
    GainMedium medium;
    BeamGeometry geometry;
    PowerW pump_power{200.0};
    PowerW noise_variance{3.981071705534972e-12}; // -84 dBm
    PowerW max_received_power{0.01};              // 10 dBm
    std::size_t alpha_steps = 1000;     // K1
    std::size_t amplitude_steps = 1000; // K2
    unsigned threads = 0;               // 0: one per hardware thread

    void validate() const
    {
        medium.validate();
        geometry.validate();
        if (alpha_steps < 2 || amplitude_steps < 2)
            throw domain_error("grid sizes must be at least 2");
        if (!(noise_variance.value() > 0.0))
            throw domain_error("noise variance must be positive");
        if (!(max_received_power.value() > 0.0))
            throw domain_error("maximum received power must be positive");
    }
};

/// Best grid cell found by optimize(). All-zero when no resonance exists.
struct Optimum {
    double c_up_star = 0.0;
    double c_low_star = 0.0;
    Ratio alpha_star{0.0};
    Amplitude a_hat_star{0.0};
    Amplitude a_star{0.0};
    Ratio mu1_star{0.0};
    PowerW p_t_star{0.0};
    PowerW p_peak_star{0.0};

    // Context of the search.
    Ratio link_loss{0.0};
    PowerW threshold{0.0};
    double alpha_limit = 0.0;
    std::size_t alpha_index = 0;     // k1 of the winner, 0 if none
    std::size_t amplitude_index = 0; // k2 of the winner, 0 if none
    std::size_t peak_alpha_index = 0;     // k1 maximising peak power alone
    std::size_t peak_amplitude_index = 0; // k2 maximising peak power alone
    std::size_t rejected = 0;

    bool feasible() const noexcept { return c_up_star > 0.0; }
};

struct Candidate {
    PowerW p_peak;
    CapacityBounds bounds;
};

namespace detail {

inline double candidate_peak_power(double h, double a_hat, double alpha, double delta)
{
    const double span = std::sqrt(h) - a_hat;
    return span * span * alpha * delta / 4.0;
}

} // namespace detail

/// Peak power and capacity bounds of one (alpha, a_hat) cell, or nothing if
/// the cell violates the amplitude or received-power constraints.
inline std::optional<Candidate> evaluate_candidate(const OptimizerConfig& cfg, Ratio alpha, Amplitude a_hat,
                                                   PowerW p_t)
{
    cfg.validate();
    const Ratio delta = link_loss(cfg.geometry);
    const double u = alpha_upper_bound(cfg.medium, cfg.pump_power, delta);
    if (!(alpha.value() > 0.0 && alpha.value() < u))
        throw domain_error("splitting ratio outside the resonance region");
    if (!(a_hat.value() > 0.0) || a_hat.value() > std::sqrt(p_t.value()))
        return std::nullopt;
    const ChannelPhysics phys{cfg.medium, cfg.pump_power, alpha, delta};
    const double h = link_gain_h(phys, a_hat).value();
    const double budget = std::min(p_t.value(), cfg.max_received_power.value() / (alpha.value() * delta.value()));
    if (h > budget * (1.0 + 1e-12))
        return std::nullopt;
    const PowerW p_peak(detail::candidate_peak_power(h, a_hat.value(), alpha.value(), delta.value()));
    return Candidate{p_peak, capacity_bounds(PeakSnrPoint{p_peak, cfg.noise_variance})};
}

namespace detail {

struct Cell {
    double c_up = 0.0;
    double p_peak = 0.0;
    std::size_t k1 = 0;
    std::size_t k2 = 0;
    double alpha = 0.0;
    double a_hat = 0.0;
    double p_t = 0.0;
};

// Larger upper bound wins; equal bounds fall back to peak power, then to the
// lower grid index, which keeps the reduction independent of scheduling.
inline bool better(const Cell& a, const Cell& b)
{
    if (a.c_up != b.c_up)
        return a.c_up > b.c_up;
    if (a.p_peak != b.p_peak)
        return a.p_peak > b.p_peak;
    return a.k1 < b.k1 || (a.k1 == b.k1 && a.k2 < b.k2);
}

inline bool better_peak(const Cell& a, const Cell& b)
{
    if (a.p_peak != b.p_peak)
        return a.p_peak > b.p_peak;
    return a.k1 < b.k1 || (a.k1 == b.k1 && a.k2 < b.k2);
}

struct AlphaRow {
    Cell best;
    Cell best_peak;
    std::size_t rejected = 0;
};

inline AlphaRow search_alpha_row(const OptimizerConfig& cfg, double delta, double alpha, std::size_t k1)
{
    const ChannelPhysics phys{cfg.medium, cfg.pump_power, Ratio(alpha), Ratio(delta)};
    const double p_t = stable_power(phys).p_t.value();
    const double received_cap = cfg.max_received_power.value() / (alpha * delta);
    const double budget = std::min(p_t, received_cap);
    const double root_budget = std::sqrt(budget);
    const double sigma2 = cfg.noise_variance.value();
    const double k2_count = static_cast<double>(cfg.amplitude_steps);

    AlphaRow row;
    for (std::size_t k2 = 1; k2 < cfg.amplitude_steps; ++k2) {
        const double a_hat = static_cast<double>(k2) / k2_count * root_budget;
        double h = 0.0;
        try {
            h = link_gain_h(phys, Amplitude(a_hat)).value();
        } catch (const numerical_failure& e) {
            throw numerical_failure(std::string(e.what()) + " at alpha=" + std::to_string(alpha) +
                                        ", a_hat=" + std::to_string(a_hat),
                                    e.bracket_low(), e.bracket_high());
        }
        if (h > budget * (1.0 + 1e-12)) {
            ++row.rejected;
            continue;
        }
        Cell cell;
        cell.p_peak = candidate_peak_power(h, a_hat, alpha, delta);
        cell.c_up = capacity_upper(PeakSnrPoint{PowerW(cell.p_peak), PowerW(sigma2)});
        cell.k1 = k1;
        cell.k2 = k2;
        cell.alpha = alpha;
        cell.a_hat = a_hat;
        cell.p_t = p_t;
        if (row.best.k1 == 0 || better(cell, row.best))
            row.best = cell;
        if (row.best_peak.k1 == 0 || better_peak(cell, row.best_peak))
            row.best_peak = cell;
    }
    return row;
}

inline unsigned worker_count(unsigned requested, std::size_t jobs)
{
    unsigned n = requested;
    if (n == 0)
        n = std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
}

} // namespace detail

/// Joint bisection / exhaustive search over the splitting ratio and the
/// pre-gain amplitude, maximising the capacity upper bound.
///
/// The splitting ratio runs over k1/K1 of its resonance limit. For each
/// value the stable power is bisected and the pre-gain amplitude runs over
/// k2/K2 of sqrt(min(P_t, P_r,max / (alpha delta))). The lower bound is only
/// evaluated at the winning cell; both bounds are monotone in peak power so
/// the argmax is shared.
inline Optimum optimize(const OptimizerConfig& cfg)
{
    cfg.validate();
    Optimum opt;
    const Ratio delta = link_loss(cfg.geometry);
    opt.link_loss = delta;
    opt.threshold = threshold_power(cfg.medium, delta);
    if (cfg.pump_power.value() <= opt.threshold.value())
        return opt;
    const double u = alpha_upper_bound(cfg.medium, cfg.pump_power, delta);
    opt.alpha_limit = u;
    if (!(u > 0.0))
        return opt;

    const std::size_t rows = cfg.alpha_steps - 1;
    std::vector<detail::AlphaRow> results(rows);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= rows)
                return;
            const std::size_t k1 = i + 1;
            const double alpha = static_cast<double>(k1) / static_cast<double>(cfg.alpha_steps) * u;
            try {
                results[i] = detail::search_alpha_row(cfg, delta.value(), alpha, k1);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
                next = rows;
                return;
            }
        }
    };
    const unsigned workers = detail::worker_count(cfg.threads, rows);
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back(worker);
        for (auto& t : pool)
            t.join();
    }
    if (failure)
        std::rethrow_exception(failure);

    detail::Cell best;
    detail::Cell best_peak;
    for (const auto& row : results) {
        opt.rejected += row.rejected;
        if (row.best.k1 != 0 && (best.k1 == 0 || detail::better(row.best, best)))
            best = row.best;
        if (row.best_peak.k1 != 0 && (best_peak.k1 == 0 || detail::better_peak(row.best_peak, best_peak)))
            best_peak = row.best_peak;
    }
    if (best.k1 == 0 || !(best.c_up > 0.0))
        return opt;

    const ChannelPhysics phys{cfg.medium, cfg.pump_power, Ratio(best.alpha), delta};
    const double a = std::sqrt(link_gain_h(phys, Amplitude(best.a_hat)).value());
    opt.c_up_star = best.c_up;
    opt.alpha_star = Ratio(best.alpha);
    opt.a_hat_star = Amplitude(best.a_hat);
    opt.a_star = Amplitude(a);
    opt.mu1_star = Ratio(best.a_hat / a);
    opt.p_t_star = PowerW(best.p_t);
    opt.p_peak_star = PowerW(best.p_peak);
    opt.c_low_star = capacity_lower(PeakSnrPoint{opt.p_peak_star, cfg.noise_variance});
    opt.alpha_index = best.k1;
    opt.amplitude_index = best.k2;
    opt.peak_alpha_index = best_peak.k1;
    opt.peak_amplitude_index = best_peak.k2;
    return opt;
}

/// Amplitude constant, minimum information symbol and stable power used to
/// build the compensated modulation.
struct ModulationParameters {
    Amplitude a;
    Ratio mu1;
    PowerW p_t;
};

inline ModulationParameters modulation_parameters(const Optimum& opt)
{
    if (!opt.feasible())
        throw domain_error("no resonant beam at this operating point; nothing to modulate");
    return {opt.a_star, opt.mu1_star, opt.p_t_star};
}

} // namespace rbcom

#endif
