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

#ifndef RBCOM_CLI_HPP
#define RBCOM_CLI_HPP

// Command-line front end. Requires CLI11.hpp on the include path.

#include "rbcom/beam_propagation.hpp"
#include "rbcom/capacity.hpp"
#include "rbcom/channel_sim.hpp"
#include "rbcom/csv.hpp"
#include "rbcom/error.hpp"
#include "rbcom/optimizer.hpp"
#include "rbcom/resonance.hpp"
#include "rbcom/units.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace rbcom::cli {

/// Malformed or out-of-range user input.
class config_error : public error {
public:
    using error::error;
};

struct RunConfig {
    double lambda = 1064e-9;          // m
    double phi = 0.2e-3;              // rad
    double L = 15.0;                  // m
    double r0 = 3e-3;                 // m, gain rod radius
    std::optional<double> S_s;        // m^2, receiver aperture; rod cross-section when unset
    double I_s = 1.2e7;               // W/m^2
    double eta = 0.7;
    double P_in = 200.0;              // W
    double B = 1e9;                   // Hz
    double N0_dbm_per_hz = -174.0;
    double Pr_max_dbm = 10.0;
    double alpha = 0.01;              // used by stable-power only
    std::uint64_t K1 = 1000;
    std::uint64_t K2 = 1000;
    std::uint64_t frames = 10000;
    std::uint64_t slots = 1;
    std::uint64_t seed = 1;

    double rod_area() const { return std::numbers::pi * r0 * r0; }
    double receiver_area() const { return S_s ? *S_s : rod_area(); }

    /// Noise power sigma^2 = N_0 B [W].
    PowerW noise_variance() const { return PowerW(dbm_to_watts(N0_dbm_per_hz).value() * B); }

    GainMedium medium() const
    {
        GainMedium m;
        m.saturation_intensity = IntensityWm2(I_s);
        m.pump_efficiency = Ratio(eta);
        m.rod_radius = r0;
        return m;
    }

    BeamGeometry geometry() const
    {
        BeamGeometry g;
        g.wavelength = lambda;
        g.diffraction_angle = phi;
        g.distance = L;
        g.receiver_area = receiver_area();
        return g;
    }

    OptimizerConfig optimizer(unsigned threads = 0) const
    {
        OptimizerConfig c;
        c.medium = medium();
        c.geometry = geometry();
        c.pump_power = PowerW(P_in);
        c.noise_variance = noise_variance();
        c.max_received_power = dbm_to_watts(Pr_max_dbm);
        c.alpha_steps = K1;
        c.amplitude_steps = K2;
        c.threads = threads;
        return c;
    }
};

namespace detail {

enum class range { positive, non_negative, fraction_open_closed, fraction_open, any_finite, count, count_any };

struct KeySpec {
    std::string_view name;
    std::string_view unit;
    range check;
    std::function<void(RunConfig&, double, std::uint64_t)> set;
    std::function<double(const RunConfig&)> get;
};

inline const std::vector<KeySpec>& keys()
{
    using R = RunConfig;
    auto real = [](double R::*m) {
        return std::function<void(R&, double, std::uint64_t)>([m](R& c, double v, std::uint64_t) { c.*m = v; });
    };
    auto read = [](double R::*m) { return std::function<double(const R&)>([m](const R& c) { return c.*m; }); };
    auto whole = [](std::uint64_t R::*m) {
        return std::function<void(R&, double, std::uint64_t)>([m](R& c, double, std::uint64_t v) { c.*m = v; });
    };
    auto read_whole = [](std::uint64_t R::*m) {
        return std::function<double(const R&)>([m](const R& c) { return static_cast<double>(c.*m); });
    };
    static const std::vector<KeySpec> table = {
        {"lambda", "m", range::positive, real(&R::lambda), read(&R::lambda)},
        {"phi", "rad", range::positive, real(&R::phi), read(&R::phi)},
        {"L", "m", range::non_negative, real(&R::L), read(&R::L)},
        {"r0", "m", range::positive, real(&R::r0), read(&R::r0)},
        {"S_s", "m^2", range::positive, [](R& c, double v, std::uint64_t) { c.S_s = v; },
         [](const R& c) { return c.receiver_area(); }},
        {"I_s", "W/m^2", range::positive, real(&R::I_s), read(&R::I_s)},
        {"eta", "dimensionless", range::fraction_open_closed, real(&R::eta), read(&R::eta)},
        {"P_in", "W", range::non_negative, real(&R::P_in), read(&R::P_in)},
        {"B", "Hz", range::positive, real(&R::B), read(&R::B)},
        {"N0_dbm_per_hz", "dBm/Hz", range::any_finite, real(&R::N0_dbm_per_hz), read(&R::N0_dbm_per_hz)},
        {"Pr_max_dbm", "dBm", range::any_finite, real(&R::Pr_max_dbm), read(&R::Pr_max_dbm)},
        {"alpha", "dimensionless", range::fraction_open, real(&R::alpha), read(&R::alpha)},
        {"K1", "", range::count, whole(&R::K1), read_whole(&R::K1)},
        {"K2", "", range::count, whole(&R::K2), read_whole(&R::K2)},
        {"frames", "", range::count_any, whole(&R::frames), read_whole(&R::frames)},
        {"slots", "", range::count_any, whole(&R::slots), read_whole(&R::slots)},
        {"seed", "", range::count_any, whole(&R::seed), read_whole(&R::seed)},
    };
    return table;
}

inline const KeySpec* find_key(std::string_view name)
{
    for (const auto& k : keys())
        if (k.name == name)
            return &k;
    return nullptr;
}

inline std::string_view trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline void assign(RunConfig& cfg, const KeySpec& key, std::string_view text)
{
    const std::string name(key.name);
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (key.check == range::count || key.check == range::count_any) {
        std::uint64_t v = 0;
        const auto res = std::from_chars(first, last, v);
        if (res.ec != std::errc() || res.ptr != last)
            throw config_error(name + ": expected a non-negative integer, got '" + std::string(text) + "'");
        if (key.check == range::count && v < 2)
            throw config_error(name + ": grid size must be at least 2");
        if (key.check == range::count_any && v < 1 && name != "seed")
            throw config_error(name + ": must be at least 1");
        key.set(cfg, 0.0, v);
        return;
    }
    double v = 0.0;
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last || !std::isfinite(v))
        throw config_error(name + ": expected a finite number, got '" + std::string(text) + "'");
    switch (key.check) {
    case range::positive:
        if (!(v > 0.0))
            throw config_error(name + ": must be positive");
        break;
    case range::non_negative:
        if (!(v >= 0.0))
            throw config_error(name + ": must be non-negative");
        break;
    case range::fraction_open_closed:
        if (!(v > 0.0 && v <= 1.0))
            throw config_error(name + ": pump efficiency must lie in (0, 1]");
        break;
    case range::fraction_open:
        if (!(v > 0.0 && v < 1.0))
            throw config_error(name + ": splitting ratio must lie in (0, 1)");
        break;
    default:
        break;
    }
    key.set(cfg, v, 0);
}

} // namespace detail

/// Parses a `key = value` document. Blank lines and `#` comments are
/// ignored; unknown and repeated keys are errors.
inline RunConfig parse_config(std::istream& in, const std::string& source = "config")
{
    RunConfig cfg;
    std::map<std::string, std::size_t> seen;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        std::string_view view(line);
        if (const auto hash = view.find('#'); hash != std::string_view::npos)
            view = view.substr(0, hash);
        view = detail::trim(view);
        if (view.empty())
            continue;
        const auto where = source + ":" + std::to_string(number) + ": ";
        const auto eq = view.find('=');
        if (eq == std::string_view::npos)
            throw config_error(where + "expected 'key = value'");
        const std::string key(detail::trim(view.substr(0, eq)));
        const auto value = detail::trim(view.substr(eq + 1));
        const auto* spec = detail::find_key(key);
        if (!spec)
            throw config_error(where + "unknown key '" + key + "'");
        if (seen.count(key))
            throw config_error(where + "key '" + key + "' repeats line " + std::to_string(seen[key]));
        if (value.empty())
            throw config_error(where + "missing value for '" + key + "'");
        seen[key] = number;
        try {
            detail::assign(cfg, *spec, value);
        } catch (const config_error& e) {
            throw config_error(where + e.what());
        }
    }
    return cfg;
}

inline RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw config_error("cannot open config file '" + path + "'");
    return parse_config(in, path);
}

/// Worker cap from RBCOM_THREADS; 0 leaves the choice to the optimizer.
inline unsigned thread_cap()
{
    const char* env = std::getenv("RBCOM_THREADS");
    if (!env || !*env)
        return 0;
    const std::string_view text(env);
    unsigned v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size() || v == 0)
        throw config_error("RBCOM_THREADS must be a positive integer, got '" + std::string(text) + "'");
    return v;
}

namespace detail {

struct Column {
    std::string name;
    std::string unit;
};

inline void write_header(std::ostream& os, const std::vector<Column>& cols)
{
    for (std::size_t i = 0; i < cols.size(); ++i)
        os << (i ? "," : "") << cols[i].name << '[' << cols[i].unit << ']';
    os << '\n';
}

inline void write_row(std::ostream& os, const std::vector<double>& values)
{
    for (std::size_t i = 0; i < values.size(); ++i)
        os << (i ? "," : "") << csv::number(values[i]);
    os << '\n';
}

inline const std::map<std::string, std::string>& emit_units()
{
    static const std::map<std::string, std::string> u = {
        {"delta", "dimensionless"}, {"delta_db", "dB"},      {"pth", "W"},
        {"ppeak", "W"},             {"snr", "dimensionless"}, {"cup", "bits/use"},
        {"clow", "bits/use"},       {"alpha", "dimensionless"}, {"a_hat", "sqrt(W)"},
        {"a", "sqrt(W)"},           {"mu1", "dimensionless"}, {"pt", "W"},
    };
    return u;
}

inline bool needs_optimizer(const std::string& q) { return q != "delta" && q != "delta_db" && q != "pth"; }

inline double emit_value(const std::string& q, const RunConfig& rc, const std::optional<Optimum>& opt)
{
    const auto geo = rc.geometry();
    if (q == "delta")
        return link_loss(geo).value();
    if (q == "delta_db")
        return link_loss_db(geo);
    if (q == "pth")
        return threshold_power(rc.medium(), link_loss(geo)).value();
    const Optimum& o = *opt;
    if (q == "ppeak")
        return o.p_peak_star.value();
    if (q == "snr")
        return o.p_peak_star.value() / rc.noise_variance().value();
    if (q == "cup")
        return o.c_up_star;
    if (q == "clow")
        return o.c_low_star;
    if (q == "alpha")
        return o.alpha_star.value();
    if (q == "a_hat")
        return o.a_hat_star.value();
    if (q == "a")
        return o.a_star.value();
    if (q == "mu1")
        return o.mu1_star.value();
    return o.p_t_star.value(); // pt
}

inline std::vector<std::string> split_list(const std::string& s)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (auto t = trim(item); !t.empty())
            out.emplace_back(t);
    return out;
}

} // namespace detail

/// Runs the command line. CSV goes to `out` (or the --out file), the
/// one-line summary and diagnostics to `err`. Returns 0 on success, 1 on a
/// configuration or physics error and 2 on a numerical failure.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"rbcom: resonant beam communication channel model"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::string out_path;
    app.add_option("--config", config_path, "key = value configuration file");
    app.add_option("--out", out_path, "write CSV here instead of stdout");
    std::map<std::string, std::string> overrides;
    for (const auto& k : detail::keys()) {
        const std::string name(k.name);
        std::string help = "override " + name;
        if (!k.unit.empty())
            help += " [" + std::string(k.unit) + "]";
        app.add_option("--" + name, overrides[name], help);
    }

    auto* link = app.add_subcommand("link-loss", "link loss fraction at the configured geometry");
    auto* thresh = app.add_subcommand("threshold", "pumping power threshold for resonance");
    auto* stable = app.add_subcommand("stable-power", "stable transmitter power at the configured alpha");
    auto* optim = app.add_subcommand("optimize", "grid search for the capacity-maximising operating point");
    auto* sweep = app.add_subcommand("sweep", "sweep one parameter and emit selected quantities");
    auto* sim = app.add_subcommand("simulate", "Monte-Carlo trace of the compensated channel");
    auto* mi = app.add_subcommand("mi-check", "simulated mutual information against the capacity bounds");

    std::string var;
    double from = 0.0;
    double to = 0.0;
    std::uint64_t count = 0;
    bool log_spacing = false;
    std::string emit;
    sweep->add_option("--var", var, "swept parameter")->required();
    sweep->add_option("--from", from, "first value")->required();
    sweep->add_option("--to", to, "last value")->required();
    sweep->add_option("--count", count, "number of points (>= 2)")->required();
    sweep->add_flag("--log", log_spacing, "geometric spacing");
    sweep->add_option("--emit", emit, "comma-separated quantities")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }

    std::ofstream file;
    std::ostream* csv_out = &out;
    try {
        RunConfig rc = config_path.empty() ? RunConfig{} : load_config(config_path);
        for (const auto& k : detail::keys()) {
            const std::string name(k.name);
            if (app.count("--" + name) > 0)
                detail::assign(rc, k, detail::trim(overrides[name]));
        }
        const unsigned threads = thread_cap();
        if (!out_path.empty()) {
            file.open(out_path);
            if (!file)
                throw config_error("cannot write '" + out_path + "'");
            csv_out = &file;
        }
        std::ostream& os = *csv_out;

        if (link->parsed()) {
            const auto geo = rc.geometry();
            const double d = link_loss(geo).value();
            detail::write_header(os, {{"L", "m"}, {"phi", "rad"}, {"S_s", "m^2"}, {"delta", "dimensionless"},
                                      {"delta_db", "dB"}});
            detail::write_row(os, {rc.L, rc.phi, rc.receiver_area(), d, link_loss_db(geo)});
            err << "link-loss: delta = " << csv::number(d) << " at L = " << csv::number(rc.L) << " m\n";
        } else if (thresh->parsed()) {
            const Ratio d = link_loss(rc.geometry());
            const double p = threshold_power(rc.medium(), d).value();
            detail::write_header(os, {{"delta", "dimensionless"}, {"pth", "W"}});
            detail::write_row(os, {d.value(), p});
            err << "threshold: P_th = " << csv::number(p) << " W\n";
        } else if (stable->parsed()) {
            const Ratio d = link_loss(rc.geometry());
            const ChannelPhysics phys{rc.medium(), PowerW(rc.P_in), Ratio(rc.alpha), d};
            const double u = alpha_upper_bound(phys.medium, phys.pump_power, d);
            if (!(rc.alpha < u))
                throw config_error("no resonance: splitting ratio " + csv::number(rc.alpha) +
                                   " must be below 1 - exp(-2 g)/delta^2 = " + csv::number(u) +
                                   " (pumping power above threshold and alpha inside the resonance region)");
            const auto sp = stable_power(phys);
            detail::write_header(os, {{"alpha", "dimensionless"}, {"delta", "dimensionless"}, {"pt", "W"},
                                      {"pt_low", "W"}, {"pt_high", "W"}, {"residual", "dimensionless"}});
            detail::write_row(os, {rc.alpha, d.value(), sp.p_t.value(), sp.bracket_low.value(),
                                   sp.bracket_high.value(), sp.residual});
            err << "stable-power: P_t = " << csv::number(sp.p_t.value()) << " W\n";
        } else if (optim->parsed()) {
            const auto o = optimize(rc.optimizer(threads));
            detail::write_header(os, {{"cup", "bits/use"}, {"clow", "bits/use"}, {"alpha", "dimensionless"},
                                      {"a_hat", "sqrt(W)"}, {"a", "sqrt(W)"}, {"mu1", "dimensionless"},
                                      {"pt", "W"}, {"ppeak", "W"}, {"snr", "dimensionless"},
                                      {"delta", "dimensionless"}, {"pth", "W"}, {"rejected", "count"}});
            detail::write_row(os, {o.c_up_star, o.c_low_star, o.alpha_star.value(), o.a_hat_star.value(),
                                   o.a_star.value(), o.mu1_star.value(), o.p_t_star.value(),
                                   o.p_peak_star.value(), o.p_peak_star.value() / rc.noise_variance().value(),
                                   o.link_loss.value(), o.threshold.value(), static_cast<double>(o.rejected)});
            if (o.feasible())
                err << "optimize: C_up* = " << csv::number(o.c_up_star) << " bits/use at alpha* = "
                    << csv::number(o.alpha_star.value()) << '\n';
            else
                err << "optimize: pumping power " << csv::number(rc.P_in) << " W is not above the threshold "
                    << csv::number(o.threshold.value()) << " W; optimum is zero\n";
        } else if (sweep->parsed()) {
            const auto* spec = detail::find_key(var);
            static const std::vector<std::string> sweepable = {"L", "P_in", "phi", "r0", "lambda", "I_s", "eta"};
            if (!spec || std::find(sweepable.begin(), sweepable.end(), var) == sweepable.end())
                throw config_error("--var must be one of L, P_in, phi, r0, lambda, I_s, eta; got '" + var + "'");
            if (count < 2)
                throw config_error("--count must be at least 2");
            if (!(from < to))
                throw config_error("sweep bounds must satisfy from < to");
            if (log_spacing && !(from > 0.0))
                throw config_error("geometric sweep needs a positive start");
            const auto quantities = detail::split_list(emit);
            if (quantities.empty())
                throw config_error("--emit needs at least one quantity");
            bool optimizer_needed = false;
            std::vector<detail::Column> cols{{var, std::string(spec->unit)}};
            for (const auto& q : quantities) {
                const auto it = detail::emit_units().find(q);
                if (it == detail::emit_units().end())
                    throw config_error("unknown --emit quantity '" + q +
                                       "'; choose from delta, delta_db, pth, ppeak, snr, cup, clow, alpha, "
                                       "a_hat, a, mu1, pt");
                cols.push_back({q, it->second});
                optimizer_needed = optimizer_needed || detail::needs_optimizer(q);
            }
            detail::write_header(os, cols);
            for (std::uint64_t i = 0; i < count; ++i) {
                const double t = static_cast<double>(i) / static_cast<double>(count - 1);
                double v = log_spacing ? from * std::pow(to / from, t) : from + (to - from) * t;
                if (i + 1 == count)
                    v = to;
                RunConfig point = rc;
                detail::assign(point, *spec, csv::number(v));
                std::optional<Optimum> o;
                if (optimizer_needed)
                    o = optimize(point.optimizer(threads));
                std::vector<double> row{v};
                for (const auto& q : quantities)
                    row.push_back(detail::emit_value(q, point, o));
                detail::write_row(os, row);
            }
            err << "sweep: " << count << " points over " << var << '\n';
        } else if (sim->parsed() || mi->parsed()) {
            const auto ocfg = rc.optimizer(threads);
            const auto o = optimize(ocfg);
            if (!o.feasible())
                throw config_error("no resonance: pumping power " + csv::number(rc.P_in) +
                                   " W is not above the threshold " + csv::number(o.threshold.value()) + " W");
            const auto phys = optimum_physics(ocfg, o);
            const auto sch = compensation_scheme(o, ocfg.noise_variance, rc.slots);
            const auto trace = simulate(sch, phys, ocfg.noise_variance, rc.frames, rc.seed);
            if (sim->parsed()) {
                write_trace_csv(os, trace);
                err << "simulate: " << trace.samples.size() << " samples, seed " << rc.seed << ", "
                    << trace.generator << '\n';
            } else {
                const double gain = std::sqrt(phys.split_ratio.value() * phys.link_loss.value());
                double acc = 0.0;
                for (const auto& smp : trace.samples) {
                    const double r = smp.y - gain * sch.a.value() * smp.s;
                    acc += r * r;
                }
                const double var_ratio = acc / static_cast<double>(trace.samples.size()) /
                                         ocfg.noise_variance.value();
                const double est = empirical_mutual_information(trace, sch, phys, ocfg.noise_variance);
                detail::write_header(os, {{"snr", "dimensionless"}, {"M", "count"}, {"samples", "count"},
                                          {"noise_var_ratio", "dimensionless"}, {"mi", "bits/use"},
                                          {"clow", "bits/use"}, {"cup", "bits/use"}});
                detail::write_row(os, {o.p_peak_star.value() / ocfg.noise_variance.value(),
                                       static_cast<double>(sch.constellation.size()),
                                       static_cast<double>(trace.samples.size()), var_ratio, est, o.c_low_star,
                                       o.c_up_star});
                err << "mi-check: I = " << csv::number(est) << " bits/use against C_low = "
                    << csv::number(o.c_low_star) << '\n';
            }
        }
    } catch (const numerical_failure& e) {
        err << "numerical failure: " << e.what() << '\n';
        return 2;
    } catch (const scheme_infeasible& e) {
        err << "infeasible modulation: " << e.what() << '\n';
        return 1;
    } catch (const error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

} // namespace rbcom::cli

#endif
