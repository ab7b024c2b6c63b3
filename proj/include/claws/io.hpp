#pragma once

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <span>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "config.hpp"
#include "diagnostics.hpp"
#include "errors.hpp"
#include "solver.hpp"

namespace claws {

/// Shortest-form-independent output: always 17 significant digits, so values round-trip.
inline std::string format_double(double v)
{
    char buf[40];
    const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, r.ptr);
}

inline void ensure_directory(const std::filesystem::path& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message(),
                              "output.dir");
}

inline std::ofstream open_output(const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path.string(), "output.dir");
    return out;
}

/**
 * Space-time CSV: first row "x,<centers>", then one "t,<q_0>,...,<q_{N-1}>" row per stored
 * level.
 */
inline void write_space_time_csv(std::ostream& out, const Grid& grid, std::span<const double> times,
                                 std::span<const std::vector<double>> rows)
{
    out << 'x';
    for (std::size_t i = 0; i < grid.size(); ++i) out << ',' << format_double(grid.center(i));
    out << '\n';
    for (std::size_t n = 0; n < rows.size(); ++n) {
        out << format_double(times[n]);
        for (double v : rows[n]) out << ',' << format_double(v);
        out << '\n';
    }
}

inline void write_trajectory_csv(const std::filesystem::path& path, const RunResult& res)
{
    auto out = open_output(path);
    write_space_time_csv(out, res.grid, res.times, res.levels);
}

struct SpaceTimeTable {
    std::vector<double> x;
    std::vector<double> t;
    std::vector<std::vector<double>> values;
};

inline SpaceTimeTable read_space_time_csv(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path.string());
    SpaceTimeTable tab;
    std::string line;
    auto split = [&](const std::string& l, std::size_t lineno) {
        std::vector<double> v;
        std::stringstream ss(l);
        std::string cell;
        bool first = true;
        while (std::getline(ss, cell, ',')) {
            if (first && lineno == 0) {
                first = false;
                continue;
            }
            first = false;
            double d = 0.0;
            const auto r = std::from_chars(cell.data(), cell.data() + cell.size(), d);
            if (r.ec != std::errc())
                throw ConfigError(path.string() + ":" + std::to_string(lineno + 1) + ": bad number \"" +
                                  cell + "\"");
            v.push_back(d);
        }
        return v;
    };
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto v = split(line, lineno);
        if (lineno == 0) {
            tab.x = std::move(v);
        } else {
            if (v.size() != tab.x.size() + 1)
                throw ConfigError(path.string() + ":" + std::to_string(lineno + 1) + ": expected " +
                                  std::to_string(tab.x.size() + 1) + " columns");
            tab.t.push_back(v.front());
            tab.values.emplace_back(v.begin() + 1, v.end());
        }
        ++lineno;
    }
    if (tab.x.empty()) throw ConfigError(path.string() + ": empty trajectory");
    return tab;
}

namespace detail {

inline json finite_or_null(double v)
{
    return std::isfinite(v) ? json(v) : json(nullptr);
}

} // namespace detail

inline json to_json(const DiagnosticsReport& r)
{
    json mp = nullptr;
    if (r.max_principle) {
        const auto& m = *r.max_principle;
        mp = {{"q_min", m.q_min},
              {"q_max", m.q_max},
              {"tol", m.tol},
              {"violations", m.violations},
              {"worst", m.worst},
              {"first_level", m.first_level ? json(*m.first_level) : json(nullptr)}};
    }
    json entropy_min = json::array();
    for (double v : r.entropy_min) entropy_min.push_back(detail::finite_or_null(v));
    return json{
        {"times", r.times},
        {"mass", r.mass},
        {"l1", r.l1},
        {"linf", r.linf},
        {"tv", r.tv},
        {"max_principle", mp},
        {"envelopes",
         {{"factor", r.envelopes.factor},
          {"linf0", r.envelopes.linf0},
          {"l1_0", r.envelopes.l10},
          {"linf_margin", detail::finite_or_null(r.envelopes.linf_margin)},
          {"l1_margin", detail::finite_or_null(r.envelopes.l1_margin)},
          {"violations", r.envelopes.violations}}},
        {"entropy_k", r.entropy_k},
        {"entropy_min", entropy_min},
        {"picard_iters", r.picard_iters},
        {"picard_stats",
         {{"steps", r.picard.steps},
          {"median", r.picard.median},
          {"mean", r.picard.mean},
          {"max", r.picard.max}}},
        {"mass_ledger_max", r.mass_ledger_max ? json(*r.mass_ledger_max) : json(nullptr)},
        {"tv_growth",
         {{"tv0", r.tv_growth.tv0},
          {"rate", detail::finite_or_null(r.tv_growth.rate)},
          {"envelope", detail::finite_or_null(r.tv_growth.envelope)}}},
    };
}

inline json run_metadata(const RunResult& res)
{
    return json{
        {"ok", res.ok()},
        {"failure", res.failure ? json(*res.failure) : json(nullptr)},
        {"failure_kind", res.failure ? json(res.failure_kind) : json(nullptr)},
        {"steps_completed", res.steps_completed()},
        {"num_steps", res.time.num_steps},
        {"dt", res.time.dt},
        {"alpha", res.time.alpha},
        {"courant", res.max_courant},
        {"stride", res.stride},
        {"memory_depth", res.memory_depth},
        {"dropped_mass", res.dropped_mass},
        {"delay_steps", res.delay_steps},
        {"used_fft", res.used_fft},
        {"used_recursive", res.used_recursive},
        {"warnings", res.warnings},
    };
}

inline void write_diagnostics_json(const std::filesystem::path& path, const DiagnosticsReport& rep,
                                   const RunResult& res, const ExperimentConfig& cfg)
{
    json j = to_json(rep);
    j["run"] = run_metadata(res);
    j["config_echo"] = to_json(cfg);
    auto out = open_output(path);
    out << j.dump(2) << '\n';
}

inline std::string summary_text(const DiagnosticsReport& rep, const RunResult& res)
{
    std::ostringstream s;
    s << "status: " << (res.ok() ? "ok" : "FAILED (" + res.failure_kind + "), partial output") << '\n';
    if (res.failure) s << "error: " << *res.failure << '\n';
    s << "steps: " << res.steps_completed() << " of " << res.time.num_steps
      << "  dt: " << format_double(res.time.dt) << "  alpha: " << format_double(res.time.alpha)
      << "  courant: " << format_double(res.max_courant) << '\n';
    if (!rep.mass.empty())
        s << "mass: " << format_double(rep.mass.front()) << " -> " << format_double(rep.mass.back())
          << '\n';
    if (rep.mass_ledger_max) s << "mass ledger max |residual|: " << format_double(*rep.mass_ledger_max) << '\n';
    s << "picard iterations: median " << rep.picard.median << ", mean " << rep.picard.mean
      << ", max " << rep.picard.max << '\n';
    if (rep.max_principle)
        s << "max principle violations: " << rep.max_principle->violations << " (worst "
          << format_double(rep.max_principle->worst) << ")\n";
    s << "envelope margins: linf " << format_double(rep.envelopes.linf_margin) << ", l1 "
      << format_double(rep.envelopes.l1_margin) << '\n';
    if (!rep.entropy_min.empty()) {
        double m = rep.entropy_min.front();
        for (double v : rep.entropy_min) m = std::min(m, v);
        s << "entropy residual min: " << format_double(m) << '\n';
    }
    s << "tv growth rate: " << format_double(rep.tv_growth.rate) << " (envelope "
      << format_double(rep.tv_growth.envelope) << ")\n";
    if (res.memory_depth)
        s << "memory depth: " << res.memory_depth << " lags, dropped kernel mass "
          << format_double(res.dropped_mass) << '\n';
    if (res.delay_steps) s << "delay: " << res.delay_steps << " steps\n";
    for (const auto& w : res.warnings) s << "warning: " << w << '\n';
    return s.str();
}

inline void write_text(const std::filesystem::path& path, const std::string& text)
{
    auto out = open_output(path);
    out << text;
}

} // namespace claws
