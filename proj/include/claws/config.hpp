#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "grid.hpp"
#include "kernels.hpp"
#include "models.hpp"
#include "nonlocal.hpp"
#include "schemes.hpp"
#include "solver.hpp"

namespace claws {

using json = nlohmann::ordered_json;

/**
 * Plain-data mirror of the config file. Every field has a default, and `to_json` writes all
 * of them, so an echoed config reproduces the run on its own.
 */
struct ExperimentConfig {
    struct Domain {
        double x_left = 0.0;
        double x_right = 4.0;
        std::size_t num_cells = 400;
        std::string boundary = "outflow";
        bool operator==(const Domain&) const = default;
    } domain;
    struct Time {
        double t_final = 5.0;
        double cfl = 0.9;
        bool operator==(const Time&) const = default;
    } time;
    struct Vmax {
        std::vector<double> breakpoints;
        std::vector<double> levels{1.0};
        double gaussian_sigma = 0.0;
        bool operator==(const Vmax&) const = default;
    };
    struct Model {
        std::string kind = "lwr_nonlocal"; ///< lwr_nonlocal | goatin | custom
        int m = 3;
        Vmax vmax;
        std::string velocity = "one_minus_w"; ///< custom only: constant | one_minus_w | goatin
        bool operator==(const Model&) const = default;
    } model;
    struct Init {
        std::string kind = "plateaus"; ///< plateaus | constant | sine | riemann
        std::vector<std::array<double, 3>> plateaus{{0.5, 1.2, 0.8}, {2.2, 2.9, 0.7}};
        double value = 0.0;
        double base = 0.5;
        double amplitude = 0.1;
        double periods = 1.0;
        double left = 0.0;
        double right = 0.0;
        double x0 = 0.0;
        bool operator==(const Init&) const = default;
    } init;
    struct History {
        std::string kind = "none"; ///< none | exp_decay_of_init | constant_init
        bool operator==(const History&) const = default;
    } history;
    struct Spatial {
        std::string kind = "raised_cosine_left"; ///< raised_cosine_left | quintic_shifted | tabulated
        double R = 0.4;
        double eta = 0.1;
        double delta = 0.06;
        std::string table;
        bool operator==(const Spatial&) const = default;
    };
    struct Temporal {
        std::string kind = "none"; ///< none | exponential | erlang | triangular
        double tau0 = 1.0;
        double width = 1.0;
        bool operator==(const Temporal&) const = default;
    };
    struct Kernel {
        Spatial spatial;
        Temporal temporal;
        bool operator==(const Kernel&) const = default;
    } kernel;
    struct Nonlocal {
        std::string mode = "spatial"; ///< none | spatial | memory | delay
        std::string fast_path = "auto";
        double truncation_eps = 1e-10;
        bool operator==(const Nonlocal&) const = default;
    } nonlocal;
    struct Delay {
        double delta = 0.0;
        bool operator==(const Delay&) const = default;
    } delay;
    struct Scheme {
        std::string kind = "godunov";
        bool operator==(const Scheme&) const = default;
    } scheme;
    struct Picard {
        double tol = 1e-7;
        std::size_t max_iters = 50;
        std::string mode = "fixed_point";
        bool operator==(const Picard&) const = default;
    } picard;
    struct Memory {
        std::string causal = "strict";
        bool operator==(const Memory&) const = default;
    } memory;
    struct Output {
        std::size_t stride = 1;
        std::string dir = "out";
        bool operator==(const Output&) const = default;
    } output;

    /// Directory relative paths (kernel tables) resolve against; not serialized.
    std::filesystem::path base_dir;

    bool operator==(const ExperimentConfig& o) const
    {
        return domain == o.domain && time == o.time && model == o.model && init == o.init &&
               history == o.history && kernel == o.kernel && nonlocal == o.nonlocal &&
               delay == o.delay && scheme == o.scheme && picard == o.picard &&
               memory == o.memory && output == o.output;
    }
};

namespace detail {

inline std::string join_key(const std::string& path, std::string_view key)
{
    return path.empty() ? std::string(key) : path + "." + std::string(key);
}

/// One JSON object being read; remembers which keys were consumed so leftovers are errors.
class Section {
public:
    Section(const json* j, std::string path) : j_(j), path_(std::move(path))
    {
        if (j_ && !j_->is_object()) throw ConfigError("expected a table", path_);
    }

    Section sub(std::string_view key)
    {
        seen_.insert(std::string(key));
        if (!j_ || !j_->contains(key)) return Section(nullptr, join_key(path_, key));
        return Section(&(*j_)[std::string(key)], join_key(path_, key));
    }

    void read(std::string_view key, double& out) { read_with(key, [&](const json& v, const std::string& k) {
        if (!v.is_number()) throw ConfigError("expected a number", k);
        out = v.get<double>();
    }); }

    void read(std::string_view key, int& out) { read_with(key, [&](const json& v, const std::string& k) {
        if (!v.is_number_integer()) throw ConfigError("expected an integer", k);
        out = v.get<int>();
    }); }

    void read(std::string_view key, std::size_t& out) { read_with(key, [&](const json& v, const std::string& k) {
        if (!v.is_number_integer() || v.get<long long>() < 0)
            throw ConfigError("expected a nonnegative integer", k);
        out = v.get<std::size_t>();
    }); }

    void read(std::string_view key, std::string& out) { read_with(key, [&](const json& v, const std::string& k) {
        if (!v.is_string()) throw ConfigError("expected a string", k);
        out = v.get<std::string>();
    }); }

    void read(std::string_view key, std::vector<double>& out) { read_with(key, [&](const json& v, const std::string& k) {
        if (!v.is_array()) throw ConfigError("expected a list of numbers", k);
        out.clear();
        for (const auto& e : v) {
            if (!e.is_number()) throw ConfigError("expected a list of numbers", k);
            out.push_back(e.get<double>());
        }
    }); }

    void read(std::string_view key, std::vector<std::array<double, 3>>& out) { read_with(key, [&](const json& v, const std::string& k) {
        if (!v.is_array()) throw ConfigError("expected a list of [a, b, height] triples", k);
        out.clear();
        for (const auto& e : v) {
            if (!e.is_array() || e.size() != 3 || !e[0].is_number() || !e[1].is_number() ||
                !e[2].is_number())
                throw ConfigError("expected a list of [a, b, height] triples", k);
            out.push_back({e[0].get<double>(), e[1].get<double>(), e[2].get<double>()});
        }
    }); }

    /// Unknown keys are errors: typos must not silently fall back to defaults.
    void finish() const
    {
        if (!j_) return;
        for (const auto& [k, v] : j_->items())
            if (!seen_.count(k)) throw ConfigError("unknown key", join_key(path_, k));
    }

private:
    template <typename Fn>
    void read_with(std::string_view key, Fn&& fn)
    {
        seen_.insert(std::string(key));
        if (!j_ || !j_->contains(key)) return;
        fn((*j_)[std::string(key)], join_key(path_, key));
    }

    const json* j_;
    std::string path_;
    std::set<std::string> seen_;
};

inline void require_one_of(const std::string& value, std::initializer_list<std::string_view> allowed,
                           const std::string& key)
{
    for (auto a : allowed)
        if (value == a) return;
    std::string msg = "expected one of";
    for (auto a : allowed) msg += " \"" + std::string(a) + "\"";
    throw ConfigError(msg + ", got \"" + value + "\"", key);
}

} // namespace detail

/// Range and enumeration checks; every error names the offending key.
inline void validate(const ExperimentConfig& c)
{
    using detail::require_one_of;
    if (!(c.domain.x_right > c.domain.x_left))
        throw ConfigError("x_right must exceed x_left", "domain.x_right");
    if (c.domain.num_cells < 2) throw ConfigError("need at least 2 cells", "domain.num_cells");
    require_one_of(c.domain.boundary, {"periodic", "outflow"}, "domain.boundary");
    if (!(c.time.t_final > 0.0)) throw ConfigError("must be positive", "time.t_final");
    if (!(c.time.cfl > 0.0 && c.time.cfl <= 1.0))
        throw ConfigError("must lie in (0, 1], got " + std::to_string(c.time.cfl), "time.cfl");

    require_one_of(c.model.kind, {"lwr_nonlocal", "goatin", "custom"}, "model.kind");
    if (c.model.m < 1) throw ConfigError("exponent must be >= 1", "model.m");
    require_one_of(c.model.velocity, {"constant", "one_minus_w", "goatin"}, "model.velocity");
    if (c.model.vmax.levels.size() != c.model.vmax.breakpoints.size() + 1)
        throw ConfigError("need exactly one more level than breakpoints", "model.vmax.levels");
    for (double l : c.model.vmax.levels)
        if (!(l > 0.0)) throw ConfigError("levels must be positive", "model.vmax.levels");
    if (!(c.model.vmax.gaussian_sigma >= 0.0))
        throw ConfigError("must be nonnegative", "model.vmax.gaussian_sigma");

    require_one_of(c.init.kind, {"plateaus", "constant", "sine", "riemann"}, "init.kind");
    for (const auto& p : c.init.plateaus)
        if (!(p[1] > p[0])) throw ConfigError("plateau needs a < b", "init.plateaus");
    require_one_of(c.history.kind, {"none", "exp_decay_of_init", "constant_init"}, "history.kind");

    require_one_of(c.kernel.spatial.kind, {"raised_cosine_left", "quintic_shifted", "tabulated"},
                   "kernel.spatial.kind");
    if (c.kernel.spatial.kind == "raised_cosine_left" && !(c.kernel.spatial.R > 0.0))
        throw ConfigError("must be positive", "kernel.spatial.R");
    if (c.kernel.spatial.kind == "quintic_shifted" && !(c.kernel.spatial.eta > 0.0))
        throw ConfigError("must be positive", "kernel.spatial.eta");
    if (c.kernel.spatial.kind == "tabulated" && c.kernel.spatial.table.empty())
        throw ConfigError("tabulated kernel needs a table path", "kernel.spatial.table");
    require_one_of(c.kernel.temporal.kind, {"none", "exponential", "erlang", "triangular"},
                   "kernel.temporal.kind");
    if (!(c.kernel.temporal.tau0 > 0.0)) throw ConfigError("must be positive", "kernel.temporal.tau0");
    if (!(c.kernel.temporal.width > 0.0)) throw ConfigError("must be positive", "kernel.temporal.width");

    require_one_of(c.nonlocal.mode, {"none", "spatial", "memory", "delay"}, "nonlocal.mode");
    require_one_of(c.nonlocal.fast_path, {"auto", "direct", "fft", "recursive"}, "nonlocal.fast_path");
    if (!(c.nonlocal.truncation_eps > 0.0 && c.nonlocal.truncation_eps < 1.0))
        throw ConfigError("must lie in (0, 1)", "nonlocal.truncation_eps");
    if (c.nonlocal.mode == "memory" && c.kernel.temporal.kind == "none")
        throw ConfigError("memory mode needs a temporal kernel", "kernel.temporal.kind");
    if (c.nonlocal.mode == "delay" && !(c.delay.delta > 0.0))
        throw ConfigError("delay mode needs a positive delay", "delay.delta");
    if (c.nonlocal.fast_path == "fft" && c.domain.boundary != "periodic")
        throw ConfigError("the FFT path needs a periodic domain", "nonlocal.fast_path");

    require_one_of(c.scheme.kind, {"godunov", "lax_friedrichs"}, "scheme.kind");
    if (!(c.picard.tol > 0.0)) throw ConfigError("must be positive", "picard.tol");
    if (c.picard.max_iters < 1) throw ConfigError("must be >= 1", "picard.max_iters");
    require_one_of(c.picard.mode, {"fixed_point", "direct"}, "picard.mode");
    require_one_of(c.memory.causal, {"strict", "semi_implicit"}, "memory.causal");
    if (c.output.stride < 1) throw ConfigError("must be >= 1", "output.stride");
}

inline ExperimentConfig config_from_json(const json& j, std::filesystem::path base_dir = {})
{
    ExperimentConfig c;
    c.base_dir = std::move(base_dir);
    detail::Section root(&j, "");

    auto d = root.sub("domain");
    d.read("x_left", c.domain.x_left);
    d.read("x_right", c.domain.x_right);
    d.read("num_cells", c.domain.num_cells);
    d.read("boundary", c.domain.boundary);
    d.finish();

    auto t = root.sub("time");
    t.read("t_final", c.time.t_final);
    t.read("cfl", c.time.cfl);
    t.finish();

    auto m = root.sub("model");
    m.read("kind", c.model.kind);
    m.read("m", c.model.m);
    m.read("velocity", c.model.velocity);
    auto v = m.sub("vmax");
    v.read("breakpoints", c.model.vmax.breakpoints);
    v.read("levels", c.model.vmax.levels);
    v.read("gaussian_sigma", c.model.vmax.gaussian_sigma);
    v.finish();
    m.finish();

    auto i = root.sub("init");
    i.read("kind", c.init.kind);
    i.read("plateaus", c.init.plateaus);
    i.read("value", c.init.value);
    i.read("base", c.init.base);
    i.read("amplitude", c.init.amplitude);
    i.read("periods", c.init.periods);
    i.read("left", c.init.left);
    i.read("right", c.init.right);
    i.read("x0", c.init.x0);
    i.finish();

    auto h = root.sub("history");
    h.read("kind", c.history.kind);
    h.finish();

    auto k = root.sub("kernel");
    auto ks = k.sub("spatial");
    ks.read("kind", c.kernel.spatial.kind);
    ks.read("R", c.kernel.spatial.R);
    ks.read("eta", c.kernel.spatial.eta);
    ks.read("delta", c.kernel.spatial.delta);
    ks.read("table", c.kernel.spatial.table);
    ks.finish();
    auto kt = k.sub("temporal");
    kt.read("kind", c.kernel.temporal.kind);
    kt.read("tau0", c.kernel.temporal.tau0);
    kt.read("width", c.kernel.temporal.width);
    kt.finish();
    k.finish();

    auto n = root.sub("nonlocal");
    n.read("mode", c.nonlocal.mode);
    n.read("fast_path", c.nonlocal.fast_path);
    n.read("truncation_eps", c.nonlocal.truncation_eps);
    n.finish();

    auto dl = root.sub("delay");
    dl.read("delta", c.delay.delta);
    dl.finish();

    auto s = root.sub("scheme");
    s.read("kind", c.scheme.kind);
    s.finish();

    auto p = root.sub("picard");
    p.read("tol", c.picard.tol);
    p.read("max_iters", c.picard.max_iters);
    p.read("mode", c.picard.mode);
    p.finish();

    auto mem = root.sub("memory");
    mem.read("causal", c.memory.causal);
    mem.finish();

    auto o = root.sub("output");
    o.read("stride", c.output.stride);
    o.read("dir", c.output.dir);
    o.finish();

    root.finish();
    validate(c);
    return c;
}

inline json to_json(const ExperimentConfig& c)
{
    json plateaus = json::array();
    for (const auto& p : c.init.plateaus) plateaus.push_back({p[0], p[1], p[2]});
    return json{
        {"domain",
         {{"x_left", c.domain.x_left},
          {"x_right", c.domain.x_right},
          {"num_cells", c.domain.num_cells},
          {"boundary", c.domain.boundary}}},
        {"time", {{"t_final", c.time.t_final}, {"cfl", c.time.cfl}}},
        {"model",
         {{"kind", c.model.kind},
          {"m", c.model.m},
          {"velocity", c.model.velocity},
          {"vmax",
           {{"breakpoints", c.model.vmax.breakpoints},
            {"levels", c.model.vmax.levels},
            {"gaussian_sigma", c.model.vmax.gaussian_sigma}}}}},
        {"init",
         {{"kind", c.init.kind},
          {"plateaus", plateaus},
          {"value", c.init.value},
          {"base", c.init.base},
          {"amplitude", c.init.amplitude},
          {"periods", c.init.periods},
          {"left", c.init.left},
          {"right", c.init.right},
          {"x0", c.init.x0}}},
        {"history", {{"kind", c.history.kind}}},
        {"kernel",
         {{"spatial",
           {{"kind", c.kernel.spatial.kind},
            {"R", c.kernel.spatial.R},
            {"eta", c.kernel.spatial.eta},
            {"delta", c.kernel.spatial.delta},
            {"table", c.kernel.spatial.table}}},
          {"temporal",
           {{"kind", c.kernel.temporal.kind},
            {"tau0", c.kernel.temporal.tau0},
            {"width", c.kernel.temporal.width}}}}},
        {"nonlocal",
         {{"mode", c.nonlocal.mode},
          {"fast_path", c.nonlocal.fast_path},
          {"truncation_eps", c.nonlocal.truncation_eps}}},
        {"delay", {{"delta", c.delay.delta}}},
        {"scheme", {{"kind", c.scheme.kind}}},
        {"picard", {{"tol", c.picard.tol}, {"max_iters", c.picard.max_iters}, {"mode", c.picard.mode}}},
        {"memory", {{"causal", c.memory.causal}}},
        {"output", {{"stride", c.output.stride}, {"dir", c.output.dir}}},
    };
}

inline ExperimentConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    json j;
    try {
        j = json::parse(in, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return config_from_json(j, path.parent_path());
}

/// Two-column "z,value" table; blank lines, '#' comments and a non-numeric header are skipped.
inline SpatialKernel load_kernel_table(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open kernel table " + path.string(), "kernel.spatial.table");
    std::vector<double> z, v;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        for (char& ch : line)
            if (ch == ',' || ch == ';' || ch == '\t') ch = ' ';
        std::istringstream ss(line);
        double a = 0.0, b = 0.0;
        if (!(ss >> a >> b)) {
            if (z.empty()) continue; // header
            throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected two numbers",
                              "kernel.spatial.table");
        }
        z.push_back(a);
        v.push_back(b);
    }
    return SpatialKernel::tabulated(std::move(z), std::move(v));
}

// ---------------------------------------------------------------------------
// Conversion to a runnable experiment
// ---------------------------------------------------------------------------

inline TemporalKernel make_temporal(const ExperimentConfig::Temporal& t)
{
    if (t.kind == "exponential") return TemporalKernel::exponential(t.tau0);
    if (t.kind == "erlang") return TemporalKernel::erlang(t.tau0);
    if (t.kind == "triangular") return TemporalKernel::triangular(t.width);
    return TemporalKernel::none();
}

inline SpatialKernel make_spatial(const ExperimentConfig::Spatial& s,
                                  const std::filesystem::path& base_dir)
{
    if (s.kind == "raised_cosine_left") return SpatialKernel::raised_cosine_left(s.R);
    if (s.kind == "quintic_shifted") return SpatialKernel::quintic_shifted(s.eta, s.delta);
    std::filesystem::path p(s.table);
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    return load_kernel_table(p);
}

inline FluxModel make_flux(const ExperimentConfig::Model& m, const Grid& grid)
{
    const auto& v = m.vmax;
    SpeedProfile profile = v.breakpoints.empty()
                               ? SpeedProfile::constant(v.levels.at(0))
                               : SpeedProfile::smoothed_steps(v.breakpoints, v.levels,
                                                              v.gaussian_sigma, grid);
    if (m.kind == "lwr_nonlocal")
        return detail::greenshields_product("lwr_nonlocal", std::move(profile),
                                            VelocityFactor::OneMinusW, 1);
    if (m.kind == "goatin") return goatin_flux(m.m, std::move(profile));
    VelocityFactor f = VelocityFactor::Constant;
    if (m.velocity == "one_minus_w") f = VelocityFactor::OneMinusW;
    if (m.velocity == "goatin") f = VelocityFactor::Goatin;
    return detail::greenshields_product("custom", std::move(profile), f, m.m);
}

inline InitialDatum make_init(const ExperimentConfig::Init& i, const Grid& grid)
{
    if (i.kind == "constant") return InitialDatum::constant(i.value);
    if (i.kind == "sine")
        return InitialDatum::sine(i.base, i.amplitude, i.periods, grid.x_left(), grid.length());
    if (i.kind == "riemann") return InitialDatum::riemann(i.left, i.right, i.x0);
    std::vector<Plateau> p;
    for (const auto& t : i.plateaus) p.push_back({t[0], t[1], t[2]});
    return InitialDatum::plateaus(std::move(p));
}

inline NonlocalMode mode_from_string(std::string_view s)
{
    if (s == "none") return NonlocalMode::None;
    if (s == "spatial") return NonlocalMode::Spatial;
    if (s == "memory") return NonlocalMode::Memory;
    if (s == "delay") return NonlocalMode::Delay;
    throw ConfigError("unknown mode \"" + std::string(s) + "\"", "nonlocal.mode");
}

inline PicardMode picard_mode_from_string(std::string_view s)
{
    if (s == "fixed_point") return PicardMode::FixedPoint;
    if (s == "direct") return PicardMode::Direct;
    throw ConfigError("expected \"fixed_point\" or \"direct\", got \"" + std::string(s) + "\"",
                      "picard.mode");
}

inline Experiment build_experiment(const ExperimentConfig& c)
{
    validate(c);
    Experiment e;
    e.grid = build_grid(c.domain.x_left, c.domain.x_right, c.domain.num_cells,
                        boundary_from_string(c.domain.boundary));
    e.t_final = c.time.t_final;
    e.cfl = c.time.cfl;
    e.flux = make_flux(c.model, e.grid);
    e.init = make_init(c.init, e.grid);
    const double lo = e.init.min_value(), hi = e.init.max_value();
    if (lo < e.flux.q_box.first || hi > e.flux.q_box.second)
        throw ConfigError("initial datum leaves the state box [" +
                              std::to_string(e.flux.q_box.first) + ", " +
                              std::to_string(e.flux.q_box.second) + "]",
                          "init");
    HistoryKind hk = HistoryKind::None;
    if (c.history.kind == "exp_decay_of_init") hk = HistoryKind::ExpDecayOfInit;
    if (c.history.kind == "constant_init") hk = HistoryKind::ConstantInit;
    e.historical = make_historical(hk, e.init);
    e.mode = mode_from_string(c.nonlocal.mode);
    if (e.mode != NonlocalMode::None) e.spatial = make_spatial(c.kernel.spatial, c.base_dir);
    e.temporal = make_temporal(c.kernel.temporal);
    e.fast_path = fast_path_from_string(c.nonlocal.fast_path);
    e.truncation_eps = c.nonlocal.truncation_eps;
    e.delay = c.delay.delta;
    e.scheme = scheme_from_string(c.scheme.kind);
    e.causal = c.memory.causal == "strict" ? MemoryCausality::Strict : MemoryCausality::SemiImplicit;
    e.picard.tol = c.picard.tol;
    e.picard.max_iters = c.picard.max_iters;
    e.picard.mode = picard_mode_from_string(c.picard.mode);
    return e;
}

// ---------------------------------------------------------------------------
// Shipped experiments
// ---------------------------------------------------------------------------

/**
 * Two-plateau nonlocal LWR on (0, 4), outflow, T = 5, raised cosine with R = 0.4.
 * `temporal` = "none" gives the purely spatial run; otherwise a memory run with the unit
 * time scale and the historical datum q0(x) e^t.
 */
inline ExperimentConfig lwr_config(const std::string& temporal = "none")
{
    ExperimentConfig c;
    c.kernel.temporal.kind = temporal;
    if (temporal != "none") {
        c.nonlocal.mode = "memory";
        c.history.kind = "exp_decay_of_init";
    }
    validate(c);
    return c;
}

/**
 * Periodic (-1, 1), T = 0.5, rho0 = 0.6, Nx = 2000, CFL 0.9, Lax-Friedrichs, quintic kernel.
 * The speed limit is a reconstruction: a slow zone (0.6) on [-0.5, 0.5], smoothed with a
 * Gaussian of width 0.25. With this width the solution stays free of shocks up to T = 0.5.
 */
inline ExperimentConfig goatin_config(int m = 3, double eta = 0.1, double delta = 0.06)
{
    ExperimentConfig c;
    c.domain = {-1.0, 1.0, 2000, "periodic"};
    c.time = {0.5, 0.9};
    c.model.kind = "goatin";
    c.model.m = m;
    c.model.vmax = {{-0.5, 0.5}, {1.0, 0.6, 1.0}, 0.25};
    c.init.kind = "constant";
    c.init.value = 0.6;
    c.kernel.spatial.kind = "quintic_shifted";
    c.kernel.spatial.eta = eta;
    c.kernel.spatial.delta = delta;
    c.scheme.kind = "lax_friedrichs";
    validate(c);
    return c;
}

inline Experiment lwr_experiment(const std::string& temporal = "none")
{
    return build_experiment(lwr_config(temporal));
}

inline Experiment goatin_experiment(int m = 3, double eta = 0.1, double delta = 0.06)
{
    return build_experiment(goatin_config(m, eta, delta));
}

} // namespace claws
