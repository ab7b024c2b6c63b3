#pragma once

#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bench.hpp"
#include "config.hpp"
#include "diagnostics.hpp"
#include "errors.hpp"
#include "io.hpp"
#include "solver.hpp"

namespace claws::cli {

enum ExitCode : int { Ok = 0, ConfigFailure = 2, SolverFailure = 3, AssertFailure = 4 };

struct Options {
    std::filesystem::path config;
    std::optional<std::filesystem::path> out;
    std::optional<std::size_t> stride;
    std::optional<std::string> mode;      ///< picard.mode override
    std::optional<std::string> fast_path; ///< nonlocal.fast_path override
    bool assert_checks = false;
    std::vector<std::size_t> resolutions;
    std::size_t bench_steps = 2000;
    std::vector<std::size_t> bench_ladder{256, 512, 1024, 2048, 4096};
};

inline std::string error_class(const std::exception& e)
{
    if (dynamic_cast<const KernelResolutionError*>(&e)) return "KernelResolutionError";
    if (dynamic_cast<const UnsupportedKernelError*>(&e)) return "UnsupportedKernelError";
    if (dynamic_cast<const ConfigError*>(&e)) return "ConfigError";
    if (dynamic_cast<const ConvergenceError*>(&e)) return "ConvergenceError";
    if (dynamic_cast<const StabilityError*>(&e)) return "StabilityError";
    if (dynamic_cast<const WaveSpeedError*>(&e)) return "WaveSpeedError";
    if (dynamic_cast<const ModeError*>(&e)) return "ModeError";
    if (dynamic_cast<const SequencingError*>(&e)) return "SequencingError";
    if (dynamic_cast<const ModelError*>(&e)) return "ModelError";
    if (dynamic_cast<const SolverError*>(&e)) return "SolverError";
    return "Error";
}

/// Runs a command body and maps exceptions to exit codes with the error class on stderr.
inline int guarded(const std::function<int()>& body, std::ostream& err = std::cerr)
{
    try {
        return body();
    } catch (const ConfigError& e) {
        err << "config error";
        if (!e.key().empty()) err << " at `" << e.key() << "`";
        err << ": " << e.what() << '\n';
        return ConfigFailure;
    } catch (const SolverError& e) {
        err << error_class(e) << ": " << e.what() << '\n';
        return SolverFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return SolverFailure;
    }
}

inline ExperimentConfig resolve_config(const Options& o)
{
    auto cfg = load_config(o.config);
    if (o.stride) cfg.output.stride = *o.stride;
    if (o.mode) cfg.picard.mode = *o.mode;
    if (o.fast_path) cfg.nonlocal.fast_path = *o.fast_path;
    validate(cfg);
    return cfg;
}

inline std::filesystem::path output_dir(const Options& o, const ExperimentConfig& cfg)
{
    auto dir = o.out ? *o.out : std::filesystem::path(cfg.output.dir);
    ensure_directory(dir);
    return dir;
}

/// Runs one experiment and writes trajectory.csv, diagnostics.json and summary.txt.
struct RunArtifacts {
    Experiment experiment;
    RunResult result;
    DiagnosticsReport report;
};

inline RunArtifacts run_and_write(const ExperimentConfig& cfg, const std::filesystem::path& dir)
{
    ensure_directory(dir);
    RunArtifacts a{build_experiment(cfg), {}, {}};
    RunOptions opts;
    opts.stride = cfg.output.stride;
    opts.record_nonlocal = cfg.output.stride == 1;
    a.result = run(a.experiment, opts);
    a.report = build_report(a.result, a.experiment);
    write_trajectory_csv(dir / "trajectory.csv", a.result);
    write_diagnostics_json(dir / "diagnostics.json", a.report, a.result, cfg);
    write_text(dir / "summary.txt", summary_text(a.report, a.result));
    return a;
}

/// Runtime checks behind --assert; returns the failed checks.
inline std::vector<std::string> failed_checks(const RunArtifacts& a)
{
    std::vector<std::string> failed;
    const auto& rep = a.report;
    const auto& init = a.experiment.init;
    if (rep.max_principle && init.min_value() >= rep.max_principle->q_min &&
        init.max_value() <= rep.max_principle->q_max && !rep.max_principle->ok())
        failed.push_back("max_principle");
    if (!rep.envelopes.ok()) failed.push_back("bound_envelopes");
    if (rep.mass_ledger_max && *rep.mass_ledger_max > 1e-12) failed.push_back("mass_ledger");
    const double floor = -10.0 * a.result.grid.dx();
    for (double v : rep.entropy_min)
        if (v < floor) {
            failed.push_back("entropy_residual");
            break;
        }
    if (!rep.tv_growth.finite()) failed.push_back("tv_growth");
    return failed;
}

inline int cmd_run(const Options& o, std::ostream& log = std::cout, std::ostream& err = std::cerr)
{
    return guarded([&] {
        const auto cfg = resolve_config(o);
        const auto dir = output_dir(o, cfg);
        const auto a = run_and_write(cfg, dir);
        log << summary_text(a.report, a.result);
        if (!a.result.ok()) {
            err << "solver error (" << a.result.failure_kind << "): " << *a.result.failure
                << "\npartial output written to " << dir.string() << '\n';
            return static_cast<int>(SolverFailure);
        }
        if (o.assert_checks) {
            const auto failed = failed_checks(a);
            for (const auto& f : failed) err << "check failed: " << f << '\n';
            if (!failed.empty()) return static_cast<int>(AssertFailure);
        }
        return static_cast<int>(Ok);
    }, err);
}

struct Comparison {
    double max_error = 0.0; ///< max |q_fp - q_direct| over stored levels and cells
    double l1_error = 0.0;  ///< max over stored levels of sum |q_fp - q_direct| dx
    std::vector<std::vector<double>> pointwise;
};

/// Pointwise difference of two runs of the same discretization and scheme.
inline Comparison compare_runs(const RunResult& a, const Experiment& ea, const RunResult& b,
                               const Experiment& eb)
{
    if (ea.scheme != eb.scheme)
        throw ConfigError("comparison needs the same scheme in both modes", "scheme.kind");
    if (a.grid.size() != b.grid.size() || a.time.dt != b.time.dt || a.stride != b.stride)
        throw ConfigError("comparison needs identical grids, time steps and strides");
    Comparison c;
    const std::size_t levels = std::min(a.levels.size(), b.levels.size());
    for (std::size_t n = 0; n < levels; ++n) {
        std::vector<double> e(a.levels[n].size());
        double l1 = 0.0;
        for (std::size_t i = 0; i < e.size(); ++i) {
            e[i] = std::abs(a.levels[n][i] - b.levels[n][i]);
            c.max_error = std::max(c.max_error, e[i]);
            l1 += e[i];
        }
        c.l1_error = std::max(c.l1_error, l1 * a.grid.dx());
        c.pointwise.push_back(std::move(e));
    }
    return c;
}

inline int cmd_compare(const Options& o, std::ostream& log = std::cout, std::ostream& err = std::cerr)
{
    return guarded([&] {
        const auto cfg = resolve_config(o);
        const auto dir = output_dir(o, cfg);
        auto fp_cfg = cfg;
        fp_cfg.picard.mode = "fixed_point";
        auto direct_cfg = cfg;
        direct_cfg.picard.mode = "direct";
        const auto fp = run_and_write(fp_cfg, dir / "fixed_point");
        const auto direct = run_and_write(direct_cfg, dir / "direct");
        const auto cmp = compare_runs(fp.result, fp.experiment, direct.result, direct.experiment);
        {
            auto out = open_output(dir / "pointwise_error.csv");
            std::vector<double> times(fp.result.times.begin(),
                                      fp.result.times.begin() +
                                          static_cast<std::ptrdiff_t>(cmp.pointwise.size()));
            write_space_time_csv(out, fp.result.grid, times, cmp.pointwise);
        }
        const json summary{{"max_error", cmp.max_error},
                           {"l1_error", cmp.l1_error},
                           {"levels", cmp.pointwise.size()},
                           {"fixed_point_ok", fp.result.ok()},
                           {"direct_ok", direct.result.ok()},
                           {"picard_median", fp.report.picard.median},
                           {"picard_max", fp.report.picard.max},
                           {"config_echo", to_json(cfg)}};
        write_text(dir / "compare.json", summary.dump(2) + "\n");
        log << "max pointwise error: " << format_double(cmp.max_error) << '\n'
            << "max L1 error: " << format_double(cmp.l1_error) << '\n'
            << "picard iterations: median " << fp.report.picard.median << ", max "
            << fp.report.picard.max << '\n';
        for (const auto* r : {&fp.result, &direct.result}) {
            if (!r->ok()) {
                err << "solver error (" << r->failure_kind << "): " << *r->failure << '\n';
                return static_cast<int>(SolverFailure);
            }
        }
        return static_cast<int>(Ok);
    }, err);
}

inline int cmd_convergence(const Options& o, std::ostream& log = std::cout,
                           std::ostream& err = std::cerr)
{
    return guarded([&] {
        if (o.resolutions.size() < 3)
            throw ConfigError("convergence needs at least 3 resolutions", "resolutions");
        const auto cfg = resolve_config(o);
        const auto dir = output_dir(o, cfg);
        auto runner = [&](std::size_t nx) {
            auto c = cfg;
            c.domain.num_cells = nx;
            RunOptions opts;
            opts.stride = 1u << 30; // only the first and last levels are needed
            return run(build_experiment(c), opts);
        };
        const auto rep = convergence_study(runner, o.resolutions);
        json orders{{"resolutions", rep.resolutions},
                    {"differences", rep.differences},
                    {"orders", rep.orders},
                    {"exact", rep.exact},
                    {"config_echo", to_json(cfg)}};
        write_text(dir / "orders.json", orders.dump(2) + "\n");
        if (rep.exact) {
            log << "exact: all differences vanish\n";
        } else {
            for (std::size_t i = 0; i < rep.orders.size(); ++i)
                log << rep.resolutions[i] << " -> " << rep.resolutions[i + 2]
                    << ": order " << format_double(rep.orders[i]) << '\n';
        }
        if (o.assert_checks && !rep.exact) {
            for (double p : rep.orders)
                if (!(p > 0.0)) {
                    err << "check failed: nonpositive convergence order\n";
                    return static_cast<int>(AssertFailure);
                }
        }
        return static_cast<int>(Ok);
    }, err);
}

inline int cmd_bench(const Options& o, std::ostream& log = std::cout, std::ostream& err = std::cerr)
{
    return guarded([&] {
        const auto cfg = resolve_config(o);
        if (cfg.nonlocal.mode != "memory")
            throw ConfigError("bench needs a memory-mode config", "nonlocal.mode");
        const auto dir = output_dir(o, cfg);
        const auto mem = bench_memory(cfg, o.bench_steps);
        const auto kernel = make_spatial(cfg.kernel.spatial, cfg.base_dir);
        const auto conv = bench_convolution(kernel, cfg.domain.x_left, cfg.domain.x_right, o.bench_ladder);

        auto out = open_output(dir / "bench.csv");
        out << "section,path,nx,n,seconds\n";
        auto dump_steps = [&](const StepTimings& s) {
            for (std::size_t n = 0; n < s.seconds.size(); ++n)
                out << "memory," << s.path << ',' << mem.nx << ',' << n << ','
                    << format_double(s.seconds[n]) << '\n';
        };
        dump_steps(mem.quadrature);
        if (mem.recursive) dump_steps(*mem.recursive);
        for (const auto& r : conv.rows) {
            out << "convolution,direct," << r.nx << ",0," << format_double(r.direct_seconds) << '\n';
            out << "convolution,fft," << r.nx << ",0," << format_double(r.fft_seconds) << '\n';
        }

        auto fit_json = [](const LinearFit& f) {
            return json{{"slope", f.slope}, {"intercept", f.intercept}, {"r2", f.r2}};
        };
        json j{{"nx", mem.nx},
               {"steps", mem.steps},
               {"bin", mem.bin},
               {"quadrature", fit_json(mem.quadrature.fit)},
               {"recursive", mem.recursive ? fit_json(mem.recursive->fit) : json(nullptr)},
               {"crossover_nx", conv.crossover ? json(*conv.crossover) : json(nullptr)}};
        bool ok = mem.quadrature.fit.slope > 0.0 && mem.quadrature.fit.r2 >= 0.8;
        if (mem.recursive)
            ok = ok && std::abs(mem.recursive->fit.slope) <= 0.05 * mem.quadrature.fit.slope;
        j["complexity_ok"] = ok;
        write_text(dir / "bench.json", j.dump(2) + "\n");

        log << "quadrature slope " << format_double(mem.quadrature.fit.slope) << " s/step, R^2 "
            << format_double(mem.quadrature.fit.r2) << '\n';
        if (mem.recursive)
            log << "recursive slope " << format_double(mem.recursive->fit.slope) << " s/step\n";
        if (conv.crossover)
            log << "FFT faster from Nx = " << *conv.crossover << '\n';
        else
            log << "FFT never faster on this ladder\n";
        if (o.assert_checks && !ok) {
            err << "check failed: complexity\n";
            return static_cast<int>(AssertFailure);
        }
        return static_cast<int>(Ok);
    }, err);
}

/**
 * Plot inputs that are not run outputs: kernel shapes, the historical datum and the speed
 * profile, plus a manifest describing every file's columns.
 */
inline int cmd_plot_export(const Options& o, std::ostream& log = std::cout,
                           std::ostream& err = std::cerr)
{
    return guarded([&] {
        const auto cfg = resolve_config(o);
        const auto dir = output_dir(o, cfg);
        const auto exp = build_experiment(cfg);
        const Grid& g = exp.grid;
        json files = json::object();

        {
            const auto k = make_spatial(cfg.kernel.spatial, cfg.base_dir);
            auto out = open_output(dir / "kernel_spatial.csv");
            out << "z,gamma\n";
            const double pad = 0.1 * k.support_width();
            const double a = k.support_lo() - pad, b = k.support_hi() + pad;
            for (int i = 0; i <= 400; ++i) {
                const double z = a + (b - a) * i / 400.0;
                out << format_double(z) << ',' << format_double(k(z)) << '\n';
            }
            files["kernel_spatial.csv"] = "z,gamma: continuous spatial kernel on its padded support";
        }
        {
            auto out = open_output(dir / "kernel_temporal.csv");
            const double tau0 = cfg.kernel.temporal.tau0, width = cfg.kernel.temporal.width;
            const auto e = TemporalKernel::exponential(tau0);
            const auto r = TemporalKernel::erlang(tau0);
            const auto t = TemporalKernel::triangular(width);
            const double span = 5.0 * std::max(tau0, width);
            out << "tau,exponential,erlang,triangular\n";
            for (int i = 0; i <= 400; ++i) {
                const double tau = span * i / 400.0;
                out << format_double(tau) << ',' << format_double(e(tau)) << ','
                    << format_double(r(tau)) << ',' << format_double(t(tau)) << '\n';
            }
            files["kernel_temporal.csv"] = "tau,exponential,erlang,triangular: temporal kernels";
        }
        if (exp.historical) {
            std::vector<double> times;
            std::vector<std::vector<double>> rows;
            for (int k = -6; k <= 0; ++k) {
                const double t = 0.5 * k;
                times.push_back(t);
                std::vector<double> row(g.size());
                for (std::size_t i = 0; i < g.size(); ++i) row[i] = exp.historical(t, g.center(i));
                rows.push_back(std::move(row));
            }
            auto out = open_output(dir / "historical.csv");
            write_space_time_csv(out, g, times, rows);
            files["historical.csv"] = "space-time layout: historical datum at t <= 0";
        }
        {
            auto out = open_output(dir / "vmax.csv");
            out << "x,vmax\n";
            for (std::size_t i = 0; i < g.size(); ++i) {
                const double x = g.center(i);
                const double v = exp.flux.speed ? exp.flux.speed(0.0, x) : 1.0;
                out << format_double(x) << ',' << format_double(v) << '\n';
            }
            files["vmax.csv"] = "x,vmax: speed factor at cell centers, t = 0";
        }
        const json manifest{
            {"files", files},
            {"run_outputs",
             {{"trajectory.csv", "row 1: x,<cell centers>; then t,<q_0..q_{Nx-1}> per stored level"},
              {"diagnostics.json", "mass[], l1[], linf[], tv[], max_principle, entropy_min[], "
                                   "picard_iters[], run, config_echo"},
              {"pointwise_error.csv", "space-time layout of |q_fixed_point - q_direct| (compare)"},
              {"summary.txt", "human-readable run summary"}}},
            {"state_box", {exp.flux.q_box.first, exp.flux.q_box.second}},
            {"domain", {g.x_left(), g.x_right()}},
            {"t_final", exp.t_final},
            {"config_echo", to_json(cfg)}};
        write_text(dir / "manifest.json", manifest.dump(2) + "\n");
        log << "plot inputs written to " << dir.string() << '\n';
        return static_cast<int>(Ok);
    }, err);
}

} // namespace claws::cli
