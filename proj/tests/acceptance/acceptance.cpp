// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "test_util.hpp"

using namespace claws;
using claws::testing::godunov_by_scan;
using claws::testing::max_abs_diff;
using claws::testing::random_field;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    std::string name;
    double budget_seconds; ///< 0 = no runtime limit
    std::function<Outcome()> body;
};

std::string fmt(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

// ---------------------------------------------------------------------------

Outcome fft_direct()
{
    std::mt19937_64 rng(101);
    const auto table = load_kernel_table(fs::path(CLAWS_TEST_DATA_DIR) / "lookahead_kernel.csv");
    double worst = 0.0;
    for (std::size_t nx : {64u, 1000u, 2000u}) {
        const auto g = build_grid(0.0, 4.0, nx, Boundary::Periodic);
        for (const auto& k : {SpatialKernel::raised_cosine_left(0.4), table}) {
            const auto w = sample_spatial(k, g.dx());
            const PeriodicConvolver pc(nx, w);
            for (int rep = 0; rep < 200; ++rep) {
                const auto q = random_field(rng, nx);
                worst = std::max(worst, max_abs_diff(conv_fft_periodic(q, pc).values, conv_direct(q, w, g).values));
            }
        }
    }
    return {worst <= 1e-12, "max |fft - direct| = " + fmt(worst) + " (tol 1e-12)"};
}

Outcome recursive_quadrature()
{
    const auto g = build_grid(0.0, 3.2, 32, Boundary::Outflow);
    const SpatialConvolver conv(g, sample_spatial(SpatialKernel::raised_cosine_left(0.4), g.dx()), FastPath::Direct);
    const double dt = 0.01, tau0 = 0.3;
    const std::size_t steps = 100;
    const auto kernel = TemporalKernel::exponential(tau0);
    // zero history and every computed level in the sum: the untruncated quadrature
    MemoryWeights full{kernel, dt, temporal_lag_weights(kernel, dt, steps + 1), 0.0};
    std::mt19937_64 rng(102);
    History h(g, dt);
    h.push(random_field(rng, 32));
    std::vector<double> S(32, 0.0);
    double worst = 0.0;
    for (std::size_t n = 0; n < steps; ++n) {
        S = exp_recursive_update(S, h.level(static_cast<std::ptrdiff_t>(n)), conv, dt, tau0).first;
        h.push(random_field(rng, 32));
        const auto ref = memory_quadrature(h, conv, full, n + 1).values;
        for (std::size_t i = 0; i < 32; ++i) worst = std::max(worst, std::abs(S[i] - ref[i]) / std::abs(ref[i]));
    }
    return {worst <= 1e-10, "max relative deviation = " + fmt(worst) + " (tol 1e-10)"};
}

Outcome godunov_oracle()
{
    std::mt19937_64 rng(103);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const auto base = lwr_nonlocal_flux(1.0);
    std::size_t calls = 0, max_calls = 0;
    FluxModel counted = base;
    counted.evaluate = [&calls, ev = base.evaluate](double t, double x, double w, double q) {
        ++calls;
        return ev(t, x, w, q);
    };
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const double qL = u(rng), qR = u(rng), w = u(rng);
        calls = 0;
        const double g = godunov_flux(qL, qR, counted, 0.0, 0.0, w);
        max_calls = std::max(max_calls, calls);
        worst = std::max(worst, std::abs(g - godunov_by_scan([&](double q) { return base(0.0, 0.0, w, q); }, qL, qR)));
    }
    return {worst <= 1e-8 && max_calls <= 3,
            "max |G - scan| = " + fmt(worst) + " (tol 1e-8), max flux calls = " + std::to_string(max_calls) + " (<= 3)"};
}

Outcome conservation()
{
    std::string detail;
    bool pass = true;
    for (const auto* scheme : {"lax_friedrichs", "godunov"}) {
        auto c = goatin_config();
        c.domain.num_cells = 500;
        c.time.t_final = 1.0; // long enough for 200 steps
        c.scheme.kind = scheme;
        Simulation sim(build_experiment(c));
        const auto& g = sim.grid();
        const double m0 = mass(sim.current(), g);
        double worst = 0.0;
        for (int n = 0; n < 200; ++n) {
            sim.step();
            worst = std::max(worst, std::abs(mass(sim.current(), g) - m0));
        }
        pass = pass && worst <= 1e-12;
        detail += std::string(detail.empty() ? "" : ", ") + scheme + " max |dm| = " + fmt(worst);
    }
    return {pass, detail + " over 200 steps (tol 1e-12)"};
}

RunResult lwr_t15()
{
    auto c = lwr_config();
    c.time.t_final = 1.5;
    return run(build_experiment(c));
}

Outcome max_principle()
{
    const auto res = lwr_t15();
    if (!res.ok()) return {false, "run failed: " + *res.failure};
    const auto r = check_max_principle(res.levels, 0.0, 0.8, 1e-10);
    double lo = 1.0, hi = 0.0;
    for (const auto& q : res.levels)
        for (double v : q) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    return {r.ok(), "range [" + fmt(lo) + ", " + fmt(hi) + "] over " + std::to_string(res.levels.size()) +
                        " levels, violations = " + std::to_string(r.violations)};
}

Outcome picard()
{
    const auto res = lwr_t15();
    if (!res.ok()) return {false, "run failed: " + *res.failure};
    const auto s = picard_stats(res.iterations);
    return {s.median <= 10.0 && s.max <= 25,
            std::to_string(s.steps) + " steps converged, median " + fmt(s.median) + " (<= 10), max " +
                std::to_string(s.max) + " (<= 25)"};
}

double fixed_point_direct_gap(std::size_t nx)
{
    auto c = goatin_config();
    c.domain.num_cells = nx;
    const auto fp = run(build_experiment(c));
    c.picard.mode = "direct";
    const auto dr = run(build_experiment(c));
    if (!fp.ok() || !dr.ok()) return std::numeric_limits<double>::quiet_NaN();
    double worst = 0.0;
    for (std::size_t n = 0; n < fp.levels.size(); ++n) worst = std::max(worst, max_abs_diff(fp.levels[n], dr.levels[n]));
    return worst;
}

Outcome fixed_point_vs_direct()
{
    const double d500 = fixed_point_direct_gap(500);
    const double d1000 = fixed_point_direct_gap(1000);
    const double ratio = d500 / d1000;
    return {ratio >= 1.8 && d1000 < d500,
            "Linf gap Nx=500: " + fmt(d500) + ", Nx=1000: " + fmt(d1000) + ", ratio " + fmt(ratio) + " (>= 1.8)"};
}

Outcome tv_control()
{
    // local: every step must not increase TV
    auto c = lwr_config();
    c.nonlocal.mode = "none";
    const auto local = run(build_experiment(c));
    if (!local.ok()) return {false, "local run failed"};
    double worst_increase = -1.0;
    for (std::size_t n = 0; n + 1 < local.levels.size(); ++n)
        worst_increase = std::max(worst_increase, tv_seminorm(local.levels[n + 1], local.grid) -
                                                      tv_seminorm(local.levels[n], local.grid));
    // nonlocal: fitted growth rate at two resolutions
    std::vector<double> rates;
    for (std::size_t nx : {200u, 400u}) {
        auto s = lwr_config();
        s.domain.num_cells = nx;
        const auto res = run(build_experiment(s));
        if (!res.ok()) return {false, "nonlocal run failed"};
        std::vector<double> tv;
        for (const auto& q : res.levels) tv.push_back(tv_seminorm(q, res.grid));
        rates.push_back(tv_growth(res.times, tv).rate);
    }
    const double rel = std::abs(rates[1] - rates[0]) / std::abs(rates[0]);
    const bool pass = worst_increase <= 1e-12 && std::isfinite(rates[0]) && std::isfinite(rates[1]) && rel <= 0.2;
    return {pass, "local max TV increase " + fmt(worst_increase) + " (<= 1e-12); nonlocal rate Nx=200 " +
                      fmt(rates[0]) + ", Nx=400 " + fmt(rates[1]) + ", relative change " + fmt(rel) + " (<= 0.2)"};
}

Outcome kernel_normalization()
{
    double worst = 0.0;
    std::size_t checked = 0;
    std::vector<std::size_t> ladder{200, 400, 500, 800, 1000, 2000};
    for (const auto& entry : fs::directory_iterator(CLAWS_CONFIG_DIR)) {
        if (entry.path().extension() != ".json") continue;
        const auto cfg = load_config(entry.path());
        const auto k = make_spatial(cfg.kernel.spatial, cfg.base_dir);
        auto sizes = ladder;
        sizes.push_back(cfg.domain.num_cells);
        for (auto nx : sizes) {
            const double dx = (cfg.domain.x_right - cfg.domain.x_left) / static_cast<double>(nx);
            worst = std::max(worst, std::abs(sample_spatial(k, dx).mass() - 1.0));
            ++checked;
        }
    }
    const auto table = load_kernel_table(fs::path(CLAWS_TEST_DATA_DIR) / "lookahead_kernel.csv");
    for (double dx : {4.0 / 64, 4.0 / 200, 4.0 / 1000, 4.0 / 2000}) {
        worst = std::max(worst, std::abs(sample_spatial(table, dx).mass() - 1.0));
        ++checked;
    }
    return {worst <= 1e-14, std::to_string(checked) + " kernel/dx pairs, max |sum w dx - 1| = " + fmt(worst) +
                                " (tol 1e-14)"};
}

double entropy_floor(std::size_t nx, double& dx)
{
    auto c = lwr_config();
    c.domain.num_cells = nx;
    c.time.t_final = 1.0;
    c.nonlocal.mode = "none";
    c.init.kind = "riemann";
    c.init.left = 0.2;
    c.init.right = 0.8;
    c.init.x0 = 2.0;
    const auto e = build_experiment(c);
    RunOptions o;
    o.record_nonlocal = true;
    const auto res = run(e, o);
    std::vector<double> ks;
    for (int j = 1; j <= 9; ++j) ks.push_back(0.1 * j);
    const auto r = entropy_residual(res, e, ks);
    dx = e.grid.dx();
    return *std::min_element(r.begin(), r.end());
}

Outcome entropy()
{
    double dx200 = 0.0, dx400 = 0.0;
    const double m200 = entropy_floor(200, dx200);
    const double m400 = entropy_floor(400, dx400);
    return {m400 >= -10.0 * dx400, "min residual Nx=400: " + fmt(m400) + " (>= " + fmt(-10.0 * dx400) +
                                       "); calibration Nx=200: " + fmt(m200)};
}

Outcome complexity()
{
    auto cfg = load_config(fs::path(CLAWS_CONFIG_DIR) / "lwr_memory_exp.json");
    cfg.domain.num_cells = 512;
    const auto b = bench_memory(cfg, 2000, 20);
    if (!b.recursive) return {false, "no recursive path"};
    const auto& q = b.quadrature.fit;
    const auto& r = b.recursive->fit;
    const bool pass = q.slope > 0.0 && q.r2 >= 0.8 && std::abs(r.slope) <= 0.05 * q.slope;
    return {pass, "quadrature slope " + fmt(q.slope) + " s/step (R^2 " + fmt(q.r2) + ", >= 0.8); recursive slope " +
                      fmt(r.slope) + " (|.| <= " + fmt(0.05 * q.slope) + ")"};
}

Outcome delay()
{
    auto c = lwr_config();
    c.domain.num_cells = 200;
    c.time.t_final = 1.5;
    c.nonlocal.mode = "delay";
    c.history.kind = "exp_decay_of_init";
    c.delay.delta = 0.1;
    c.model.kind = "custom";
    c.model.velocity = "constant";
    const auto e = build_experiment(c);
    const double dt = Simulation(e).time().dt;
    const auto ref = run_delay(e, dt);
    bool identical = ref.ok();
    for (double d : {10.0 * dt, e.t_final}) identical = identical && run_delay(e, d).levels == ref.levels;

    // slice restart on a w-dependent run
    auto cw = c;
    cw.model.kind = "lwr_nonlocal";
    cw.delay.delta = 0.12;
    const auto ew = build_experiment(cw);
    const auto full = run(ew);
    bool restart = full.ok();
    const std::size_t d = full.delay_steps;
    for (std::size_t cut : {std::size_t{3}, d + 1, full.time.num_steps / 2}) {
        Simulation sim(ew);
        const std::size_t first = cut >= d ? cut - d : 0;
        std::vector<std::vector<double>> window(full.levels.begin() + static_cast<std::ptrdiff_t>(first),
                                                full.levels.begin() + static_cast<std::ptrdiff_t>(cut) + 1);
        sim.restart_from(window, first);
        const auto tail = sim.run();
        restart = restart && tail.ok() && tail.levels.back() == full.levels.back();
    }
    return {identical && restart, std::string("w-independent trajectories for delta in {dt, 10dt, T} ") +
                                      (identical ? "identical" : "DIFFER") + "; slice restarts " +
                                      (restart ? "bit-exact" : "DIFFER")};
}

} // namespace

int main()
{
    const std::vector<Criterion> criteria{
        {"fft_direct_equivalence", 10.0, fft_direct},
        {"recursive_vs_quadrature", 5.0, recursive_quadrature},
        {"godunov_flux_oracle", 5.0, godunov_oracle},
        {"conservation", 0.0, conservation},
        {"maximum_principle", 0.0, max_principle},
        {"picard_iterations", 60.0, picard},
        {"fixed_point_vs_direct", 300.0, fixed_point_vs_direct},
        {"tv_control", 0.0, tv_control},
        {"kernel_normalization", 0.0, kernel_normalization},
        {"entropy_residual", 0.0, entropy},
        {"complexity_bench", 120.0, complexity},
        {"delay_solver", 0.0, delay},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.body();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.budget_seconds > 0.0 && secs > c.budget_seconds) {
            o.pass = false;
            o.detail += "; over the " + fmt(c.budget_seconds) + " s budget";
        }
        if (!o.pass) ++failed;
        std::printf("%s %-26s %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", c.name.c_str(), o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
