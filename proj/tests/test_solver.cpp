#include <gtest/gtest.h>

#include "test_util.hpp"

using namespace claws;
using claws::testing::max_abs_diff;

namespace {

ExperimentConfig small_lwr(std::size_t nx = 200, double T = 1.0)
{
    auto c = lwr_config();
    c.domain.num_cells = nx;
    c.time.t_final = T;
    return c;
}

ExperimentConfig w_independent(ExperimentConfig c)
{
    c.model.kind = "custom";
    c.model.velocity = "constant";
    return c;
}

double l1_distance(std::span<const double> a, std::span<const double> b, double dx)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
    return s * dx;
}

} // namespace

TEST(StepFixedPoint, WIndependentFluxNeedsTwoSweeps)
{
    const auto e = build_experiment(w_independent(small_lwr()));
    const SpatialConvolver conv(e.grid, sample_spatial(*e.spatial, e.grid.dx()));
    const auto q = e.init.sample(e.grid);
    const double dt = 0.9 * e.grid.dx() / 1.1;
    const auto [fp, iters] = step_fixed_point(q, conv, e.grid, dt, 0.0, e.flux, e.scheme);
    EXPECT_LE(iters, 2u);
    EXPECT_EQ(fp, step_direct(q, conv, e.grid, dt, 0.0, e.flux, e.scheme));
}

TEST(StepFixedPoint, NonConvergenceCarriesResiduals)
{
    const auto e = build_experiment(small_lwr());
    const SpatialConvolver conv(e.grid, sample_spatial(*e.spatial, e.grid.dx()));
    const auto q = e.init.sample(e.grid);
    PicardConfig p;
    p.max_iters = 1;
    try {
        step_fixed_point(q, conv, e.grid, 0.01, 0.0, e.flux, e.scheme, p);
        FAIL() << "expected a convergence error";
    } catch (const ConvergenceError& err) {
        EXPECT_EQ(err.residuals().size(), 1u);
        EXPECT_GT(err.residuals()[0], 0.0);
    }
}

TEST(Run, ConstantStatePreserved)
{
    auto c = small_lwr();
    c.init.kind = "constant";
    c.init.value = 0.3;
    c.domain.boundary = "periodic";
    const auto res = run(build_experiment(c));
    ASSERT_TRUE(res.ok());
    for (const auto& q : res.levels)
        for (double v : q) EXPECT_NEAR(v, 0.3, 1e-15);
}

TEST(Run, ZeroDatumStaysZero)
{
    for (const auto& mode : {"spatial", "memory", "delay"}) {
        auto c = small_lwr(100, 0.5);
        c.init.kind = "constant";
        c.init.value = 0.0;
        c.nonlocal.mode = mode;
        c.kernel.temporal.kind = "exponential";
        c.delay.delta = 0.1;
        const auto res = run(build_experiment(c));
        ASSERT_TRUE(res.ok()) << mode;
        for (const auto& q : res.levels)
            for (double v : q) EXPECT_EQ(v, 0.0);
    }
}

TEST(Run, TrajectoryShapeAndDeterminism)
{
    const auto e = build_experiment(small_lwr());
    const auto a = run(e);
    const auto b = run(e);
    ASSERT_TRUE(a.ok());
    EXPECT_EQ(a.levels.size(), a.time.num_steps + 1);
    EXPECT_EQ(a.iterations.size(), a.time.num_steps);
    EXPECT_EQ(a.levels, b.levels);

    RunOptions opts;
    opts.stride = 7;
    const auto s = run(e, opts);
    EXPECT_EQ(s.levels.front(), a.levels.front());
    EXPECT_EQ(s.levels.back(), a.levels.back());
    EXPECT_EQ(s.level_index.back(), a.time.num_steps);
}

TEST(Run, PicardResidualsContractAfterFirstIterate)
{
    const auto res = run(build_experiment(small_lwr(400, 1.5)));
    ASSERT_TRUE(res.ok());
    for (const auto& r : res.residuals)
        for (std::size_t k = 2; k < r.size(); ++k) EXPECT_LT(r[k], r[k - 1]);
}

TEST(Run, MaxItersExceededStopsWithPartialResult)
{
    auto c = small_lwr();
    c.picard.max_iters = 1;
    const auto res = run(build_experiment(c));
    EXPECT_FALSE(res.ok());
    EXPECT_EQ(res.failure_kind, "convergence");
    EXPECT_EQ(res.levels.size(), 1u);
    EXPECT_FALSE(res.residuals.empty());
}

TEST(Run, FixedPointAndDirectDifferAtFirstOrderInDt)
{
    // same grid, CFL halved: the gap between the two modes at t = 0.5 should halve
    std::vector<double> gaps;
    for (double cfl : {0.8, 0.4, 0.2}) {
        auto c = small_lwr(400, 0.5);
        c.time.cfl = cfl;
        const auto fp = run(build_experiment(c));
        c.picard.mode = "direct";
        const auto dr = run(build_experiment(c));
        ASSERT_TRUE(fp.ok() && dr.ok());
        gaps.push_back(l1_distance(fp.levels.back(), dr.levels.back(), fp.grid.dx()));
    }
    for (std::size_t i = 0; i + 1 < gaps.size(); ++i) {
        EXPECT_GT(gaps[i] / gaps[i + 1], 1.7);
        EXPECT_LT(gaps[i] / gaps[i + 1], 2.3);
    }
}

TEST(Run, SpatialSelfConvergence)
{
    std::vector<std::size_t> ladder{200, 400, 800};
    const auto rep = convergence_study(
        [](std::size_t n) {
            RunOptions o;
            o.stride = 1u << 30;
            return run(build_experiment(small_lwr(n, 5.0)), o);
        },
        ladder);
    ASSERT_EQ(rep.orders.size(), 1u);
    EXPECT_GT(rep.orders[0], 0.5);
    EXPECT_LT(rep.differences[1], rep.differences[0]);
}

TEST(Memory, RecursiveMatchesQuadrature)
{
    auto c = lwr_config("exponential");
    c.domain.num_cells = 100;
    c.time.t_final = 1.0;
    c.nonlocal.fast_path = "recursive";
    const auto rec = run(build_experiment(c));
    c.nonlocal.fast_path = "direct";
    const auto quad = run(build_experiment(c));
    ASSERT_TRUE(rec.ok() && quad.ok());
    EXPECT_TRUE(rec.used_recursive);
    EXPECT_FALSE(quad.used_recursive);
    double worst = 0.0;
    for (std::size_t n = 0; n < rec.levels.size(); ++n)
        worst = std::max(worst, max_abs_diff(rec.levels[n], quad.levels[n]));
    EXPECT_LE(worst, 1e-9);
}

TEST(Memory, StrictTakesOneSweepSemiImplicitIterates)
{
    auto c = lwr_config("exponential");
    c.domain.num_cells = 100;
    c.time.t_final = 0.5;
    const auto strict = run(build_experiment(c));
    c.memory.causal = "semi_implicit";
    const auto semi = run(build_experiment(c));
    ASSERT_TRUE(strict.ok() && semi.ok());
    EXPECT_EQ(picard_stats(strict.iterations).max, 1u);
    EXPECT_GT(picard_stats(semi.iterations).max, 1u);
    EXPECT_LT(max_abs_diff(strict.levels.back(), semi.levels.back()), 0.05);
}

TEST(Memory, OtherKernelsRun)
{
    for (const auto& k : {"erlang", "triangular"}) {
        auto c = lwr_config(k);
        c.domain.num_cells = 100;
        c.time.t_final = 1.0;
        const auto res = run(build_experiment(c));
        ASSERT_TRUE(res.ok()) << k;
        EXPECT_FALSE(res.used_recursive);
        EXPECT_NEAR(mass(res.levels.front(), res.grid), 1.05, 1e-14);
    }
    auto c = lwr_config("erlang");
    c.nonlocal.fast_path = "recursive";
    EXPECT_THROW(Simulation(build_experiment(c)), UnsupportedKernelError);
}

TEST(Memory, CannotRestart)
{
    auto c = lwr_config("exponential");
    c.domain.num_cells = 50;
    Simulation sim(build_experiment(c));
    const std::vector<std::vector<double>> lv{std::vector<double>(50, 0.0)};
    EXPECT_THROW(sim.restart_from(lv, 0), ModeError);
}

namespace {

ExperimentConfig delay_config(double delta)
{
    auto c = small_lwr(100, 1.0);
    c.nonlocal.mode = "delay";
    c.history.kind = "exp_decay_of_init";
    c.delay.delta = delta;
    return c;
}

} // namespace

TEST(Delay, WIndependentFluxIgnoresTheDelay)
{
    const auto base = build_experiment(w_independent(delay_config(0.1)));
    const double dt = Simulation(base).time().dt;
    const auto ref = run_delay(base, dt);
    for (double d : {10.0 * dt, base.t_final}) {
        const auto other = run_delay(base, d);
        ASSERT_TRUE(other.ok());
        EXPECT_EQ(other.levels, ref.levels);
    }
}

TEST(Delay, LongDelayReadsOnlyHistory)
{
    auto e = build_experiment(delay_config(0.1));
    RunOptions o;
    o.record_nonlocal = true;
    const auto res = run_delay(e, 2.0 * e.t_final, o);
    ASSERT_TRUE(res.ok());
    const SpatialConvolver conv(e.grid, sample_spatial(*e.spatial, e.grid.dx()));
    const double dt = res.time.dt;
    for (std::size_t n = 0; n < res.nonlocal.size(); n += 17) {
        const double t = (static_cast<double>(n) - static_cast<double>(res.delay_steps)) * dt;
        std::vector<double> h(e.grid.size());
        for (std::size_t i = 0; i < h.size(); ++i) h[i] = e.historical(t, e.grid.center(i));
        EXPECT_LE(max_abs_diff(res.nonlocal[n], conv(h)), 1e-15);
    }
}

TEST(Delay, OneStepDelayIsTheLaggedDirectScheme)
{
    auto e = build_experiment(delay_config(0.1));
    const double dt = Simulation(e).time().dt;
    const auto res = run_delay(e, dt);
    ASSERT_TRUE(res.ok());
    EXPECT_EQ(res.delay_steps, 1u);
    // hand-written march: W^n from level n - 1, with the historical datum at -dt for n = 0
    const SpatialConvolver conv(e.grid, sample_spatial(*e.spatial, e.grid.dx()));
    std::vector<double> prev(e.grid.size());
    for (std::size_t i = 0; i < prev.size(); ++i) prev[i] = e.historical(-dt, e.grid.center(i));
    auto q = e.init.sample(e.grid);
    for (std::size_t n = 0; n < res.time.num_steps; ++n) {
        auto next = godunov_step(q, conv(prev), e.grid, dt, e.flux, res.time.time(n));
        prev = std::move(q);
        q = std::move(next);
    }
    EXPECT_EQ(q, res.levels.back());
}

TEST(Delay, RestartFromSliceIsExact)
{
    const auto e = build_experiment(delay_config(0.12));
    const auto full = run(e);
    ASSERT_TRUE(full.ok());
    const std::size_t d = full.delay_steps;
    ASSERT_GT(d, 1u);
    for (std::size_t cut : {d + 5, full.time.num_steps / 2, std::size_t{3}}) {
        Simulation sim(e);
        const std::size_t first = cut >= d ? cut - d : 0;
        std::vector<std::vector<double>> window(full.levels.begin() + static_cast<std::ptrdiff_t>(first),
                                                full.levels.begin() + static_cast<std::ptrdiff_t>(cut) + 1);
        sim.restart_from(window, first);
        ASSERT_EQ(sim.level(), cut);
        const auto tail = sim.run();
        ASSERT_TRUE(tail.ok());
        EXPECT_EQ(tail.levels.back(), full.levels.back()) << "cut " << cut;
    }
    Simulation sim(e);
    const std::vector<std::vector<double>> one{full.levels[40]};
    EXPECT_THROW(sim.restart_from(one, 40), SequencingError);
}

TEST(Delay, RoundingWarning)
{
    const auto e = build_experiment(delay_config(0.1));
    Simulation sim(e);
    const double dt = sim.time().dt;
    EXPECT_TRUE(sim.warnings().empty());
    // anything within half a step of a whole multiple rounds silently
    auto e2 = e;
    e2.delay = 10.4 * dt;
    e2.mode = NonlocalMode::Delay;
    Simulation s2(e2);
    EXPECT_EQ(s2.delay_steps(), 10u);
    EXPECT_TRUE(s2.warnings().empty());
    // below half a step the delay is bumped to one step and that is reported
    e2.delay = 0.1 * dt;
    Simulation s3(e2);
    EXPECT_EQ(s3.delay_steps(), 1u);
    EXPECT_EQ(s3.warnings().size(), 1u);
}
