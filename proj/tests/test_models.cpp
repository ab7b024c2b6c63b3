#include <gtest/gtest.h>

#include <random>

#include "test_util.hpp"

using namespace claws;

TEST(LwrFlux, Values)
{
    const auto f = lwr_nonlocal_flux(1.0);
    EXPECT_DOUBLE_EQ(f(0.0, 0.0, 0.0, 0.5), 0.25);
    EXPECT_DOUBLE_EQ(lwr_nonlocal_flux(2.0)(0.0, 0.0, 0.0, 0.5), 0.5);
    for (double q : {0.0, 0.3, 0.5, 1.0}) EXPECT_EQ(f(0.0, 0.0, 1.0, q), 0.0);
    for (double w : {0.0, 0.4, 1.0}) {
        EXPECT_EQ(f(0.0, 0.0, w, 0.0), 0.0);
        EXPECT_EQ(f(0.0, 0.0, w, 1.0), 0.0);
    }
    EXPECT_THROW(lwr_nonlocal_flux(0.0), ConfigError);
}

TEST(GoatinFlux, Values)
{
    const auto f = goatin_flux(3, SpeedProfile::constant(1.0));
    for (double q : {0.1, 0.5, 0.9}) {
        EXPECT_DOUBLE_EQ(f(0.0, 0.0, 0.0, q), q * (1.0 - q));
        EXPECT_EQ(f(0.0, 0.0, 1.0, q), 0.0);
        EXPECT_NEAR(f(0.0, 0.0, 0.5, q), 0.84375 * q * (1.0 - q), 1e-16);
    }
    // m = 1 reduces to v(w) = 1 + w
    const auto g = goatin_flux(1, SpeedProfile::constant(1.0));
    EXPECT_DOUBLE_EQ(g(0.0, 0.0, 0.3, 0.5), 0.25 * 1.3);
    EXPECT_THROW(goatin_flux(0, SpeedProfile::constant(1.0)), ConfigError);
}

TEST(FluxModels, DerivativesMatchFiniteDifferences)
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    const auto grid = build_grid(-1.0, 1.0, 200, Boundary::Periodic);
    const auto v = SpeedProfile::smoothed_steps({-0.5, 0.5}, {1.0, 0.6, 1.0}, 0.25, grid);
    for (const auto& f : {lwr_nonlocal_flux(1.0), goatin_flux(3, v), goatin_flux(2, v)}) {
        for (int k = 0; k < 100; ++k) {
            const double x = u(rng) * 2.0 - 1.0, w = u(rng), q = u(rng), h = 1e-6;
            EXPECT_NEAR(f.dF_dq(0.0, x, w, q), (f(0.0, x, w, q + h) - f(0.0, x, w, q - h)) / (2 * h), 1e-7);
            EXPECT_NEAR(f.dF_dw(0.0, x, w, q), (f(0.0, x, w + h, q) - f(0.0, x, w - h, q)) / (2 * h), 1e-7);
        }
        // the declared critical point is where dF/dq vanishes
        for (double w : {0.0, 0.3, 0.7}) EXPECT_NEAR(f.dF_dq(0.0, 0.1, w, 0.5), 0.0, 1e-15);
    }
}

TEST(FluxModels, VanishingStatesOnSamples)
{
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const auto grid = build_grid(-1.0, 1.0, 100, Boundary::Periodic);
    const auto f = goatin_flux(3, SpeedProfile::smoothed_steps({-0.5, 0.5}, {1.0, 0.6, 1.0}, 0.25, grid));
    ASSERT_TRUE(f.vanishing_states);
    for (int k = 0; k < 100; ++k) {
        const double t = u(rng), x = 2.0 * u(rng) - 1.0, w = u(rng);
        EXPECT_EQ(f(t, x, w, f.vanishing_states->first), 0.0);
        EXPECT_EQ(f(t, x, w, f.vanishing_states->second), 0.0);
    }
    EXPECT_EQ(f.J(0.0), 0.0);
}

TEST(SpeedProfile, StepsAndSmoothing)
{
    const auto grid = build_grid(-1.0, 1.0, 400, Boundary::Periodic);
    const auto raw = SpeedProfile::smoothed_steps({-0.5, 0.5}, {1.0, 0.6, 1.0}, 0.0, grid);
    EXPECT_EQ(raw(0.0, 0.0), 0.6);
    EXPECT_EQ(raw(0.0, -0.9), 1.0);
    EXPECT_EQ(raw(0.0, 0.9), 1.0);

    const auto smooth = SpeedProfile::smoothed_steps({-0.5, 0.5}, {1.0, 0.6, 1.0}, 0.05, grid);
    EXPECT_NEAR(smooth(0.0, 0.0), 0.6, 1e-10);
    EXPECT_NEAR(smooth(0.0, -0.5), 0.8, 1e-12); // midway across a symmetric jump
    EXPECT_NEAR(smooth(0.0, -1.0), smooth(0.0, 1.0), 1e-15);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = grid.center(i);
        EXPECT_GE(smooth(0.0, x), 0.6 - 1e-15);
        EXPECT_LE(smooth(0.0, x), 1.0 + 1e-15);
    }
}

TEST(SpeedProfile, TableAgreesWithDirectEvaluation)
{
    const auto grid = build_grid(-1.0, 1.0, 500, Boundary::Periodic);
    const auto v = SpeedProfile::smoothed_steps({-0.5, 0.5}, {1.0, 0.6, 1.0}, 0.25, grid);
    // a nudge of 1e-8 leaves the lattice and forces direct evaluation; the profile is smooth
    // with slope below 1, so both must agree to about 1e-8
    for (std::ptrdiff_t i = -1; i < 500; ++i) {
        const double x = grid.interface(i);
        EXPECT_NEAR(v(0.0, x), v(0.0, x + 1e-8), 2e-8);
    }
    for (std::size_t i = 0; i < 500; ++i)
        EXPECT_NEAR(v(0.0, grid.center(i)), v(0.0, grid.center(i) + 1e-8), 2e-8);
}

TEST(SpeedProfile, Validation)
{
    const auto grid = build_grid(-1.0, 1.0, 100, Boundary::Periodic);
    EXPECT_THROW(SpeedProfile::smoothed_steps({0.0}, {1.0}, 0.1, grid), ConfigError);
    EXPECT_THROW(SpeedProfile::smoothed_steps({2.0}, {1.0, 0.5}, 0.1, grid), ConfigError);
    EXPECT_THROW(SpeedProfile::smoothed_steps({0.0}, {1.0, -0.5}, 0.1, grid), ConfigError);
    EXPECT_THROW(SpeedProfile::constant(0.0), ConfigError);
}

TEST(InitialDatum, CellAveragesAreExact)
{
    const auto g = build_grid(0.0, 4.0, 7, Boundary::Outflow);
    const auto q0 = InitialDatum::plateaus({{0.5, 1.2, 0.8}, {2.2, 2.9, 0.7}});
    const auto q = q0.sample(g);
    double m = 0.0;
    for (double v : q) m += v * g.dx();
    EXPECT_NEAR(m, 1.05, 1e-15);

    const auto s = InitialDatum::sine(0.5, 0.2, 1.0, 0.0, 4.0).sample(g);
    double ms = 0.0;
    for (double v : s) ms += v * g.dx();
    EXPECT_NEAR(ms, 2.0, 1e-14);

    const auto r = InitialDatum::riemann(0.2, 0.8, 2.0).sample(g);
    double mr = 0.0;
    for (double v : r) mr += v * g.dx();
    EXPECT_NEAR(mr, 0.2 * 2.0 + 0.8 * 2.0, 1e-14);
}

TEST(Experiments, LwrSetup)
{
    const auto e = lwr_experiment();
    EXPECT_EQ(e.grid.size(), 400u);
    EXPECT_EQ(e.grid.boundary(), Boundary::Outflow);
    EXPECT_EQ(e.t_final, 5.0);
    const auto q = e.init.sample(e.grid);
    EXPECT_NEAR(mass(q, e.grid), 1.05, 1e-14);
    EXPECT_NEAR(tv_seminorm(q, e.grid), 3.0, 1e-14);
    EXPECT_EQ(*std::max_element(q.begin(), q.end()), 0.8);

    const auto mem = lwr_experiment("exponential");
    EXPECT_EQ(mem.mode, NonlocalMode::Memory);
    ASSERT_TRUE(mem.historical);
    for (double x : {0.1, 0.7, 1.0, 2.5, 3.9}) EXPECT_EQ(mem.historical(0.0, x), mem.init(x));
    EXPECT_NEAR(mem.historical(-1.0, 0.7), 0.8 * std::exp(-1.0), 1e-15);
}

TEST(Experiments, GoatinSetup)
{
    const auto e = goatin_experiment();
    EXPECT_EQ(e.grid.size(), 2000u);
    EXPECT_TRUE(e.grid.periodic());
    EXPECT_EQ(e.scheme, SchemeKind::LaxFriedrichs);
    EXPECT_EQ(e.cfl, 0.9);
    EXPECT_NEAR(mass(e.init.sample(e.grid), e.grid), 1.2, 1e-13);
    EXPECT_TRUE(e.flux.depends_on_x);
}
