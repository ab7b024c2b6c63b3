#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "config.hpp"
#include "errors.hpp"
#include "kernels.hpp"
#include "nonlocal.hpp"
#include "solver.hpp"

namespace claws {

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

/// Ordinary least squares y ~ slope x + intercept.
inline LinearFit linear_fit(std::span<const double> x, std::span<const double> y)
{
    LinearFit f;
    const std::size_t n = std::min(x.size(), y.size());
    if (n < 2) return f;
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) return f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return f;
}

struct StepTimings {
    std::string path; ///< "quadrature" or "recursive"
    std::vector<double> seconds; ///< wall time of step n (n = 0, 1, ...)
    LinearFit fit;               ///< fit on bin medians, seconds per step index
};

struct MemoryBench {
    std::size_t nx = 0;
    std::size_t steps = 0;
    std::size_t bin = 0;
    StepTimings quadrature;
    std::optional<StepTimings> recursive;
};

namespace detail {

inline StepTimings time_steps(Experiment exp, std::size_t steps, std::size_t bin, std::string path)
{
    StepTimings out;
    out.path = std::move(path);
    Simulation sim(std::move(exp));
    using clock = std::chrono::steady_clock;
    for (std::size_t n = 0; n < steps; ++n) {
        const auto t0 = clock::now();
        sim.step();
        out.seconds.push_back(std::chrono::duration<double>(clock::now() - t0).count());
    }
    // bin medians drop preempted steps before the regression
    std::vector<double> xs, ys;
    for (std::size_t b = 0; b + bin <= steps; b += bin) {
        std::vector<double> chunk(out.seconds.begin() + static_cast<std::ptrdiff_t>(b),
                                  out.seconds.begin() + static_cast<std::ptrdiff_t>(b + bin));
        const auto mid = chunk.begin() + static_cast<std::ptrdiff_t>(bin / 2);
        std::nth_element(chunk.begin(), mid, chunk.end());
        xs.push_back(static_cast<double>(b) + 0.5 * static_cast<double>(bin - 1));
        ys.push_back(*mid);
    }
    out.fit = linear_fit(xs, ys);
    return out;
}

} // namespace detail

/**
 * Per-step wall time of the memory term, quadrature vs recursive, from a memory-mode config.
 *
 * The historical datum is switched off so that the quadrature only visits computed levels and
 * its work grows with n until the truncation depth; otherwise every step costs the full depth
 * from the start and both paths look flat.
 */
inline MemoryBench bench_memory(ExperimentConfig cfg, std::size_t steps = 2000, std::size_t bin = 20)
{
    if (cfg.nonlocal.mode != "memory")
        throw ConfigError("bench needs a memory-mode config", "nonlocal.mode");
    if (steps < 2 * bin) throw ConfigError("too few bench steps", "steps");
    cfg.history.kind = "none";
    cfg.picard.mode = "direct";
    // long horizon so the run never finishes inside the bench
    cfg.time.t_final = std::max(cfg.time.t_final, 1e3);

    MemoryBench b;
    b.nx = cfg.domain.num_cells;
    b.steps = steps;
    b.bin = bin;
    auto quad = cfg;
    quad.nonlocal.fast_path = "direct";
    b.quadrature = detail::time_steps(build_experiment(quad), steps, bin, "quadrature");
    if (cfg.kernel.temporal.kind == "exponential") {
        auto rec = cfg;
        rec.nonlocal.fast_path = "recursive";
        b.recursive = detail::time_steps(build_experiment(rec), steps, bin, "recursive");
    }
    return b;
}

struct ConvolutionTiming {
    std::size_t nx = 0;
    std::size_t taps = 0;
    double direct_seconds = 0.0; ///< per application
    double fft_seconds = 0.0;
};

struct ConvolutionBench {
    std::vector<ConvolutionTiming> rows;
    std::optional<std::size_t> crossover; ///< smallest Nx where the FFT path is faster
};

/// Direct vs FFT periodic convolution on a doubling Nx ladder over the config's domain.
inline ConvolutionBench bench_convolution(const SpatialKernel& kernel, double x_left, double x_right,
                                          std::span<const std::size_t> ladder,
                                          double min_seconds = 0.02)
{
    using clock = std::chrono::steady_clock;
    ConvolutionBench out;
    for (auto nx : ladder) {
        const Grid g = build_grid(x_left, x_right, nx, Boundary::Periodic);
        const auto w = sample_spatial(kernel, g.dx());
        if (w.size() > nx) continue;
        std::vector<double> field(nx), res(nx);
        for (std::size_t i = 0; i < nx; ++i) field[i] = 0.5 + 0.4 * std::sin(0.37 * static_cast<double>(i));
        auto time_it = [&](auto&& fn) {
            std::size_t reps = 0;
            const auto t0 = clock::now();
            double elapsed = 0.0;
            do {
                fn();
                ++reps;
                elapsed = std::chrono::duration<double>(clock::now() - t0).count();
            } while (elapsed < min_seconds);
            return elapsed / static_cast<double>(reps);
        };
        SpatialConvolver direct(g, w, FastPath::Direct);
        SpatialConvolver fft(g, w, FastPath::Fft);
        ConvolutionTiming row;
        row.nx = nx;
        row.taps = w.size();
        row.direct_seconds = time_it([&] { direct.apply(field, res); });
        row.fft_seconds = time_it([&] { fft.apply(field, res); });
        if (!out.crossover && row.fft_seconds < row.direct_seconds) out.crossover = nx;
        out.rows.push_back(row);
    }
    return out;
}

} // namespace claws
