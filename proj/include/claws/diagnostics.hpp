#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "grid.hpp"
#include "kernels.hpp"
#include "schemes.hpp"
#include "solver.hpp"

namespace claws {

// ---------------------------------------------------------------------------
// Norms
// ---------------------------------------------------------------------------

/// sum |q_{i+1} - q_i|, plus the wraparound jump on periodic grids.
inline double tv_seminorm(std::span<const double> q, const Grid& grid)
{
    if (q.size() < 2) return 0.0;
    double tv = 0.0;
    for (std::size_t i = 0; i + 1 < q.size(); ++i) tv += std::abs(q[i + 1] - q[i]);
    if (grid.periodic()) tv += std::abs(q.front() - q.back());
    return tv;
}

inline double mass(std::span<const double> q, const Grid& grid)
{
    return detail::compensated_sum(q, [](double v) { return v; }) * grid.dx();
}

inline double l1_norm(std::span<const double> q, const Grid& grid)
{
    return detail::compensated_sum(q, [](double v) { return std::abs(v); }) * grid.dx();
}

inline double linf_norm(std::span<const double> q)
{
    double m = 0.0;
    for (double v : q) m = std::max(m, std::abs(v));
    return m;
}

// ---------------------------------------------------------------------------
// Runtime checks of the analytic bounds
// ---------------------------------------------------------------------------

struct MaxPrincipleReport {
    double q_min = 0.0;
    double q_max = 0.0;
    double tol = 1e-10;
    std::size_t violations = 0;
    double worst = 0.0; ///< largest excursion beyond the box (0 if none)
    std::optional<std::size_t> first_level;

    bool ok() const noexcept { return violations == 0; }
};

inline MaxPrincipleReport check_max_principle(std::span<const std::vector<double>> trajectory,
                                              double q_min, double q_max, double tol = 1e-10)
{
    MaxPrincipleReport r;
    r.q_min = q_min;
    r.q_max = q_max;
    r.tol = tol;
    for (std::size_t n = 0; n < trajectory.size(); ++n) {
        for (double v : trajectory[n]) {
            const double excess = std::max(q_min - v, v - q_max);
            if (excess > tol) {
                ++r.violations;
                r.worst = std::max(r.worst, excess);
                if (!r.first_level) r.first_level = n;
            }
        }
    }
    return r;
}

struct EnvelopeReport {
    double factor = 42.0;
    double linf0 = 0.0;
    double l10 = 0.0;
    double linf_margin = 0.0; ///< min over levels of factor * ||q0||_inf - ||q(t)||_inf
    double l1_margin = 0.0;
    std::size_t violations = 0;

    bool ok() const noexcept { return violations == 0; }
};

/// ||q(t)|| <= 42 ||q0|| in L-infinity and L1 at every stored level.
inline EnvelopeReport check_bound_envelopes(std::span<const std::vector<double>> trajectory,
                                            const Grid& grid, double factor = 42.0)
{
    EnvelopeReport r;
    r.factor = factor;
    if (trajectory.empty()) return r;
    r.linf0 = linf_norm(trajectory.front());
    r.l10 = l1_norm(trajectory.front(), grid);
    r.linf_margin = std::numeric_limits<double>::infinity();
    r.l1_margin = std::numeric_limits<double>::infinity();
    for (const auto& q : trajectory) {
        const double mi = factor * r.linf0 - linf_norm(q);
        const double m1 = factor * r.l10 - l1_norm(q, grid);
        r.linf_margin = std::min(r.linf_margin, mi);
        r.l1_margin = std::min(r.l1_margin, m1);
        if (mi < 0.0 || m1 < 0.0) ++r.violations;
    }
    return r;
}

/// Nine equispaced values strictly inside the state box plus both endpoints.
inline std::vector<double> default_entropy_samples(std::pair<double, double> box)
{
    std::vector<double> ks{box.first};
    for (int j = 1; j <= 9; ++j) ks.push_back(box.first + (box.second - box.first) * j / 10.0);
    ks.push_back(box.second);
    return ks;
}

/**
 * Minimum over cells and steps of the discrete Kruzkov residual, one value per k.
 *
 *   r = -[|q_i^{n+1} - k| - |q_i^n - k|]/dt - [Q_{i+1/2} - Q_{i-1/2}]/dx
 *       - sgn(q_i^{n+1} - k) [G_{i+1/2}(k, k) - G_{i-1/2}(k, k)]/dx
 *
 * Q is the scheme's own entropy flux G(q_i v k, q_{i+1} v k) - G(q_i ^ k, q_{i+1} ^ k) with the
 * frozen field of the step, and the last term carries the x- and W-dependence of the flux at
 * the constant state k. A monotone scheme gives r >= 0 up to rounding, so the sign convention
 * is "nonnegative is admissible".
 */
inline std::vector<double> entropy_residual(const RunResult& res, const Experiment& exp,
                                            std::span<const double> ks)
{
    if (res.stride != 1) throw ModeError("entropy residual needs the trajectory at stride 1");
    const std::size_t steps = res.steps_completed();
    if (res.nonlocal.size() != steps || res.levels.size() < steps + 1)
        throw ModeError("entropy residual needs the frozen nonlocal field of every step");
    const Grid& g = res.grid;
    const double dt = res.time.dt;
    const double dx = g.dx();
    const auto n_cells = static_cast<std::ptrdiff_t>(g.size());

    std::vector<double> out(ks.size(), std::numeric_limits<double>::infinity());
    std::vector<double> Q(g.size() + 1), Gk(g.size() + 1);
    for (std::size_t n = 0; n < steps; ++n) {
        const auto& q = res.levels[n];
        const auto& q1 = res.levels[n + 1];
        const auto& W = res.nonlocal[n];
        const double t = res.times[n];
        for (std::size_t kk = 0; kk < ks.size(); ++kk) {
            const double k = ks[kk];
            for (std::ptrdiff_t i = -1; i < n_cells; ++i) {
                const double a = q[g.resolve(i)], b = q[g.resolve(i + 1)];
                const double wa = W[g.resolve(i)], wb = W[g.resolve(i + 1)];
                const double x = g.interface(i);
                auto G = [&](double l, double r) {
                    return numerical_flux(exp.scheme, l, r, wa, wb, exp.flux, t, x, dx, dt);
                };
                const auto idx = static_cast<std::size_t>(i + 1);
                Q[idx] = G(std::max(a, k), std::max(b, k)) - G(std::min(a, k), std::min(b, k));
                Gk[idx] = G(k, k);
            }
            double worst = out[kk];
            for (std::size_t i = 0; i < g.size(); ++i) {
                const double s = q1[i] > k ? 1.0 : (q1[i] < k ? -1.0 : 0.0);
                const double r = -(std::abs(q1[i] - k) - std::abs(q[i] - k)) / dt -
                                 (Q[i + 1] - Q[i]) / dx - s * (Gk[i + 1] - Gk[i]) / dx;
                worst = std::min(worst, r);
            }
            out[kk] = worst;
        }
    }
    return out;
}

/// mass(n+1) - mass(n) + dt (G_right - G_left) per step; needs stride 1.
inline std::vector<double> mass_ledger(const RunResult& res)
{
    if (res.stride != 1) throw ModeError("mass ledger needs the trajectory at stride 1");
    std::vector<double> out;
    const std::size_t steps = std::min(res.steps_completed(), res.levels.size() - 1);
    for (std::size_t n = 0; n < steps; ++n) {
        const auto [gl, gr] = res.boundary_fluxes[n];
        const double flux_term = res.grid.periodic() ? 0.0 : res.time.dt * (gr - gl);
        out.push_back(mass(res.levels[n + 1], res.grid) - mass(res.levels[n], res.grid) + flux_term);
    }
    return out;
}

// ---------------------------------------------------------------------------
// TV growth and Picard statistics
// ---------------------------------------------------------------------------

struct TvGrowth {
    double tv0 = 0.0;
    double rate = 0.0;     ///< least-squares c in ln(TV(t)/TV(0)) ~ c t
    double envelope = 0.0; ///< smallest c with TV(t) <= TV(0) e^{c t} at every stored level
    bool finite() const noexcept { return std::isfinite(rate) && std::isfinite(envelope); }
};

inline TvGrowth tv_growth(std::span<const double> times, std::span<const double> tv)
{
    TvGrowth g;
    if (tv.empty()) return g;
    g.tv0 = tv.front();
    if (!(g.tv0 > 0.0)) return g;
    double stt = 0.0, sty = 0.0;
    g.envelope = -std::numeric_limits<double>::infinity();
    for (std::size_t n = 1; n < tv.size(); ++n) {
        const double t = times[n] - times.front();
        if (!(t > 0.0)) continue;
        const double y = std::log(tv[n] / g.tv0);
        stt += t * t;
        sty += t * y;
        g.envelope = std::max(g.envelope, y / t);
    }
    g.rate = stt > 0.0 ? sty / stt : 0.0;
    if (!std::isfinite(g.envelope)) g.envelope = 0.0;
    return g;
}

struct PicardStats {
    std::size_t steps = 0;
    std::size_t max = 0;
    double median = 0.0;
    double mean = 0.0;
};

inline PicardStats picard_stats(std::span<const std::size_t> iters)
{
    PicardStats s;
    s.steps = iters.size();
    if (iters.empty()) return s;
    std::vector<std::size_t> v(iters.begin(), iters.end());
    std::sort(v.begin(), v.end());
    s.max = v.back();
    const std::size_t mid = v.size() / 2;
    s.median = v.size() % 2 ? static_cast<double>(v[mid])
                            : 0.5 * static_cast<double>(v[mid - 1] + v[mid]);
    double sum = 0.0;
    for (auto k : v) sum += static_cast<double>(k);
    s.mean = sum / static_cast<double>(v.size());
    return s;
}

// ---------------------------------------------------------------------------
// Self-convergence
// ---------------------------------------------------------------------------

/// Cell averages of a fine profile on a grid `ratio` times coarser.
inline std::vector<double> restrict_average(std::span<const double> fine, std::size_t coarse_cells)
{
    if (coarse_cells == 0 || fine.size() % coarse_cells != 0)
        throw ConfigError("resolutions " + std::to_string(coarse_cells) + " and " +
                              std::to_string(fine.size()) + " are not nested",
                          "resolutions");
    const std::size_t r = fine.size() / coarse_cells;
    std::vector<double> out(coarse_cells);
    for (std::size_t i = 0; i < coarse_cells; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < r; ++j) s += fine[i * r + j];
        out[i] = s / static_cast<double>(r);
    }
    return out;
}

struct ConvergenceReport {
    std::vector<std::size_t> resolutions;
    std::vector<double> differences; ///< L1 distance between successive levels at t_final
    std::vector<double> orders;
    bool exact = false;
};

/**
 * L1 self-convergence from final profiles on an increasing, nested ladder. The difference
 * between each pair of successive resolutions is taken on the coarser grid; orders come from
 * ratios of consecutive differences.
 */
inline ConvergenceReport convergence_study(const std::function<RunResult(std::size_t)>& runner,
                                           std::vector<std::size_t> resolutions)
{
    if (resolutions.size() < 3) throw ConfigError("need at least 3 resolutions", "resolutions");
    for (std::size_t i = 1; i < resolutions.size(); ++i) {
        if (resolutions[i] <= resolutions[i - 1])
            throw ConfigError("resolutions must increase", "resolutions");
        if (resolutions[i] % resolutions[i - 1] != 0)
            throw ConfigError("resolutions " + std::to_string(resolutions[i - 1]) + " and " +
                                  std::to_string(resolutions[i]) + " are not nested",
                              "resolutions");
    }
    ConvergenceReport rep;
    rep.resolutions = resolutions;
    std::vector<std::vector<double>> finals;
    std::vector<double> lengths;
    for (auto n : resolutions) {
        auto res = runner(n);
        if (!res.ok()) throw SolverError("run at Nx=" + std::to_string(n) + " failed: " + *res.failure);
        finals.push_back(res.levels.back());
        lengths.push_back(res.grid.length());
    }
    for (std::size_t i = 0; i + 1 < finals.size(); ++i) {
        const auto fine = restrict_average(finals[i + 1], finals[i].size());
        double d = 0.0;
        for (std::size_t j = 0; j < fine.size(); ++j) d += std::abs(fine[j] - finals[i][j]);
        rep.differences.push_back(d * lengths[i] / static_cast<double>(finals[i].size()));
    }
    rep.exact = std::all_of(rep.differences.begin(), rep.differences.end(),
                            [](double d) { return d <= 1e-14; });
    if (!rep.exact) {
        for (std::size_t i = 0; i + 1 < rep.differences.size(); ++i) {
            const double ratio = static_cast<double>(resolutions[i + 1]) /
                                 static_cast<double>(resolutions[i]);
            rep.orders.push_back(std::log(rep.differences[i] / rep.differences[i + 1]) /
                                 std::log(ratio));
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Full report
// ---------------------------------------------------------------------------

struct DiagnosticsReport {
    std::vector<double> times;
    std::vector<double> mass;
    std::vector<double> l1;
    std::vector<double> linf;
    std::vector<double> tv;
    std::optional<MaxPrincipleReport> max_principle;
    EnvelopeReport envelopes;
    std::vector<double> entropy_k;
    std::vector<double> entropy_min;
    std::vector<std::size_t> picard_iters;
    PicardStats picard;
    std::optional<double> mass_ledger_max; ///< max |ledger residual| (stride 1 only)
    TvGrowth tv_growth;
};

inline DiagnosticsReport build_report(const RunResult& res, const Experiment& exp)
{
    DiagnosticsReport rep;
    rep.times = res.times;
    for (const auto& q : res.levels) {
        rep.mass.push_back(mass(q, res.grid));
        rep.l1.push_back(l1_norm(q, res.grid));
        rep.linf.push_back(linf_norm(q));
        rep.tv.push_back(tv_seminorm(q, res.grid));
    }
    if (exp.flux.vanishing_states) {
        // the box is invariant only for data that start inside it
        const auto [lo, hi] = *exp.flux.vanishing_states;
        rep.max_principle = check_max_principle(res.levels, lo, hi);
    }
    rep.envelopes = check_bound_envelopes(res.levels, res.grid);
    if (res.stride == 1 && res.nonlocal.size() == res.steps_completed()) {
        rep.entropy_k = default_entropy_samples(exp.flux.q_box);
        rep.entropy_min = entropy_residual(res, exp, rep.entropy_k);
    }
    rep.picard_iters = res.iterations;
    rep.picard = picard_stats(res.iterations);
    if (res.stride == 1) {
        double m = 0.0;
        for (double r : mass_ledger(res)) m = std::max(m, std::abs(r));
        rep.mass_ledger_max = m;
    }
    rep.tv_growth = tv_growth(rep.times, rep.tv);
    return rep;
}

} // namespace claws
