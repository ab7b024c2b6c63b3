#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "grid.hpp"
#include "models.hpp"

namespace claws {

enum class SchemeKind { Godunov, LaxFriedrichs };

inline std::string_view to_string(SchemeKind k) noexcept
{
    return k == SchemeKind::Godunov ? "godunov" : "lax_friedrichs";
}

inline SchemeKind scheme_from_string(std::string_view s)
{
    if (s == "godunov") return SchemeKind::Godunov;
    if (s == "lax_friedrichs") return SchemeKind::LaxFriedrichs;
    throw ConfigError("expected \"godunov\" or \"lax_friedrichs\", got \"" + std::string(s) + "\"",
                      "scheme.kind");
}

namespace detail {

/// Golden-section search for the extremum of F on [a, b]; used when critical points are unknown.
template <typename Fn>
double golden_extremum(Fn&& f, double a, double b, bool maximize, double tol = 1e-10)
{
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    const double sign = maximize ? -1.0 : 1.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = sign * f(c);
    double fd = sign * f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = sign * f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = sign * f(d);
        }
    }
    return sign * std::min(fc, fd);
}

} // namespace detail

/**
 * Exact Riemann flux at one interface: min of F over [qL, qR] if qL <= qR, max over
 * [qR, qL] otherwise. With known critical points the extremum is taken over the endpoints
 * and the critical points strictly inside, so a unimodal flux costs at most three calls.
 */
inline double godunov_flux(double qL, double qR, const FluxModel& flux, double t, double x_iface,
                           double w_iface)
{
    const double fl = flux(t, x_iface, w_iface, qL);
    if (qL == qR) return fl;
    const double fr = flux(t, x_iface, w_iface, qR);
    const bool increasing = qL <= qR;
    const double lo = increasing ? qL : qR;
    const double hi = increasing ? qR : qL;
    double best = increasing ? std::min(fl, fr) : std::max(fl, fr);
    if (flux.critical_points) {
        for (double c : *flux.critical_points) {
            if (c > lo && c < hi) {
                const double fc = flux(t, x_iface, w_iface, c);
                best = increasing ? std::min(best, fc) : std::max(best, fc);
            }
        }
    } else {
        const double fe = detail::golden_extremum(
            [&](double u) { return flux(t, x_iface, w_iface, u); }, lo, hi, !increasing);
        best = increasing ? std::min(best, fe) : std::max(best, fe);
    }
    return best;
}

/**
 * Lax-Friedrichs interface flux
 *   G_{i+1/2} = (F(x_{i+1/2}, W_i, q_i) + F(x_{i+1/2}, W_{i+1}, q_{i+1}))/2 - dx/(2 dt)(q_{i+1} - q_i).
 * The difference G_{i+1/2} - G_{i-1/2} reproduces the classic centered update whenever F has
 * no explicit x dependence, and stays conservative when it does.
 */
inline double lax_friedrichs_flux(double qL, double qR, double wL, double wR, const FluxModel& flux,
                                  double t, double x_iface, double dx, double dt)
{
    return 0.5 * (flux(t, x_iface, wL, qL) + flux(t, x_iface, wR, qR)) -
           0.5 * dx / dt * (qR - qL);
}

/// Scheme flux at interface x_{i+1/2} between states (qL, wL) and (qR, wR).
inline double numerical_flux(SchemeKind scheme, double qL, double qR, double wL, double wR,
                             const FluxModel& flux, double t, double x_iface, double dx, double dt)
{
    if (scheme == SchemeKind::Godunov) return godunov_flux(qL, qR, flux, t, x_iface, 0.5 * (wL + wR));
    return lax_friedrichs_flux(qL, qR, wL, wR, flux, t, x_iface, dx, dt);
}

/**
 * Numerical fluxes G_{-1/2} .. G_{N-1/2} (N + 1 values) for a frozen nonlocal field.
 *
 * Outflow ghosts copy the edge cell for both q and W; periodic grids reuse G_{N-1/2} at the
 * left edge so the mass ledger closes exactly.
 */
inline std::vector<double> interface_fluxes(SchemeKind scheme, std::span<const double> q,
                                            std::span<const double> W, const Grid& grid, double dt,
                                            const FluxModel& flux, double t)
{
    const std::size_t n = grid.size();
    if (q.size() != n || W.size() != n)
        throw SolverError("field and nonlocal field must match the grid size");
    std::vector<double> G(n + 1);
    auto at = [&](std::span<const double> v, std::ptrdiff_t i) { return v[grid.resolve(i)]; };
    const std::ptrdiff_t first = grid.periodic() ? 0 : -1;
    for (std::ptrdiff_t i = first; i < static_cast<std::ptrdiff_t>(n); ++i) {
        const double qL = at(q, i), qR = at(q, i + 1);
        const double wL = at(W, i), wR = at(W, i + 1);
        G[static_cast<std::size_t>(i + 1)] =
            numerical_flux(scheme, qL, qR, wL, wR, flux, t, grid.interface(i), grid.dx(), dt);
    }
    if (grid.periodic()) G[0] = G[n];
    return G;
}

namespace detail {

inline void check_box(std::span<const double> q, const FluxModel& flux)
{
    constexpr double slack = 1e-9;
    const auto [lo, hi] = flux.q_box;
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (!std::isfinite(q[i]) || q[i] < lo - slack || q[i] > hi + slack)
            throw StabilityError("cell " + std::to_string(i) + " left the state box [" +
                                 std::to_string(lo) + ", " + std::to_string(hi) +
                                 "] with value " + std::to_string(q[i]) +
                                 " (wave speed bound too small?)");
    }
}

} // namespace detail

/// Conservative update q_i - dt/dx (G_{i+1/2} - G_{i-1/2}) from precomputed fluxes.
inline std::vector<double> conservative_update(std::span<const double> q,
                                               std::span<const double> G, double dt, double dx)
{
    const double lambda = dt / dx;
    std::vector<double> out(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) out[i] = q[i] - lambda * (G[i + 1] - G[i]);
    return out;
}

inline std::vector<double> scheme_step(SchemeKind scheme, std::span<const double> q,
                                       std::span<const double> W, const Grid& grid, double dt,
                                       const FluxModel& flux, double t)
{
    const auto G = interface_fluxes(scheme, q, W, grid, dt, flux, t);
    auto out = conservative_update(q, G, dt, grid.dx());
    detail::check_box(out, flux);
    return out;
}

/// Godunov update with W_{i+1/2} = (W_i + W_{i+1})/2 at x_{i+1/2}.
inline std::vector<double> godunov_step(std::span<const double> q, std::span<const double> W,
                                        const Grid& grid, double dt, const FluxModel& flux, double t)
{
    return scheme_step(SchemeKind::Godunov, q, W, grid, dt, flux, t);
}

inline std::vector<double> lax_friedrichs_step(std::span<const double> q,
                                               std::span<const double> W, const Grid& grid,
                                               double dt, const FluxModel& flux, double t)
{
    return scheme_step(SchemeKind::LaxFriedrichs, q, W, grid, dt, flux, t);
}

struct AlphaSampling {
    std::size_t q_samples = 41;
    std::size_t w_samples = 21;
    std::size_t t_samples = 5;
    double safety = 1.1;
};

/**
 * alpha = safety * sup |dF/dq| over t_window x interfaces x w_range x q_box, by dense
 * sampling. The q grid always contains the box endpoints and the critical points.
 */
inline double estimate_alpha(const FluxModel& flux, std::pair<double, double> w_range,
                             std::pair<double, double> t_window, const Grid& grid,
                             AlphaSampling s = {})
{
    auto ladder = [](double a, double b, std::size_t count) {
        std::vector<double> v;
        if (b <= a || count < 2) return std::vector<double>{a};
        for (std::size_t k = 0; k < count; ++k)
            v.push_back(a + (b - a) * static_cast<double>(k) / static_cast<double>(count - 1));
        return v;
    };
    auto qs = ladder(flux.q_box.first, flux.q_box.second, s.q_samples);
    if (flux.critical_points)
        for (double c : *flux.critical_points)
            if (c > flux.q_box.first && c < flux.q_box.second) qs.push_back(c);
    const auto ws = flux.depends_on_w ? ladder(w_range.first, w_range.second, s.w_samples)
                                      : std::vector<double>{w_range.first};
    const auto ts = flux.depends_on_t ? ladder(t_window.first, t_window.second, s.t_samples)
                                      : std::vector<double>{t_window.first};
    std::vector<double> xs;
    if (flux.depends_on_x) {
        for (std::ptrdiff_t i = -1; i < static_cast<std::ptrdiff_t>(grid.size()); ++i)
            xs.push_back(grid.interface(i));
        for (std::size_t i = 0; i < grid.size(); ++i) xs.push_back(grid.center(i));
    } else {
        xs.push_back(grid.x_left());
    }

    auto sup_over_wq = [&](double t, double x, double scale) {
        double sup = 0.0;
        for (double w : ws)
            for (double q : qs) {
                const double d = flux.dF_dq(t, x, w, q) / scale;
                if (!std::isfinite(d))
                    throw ModelError("non-finite flux derivative at t=" + std::to_string(t) +
                                     " x=" + std::to_string(x) + " w=" + std::to_string(w) +
                                     " q=" + std::to_string(q));
                sup = std::max(sup, std::abs(d));
            }
        return sup;
    };

    double sup = 0.0;
    for (double t : ts) {
        if (flux.speed && xs.size() > 1) {
            double vmax = 0.0;
            for (double x : xs) {
                const double v = flux.speed(t, x);
                if (!std::isfinite(v) || !(v > 0.0))
                    throw ModelError("speed factor must be positive and finite at x=" +
                                     std::to_string(x));
                vmax = std::max(vmax, v);
            }
            const double x0 = xs.front();
            sup = std::max(sup, vmax * sup_over_wq(t, x0, flux.speed(t, x0)));
        } else {
            for (double x : xs) sup = std::max(sup, sup_over_wq(t, x, 1.0));
        }
    }
    return std::max(s.safety * sup, 1e-12);
}

} // namespace claws
