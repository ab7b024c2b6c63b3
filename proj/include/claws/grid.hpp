#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"

namespace claws {

enum class Boundary { Periodic, Outflow };

inline std::string_view to_string(Boundary b) noexcept
{
    return b == Boundary::Periodic ? "periodic" : "outflow";
}

inline Boundary boundary_from_string(std::string_view s)
{
    if (s == "periodic") return Boundary::Periodic;
    if (s == "outflow") return Boundary::Outflow;
    throw ConfigError("expected \"periodic\" or \"outflow\", got \"" + std::string(s) + "\"",
                      "domain.boundary");
}

/**
 * Uniform 1-D cell discretization of [x_left, x_right].
 *
 * Cell i covers [x_left + i*dx, x_left + (i+1)*dx]; interface i+1/2 sits at its right edge.
 */
class Grid {
public:
    Grid(double x_left, double x_right, std::size_t num_cells, Boundary boundary)
        : x_left_(x_left), x_right_(x_right), num_cells_(num_cells), boundary_(boundary)
    {
        if (!(std::isfinite(x_left) && std::isfinite(x_right)) || !(x_right > x_left))
            throw ConfigError("degenerate interval, need x_right > x_left", "domain.x_right");
        if (num_cells < 2)
            throw ConfigError("need at least 2 cells", "domain.num_cells");
        dx_ = (x_right - x_left) / static_cast<double>(num_cells);
    }

    double x_left() const noexcept { return x_left_; }
    double x_right() const noexcept { return x_right_; }
    double length() const noexcept { return x_right_ - x_left_; }
    std::size_t size() const noexcept { return num_cells_; }
    double dx() const noexcept { return dx_; }
    Boundary boundary() const noexcept { return boundary_; }
    bool periodic() const noexcept { return boundary_ == Boundary::Periodic; }

    double center(std::size_t i) const noexcept
    {
        return x_left_ + (static_cast<double>(i) + 0.5) * dx_;
    }

    /// Position of the interface x_{i+1/2}; i = -1 gives the left domain edge.
    double interface(std::ptrdiff_t i) const noexcept
    {
        return x_left_ + static_cast<double>(i + 1) * dx_;
    }

    std::vector<double> centers() const
    {
        std::vector<double> c(num_cells_);
        for (std::size_t i = 0; i < num_cells_; ++i) c[i] = center(i);
        return c;
    }

    /// Maps an unbounded cell index onto the stored cells (wrap or clamp).
    std::size_t resolve(std::ptrdiff_t i) const noexcept
    {
        const auto n = static_cast<std::ptrdiff_t>(num_cells_);
        if (periodic()) {
            auto r = i % n;
            return static_cast<std::size_t>(r < 0 ? r + n : r);
        }
        if (i < 0) return 0;
        if (i >= n) return num_cells_ - 1;
        return static_cast<std::size_t>(i);
    }

private:
    double x_left_;
    double x_right_;
    std::size_t num_cells_;
    Boundary boundary_;
    double dx_;
};

inline Grid build_grid(double x_left, double x_right, std::size_t num_cells, Boundary boundary)
{
    return Grid(x_left, x_right, num_cells, boundary);
}

struct TimeStepping {
    double t_final = 0.0;
    double dt = 0.0;
    std::size_t num_steps = 0;
    double alpha = 0.0; ///< wave-speed bound the step was sized for
    double cfl = 0.0;

    double time(std::size_t n) const noexcept
    {
        // n*dt drifts from t_final by an ulp or two at the last level
        return n == num_steps ? t_final : static_cast<double>(n) * dt;
    }

    double courant(const Grid& g) const noexcept { return alpha * dt / g.dx(); }
};

/// Uniform step with alpha*dt/dx <= cfl that lands exactly on t_final.
inline TimeStepping select_dt(const Grid& grid, double alpha, double cfl, double t_final)
{
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw WaveSpeedError("wave-speed bound must be positive and finite, got " +
                             std::to_string(alpha));
    if (!(cfl > 0.0 && cfl <= 1.0))
        throw ConfigError("must lie in (0, 1]", "time.cfl");
    if (!(t_final > 0.0) || !std::isfinite(t_final))
        throw ConfigError("must be positive", "time.t_final");

    const double dt_max = cfl * grid.dx() / alpha;
    auto steps = static_cast<std::size_t>(std::ceil(t_final / dt_max * (1.0 - 1e-12)));
    if (steps == 0) steps = 1;
    double dt = t_final / static_cast<double>(steps);
    // the division can round up by an ulp and push the Courant number over cfl
    while (alpha * dt / grid.dx() > cfl) {
        ++steps;
        dt = t_final / static_cast<double>(steps);
    }
    return TimeStepping{t_final, dt, steps, alpha, cfl};
}

/// Field padded with `ghost_width` cells on each side.
inline std::vector<double> apply_boundary(std::span<const double> field, const Grid& grid,
                                          std::size_t ghost_width = 1)
{
    const auto n = static_cast<std::ptrdiff_t>(field.size());
    const auto g = static_cast<std::ptrdiff_t>(ghost_width);
    std::vector<double> out(field.size() + 2 * ghost_width);
    for (std::ptrdiff_t k = -g; k < n + g; ++k) {
        std::ptrdiff_t src;
        if (grid.periodic()) {
            src = ((k % n) + n) % n;
        } else {
            src = k < 0 ? 0 : (k >= n ? n - 1 : k);
        }
        out[static_cast<std::size_t>(k + g)] = field[static_cast<std::size_t>(src)];
    }
    return out;
}

} // namespace claws
