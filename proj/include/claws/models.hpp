#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "grid.hpp"

namespace claws {

// ---------------------------------------------------------------------------
// Speed-limit field V_max(t, x)
// ---------------------------------------------------------------------------

/**
 * Piecewise-constant speed limit smoothed by a Gaussian of width sigma.
 *
 * levels has one more entry than breakpoints: levels[j] applies on
 * [breakpoints[j-1], breakpoints[j]). On a periodic domain the profile wraps and the
 * smoothing sums over periodic images. sigma = 0 gives the raw step profile.
 */
class SpeedProfile {
public:
    static SpeedProfile constant(double v)
    {
        if (!(v > 0.0)) throw ConfigError("speed must be positive", "model.vmax.levels");
        SpeedProfile p;
        p.levels_ = {v};
        return p;
    }

    static SpeedProfile smoothed_steps(std::vector<double> breakpoints, std::vector<double> levels,
                                       double sigma, const Grid& grid)
    {
        if (levels.size() != breakpoints.size() + 1)
            throw ConfigError("need exactly one more level than breakpoints", "model.vmax.levels");
        for (double l : levels)
            if (!(l > 0.0) || !std::isfinite(l))
                throw ConfigError("levels must be positive", "model.vmax.levels");
        for (std::size_t i = 0; i < breakpoints.size(); ++i) {
            if (!(breakpoints[i] > grid.x_left() && breakpoints[i] < grid.x_right()))
                throw ConfigError("breakpoints must lie inside the domain", "model.vmax.breakpoints");
            if (i > 0 && !(breakpoints[i] > breakpoints[i - 1]))
                throw ConfigError("breakpoints must increase", "model.vmax.breakpoints");
        }
        if (!(sigma >= 0.0)) throw ConfigError("must be nonnegative", "model.vmax.gaussian_sigma");
        SpeedProfile p;
        p.breakpoints_ = std::move(breakpoints);
        p.levels_ = std::move(levels);
        p.sigma_ = sigma;
        p.periodic_ = grid.periodic();
        p.x_left_ = grid.x_left();
        p.x_right_ = grid.x_right();
        p.tabulate(grid);
        return p;
    }

    const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }
    const std::vector<double>& levels() const noexcept { return levels_; }
    double sigma() const noexcept { return sigma_; }
    bool is_constant() const noexcept { return levels_.size() == 1; }

    double max_level() const noexcept { return *std::max_element(levels_.begin(), levels_.end()); }
    double min_level() const noexcept { return *std::min_element(levels_.begin(), levels_.end()); }

    double operator()(double /*t*/, double x) const noexcept
    {
        if (levels_.size() == 1) return levels_[0];
        if (!table_.empty()) {
            // grid centers and interfaces hit the half-cell lattice exactly
            const double u = (x - x_left_) / half_dx_;
            const double k = std::nearbyint(u);
            if (k >= 0.0 && k < static_cast<double>(table_.size()) && std::abs(u - k) < 1e-9)
                return table_[static_cast<std::size_t>(k)];
        }
        return evaluate(x);
    }

private:
    static double phi(double u) noexcept { return 0.5 * std::erfc(-u / std::numbers::sqrt2); }

    void tabulate(const Grid& grid)
    {
        half_dx_ = 0.5 * grid.dx();
        table_.resize(2 * grid.size() + 1);
        for (std::size_t k = 0; k < table_.size(); ++k)
            table_[k] = evaluate(x_left_ + static_cast<double>(k) * half_dx_);
    }

    double evaluate(double x) const noexcept
    {
        if (sigma_ == 0.0) {
            if (periodic_) x = wrap(x);
            const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
            return levels_[static_cast<std::size_t>(it - breakpoints_.begin())];
        }
        if (!periodic_) {
            double v = levels_[0];
            for (std::size_t j = 0; j < breakpoints_.size(); ++j)
                v += (levels_[j + 1] - levels_[j]) * phi((x - breakpoints_[j]) / sigma_);
            return v;
        }
        // integrate the Gaussian against each piece of the periodic extension
        const double period = x_right_ - x_left_;
        const int images = 1 + static_cast<int>(std::ceil(8.0 * sigma_ / period));
        double v = 0.0;
        for (int n = -images; n <= images; ++n) {
            const double shift = n * period;
            for (std::size_t j = 0; j < levels_.size(); ++j) {
                const double a = (j == 0 ? x_left_ : breakpoints_[j - 1]) + shift;
                const double b = (j == breakpoints_.size() ? x_right_ : breakpoints_[j]) + shift;
                v += levels_[j] * (phi((x - a) / sigma_) - phi((x - b) / sigma_));
            }
        }
        return v;
    }

    double wrap(double x) const noexcept
    {
        const double period = x_right_ - x_left_;
        double r = std::fmod(x - x_left_, period);
        if (r < 0.0) r += period;
        return x_left_ + r;
    }

    std::vector<double> breakpoints_;
    std::vector<double> levels_;
    double sigma_ = 0.0;
    bool periodic_ = false;
    double x_left_ = 0.0;
    double x_right_ = 1.0;
    double half_dx_ = 0.0;
    std::vector<double> table_; ///< values at x_left + k dx/2
};

// ---------------------------------------------------------------------------
// Flux models F(t, x, w, q) = V(t, x) f(q) v(w)
// ---------------------------------------------------------------------------

enum class VelocityFactor {
    Constant,  ///< v(w) = 1: local flux, the nonlocal field has no effect
    OneMinusW, ///< v(w) = 1 - w
    Goatin,    ///< v(w) = (1 - w)^(m-1) (1 + w)^m
};

/**
 * Flux evaluator with the structural metadata the schemes and diagnostics need.
 *
 * The shipped models are products V(t,x) q(1-q) v(w); `evaluate` and `dq` are plain
 * callables so a custom model can be anything finite on the state box.
 */
struct FluxModel {
    using Fn = std::function<double(double t, double x, double w, double q)>;

    std::string name;
    Fn evaluate;
    Fn dq; ///< exact dF/dq; empty means "use finite differences"
    Fn dw; ///< exact dF/dw; empty means "use finite differences"
    /// q* where dF/dq may vanish; nullopt means unknown (interface search falls back to
    /// golden-section).
    std::optional<std::vector<double>> critical_points;
    std::optional<std::pair<double, double>> vanishing_states; ///< F(., ., ., q) == 0 there
    std::pair<double, double> q_box{0.0, 1.0};
    std::function<double(double)> J = [](double q) { return q; };
    /// Optional separable factor: F = speed(t, x) g(w, q) with speed > 0. Lets the wave-speed
    /// estimate sample x and (w, q) independently.
    std::function<double(double t, double x)> speed;
    bool depends_on_w = true;
    bool depends_on_x = false;
    bool depends_on_t = false;

    double operator()(double t, double x, double w, double q) const { return evaluate(t, x, w, q); }

    double dF_dq(double t, double x, double w, double q) const
    {
        if (dq) return dq(t, x, w, q);
        const double h = 1e-6 * std::max(1.0, std::abs(q));
        return (evaluate(t, x, w, q + h) - evaluate(t, x, w, q - h)) / (2.0 * h);
    }

    double dF_dw(double t, double x, double w, double q) const
    {
        if (dw) return dw(t, x, w, q);
        const double h = 1e-6 * std::max(1.0, std::abs(w));
        return (evaluate(t, x, w + h, q) - evaluate(t, x, w - h, q)) / (2.0 * h);
    }
};

namespace detail {

inline double ipow(double b, int e) noexcept
{
    double r = 1.0;
    for (; e > 0; --e) r *= b;
    return r;
}

inline double goatin_v(int m, double w) noexcept
{
    return ipow(1.0 - w, m - 1) * ipow(1.0 + w, m);
}

inline double goatin_dv(int m, double w) noexcept
{
    if (m == 1) return 1.0;
    // d/dw (1-w)^(m-1) (1+w)^m = (1-w)^(m-2) (1+w)^(m-1) [m(1-w) - (m-1)(1+w)]
    return ipow(1.0 - w, m - 2) * ipow(1.0 + w, m - 1) *
           (static_cast<double>(m) * (1.0 - w) - static_cast<double>(m - 1) * (1.0 + w));
}

inline FluxModel greenshields_product(std::string name, SpeedProfile vmax, VelocityFactor factor,
                                      int m)
{
    auto v = [factor, m](double w) {
        switch (factor) {
        case VelocityFactor::Constant: return 1.0;
        case VelocityFactor::OneMinusW: return 1.0 - w;
        case VelocityFactor::Goatin: return goatin_v(m, w);
        }
        return 1.0;
    };
    auto dv = [factor, m](double w) {
        switch (factor) {
        case VelocityFactor::Constant: return 0.0;
        case VelocityFactor::OneMinusW: return -1.0;
        case VelocityFactor::Goatin: return goatin_dv(m, w);
        }
        return 0.0;
    };

    FluxModel f;
    f.name = std::move(name);
    f.depends_on_x = !vmax.is_constant();
    f.depends_on_w = factor != VelocityFactor::Constant;
    f.evaluate = [vmax, v](double t, double x, double w, double q) {
        return vmax(t, x) * q * (1.0 - q) * v(w);
    };
    f.dq = [vmax, v](double t, double x, double w, double q) {
        return vmax(t, x) * (1.0 - 2.0 * q) * v(w);
    };
    f.dw = [vmax, dv](double t, double x, double w, double q) {
        return vmax(t, x) * q * (1.0 - q) * dv(w);
    };
    f.speed = [vmax](double t, double x) { return vmax(t, x); };
    f.critical_points = std::vector<double>{0.5};
    f.vanishing_states = std::pair{0.0, 1.0};
    f.q_box = {0.0, 1.0};
    return f;
}

} // namespace detail

/// q(1-q) V_max (1 - w), J = identity.
inline FluxModel lwr_nonlocal_flux(double v_max)
{
    if (!(v_max > 0.0)) throw ConfigError("must be positive", "model.vmax.levels");
    return detail::greenshields_product("lwr_nonlocal", SpeedProfile::constant(v_max),
                                        VelocityFactor::OneMinusW, 1);
}

/// V_max(t,x) rho(1-rho) (1-w)^(m-1) (1+w)^m, J = identity.
inline FluxModel goatin_flux(int m, SpeedProfile v_max)
{
    if (m < 1) throw ConfigError("exponent must be >= 1", "model.m");
    return detail::greenshields_product("goatin", std::move(v_max), VelocityFactor::Goatin, m);
}

/// Local LWR flux V_max q(1-q); the nonlocal field is ignored.
inline FluxModel lwr_local_flux(SpeedProfile v_max)
{
    return detail::greenshields_product("lwr_local", std::move(v_max), VelocityFactor::Constant, 1);
}

// ---------------------------------------------------------------------------
// Initial and historical data
// ---------------------------------------------------------------------------

struct Plateau {
    double a = 0.0;
    double b = 0.0;
    double height = 0.0;
};

enum class InitKind { Plateaus, Constant, Sine, Riemann };

/**
 * Initial datum q0(x). Cell averages are exact for every kind (the plateaus and the Riemann
 * step integrate by overlap length, the sine in closed form).
 */
class InitialDatum {
public:
    static InitialDatum plateaus(std::vector<Plateau> p)
    {
        for (const auto& pl : p)
            if (!(pl.b > pl.a)) throw ConfigError("plateau needs a < b", "init.plateaus");
        InitialDatum d(InitKind::Plateaus);
        d.plateaus_ = std::move(p);
        return d;
    }

    static InitialDatum constant(double value)
    {
        InitialDatum d(InitKind::Constant);
        d.base_ = value;
        return d;
    }

    /// base + amplitude sin(2 pi periods (x - x_left) / length)
    static InitialDatum sine(double base, double amplitude, double periods, double x_left,
                             double length)
    {
        InitialDatum d(InitKind::Sine);
        d.base_ = base;
        d.amplitude_ = amplitude;
        d.wavenumber_ = 2.0 * std::numbers::pi * periods / length;
        d.x0_ = x_left;
        return d;
    }

    /// left for x < x0, right for x > x0
    static InitialDatum riemann(double left, double right, double x0)
    {
        InitialDatum d(InitKind::Riemann);
        d.left_ = left;
        d.right_ = right;
        d.x0_ = x0;
        return d;
    }

    InitKind kind() const noexcept { return kind_; }

    double operator()(double x) const noexcept
    {
        switch (kind_) {
        case InitKind::Plateaus: {
            double v = 0.0;
            for (const auto& p : plateaus_)
                if (x >= p.a && x <= p.b) v += p.height;
            return v;
        }
        case InitKind::Constant: return base_;
        case InitKind::Sine: return base_ + amplitude_ * std::sin(wavenumber_ * (x - x0_));
        case InitKind::Riemann: return x < x0_ ? left_ : right_;
        }
        return 0.0;
    }

    double cell_average(double a, double b) const noexcept
    {
        const double len = b - a;
        switch (kind_) {
        case InitKind::Plateaus: {
            double v = 0.0;
            for (const auto& p : plateaus_) {
                const double ov = std::min(b, p.b) - std::max(a, p.a);
                if (ov > 0.0) v += p.height * ov;
            }
            return v / len;
        }
        case InitKind::Constant: return base_;
        case InitKind::Sine:
            return base_ + amplitude_ *
                               (std::cos(wavenumber_ * (a - x0_)) - std::cos(wavenumber_ * (b - x0_))) /
                               (wavenumber_ * len);
        case InitKind::Riemann: {
            const double l = std::clamp(x0_ - a, 0.0, len);
            return (left_ * l + right_ * (len - l)) / len;
        }
        }
        return 0.0;
    }

    std::vector<double> sample(const Grid& grid) const
    {
        std::vector<double> q(grid.size());
        for (std::size_t i = 0; i < q.size(); ++i)
            q[i] = cell_average(grid.interface(static_cast<std::ptrdiff_t>(i) - 1),
                                grid.interface(static_cast<std::ptrdiff_t>(i)));
        return q;
    }

    double min_value() const
    {
        switch (kind_) {
        case InitKind::Plateaus: {
            // overlapping plateaus stack, so probe every breakpoint region
            double lo = 0.0;
            for (const auto& p : plateaus_) lo = std::min({lo, (*this)(p.a), (*this)(p.b)});
            return lo;
        }
        case InitKind::Constant: return base_;
        case InitKind::Sine: return base_ - std::abs(amplitude_);
        case InitKind::Riemann: return std::min(left_, right_);
        }
        return 0.0;
    }

    double max_value() const
    {
        switch (kind_) {
        case InitKind::Plateaus: {
            double hi = 0.0;
            for (const auto& p : plateaus_) {
                hi = std::max({hi, (*this)(p.a), (*this)(p.b), (*this)(0.5 * (p.a + p.b))});
            }
            return hi;
        }
        case InitKind::Constant: return base_;
        case InitKind::Sine: return base_ + std::abs(amplitude_);
        case InitKind::Riemann: return std::max(left_, right_);
        }
        return 0.0;
    }

    const std::vector<Plateau>& plateaus() const noexcept { return plateaus_; }

private:
    explicit InitialDatum(InitKind k) : kind_(k) {}

    InitKind kind_;
    std::vector<Plateau> plateaus_;
    double base_ = 0.0;
    double amplitude_ = 0.0;
    double wavenumber_ = 0.0;
    double left_ = 0.0;
    double right_ = 0.0;
    double x0_ = 0.0;
};

enum class HistoryKind {
    None,            ///< q = 0 for t < 0
    ExpDecayOfInit,  ///< q(t, x) = q0(x) e^t
    ConstantInit,    ///< q(t, x) = q0(x)
};

inline std::function<double(double, double)> make_historical(HistoryKind kind, InitialDatum q0)
{
    switch (kind) {
    case HistoryKind::None: return {};
    case HistoryKind::ExpDecayOfInit:
        return [q0 = std::move(q0)](double t, double x) { return q0(x) * std::exp(t); };
    case HistoryKind::ConstantInit:
        return [q0 = std::move(q0)](double, double x) { return q0(x); };
    }
    return {};
}

} // namespace claws
