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

namespace claws {

namespace detail {

/// Neumaier-compensated sum; normalization checks are asserted at 1e-14.
template <typename Range, typename Fn>
double compensated_sum(const Range& r, Fn&& fn)
{
    double sum = 0.0, c = 0.0;
    for (const auto& v : r) {
        const double x = fn(v);
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            c += (sum - t) + x;
        else
            c += (x - t) + sum;
        sum = t;
    }
    return sum + c;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Spatial kernels gamma(z), z = x - y
// ---------------------------------------------------------------------------

enum class SpatialKind { RaisedCosineLeft, QuinticShifted, Tabulated };

/**
 * Spatial kernel gamma(z) with unit L1 norm, evaluated at z = x - y.
 *
 * A kernel supported on z <= 0 looks at y >= x, i.e. downstream traffic.
 */
class SpatialKernel {
public:
    /// (2/R) cos^2(pi z / 2R) on [-R, 0].
    static SpatialKernel raised_cosine_left(double R)
    {
        if (!(R > 0.0)) throw ConfigError("must be positive", "kernel.spatial.R");
        SpatialKernel k(SpatialKind::RaisedCosineLeft);
        k.p0_ = R;
        k.lo_ = -R;
        k.hi_ = 0.0;
        return k;
    }

    /// C (1 - s^2)^5 with s = (z - delta)/eta, on [delta - eta, delta + eta].
    static SpatialKernel quintic_shifted(double eta, double delta)
    {
        if (!(eta > 0.0)) throw ConfigError("must be positive", "kernel.spatial.eta");
        if (!std::isfinite(delta)) throw ConfigError("must be finite", "kernel.spatial.delta");
        SpatialKernel k(SpatialKind::QuinticShifted);
        k.p0_ = eta;
        k.p1_ = delta;
        k.lo_ = delta - eta;
        k.hi_ = delta + eta;
        // int_{-1}^{1} (1 - s^2)^5 ds = 2 * (2*4*6*8*10) / (1*3*5*7*9*11)
        k.scale_ = 1.0 / (eta * (2.0 * 3840.0 / 10395.0));
        return k;
    }

    /// Piecewise-linear kernel through (z, value) nodes, zero outside, rescaled to unit mass.
    static SpatialKernel tabulated(std::vector<double> z, std::vector<double> values)
    {
        if (z.size() != values.size() || z.size() < 2)
            throw ConfigError("table needs at least two (z, value) rows", "kernel.spatial.table");
        for (std::size_t i = 1; i < z.size(); ++i)
            if (!(z[i] > z[i - 1]))
                throw ConfigError("z column must be strictly increasing", "kernel.spatial.table");
        double mass = 0.0;
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (!(values[i] >= 0.0) || !std::isfinite(values[i]))
                throw ConfigError("kernel values must be finite and nonnegative",
                                  "kernel.spatial.table");
            if (i > 0) mass += 0.5 * (values[i] + values[i - 1]) * (z[i] - z[i - 1]);
        }
        if (!(mass > 0.0)) throw ConfigError("table has zero mass", "kernel.spatial.table");
        SpatialKernel k(SpatialKind::Tabulated);
        k.lo_ = z.front();
        k.hi_ = z.back();
        k.scale_ = 1.0 / mass;
        k.table_z_ = std::move(z);
        k.table_v_ = std::move(values);
        return k;
    }

    SpatialKind kind() const noexcept { return kind_; }
    double support_lo() const noexcept { return lo_; }
    double support_hi() const noexcept { return hi_; }
    double support_width() const noexcept { return hi_ - lo_; }

    double R() const noexcept { return p0_; }
    double eta() const noexcept { return p0_; }
    double delta() const noexcept { return p1_; }
    const std::vector<double>& table_z() const noexcept { return table_z_; }
    const std::vector<double>& table_values() const noexcept { return table_v_; }

    double operator()(double z) const noexcept
    {
        if (z < lo_ || z > hi_) return 0.0;
        switch (kind_) {
        case SpatialKind::RaisedCosineLeft: {
            const double c = std::cos(std::numbers::pi * z / (2.0 * p0_));
            return 2.0 / p0_ * c * c;
        }
        case SpatialKind::QuinticShifted: {
            const double s = (z - p1_) / p0_;
            const double b = 1.0 - s * s;
            const double b2 = b * b;
            return scale_ * b2 * b2 * b;
        }
        case SpatialKind::Tabulated: {
            auto it = std::upper_bound(table_z_.begin(), table_z_.end(), z);
            if (it == table_z_.end()) return scale_ * table_v_.back();
            const auto j = static_cast<std::size_t>(it - table_z_.begin());
            const double t = (z - table_z_[j - 1]) / (table_z_[j] - table_z_[j - 1]);
            return scale_ * ((1.0 - t) * table_v_[j - 1] + t * table_v_[j]);
        }
        }
        return 0.0;
    }

private:
    explicit SpatialKernel(SpatialKind kind) : kind_(kind) {}

    SpatialKind kind_;
    double p0_ = 0.0;
    double p1_ = 0.0;
    double lo_ = 0.0;
    double hi_ = 0.0;
    double scale_ = 1.0;
    std::vector<double> table_z_;
    std::vector<double> table_v_;
};

inline double eval_spatial(const SpatialKernel& k, double z) noexcept { return k(z); }

/**
 * Discrete image of a spatial kernel on a grid of spacing dx.
 *
 * weights()[j] belongs to the cell offset min_offset() + j, i.e. z = offset*dx, and the
 * nonlocal average reads the cell i - offset. Invariant: sum(weights)*dx == 1.
 */
class DiscreteWeights {
public:
    DiscreteWeights() = default;
    DiscreteWeights(std::ptrdiff_t min_offset, std::vector<double> weights, double dx)
        : min_offset_(min_offset), weights_(std::move(weights)), dx_(dx)
    {
    }

    std::ptrdiff_t min_offset() const noexcept { return min_offset_; }
    std::ptrdiff_t max_offset() const noexcept
    {
        return min_offset_ + static_cast<std::ptrdiff_t>(weights_.size()) - 1;
    }
    std::ptrdiff_t offset(std::size_t j) const noexcept
    {
        return min_offset_ + static_cast<std::ptrdiff_t>(j);
    }
    std::span<const double> weights() const noexcept { return weights_; }
    std::size_t size() const noexcept { return weights_.size(); }
    double dx() const noexcept { return dx_; }

    /// Weight at an offset, zero outside the stored range.
    double at_offset(std::ptrdiff_t o) const noexcept
    {
        if (o < min_offset_ || o > max_offset()) return 0.0;
        return weights_[static_cast<std::size_t>(o - min_offset_)];
    }

    double mass() const
    {
        return detail::compensated_sum(weights_, [this](double w) { return w * dx_; });
    }

private:
    std::ptrdiff_t min_offset_ = 0;
    std::vector<double> weights_;
    double dx_ = 1.0;
};

/**
 * Midpoint rule over the kernel support: each cell offset o covers
 * z in [(o - 1/2) dx, (o + 1/2) dx]; the part of that interval inside the support
 * contributes gamma(midpoint) * length. Weights are then rescaled to unit discrete mass.
 */
inline DiscreteWeights sample_spatial(const SpatialKernel& kernel, double dx)
{
    if (!(dx > 0.0)) throw ConfigError("dx must be positive");
    if (kernel.support_width() < dx * (1.0 - 1e-12))
        throw KernelResolutionError("kernel support (" + std::to_string(kernel.support_width()) +
                                        ") is narrower than one cell (" + std::to_string(dx) + ")",
                                    "kernel.spatial");

    const double lo = kernel.support_lo();
    const double hi = kernel.support_hi();
    auto o_min = static_cast<std::ptrdiff_t>(std::floor(lo / dx + 0.5));
    auto o_max = static_cast<std::ptrdiff_t>(std::ceil(hi / dx - 0.5));

    std::vector<double> w;
    w.reserve(static_cast<std::size_t>(o_max - o_min + 1));
    for (std::ptrdiff_t o = o_min; o <= o_max; ++o) {
        const double a = std::max(lo, (static_cast<double>(o) - 0.5) * dx);
        const double b = std::min(hi, (static_cast<double>(o) + 0.5) * dx);
        const double len = b - a;
        w.push_back(len > 0.0 ? kernel(0.5 * (a + b)) * len / dx : 0.0);
    }
    // exact zeros at the ends carry no information; trimming keeps periodic supports <= Nx
    std::size_t first = 0, last = w.size();
    while (first < last && w[first] == 0.0) ++first;
    while (last > first && w[last - 1] == 0.0) --last;
    if (first == last)
        throw KernelResolutionError("all sampled kernel values are zero", "kernel.spatial");

    std::vector<double> trimmed(w.begin() + static_cast<std::ptrdiff_t>(first),
                                w.begin() + static_cast<std::ptrdiff_t>(last));
    const double mass =
        detail::compensated_sum(trimmed, [dx](double v) { return v * dx; });
    for (auto& v : trimmed) v /= mass;
    return DiscreteWeights(o_min + static_cast<std::ptrdiff_t>(first), std::move(trimmed), dx);
}

/// Unnormalized discrete mass sum_o gamma(mid_o) len_o; converges to 1 at second order.
inline double raw_discrete_mass(const SpatialKernel& kernel, double dx)
{
    const double lo = kernel.support_lo();
    const double hi = kernel.support_hi();
    auto o_min = static_cast<std::ptrdiff_t>(std::floor(lo / dx + 0.5));
    auto o_max = static_cast<std::ptrdiff_t>(std::ceil(hi / dx - 0.5));
    double sum = 0.0;
    for (std::ptrdiff_t o = o_min; o <= o_max; ++o) {
        const double a = std::max(lo, (static_cast<double>(o) - 0.5) * dx);
        const double b = std::min(hi, (static_cast<double>(o) + 0.5) * dx);
        if (b > a) sum += kernel(0.5 * (a + b)) * (b - a);
    }
    return sum;
}

// ---------------------------------------------------------------------------
// Temporal kernels K(tau), tau >= 0
// ---------------------------------------------------------------------------

enum class TemporalKind { None, Exponential, Erlang, Triangular };

inline std::string_view to_string(TemporalKind k) noexcept
{
    switch (k) {
    case TemporalKind::None: return "none";
    case TemporalKind::Exponential: return "exponential";
    case TemporalKind::Erlang: return "erlang";
    case TemporalKind::Triangular: return "triangular";
    }
    return "none";
}

/// Memory kernel with unit integral over (0, inf).
class TemporalKernel {
public:
    TemporalKernel() = default;

    static TemporalKernel none() { return TemporalKernel(); }

    /// (1/tau0) exp(-tau/tau0)
    static TemporalKernel exponential(double tau0)
    {
        if (!(tau0 > 0.0)) throw ConfigError("must be positive", "kernel.temporal.tau0");
        return TemporalKernel(TemporalKind::Exponential, tau0);
    }

    /// (tau/tau0^2) exp(-tau/tau0)
    static TemporalKernel erlang(double tau0)
    {
        if (!(tau0 > 0.0)) throw ConfigError("must be positive", "kernel.temporal.tau0");
        return TemporalKernel(TemporalKind::Erlang, tau0);
    }

    /// (2/width)(1 - tau/width) on [0, width]
    static TemporalKernel triangular(double width)
    {
        if (!(width > 0.0)) throw ConfigError("must be positive", "kernel.temporal.width");
        return TemporalKernel(TemporalKind::Triangular, width);
    }

    TemporalKind kind() const noexcept { return kind_; }
    double scale() const noexcept { return scale_; } ///< tau0 or width

    double operator()(double tau) const
    {
        if (tau < 0.0) throw std::invalid_argument("temporal kernel evaluated at negative lag");
        const double s = scale_;
        switch (kind_) {
        case TemporalKind::None: return 0.0;
        case TemporalKind::Exponential: return std::exp(-tau / s) / s;
        case TemporalKind::Erlang: return tau / (s * s) * std::exp(-tau / s);
        case TemporalKind::Triangular: return tau >= s ? 0.0 : 2.0 / s * (1.0 - tau / s);
        }
        return 0.0;
    }

    /// int_t^inf K(tau) dtau
    double tail_mass(double t) const noexcept
    {
        if (t <= 0.0) return kind_ == TemporalKind::None ? 0.0 : 1.0;
        const double s = scale_;
        switch (kind_) {
        case TemporalKind::None: return 0.0;
        case TemporalKind::Exponential: return std::exp(-t / s);
        case TemporalKind::Erlang: return (1.0 + t / s) * std::exp(-t / s);
        case TemporalKind::Triangular: {
            if (t >= s) return 0.0;
            const double r = 1.0 - t / s;
            return r * r;
        }
        }
        return 0.0;
    }

    /// Smallest lag count M with tail_mass(M*dt) < eps.
    std::size_t truncation_lags(double dt, double eps) const
    {
        if (kind_ == TemporalKind::None) return 0;
        if (!(dt > 0.0) || !(eps > 0.0)) throw ConfigError("truncation needs dt > 0 and eps > 0");
        std::size_t hi = 1;
        while (tail_mass(static_cast<double>(hi) * dt) >= eps) hi *= 2;
        std::size_t lo = hi / 2; // tail(lo*dt) >= eps unless lo == 0
        while (hi - lo > 1) {
            const std::size_t mid = lo + (hi - lo) / 2;
            if (tail_mass(static_cast<double>(mid) * dt) < eps)
                hi = mid;
            else
                lo = mid;
        }
        return hi;
    }

private:
    TemporalKernel(TemporalKind kind, double scale) : kind_(kind), scale_(scale) {}

    TemporalKind kind_ = TemporalKind::None;
    double scale_ = 1.0;
};

inline double eval_temporal(const TemporalKernel& k, double tau) { return k(tau); }

/// weights[m-1] = K(m dt) dt for m = 1..num_lags; only strictly past levels contribute.
inline std::vector<double> temporal_lag_weights(const TemporalKernel& kernel, double dt,
                                                std::size_t num_lags)
{
    if (!(dt > 0.0)) throw ConfigError("dt must be positive");
    std::vector<double> w(num_lags);
    for (std::size_t m = 1; m <= num_lags; ++m)
        w[m - 1] = kernel(static_cast<double>(m) * dt) * dt;
    return w;
}

} // namespace claws
