#pragma once

#include <cmath>
#include <cstddef>
#include <deque>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "fft.hpp"
#include "grid.hpp"
#include "kernels.hpp"

namespace claws {

/// The nonlocal nonlinearity J; every shipped model uses the identity.
struct Identity {
    constexpr double operator()(double q) const noexcept { return q; }
};

enum class NonlocalSource { None, Spatial, MemoryQuadrature, MemoryRecursive, Delayed };

struct NonlocalField {
    std::vector<double> values;
    NonlocalSource source = NonlocalSource::None;
    double dropped_mass = 0.0; ///< temporal kernel mass lost to lag truncation
};

enum class FastPath { Auto, Direct, Fft, Recursive };

inline std::string_view to_string(FastPath p) noexcept
{
    switch (p) {
    case FastPath::Auto: return "auto";
    case FastPath::Direct: return "direct";
    case FastPath::Fft: return "fft";
    case FastPath::Recursive: return "recursive";
    }
    return "auto";
}

inline FastPath fast_path_from_string(std::string_view s)
{
    if (s == "auto") return FastPath::Auto;
    if (s == "direct") return FastPath::Direct;
    if (s == "fft") return FastPath::Fft;
    if (s == "recursive") return FastPath::Recursive;
    throw ConfigError("expected auto|direct|fft|recursive, got \"" + std::string(s) + "\"",
                      "nonlocal.fast_path");
}

// ---------------------------------------------------------------------------
// Spatial convolution W_i = sum_j w_j dx J(q_{i - o_j})
// ---------------------------------------------------------------------------

namespace detail {

/// Convolution of an already-transformed field, boundary per grid (wrap or edge copy).
inline void convolve_direct(std::span<const double> a, const DiscreteWeights& weights,
                            const Grid& grid, std::span<double> out)
{
    const auto n = static_cast<std::ptrdiff_t>(a.size());
    const std::ptrdiff_t o_min = weights.min_offset();
    const std::ptrdiff_t o_max = weights.max_offset();
    // ext[k + o_max] holds the (extended) value at cell k, k in [-o_max, n - 1 - o_min]
    const std::ptrdiff_t ext_lo = -o_max;
    const std::ptrdiff_t ext_hi = n - 1 - o_min;
    std::vector<double> ext(static_cast<std::size_t>(ext_hi - ext_lo + 1));
    for (std::ptrdiff_t k = ext_lo; k <= ext_hi; ++k)
        ext[static_cast<std::size_t>(k - ext_lo)] = a[grid.resolve(k)];

    std::vector<double> mass(weights.size());
    for (std::size_t j = 0; j < weights.size(); ++j) mass[j] = weights.weights()[j] * weights.dx();

    for (std::ptrdiff_t i = 0; i < n; ++i) {
        double s = 0.0;
        // cell read for offset o is i - o, stored at ext index i - o + o_max
        const double* base = ext.data() + (i + o_max - o_min);
        for (std::size_t j = 0; j < mass.size(); ++j) s += mass[j] * base[-static_cast<std::ptrdiff_t>(j)];
        out[static_cast<std::size_t>(i)] = s;
    }
}

template <typename JMap>
std::vector<double> transform(std::span<const double> field, JMap&& J)
{
    std::vector<double> a(field.size());
    for (std::size_t i = 0; i < field.size(); ++i) a[i] = J(field[i]);
    return a;
}

} // namespace detail

template <typename JMap = Identity>
NonlocalField conv_direct(std::span<const double> field, const DiscreteWeights& weights,
                          const Grid& grid, JMap&& J = {})
{
    if (field.size() != grid.size())
        throw SolverError("field length " + std::to_string(field.size()) +
                          " does not match grid size " + std::to_string(grid.size()));
    const auto a = detail::transform(field, J);
    NonlocalField w{std::vector<double>(field.size()), NonlocalSource::Spatial, 0.0};
    detail::convolve_direct(a, weights, grid, w.values);
    return w;
}

template <typename JMap = Identity>
NonlocalField conv_fft_periodic(std::span<const double> field, const PeriodicConvolver& conv,
                                JMap&& J = {})
{
    if (field.size() != conv.size())
        throw SolverError("field length does not match the convolver size");
    auto a = detail::transform(field, J);
    conv.apply(a, a);
    return NonlocalField{std::move(a), NonlocalSource::Spatial, 0.0};
}

template <typename JMap = Identity>
NonlocalField conv_fft_periodic(std::span<const double> field, const DiscreteWeights& weights,
                                const Grid& grid, JMap&& J = {})
{
    if (!grid.periodic())
        throw ModeError("FFT convolution requires a periodic grid");
    if (field.size() != grid.size())
        throw SolverError("field length does not match grid size");
    return conv_fft_periodic(field, PeriodicConvolver(grid.size(), weights),
                             std::forward<JMap>(J));
}

/**
 * Spatial convolution bound to one grid and kernel, picking direct or FFT evaluation.
 *
 * Auto selects FFT on periodic grids once the kernel has more than 32 taps and the grid is
 * at least 256 cells; below that the direct sum is faster.
 */
class SpatialConvolver {
public:
    SpatialConvolver(const Grid& grid, DiscreteWeights weights, FastPath path = FastPath::Auto)
        : grid_(grid), weights_(std::move(weights))
    {
        bool fft = false;
        if (path == FastPath::Fft) {
            if (!grid.periodic()) throw ModeError("fast_path \"fft\" requires a periodic grid");
            fft = true;
        } else if (path == FastPath::Auto || path == FastPath::Recursive) {
            fft = grid.periodic() && weights_.size() > 32 && grid.size() >= 256;
        }
        if (fft) fft_ = std::make_shared<PeriodicConvolver>(grid.size(), weights_);
    }

    const Grid& grid() const noexcept { return grid_; }
    const DiscreteWeights& weights() const noexcept { return weights_; }
    bool uses_fft() const noexcept { return static_cast<bool>(fft_); }

    /// Convolves an already J-transformed field.
    void apply(std::span<const double> a, std::span<double> out) const
    {
        if (fft_)
            fft_->apply(a, out);
        else
            detail::convolve_direct(a, weights_, grid_, out);
    }

    std::vector<double> operator()(std::span<const double> a) const
    {
        std::vector<double> out(a.size());
        apply(a, out);
        return out;
    }

private:
    Grid grid_;
    DiscreteWeights weights_;
    std::shared_ptr<const PeriodicConvolver> fft_;
};

// ---------------------------------------------------------------------------
// History of computed levels plus the prescribed datum for t <= 0
// ---------------------------------------------------------------------------

using HistoricalDatum = std::function<double(double t, double x)>;

/**
 * Computed levels 0..n-1 and the historical datum sampled at t = k dt, k < 0.
 *
 * Only the most recent `retain` computed levels are kept (0 keeps everything). Historical
 * levels are sampled pointwise at cell centers on first use and cached.
 */
class History {
public:
    History(const Grid& grid, double dt, HistoricalDatum historical = {}, std::size_t retain = 0)
        : grid_(grid), dt_(dt), historical_(std::move(historical)), retain_(retain)
    {
    }

    const Grid& grid() const noexcept { return grid_; }
    double dt() const noexcept { return dt_; }
    /// Number of computed levels recorded so far (the next level index).
    std::size_t size() const noexcept { return first_ + levels_.size(); }
    std::size_t first_retained() const noexcept { return first_; }
    bool has_historical() const noexcept { return static_cast<bool>(historical_); }
    const HistoricalDatum& historical() const noexcept { return historical_; }

    void push(std::vector<double> level)
    {
        if (level.size() != grid_.size()) throw SequencingError("history level has wrong length");
        levels_.push_back(std::move(level));
        while (retain_ > 0 && levels_.size() > retain_) {
            levels_.pop_front();
            ++first_;
        }
    }

    /// Level k; negative k reads the historical datum (zero when none was given).
    std::span<const double> level(std::ptrdiff_t k) const
    {
        if (k >= 0) {
            const auto uk = static_cast<std::size_t>(k);
            if (uk >= size())
                throw SequencingError("level " + std::to_string(k) + " has not been computed yet");
            if (uk < first_)
                throw SequencingError("level " + std::to_string(k) + " was dropped from history");
            return levels_[uk - first_];
        }
        const auto idx = static_cast<std::size_t>(-k - 1);
        if (idx >= hist_cache_.size()) hist_cache_.resize(idx + 1);
        auto& slot = hist_cache_[idx];
        if (!slot) {
            std::vector<double> v(grid_.size(), 0.0);
            if (historical_) {
                const double t = static_cast<double>(k) * dt_;
                for (std::size_t i = 0; i < v.size(); ++i) v[i] = historical_(t, grid_.center(i));
            }
            slot = std::move(v);
        }
        return *slot;
    }

private:
    Grid grid_;
    double dt_;
    HistoricalDatum historical_;
    std::size_t retain_;
    std::size_t first_ = 0;
    std::deque<std::vector<double>> levels_;
    mutable std::vector<std::optional<std::vector<double>>> hist_cache_;
};

// ---------------------------------------------------------------------------
// Memory operator: W^n = sum_{m>=1} K(m dt) dt  sum_j dx gamma_j J(q^{n-m})
// ---------------------------------------------------------------------------

/// Lag weights truncated where the kernel tail mass drops below eps.
struct MemoryWeights {
    TemporalKernel kernel;
    double dt = 0.0;
    std::vector<double> lag; ///< lag[m-1] = K(m dt) dt
    double dropped_mass = 0.0;

    std::size_t depth() const noexcept { return lag.size(); }

    double total() const { return detail::compensated_sum(lag, [](double v) { return v; }); }
};

inline MemoryWeights make_memory_weights(const TemporalKernel& kernel, double dt, double eps,
                                         std::size_t min_depth = 0)
{
    const std::size_t m = std::max(kernel.truncation_lags(dt, eps), min_depth);
    MemoryWeights w{kernel, dt, temporal_lag_weights(kernel, dt, m), 0.0};
    w.dropped_mass = kernel.tail_mass(static_cast<double>(m) * dt);
    return w;
}

/**
 * Causal quadrature over strictly past levels k < n. The lag-weighted sum of J(q^k) is
 * formed first and convolved once; by linearity this equals convolving every lag.
 */
template <typename JMap = Identity>
NonlocalField memory_quadrature(const History& history, const SpatialConvolver& conv,
                                const MemoryWeights& mw, std::size_t n, JMap&& J = {})
{
    if (history.size() < n)
        throw SequencingError("memory quadrature at level " + std::to_string(n) +
                              " needs levels up to " + std::to_string(n - 1));
    const std::size_t nx = history.grid().size();
    std::vector<double> acc(nx, 0.0);
    const std::size_t depth = mw.depth();
    for (std::size_t m = 1; m <= depth; ++m) {
        const auto k = static_cast<std::ptrdiff_t>(n) - static_cast<std::ptrdiff_t>(m);
        if (k < 0 && !history.has_historical()) break;
        const double c = mw.lag[m - 1];
        if (c == 0.0) continue;
        const auto q = history.level(k);
        for (std::size_t i = 0; i < nx; ++i) acc[i] += c * J(q[i]);
    }
    NonlocalField w{std::vector<double>(nx), NonlocalSource::MemoryQuadrature, mw.dropped_mass};
    conv.apply(acc, w.values);
    return w;
}

/// Convenience overload with a direct-sum convolver.
template <typename JMap = Identity>
NonlocalField memory_quadrature(const History& history, const DiscreteWeights& gamma,
                                const MemoryWeights& mw, std::size_t n, JMap&& J = {})
{
    return memory_quadrature(history, SpatialConvolver(history.grid(), gamma, FastPath::Direct),
                             mw, n, std::forward<JMap>(J));
}

/**
 * Seed of the exponential-kernel recursion: S^0 is the truncated quadrature of the
 * historical datum, so both paths agree at n = 0.
 */
template <typename JMap = Identity>
std::vector<double> exp_recursive_init(const History& history, const SpatialConvolver& conv,
                                       const MemoryWeights& mw, JMap&& J = {})
{
    if (mw.kernel.kind() != TemporalKind::Exponential)
        throw UnsupportedKernelError("recursive memory update needs an exponential kernel, got " +
                                         std::string(to_string(mw.kernel.kind())),
                                     "kernel.temporal.kind");
    return memory_quadrature(history, conv, mw, 0, std::forward<JMap>(J)).values;
}

/**
 * One step of S^{n+1} = a S^n + a (dt/tau0) sum_j dx gamma_j J(q^n_j), a = exp(-dt/tau0).
 *
 * The factor a (dt/tau0) is K(dt) dt, the first lag weight, so W^{n+1} = S^{n+1} equals the
 * quadrature with lag weights K(m dt) dt term by term.
 */
template <typename JMap = Identity>
std::pair<std::vector<double>, NonlocalField>
exp_recursive_update(std::span<const double> S, std::span<const double> field_prev,
                     const SpatialConvolver& conv, double dt, double tau0, JMap&& J = {})
{
    const double a = std::exp(-dt / tau0);
    const double lag1 = a * dt / tau0;
    const auto c = conv(detail::transform(field_prev, J));
    std::vector<double> next(S.size());
    for (std::size_t i = 0; i < S.size(); ++i) next[i] = a * S[i] + lag1 * c[i];
    NonlocalField w{next, NonlocalSource::MemoryRecursive, 0.0};
    return {std::move(next), std::move(w)};
}

/// W at level n is the spatial convolution of level n - delay_steps (historical if negative).
template <typename JMap = Identity>
NonlocalField delayed_lookup(const History& history, std::size_t delay_steps, std::size_t n,
                             const SpatialConvolver& conv, JMap&& J = {})
{
    if (delay_steps < 1) throw ConfigError("delay must be at least one step", "delay.delta");
    const auto k = static_cast<std::ptrdiff_t>(n) - static_cast<std::ptrdiff_t>(delay_steps);
    const auto q = history.level(k);
    NonlocalField w{conv(detail::transform(q, J)), NonlocalSource::Delayed, 0.0};
    return w;
}

} // namespace claws
