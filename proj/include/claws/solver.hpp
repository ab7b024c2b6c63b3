#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "grid.hpp"
#include "kernels.hpp"
#include "models.hpp"
#include "nonlocal.hpp"
#include "schemes.hpp"

namespace claws {

enum class NonlocalMode { None, Spatial, Memory, Delay };
enum class PicardMode { FixedPoint, Direct };
enum class MemoryCausality { Strict, SemiImplicit };

inline std::string_view to_string(NonlocalMode m) noexcept
{
    switch (m) {
    case NonlocalMode::None: return "none";
    case NonlocalMode::Spatial: return "spatial";
    case NonlocalMode::Memory: return "memory";
    case NonlocalMode::Delay: return "delay";
    }
    return "none";
}

inline std::string_view to_string(PicardMode m) noexcept
{
    return m == PicardMode::FixedPoint ? "fixed_point" : "direct";
}

inline std::string_view to_string(MemoryCausality c) noexcept
{
    return c == MemoryCausality::Strict ? "strict" : "semi_implicit";
}

struct PicardConfig {
    double tol = 1e-7;
    std::size_t max_iters = 50;
    PicardMode mode = PicardMode::FixedPoint;
};

/// Everything a run needs, fully resolved.
struct Experiment {
    Grid grid{0.0, 1.0, 2, Boundary::Outflow};
    double t_final = 1.0;
    double cfl = 0.9;
    FluxModel flux;
    InitialDatum init = InitialDatum::constant(0.0);
    HistoricalDatum historical;
    std::optional<SpatialKernel> spatial;
    TemporalKernel temporal;
    NonlocalMode mode = NonlocalMode::Spatial;
    FastPath fast_path = FastPath::Auto;
    double truncation_eps = 1e-10;
    double delay = 0.0;
    SchemeKind scheme = SchemeKind::Godunov;
    MemoryCausality causal = MemoryCausality::Strict;
    PicardConfig picard;
};

struct RunOptions {
    std::size_t stride = 1;
    bool record_nonlocal = false; ///< keep the frozen W of every step (entropy diagnostics)
};

struct RunResult {
    Grid grid{0.0, 1.0, 2, Boundary::Outflow};
    TimeStepping time;
    std::size_t stride = 1;
    std::vector<std::size_t> level_index; ///< time level of each stored profile
    std::vector<double> times;
    std::vector<std::vector<double>> levels;
    std::vector<std::size_t> iterations;          ///< Picard iterations per step
    std::vector<std::vector<double>> residuals;   ///< Picard residual history per step
    std::vector<std::vector<double>> nonlocal;    ///< W frozen at each step (optional)
    std::vector<std::pair<double, double>> boundary_fluxes; ///< (G_{-1/2}, G_{N-1/2}) per step
    double dropped_mass = 0.0;
    std::size_t memory_depth = 0;
    std::size_t delay_steps = 0;
    double max_courant = 0.0;
    bool used_fft = false;
    bool used_recursive = false;
    std::vector<std::string> warnings;
    std::optional<std::string> failure;
    std::string failure_kind;

    bool ok() const noexcept { return !failure.has_value(); }
    std::size_t steps_completed() const noexcept { return iterations.size(); }
};

/// Bounds of W given the model's state box, J and the total kernel mass.
inline std::pair<double, double> nonlocal_range(const FluxModel& flux, double kernel_mass)
{
    const double a = flux.J(flux.q_box.first);
    const double b = flux.J(flux.q_box.second);
    const double s = std::max(1.0, kernel_mass);
    return {std::min({0.0, a, b}) * s, std::max({0.0, a, b}) * s};
}

/**
 * Time marcher for one experiment. Level n is the newest entry of the history; `step()`
 * produces level n + 1.
 */
class Simulation {
public:
    explicit Simulation(Experiment exp) : exp_(std::move(exp))
    {
        const auto& g = exp_.grid;
        if (exp_.mode != NonlocalMode::None) {
            if (!exp_.spatial) throw ConfigError("nonlocal runs need a spatial kernel", "kernel.spatial.kind");
            conv_.emplace(g, sample_spatial(*exp_.spatial, g.dx()),
                          exp_.fast_path == FastPath::Recursive ? FastPath::Auto : exp_.fast_path);
        }
        if (exp_.mode == NonlocalMode::Memory && exp_.temporal.kind() == TemporalKind::None)
            throw ConfigError("memory mode needs a temporal kernel", "kernel.temporal.kind");
        if (exp_.fast_path == FastPath::Recursive &&
            (exp_.mode != NonlocalMode::Memory || exp_.temporal.kind() != TemporalKind::Exponential))
            throw UnsupportedKernelError(
                "fast_path \"recursive\" needs memory mode with an exponential kernel",
                "nonlocal.fast_path");
        if (exp_.picard.tol <= 0.0) throw ConfigError("must be positive", "picard.tol");
        if (exp_.picard.max_iters < 1) throw ConfigError("must be >= 1", "picard.max_iters");

        // w range needs the temporal mass, which needs dt; the mass of K(m dt) dt is within
        // a few percent of 1, so size alpha with an upper bound first.
        double kernel_mass = 1.0;
        if (exp_.mode == NonlocalMode::Memory) kernel_mass = 1.1;
        const double alpha = estimate_alpha(exp_.flux, nonlocal_range(exp_.flux, kernel_mass),
                                            {0.0, exp_.t_final}, g);
        ts_ = select_dt(g, alpha, exp_.cfl, exp_.t_final);

        std::size_t retain = 0;
        if (exp_.mode == NonlocalMode::Memory) {
            memory_ = make_memory_weights(exp_.temporal, ts_.dt, exp_.truncation_eps);
            if (memory_->total() > kernel_mass)
                throw SolverError("temporal lag weights sum above the bound used for alpha");
            recursive_ = exp_.temporal.kind() == TemporalKind::Exponential &&
                         (exp_.fast_path == FastPath::Recursive || exp_.fast_path == FastPath::Auto);
            retain = recursive_ ? 2 : memory_->depth() + 1;
        } else if (exp_.mode == NonlocalMode::Delay) {
            const double ratio = exp_.delay / ts_.dt;
            delay_steps_ = static_cast<std::size_t>(std::llround(ratio));
            if (delay_steps_ < 1) delay_steps_ = 1;
            const double err = std::abs(static_cast<double>(delay_steps_) * ts_.dt - exp_.delay);
            if (err > 0.5 * ts_.dt)
                warnings_.push_back("delay " + std::to_string(exp_.delay) + " rounded to " +
                                    std::to_string(delay_steps_) + " steps (error " +
                                    std::to_string(err) + " > dt/2)");
            retain = delay_steps_ + 1;
        } else {
            retain = 1;
        }
        history_.emplace(g, ts_.dt, exp_.historical, retain);
        history_->push(exp_.init.sample(g));
        if (recursive_)
            accumulator_ = exp_recursive_init(*history_, *conv_, *memory_, exp_.flux.J);
    }

    const Experiment& experiment() const noexcept { return exp_; }
    const TimeStepping& time() const noexcept { return ts_; }
    const Grid& grid() const noexcept { return exp_.grid; }
    std::size_t level() const noexcept { return history_->size() - 1; }
    std::span<const double> current() const { return history_->level(static_cast<std::ptrdiff_t>(level())); }
    std::size_t delay_steps() const noexcept { return delay_steps_; }
    const std::optional<MemoryWeights>& memory() const noexcept { return memory_; }
    const std::optional<SpatialConvolver>& convolver() const noexcept { return conv_; }
    bool recursive() const noexcept { return recursive_; }
    const std::vector<std::string>& warnings() const noexcept { return warnings_; }
    bool finished() const noexcept { return level() >= ts_.num_steps; }

    /**
     * Replaces the history by consecutive levels first_level .. first_level + size - 1 so a
     * run can continue from a stored state. Not available for the memory mode, whose state
     * is not a finite window of levels.
     */
    void restart_from(std::span<const std::vector<double>> levels, std::size_t first_level)
    {
        if (exp_.mode == NonlocalMode::Memory)
            throw ModeError("memory runs cannot be restarted from stored levels");
        if (levels.empty()) throw SequencingError("restart needs at least one level");
        const std::size_t last = first_level + levels.size() - 1;
        if (exp_.mode == NonlocalMode::Delay) {
            const bool covered = last >= delay_steps_ ? first_level <= last - delay_steps_
                                                      : first_level == 0;
            if (!covered) throw SequencingError("restart needs the last delay_steps + 1 levels");
        }
        History h(exp_.grid, ts_.dt, exp_.historical, history_retain());
        for (std::size_t k = 0; k < first_level; ++k) h.push(std::vector<double>(exp_.grid.size(), 0.0));
        for (const auto& l : levels) h.push(l);
        history_.emplace(std::move(h));
    }

    struct StepInfo {
        std::size_t iterations = 0;
        std::vector<double> residuals;
        std::vector<double> W;
        double g_left = 0.0;
        double g_right = 0.0;
    };

    /// Advances one level and returns the Picard bookkeeping of that step.
    StepInfo step()
    {
        const std::size_t n = level();
        const double t = ts_.time(n);
        const std::vector<double> qn(current().begin(), current().end());
        StepInfo info;

        // nonlocal contribution that does not depend on the Picard iterate
        std::vector<double> fixed_w;
        std::vector<double> conv_qn;
        switch (exp_.mode) {
        case NonlocalMode::None: fixed_w.assign(qn.size(), 0.0); break;
        case NonlocalMode::Spatial: break;
        case NonlocalMode::Memory:
            if (recursive_) {
                fixed_w = *accumulator_;
            } else {
                fixed_w = memory_quadrature(*history_, *conv_, *memory_, n, exp_.flux.J).values;
            }
            break;
        case NonlocalMode::Delay:
            fixed_w = delayed_lookup(*history_, delay_steps_, n, *conv_, exp_.flux.J).values;
            break;
        }

        const bool semi_memory = exp_.mode == NonlocalMode::Memory &&
                                 exp_.causal == MemoryCausality::SemiImplicit &&
                                 exp_.picard.mode == PicardMode::FixedPoint;
        if (recursive_ || semi_memory) conv_qn = (*conv_)(detail::transform(qn, exp_.flux.J));

        const bool iterate_dependent =
            exp_.picard.mode == PicardMode::FixedPoint &&
            (exp_.mode == NonlocalMode::Spatial || semi_memory);

        auto nonlocal_of = [&](std::span<const double> iterate) -> std::vector<double> {
            if (exp_.mode == NonlocalMode::Spatial)
                return (*conv_)(detail::transform(iterate, exp_.flux.J));
            if (semi_memory) {
                // swap the newest past level (lag 1) for the iterate
                const double lag1 = memory_->lag.empty() ? 0.0 : memory_->lag[0];
                auto c = (*conv_)(detail::transform(iterate, exp_.flux.J));
                std::vector<double> w(fixed_w);
                for (std::size_t i = 0; i < w.size(); ++i) w[i] += lag1 * (c[i] - conv_qn[i]);
                return w;
            }
            return fixed_w;
        };

        auto apply_scheme = [&](const std::vector<double>& W) {
            auto G = interface_fluxes(exp_.scheme, qn, W, exp_.grid, ts_.dt, exp_.flux, t);
            auto out = conservative_update(qn, G, ts_.dt, exp_.grid.dx());
            detail::check_box(out, exp_.flux);
            info.g_left = G.front();
            info.g_right = G.back();
            return out;
        };

        std::vector<double> next;
        if (!iterate_dependent) {
            auto W = nonlocal_of(qn);
            next = apply_scheme(W);
            info.iterations = 1;
            info.W = std::move(W);
        } else {
            std::vector<double> iterate = qn;
            for (std::size_t k = 0;; ++k) {
                if (k == exp_.picard.max_iters)
                    throw ConvergenceError("Picard iteration did not reach tol " +
                                               std::to_string(exp_.picard.tol) + " in " +
                                               std::to_string(k) + " iterations at level " +
                                               std::to_string(n),
                                           info.residuals);
                auto W = nonlocal_of(iterate);
                auto candidate = apply_scheme(W);
                double r = 0.0;
                for (std::size_t i = 0; i < candidate.size(); ++i)
                    r = std::max(r, std::abs(candidate[i] - iterate[i]));
                info.residuals.push_back(r);
                iterate = std::move(candidate);
                if (r < exp_.picard.tol) {
                    info.iterations = k + 1;
                    info.W = std::move(W);
                    break;
                }
            }
            next = std::move(iterate);
        }

        if (recursive_) {
            const double tau0 = exp_.temporal.scale();
            const double a = std::exp(-ts_.dt / tau0);
            const double lag1 = a * ts_.dt / tau0;
            auto& S = *accumulator_;
            for (std::size_t i = 0; i < S.size(); ++i) S[i] = a * S[i] + lag1 * conv_qn[i];
        }
        history_->push(std::move(next));
        return info;
    }

    /// Marches to t_final. Solver errors end the run early with the partial result kept.
    RunResult run(RunOptions opts = {})
    {
        if (opts.stride < 1) throw ConfigError("must be >= 1", "output.stride");
        RunResult res;
        res.grid = exp_.grid;
        res.time = ts_;
        res.stride = opts.stride;
        res.delay_steps = delay_steps_;
        res.used_fft = conv_ && conv_->uses_fft();
        res.used_recursive = recursive_;
        res.warnings = warnings_;
        if (memory_) {
            res.dropped_mass = memory_->dropped_mass;
            res.memory_depth = memory_->depth();
        }
        res.max_courant = ts_.courant(exp_.grid);
        auto store = [&] {
            const std::size_t n = level();
            res.level_index.push_back(n);
            res.times.push_back(ts_.time(n));
            res.levels.emplace_back(current().begin(), current().end());
        };
        store();
        try {
            while (!finished()) {
                auto info = step();
                res.iterations.push_back(info.iterations);
                res.residuals.push_back(std::move(info.residuals));
                res.boundary_fluxes.emplace_back(info.g_left, info.g_right);
                if (opts.record_nonlocal) res.nonlocal.push_back(std::move(info.W));
                const std::size_t n = level();
                if (n % opts.stride == 0 || n == ts_.num_steps) store();
            }
        } catch (const ConvergenceError& e) {
            res.failure = e.what();
            res.failure_kind = "convergence";
            res.residuals.push_back(e.residuals());
        } catch (const StabilityError& e) {
            res.failure = e.what();
            res.failure_kind = "stability";
        } catch (const SolverError& e) {
            res.failure = e.what();
            res.failure_kind = "solver";
        }
        return res;
    }

private:
    std::size_t history_retain() const noexcept
    {
        switch (exp_.mode) {
        case NonlocalMode::Delay: return delay_steps_ + 1;
        case NonlocalMode::Memory: return recursive_ ? 2 : memory_->depth() + 1;
        default: return 1;
        }
    }

    Experiment exp_;
    TimeStepping ts_;
    std::optional<SpatialConvolver> conv_;
    std::optional<MemoryWeights> memory_;
    std::optional<History> history_;
    std::optional<std::vector<double>> accumulator_;
    std::size_t delay_steps_ = 0;
    bool recursive_ = false;
    std::vector<std::string> warnings_;
};

inline RunResult run(const Experiment& exp, RunOptions opts = {})
{
    return Simulation(exp).run(opts);
}

/// Delay driver: W at t^n is the spatial average of level n - round(delta/dt).
inline RunResult run_delay(Experiment exp, double delta, RunOptions opts = {})
{
    exp.mode = NonlocalMode::Delay;
    exp.delay = delta;
    return Simulation(std::move(exp)).run(opts);
}

/// One Picard-converged step from q_n with W evaluated on the iterate.
inline std::pair<std::vector<double>, std::size_t>
step_fixed_point(std::span<const double> q_n, const SpatialConvolver& conv, const Grid& grid,
                 double dt, double t_n, const FluxModel& flux, SchemeKind scheme,
                 const PicardConfig& picard = {})
{
    std::vector<double> iterate(q_n.begin(), q_n.end());
    std::vector<double> residuals;
    for (std::size_t k = 0; k < picard.max_iters; ++k) {
        const auto W = conv(detail::transform(iterate, flux.J));
        auto candidate = scheme_step(scheme, q_n, W, grid, dt, flux, t_n);
        double r = 0.0;
        for (std::size_t i = 0; i < candidate.size(); ++i)
            r = std::max(r, std::abs(candidate[i] - iterate[i]));
        residuals.push_back(r);
        iterate = std::move(candidate);
        if (r < picard.tol) return {std::move(iterate), k + 1};
    }
    throw ConvergenceError("Picard iteration did not converge", std::move(residuals));
}

/// One explicit step with W frozen at q_n.
inline std::vector<double> step_direct(std::span<const double> q_n, const SpatialConvolver& conv,
                                       const Grid& grid, double dt, double t_n,
                                       const FluxModel& flux, SchemeKind scheme)
{
    const auto W = conv(detail::transform(q_n, flux.J));
    return scheme_step(scheme, q_n, W, grid, dt, flux, t_n);
}

} // namespace claws
