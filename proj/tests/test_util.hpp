#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <span>
#include <vector>

#include "claws/claws.hpp"

namespace claws::testing {

inline std::vector<double> random_field(std::mt19937_64& rng, std::size_t n, double lo = 0.0,
                                        double hi = 1.0)
{
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    return v;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

/// W_i = sum_j gamma_j dx a_{i - o_j}, written as the plain double loop over cells and taps.
inline std::vector<double> naive_convolution(std::span<const double> a, const DiscreteWeights& w,
                                             const Grid& g)
{
    const auto n = static_cast<std::ptrdiff_t>(a.size());
    std::vector<double> out(a.size(), 0.0);
    for (std::ptrdiff_t i = 0; i < n; ++i)
        for (std::ptrdiff_t o = w.min_offset(); o <= w.max_offset(); ++o) {
            std::ptrdiff_t src = i - o;
            if (g.periodic())
                src = ((src % n) + n) % n;
            else
                src = std::clamp<std::ptrdiff_t>(src, 0, n - 1);
            out[static_cast<std::size_t>(i)] += w.at_offset(o) * w.dx() * a[static_cast<std::size_t>(src)];
        }
    return out;
}

/// Extremum of F(q) on [lo, hi] by scanning a uniform lattice of spacing h plus the endpoints.
template <typename Fn>
double scan_extremum(Fn&& f, double lo, double hi, bool maximize, double h = 1e-4)
{
    double best = maximize ? std::max(f(lo), f(hi)) : std::min(f(lo), f(hi));
    const auto steps = static_cast<std::size_t>(std::ceil((hi - lo) / h));
    for (std::size_t k = 1; k < steps; ++k) {
        const double v = f(lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(steps));
        best = maximize ? std::max(best, v) : std::min(best, v);
    }
    return best;
}

/// Godunov flux from the definition: min over [qL, qR] or max over [qR, qL].
template <typename Fn>
double godunov_by_scan(Fn&& f, double qL, double qR, double h = 1e-4)
{
    if (qL <= qR) return scan_extremum(f, qL, qR, false, h);
    return scan_extremum(f, qR, qL, true, h);
}

} // namespace claws::testing
