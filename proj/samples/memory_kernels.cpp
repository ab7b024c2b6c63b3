// Same road, three memory kernels: how far back the drivers remember changes the outcome.

#include <cstdio>

#include "claws/claws.hpp"

int main()
{
    for (const char* kind : {"exponential", "erlang", "triangular"}) {
        auto cfg = claws::lwr_config(kind);
        cfg.time.t_final = 2.0;
        claws::RunOptions opts;
        opts.stride = 50;
        const auto res = claws::run(claws::build_experiment(cfg), opts);
        if (!res.ok()) {
            std::fprintf(stderr, "%s: %s\n", kind, res.failure->c_str());
            return 1;
        }
        const auto& q = res.levels.back();
        std::printf("%-12s depth %5zu lags  recursive %-3s  max q(T) %.4f  TV(T) %.4f\n", kind,
                    res.memory_depth, res.used_recursive ? "yes" : "no",
                    claws::linf_norm(q), claws::tv_seminorm(q, res.grid));
    }
    return 0;
}
