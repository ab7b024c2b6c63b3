// Nonlocal LWR with a look-ahead kernel: run, then print a few diagnostics.

#include <cstdio>

#include "claws/claws.hpp"

int main()
{
    auto cfg = claws::lwr_config();
    cfg.time.t_final = 1.5;
    const auto exp = claws::build_experiment(cfg);

    claws::RunOptions opts;
    opts.record_nonlocal = true; // needed for the entropy residual
    const auto res = claws::run(exp, opts);
    if (!res.ok()) {
        std::fprintf(stderr, "run failed: %s\n", res.failure->c_str());
        return 1;
    }

    const auto rep = claws::build_report(res, exp);
    std::printf("%zu steps, dt = %.5f\n", res.steps_completed(), res.time.dt);
    std::printf("mass %.12f -> %.12f\n", rep.mass.front(), rep.mass.back());
    std::printf("TV   %.6f -> %.6f\n", rep.tv.front(), rep.tv.back());
    std::printf("picard iterations: median %.1f, max %zu\n", rep.picard.median, rep.picard.max);

    // density snapshot every 0.4 length units
    const auto& q = res.levels.back();
    for (std::size_t i = 0; i < q.size(); i += 40)
        std::printf("  x = %.3f  q = %.4f\n", res.grid.center(i), q[i]);
    return 0;
}
