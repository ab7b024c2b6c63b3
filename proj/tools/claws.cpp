#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "claws/cli.hpp"

namespace {

void add_common(CLI::App* sub, claws::cli::Options& o)
{
    sub->add_option("--config", o.config, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "output directory (default: output.dir of the config)");
    sub->add_option("--stride", o.stride, "store every k-th level")->check(CLI::PositiveNumber);
    sub->add_option("--mode", o.mode, "picard.mode override")
        ->check(CLI::IsMember({"fixed_point", "direct"}));
    sub->add_option("--fast-path", o.fast_path, "nonlocal.fast_path override")
        ->check(CLI::IsMember({"auto", "direct", "fft", "recursive"}));
    sub->add_flag("--assert", o.assert_checks, "exit 4 when a runtime check fails");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"finite-volume solver for nonlocal conservation laws"};
    app.require_subcommand(1);
    claws::cli::Options o;

    auto* run = app.add_subcommand("run", "run one experiment");
    add_common(run, o);
    auto* compare = app.add_subcommand("compare", "fixed-point vs direct on one config");
    add_common(compare, o);
    auto* conv = app.add_subcommand("convergence", "self-convergence study over Nx");
    add_common(conv, o);
    conv->add_option("--resolutions", o.resolutions, "nested Nx ladder, at least 3 values")
        ->delimiter(',')
        ->required();
    auto* bench = app.add_subcommand("bench", "memory-term and convolution timings");
    add_common(bench, o);
    bench->add_option("--steps", o.bench_steps, "steps per memory timing run");
    bench->add_option("--ladder", o.bench_ladder, "Nx ladder for the convolution timings")
        ->delimiter(',');
    auto* plot = app.add_subcommand("plot-export", "write kernel/history/speed plot inputs");
    add_common(plot, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : claws::cli::ConfigFailure;
    }

    if (*run) return claws::cli::cmd_run(o);
    if (*compare) return claws::cli::cmd_compare(o);
    if (*conv) return claws::cli::cmd_convergence(o);
    if (*bench) return claws::cli::cmd_bench(o);
    return claws::cli::cmd_plot_export(o);
}
