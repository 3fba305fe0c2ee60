#include <cstdio>
#include <exception>
#include <functional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "driftsolve/commands.hpp"
#include "driftsolve/config.hpp"
#include "driftsolve/scheme.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::vector<std::string> sets;
    std::string out_dir;
    long stride = -1;
    long long seed = -1;
};

void add_common(CLI::App* cmd, CommonOpts& opts)
{
    cmd->add_option("--config", opts.config_path, "key=value configuration file");
    cmd->add_option("--set", opts.sets, "override a configuration key (repeatable)");
    cmd->add_option("--out", opts.out_dir, "output directory");
    cmd->add_option("--stride", opts.stride, "observation stride in time steps");
    cmd->add_option("--seed", opts.seed, "random seed");
}

drift::RunConfig build_config(const CommonOpts& opts)
{
    drift::RunConfig cfg;
    if (!opts.config_path.empty())
        cfg = drift::load_config(opts.config_path);
    for (const auto& kv : opts.sets)
        drift::apply_override(cfg, kv);
    if (!opts.out_dir.empty())
        cfg.out_dir = opts.out_dir;
    if (opts.stride >= 0)
        cfg.stride = opts.stride;
    if (opts.seed >= 0)
        cfg.seed = static_cast<std::uint64_t>(opts.seed);
    return cfg;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Implicit CDF solver for random genetic drift models"};
    app.require_subcommand(1);

    struct Sub {
        const char* name;
        const char* help;
        void (*fn)(const drift::RunConfig&);
    };
    const Sub subs[] = {
        {"run", "time-step one configuration, emit profiles and a time series", drift::cmd_run},
        {"convergence", "grid-refinement error study against a fine reference", drift::cmd_convergence},
        {"fixation", "boundary-jump sweep against the limiting fixation probabilities", drift::cmd_fixation},
        {"powerlaw", "boundary power-law exponents on nested grids", drift::cmd_powerlaw},
        {"compare-sfdm", "run both scheme variants side by side", drift::cmd_compare_sfdm},
        {"oracle", "Wright-Fisher Monte Carlo cross-check", drift::cmd_oracle},
    };

    std::vector<CommonOpts> opts(std::size(subs));
    std::function<void()> action;
    for (std::size_t i = 0; i < std::size(subs); ++i) {
        CLI::App* cmd = app.add_subcommand(subs[i].name, subs[i].help);
        add_common(cmd, opts[i]);
        cmd->callback([&, i] { action = [&, i] { subs[i].fn(build_config(opts[i])); }; });
    }

    try {
        app.parse(argc, argv);
        action();
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    } catch (const drift::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const drift::IoError& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return 3;
    } catch (const drift::numerical_error& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 2;
    }
    return 0;
}
