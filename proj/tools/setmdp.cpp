#include "setmdp/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    setmdp::cli::RunConfig config;
    CLI::App app{"Envelopes, robust policies and simulations for MDPs with parameter uncertainty"};
    app.require_subcommand(1);

    auto common = [&](CLI::App* sub, bool input) {
        if (input) sub->add_option("input", config.input, "MDP or ParamSet JSON file")->required();
        sub->add_option("--out,-o", config.output, "Output file (default: stdout)");
        sub->add_option("--eps", config.eps, "Certified tolerance")->capture_default_str();
        sub->add_option("--gamma", config.gamma, "Override the discount factor");
        sub->add_option("--format", config.format, "json or csv")->capture_default_str();
    };

    auto* solve = app.add_subcommand("solve", "Bellman value iteration on a single MDP");
    common(solve, true);

    auto* bounds = app.add_subcommand("bounds", "Certified envelope of the fixed-point set");
    common(bounds, true);
    bounds->add_option("--operator", config.op, "bellman, optimistic or robust")->capture_default_str();
    bounds->add_flag("--trace", config.trace, "Include the iteration trace in JSON output");
    bounds->add_option("--particles", config.particle_steps, "Set-based iterations on a particle cloud");
    bounds->add_option("--cap", config.cap, "Particle cap")->capture_default_str();
    bounds->add_option("--seed", config.seed, "Seed for sampled particle images")->capture_default_str();

    auto* robust = app.add_subcommand("robust", "Optimistic and robust values and policies");
    common(robust, true);

    auto* ordering = app.add_subcommand("ordering", "Check the optimistic/robust/Bellman envelope ordering");
    common(ordering, true);
    ordering->add_option("--coordinate", config.coordinate, "State reported in the table")->capture_default_str();

    auto* simulate = app.add_subcommand("simulate", "Non-stationary value iteration");
    common(simulate, true);
    simulate->add_option("--operator", config.op, "bellman, optimistic or robust")->capture_default_str();
    simulate->add_option("--schedule", config.schedule, "iid, cyclic, greedy-up or greedy-down")
        ->capture_default_str();
    simulate->add_option("--seed", config.seed, "Base seed")->capture_default_str();
    simulate->add_option("--seeds", config.seeds, "Number of seeds")->capture_default_str();
    simulate->add_option("--horizon", config.horizon, "Recorded steps K")->capture_default_str();
    simulate->add_option("--burn-in", config.burn_in, "Unrecorded steps before V^0 (negative: automatic)");
    simulate->add_flag("--deployments", config.deployments, "Compare optimistic, robust and Bellman deployments");
    simulate->add_option("--coordinate", config.coordinate, "Tracked state for deployments")->capture_default_str();
    simulate->add_option("--threads", config.threads, "Worker threads (default: SETMDP_THREADS or 1)");

    auto* windfield = app.add_subcommand("windfield", "Emit the wind-field benchmark as a ParamSet");
    common(windfield, false);
    windfield->add_option("--width", config.width, "Grid width")->capture_default_str();
    windfield->add_option("--height", config.height, "Grid height")->capture_default_str();
    windfield->add_option("--up", config.up, "Direction of the unreliable wind front: north or south")
        ->capture_default_str();
    windfield->add_flag("--sampled", config.sampled, "Run the sampled-wind demo and emit CSV values");
    windfield->add_option("--models", config.models, "Sampled models")->capture_default_str();
    windfield->add_option("--samples", config.samples, "Wind samples per cell")->capture_default_str();
    windfield->add_option("--seed", config.seed, "Seed for the sampled demo")->capture_default_str();

    auto* check = app.add_subcommand("check", "Validate a file and report rectangularity and containment probes");
    common(check, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : setmdp::cli::kInvalid;
    }
    config.subcommand = app.get_subcommands().front()->get_name();
    return setmdp::cli::run(config, std::cout, std::cerr);
}
