#pragma once

#include "setmdp/set_ops.hpp"
#include "setmdp/windfield.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace setmdp::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kInvalid = 2, kUnsupported = 3 };

struct RunConfig {
    std::string subcommand;  // solve, bounds, robust, ordering, simulate, windfield, check
    std::string input;
    std::string output;  // empty: standard output
    double eps = kDefaultEps;
    std::optional<double> gamma;
    std::uint64_t seed = 0;
    int horizon = 50;
    std::size_t cap = kDefaultParticleCap;
    std::string format = "json";

    std::string op = "bellman";  // bellman, optimistic, robust
    std::string schedule = "iid";  // iid, cyclic, greedy-up, greedy-down
    int seeds = 50;
    int burn_in = -1;  // negative: 0 for plain simulation, automatic for deployments
    bool deployments = false;
    bool trace = false;
    int particle_steps = 0;  // bounds: set-based iterations on a particle cloud of size <= cap
    Index coordinate = 0;
    int threads = 0;

    Index width = 9;
    Index height = 9;
    std::string up = "north";
    bool sampled = false;
    int models = 20;
    int samples = 50;
};

/// Throws ValidationError for inconsistent settings.
void validate(const RunConfig& config);

/// Executes one subcommand. Errors are reported on `err` and mapped to ExitCode.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

} // namespace setmdp::cli
