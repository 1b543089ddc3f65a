#pragma once

#include "setmdp/robust.hpp"
#include "setmdp/set_ops.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace setmdp {

enum class ScheduleKind { IidUniform, Cyclic, GreedyAdversarial };

std::string to_string(ScheduleKind kind);

/**
 * How m^k is picked at each step of V^{k+1} = h(V^k, m^k).
 *
 * IidUniform: finite sets draw an element uniformly; s-rectangular sets draw each
 * state's candidate uniformly and independently. Cyclic: walks `order` (member
 * indices, see ParamSet::member), or all members when `order` is empty.
 * GreedyAdversarial: the member whose step ||h(V, m) - V|| is largest (Upper) or
 * smallest (Lower), lowest member index on ties.
 */
struct ParamSchedule {
    ScheduleKind kind = ScheduleKind::IidUniform;
    std::uint64_t seed = 0;
    std::vector<std::uint64_t> order;
    Direction direction = Direction::Upper;
    int horizon = 50;
    /// Steps taken before V^0 is recorded.
    int burn_in = 0;

    static ParamSchedule iid(std::uint64_t seed, int horizon, int burn_in = 0);
    static ParamSchedule cyclic(std::vector<std::uint64_t> order, int horizon, int burn_in = 0);
    static ParamSchedule greedy(Direction direction, int horizon, int burn_in = 0);
};

struct TrajectoryStats {
    std::vector<VectorXd> trace;       // V^0 .. V^K
    std::vector<double> box_distance;  // distance of each V^k to the box
    VectorXd running_min;
    VectorXd running_max;
    VectorXd box_lower;
    VectorXd box_upper;
};

TrajectoryStats simulate(const ParamSet& ps, const ValueOperator& op, const ParamSchedule& schedule,
                         const VectorXd& V0, const VectorXd& box_lower, const VectorXd& box_upper);

/// Uses the eps-inflated envelope box of `envelope`.
TrajectoryStats simulate(const ParamSet& ps, const ValueOperator& op, const ParamSchedule& schedule,
                         const VectorXd& V0, const EnvelopeReport& envelope);

struct MultiSeedStats {
    std::vector<std::uint64_t> seeds;
    std::vector<TrajectoryStats> runs;
    std::vector<VectorXd> mean;   // per step
    std::vector<VectorXd> stdev;  // per step, population
};

/**
 * Runs `simulate` for seeds base.seed, base.seed + 1, ... Seeds are spread over
 * `threads` workers (0: SETMDP_THREADS, default 1); results are ordered by seed.
 */
MultiSeedStats simulate_seeds(const ParamSet& ps, const ValueOperator& op, const ParamSchedule& base, int seeds,
                              const VectorXd& V0, const VectorXd& box_lower, const VectorXd& box_upper,
                              int threads = 0);

/// Worker count from SETMDP_THREADS (>= 1); throws ValidationError on malformed values.
int thread_count_from_env();

/// Smallest B with gamma^B (distance + 2 eps) <= delta.
int auto_burn_in(double gamma, double distance, double eps, double delta);

struct DeploymentOptions {
    int seeds = 50;
    int horizon = 50;
    std::uint64_t seed = 0;
    double eps = kDefaultEps;
    /// Negative: choose automatically from the start point's box distance and `delta`.
    int burn_in = -1;
    double delta = 1e-4;
    Index coordinate = 0;
    int threads = 0;
};

struct Deployment {
    std::string name;
    VectorXd box_lower;
    VectorXd box_upper;
    MultiSeedStats stats;
    /// At `coordinate`, per step.
    std::vector<double> mean, stdev, min, max;
    /// max - min of the coordinate over all seeds and steps.
    double spread = 0;
    /// Largest box distance over seeds at the final step.
    double final_box_distance = 0;
};

struct DeploymentComparison {
    std::vector<Deployment> deployments;  // optimistic, robust, bellman
    RobustSolution solution;
    int burn_in = 0;
    DeploymentOptions options;
};

/**
 * Runs g^{pi^o}, g^{pi^r} and f under a shared iid schedule per seed, from V^0 = 0
 * after the burn-in, against each operator's own envelope box.
 */
DeploymentComparison deployment_compare(const ParamSet& ps, const DeploymentOptions& options = {});

} // namespace setmdp
