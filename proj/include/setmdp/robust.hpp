#pragma once

#include "setmdp/game.hpp"
#include "setmdp/set_ops.hpp"

#include <string>
#include <vector>

namespace setmdp {

struct PolicySolution {
    VectorXd value;
    Policy policy;
    int iterations = 0;
    double residual = 0;
};

struct OptimisticSolution : PolicySolution {
    /// Parameter index (into `candidates(s)`) paired with the chosen action at each state.
    Selection parameters;
};

struct RobustPolicySolution : PolicySolution {
    /// Per-state game values at the returned value vector.
    VectorXd game_values;
};

struct RobustSolution {
    OptimisticSolution optimistic;
    RobustPolicySolution robust;
};

/**
 * W^o, the fixed point of the lower Bellman bound operator, and a deterministic
 * policy greedy over joint (parameter, action) pairs. Ties go to the lowest
 * parameter index, then the lowest action index.
 */
OptimisticSolution solve_optimistic(const ParamSet& ps, double eps = kDefaultEps);

/**
 * W^r, the fixed point of V -> per-state value of min_pi max_j (c^j + gamma P^j V)^T pi,
 * with the per-state optimal mixed strategies as the robust policy. Finite sets
 * are accepted only when s-rectangular; the iteration runs on their projection.
 */
RobustPolicySolution solve_robust(const ParamSet& ps, double eps = kDefaultEps);

RobustSolution solve_optimistic_and_robust(const ParamSet& ps, double eps = kDefaultEps);

struct OrderingRelation {
    std::string name;
    bool holds = false;
    /// max |a - b| for equalities, max (a - b)^+ for a <= b.
    double gap = 0;
};

struct OrderingReport {
    VectorXd lower_bellman;
    VectorXd lower_optimistic;
    VectorXd lower_robust;
    VectorXd upper_bellman;
    VectorXd upper_optimistic;
    VectorXd upper_robust;
    /// Upper Bellman envelope of the set as given, before taking the convex hull.
    VectorXd upper_bellman_given;
    std::vector<OrderingRelation> relations;
    double eps = 0;
    double tolerance = 0;
    double max_violation = 0;
    RobustSolution solution;

    bool all_hold() const;
};

/**
 * Runs the envelope iteration for f, g^{pi^o} and g^{pi^r} over the convex hull of the
 * (s-rectangular) set and evaluates
 *   lower_B = lower_o <= lower_r,  upper_B = upper_r <= upper_o
 * coordinate-wise with tolerance 2 eps.
 */
OrderingReport ordering_check(const ParamSet& ps, double eps = kDefaultEps);

} // namespace setmdp
