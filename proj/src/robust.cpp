#include "setmdp/robust.hpp"

#include <algorithm>

namespace setmdp {

namespace {

// Residual-certified iteration of a gamma-contraction given per-step.
template <typename Step>
PolicySolution iterate(Index S, double gamma, double eps, Step step) {
    if (!(eps > 0)) throw ValidationError("eps", "tolerance must be positive");
    const double ratio = gamma / (1 - gamma);
    PolicySolution out;
    out.value = VectorXd::Zero(S);
    double residual = eps / ratio;
    for (bool first = true; first || ratio * residual >= eps; first = false) {
        if (out.iterations >= kMaxIterations) throw std::runtime_error("iteration limit reached");
        VectorXd next = step(out.value);
        residual = sup_distance(next, out.value);
        out.value = std::move(next);
        ++out.iterations;
    }
    out.residual = residual;
    return out;
}

ParamSet rectangular_or_throw(const ParamSet& ps, const char* what) {
    if (!is_s_rectangular(ps))
        throw UnsupportedError(std::string(what) +
                               ": parameter set is not s-rectangular; robust synthesis needs per-state uncertainty");
    return ps.coupled() ? ps.rectangular_projection() : ps;
}

MatrixXd game_matrix(const ParamSet& ps, Index s, const VectorXd& V) {
    const auto& list = ps.candidates(s);
    MatrixXd G(ps.num_actions(), Index(list.size()));
    for (std::size_t j = 0; j < list.size(); ++j)
        G.col(Index(j)) = list[j].cost + ps.discount() * (list[j].trans * V);
    return G;
}

} // namespace

OptimisticSolution solve_optimistic(const ParamSet& ps, double eps) {
    const ValueOperator f = ValueOperator::bellman();
    OptimisticSolution out;
    static_cast<PolicySolution&>(out) = iterate(ps.num_states(), ps.discount(), eps, [&](const VectorXd& V) {
        return bound_operator_apply(V, ps, f, Direction::Lower);
    });
    const Index S = ps.num_states();
    const Index A = ps.num_actions();
    out.policy = Policy::Zero(S, A);
    out.parameters.assign(std::size_t(S), 0);
    for (Index s = 0; s < S; ++s) {
        const auto& list = ps.candidates(s);
        double best = 0;
        Index best_a = -1;
        for (std::size_t j = 0; j < list.size(); ++j) {
            const VectorXd q = list[j].cost + ps.discount() * (list[j].trans * out.value);
            for (Index a = 0; a < A; ++a) {
                if (best_a < 0 || q(a) < best) {
                    best = q(a);
                    best_a = a;
                    out.parameters[std::size_t(s)] = Index(j);
                }
            }
        }
        out.policy(s, best_a) = 1;
    }
    return out;
}

RobustPolicySolution solve_robust(const ParamSet& ps, double eps) {
    const ParamSet rect = rectangular_or_throw(ps, "solve_robust");
    const ParamSet hull = rect.convex_hull();
    const ValueOperator f = ValueOperator::bellman();
    RobustPolicySolution out;
    static_cast<PolicySolution&>(out) = iterate(ps.num_states(), ps.discount(), eps, [&](const VectorXd& V) {
        return bound_operator_apply(V, hull, f, Direction::Upper);
    });
    const Index S = ps.num_states();
    out.policy = Policy::Zero(S, ps.num_actions());
    out.game_values = VectorXd::Zero(S);
    for (Index s = 0; s < S; ++s) {
        const GameSolution game = matrix_game_value(game_matrix(hull, s, out.value));
        out.policy.row(s) = game.strategy.transpose();
        out.game_values(s) = game.value;
    }
    return out;
}

RobustSolution solve_optimistic_and_robust(const ParamSet& ps, double eps) {
    RobustSolution out;
    out.robust = solve_robust(ps, eps);
    out.optimistic = solve_optimistic(ps, eps);
    return out;
}

bool OrderingReport::all_hold() const {
    return std::all_of(relations.begin(), relations.end(), [](const OrderingRelation& r) { return r.holds; });
}

OrderingReport ordering_check(const ParamSet& ps, double eps) {
    if (!(eps > 0)) throw ValidationError("eps", "tolerance must be positive");
    const ParamSet rect = rectangular_or_throw(ps, "ordering_check");
    const ParamSet hull = rect.convex_hull();

    OrderingReport report;
    report.eps = eps;
    report.tolerance = 2 * eps;
    report.solution = solve_optimistic_and_robust(rect, eps * (1 - ps.discount()) / 4);

    EnvelopeOptions options;
    options.probe = false;
    options.keep_trace = false;
    const VectorXd V0 = VectorXd::Zero(ps.num_states());
    const auto bellman = algorithm1_envelope(hull, ValueOperator::bellman(), V0, eps, options);
    const auto optimistic = algorithm1_envelope(
        hull, ValueOperator::policy_evaluation(report.solution.optimistic.policy), V0, eps, options);
    const auto robust =
        algorithm1_envelope(hull, ValueOperator::policy_evaluation(report.solution.robust.policy), V0, eps, options);
    report.lower_bellman = bellman.lower;
    report.upper_bellman = bellman.upper;
    report.lower_optimistic = optimistic.lower;
    report.upper_optimistic = optimistic.upper;
    report.lower_robust = robust.lower;
    report.upper_robust = robust.upper;
    report.upper_bellman_given =
        ps.kind() == ParamSetKind::SRectMixture
            ? bellman.upper
            : algorithm1_envelope(rect, ValueOperator::bellman(), V0, eps, options).upper;

    auto equal = [&](const std::string& name, const VectorXd& a, const VectorXd& b) {
        const double gap = (a - b).cwiseAbs().maxCoeff();
        report.relations.push_back({name, gap <= report.tolerance, gap});
    };
    auto below = [&](const std::string& name, const VectorXd& a, const VectorXd& b) {
        const double gap = std::max(0.0, (a - b).maxCoeff());
        report.relations.push_back({name, gap <= report.tolerance, gap});
    };
    equal("lower_B = lower_o", report.lower_bellman, report.lower_optimistic);
    below("lower_o <= lower_r", report.lower_optimistic, report.lower_robust);
    below("lower_B <= lower_r", report.lower_bellman, report.lower_robust);
    equal("upper_B = upper_r", report.upper_bellman, report.upper_robust);
    below("upper_r <= upper_o", report.upper_robust, report.upper_optimistic);
    below("upper_B <= upper_o", report.upper_bellman, report.upper_optimistic);
    for (const auto& r : report.relations)
        report.max_violation = std::max(report.max_violation, std::max(0.0, r.gap - report.tolerance));
    return report;
}

} // namespace setmdp
