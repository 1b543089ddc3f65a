#include "setmdp/nonstationary.hpp"

#include "setmdp/random.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <thread>

namespace setmdp {

std::string to_string(ScheduleKind kind) {
    switch (kind) {
    case ScheduleKind::IidUniform:
        return "iid";
    case ScheduleKind::Cyclic:
        return "cyclic";
    case ScheduleKind::GreedyAdversarial:
        return "greedy";
    }
    return "unknown";
}

ParamSchedule ParamSchedule::iid(std::uint64_t seed, int horizon, int burn_in) {
    ParamSchedule s;
    s.kind = ScheduleKind::IidUniform;
    s.seed = seed;
    s.horizon = horizon;
    s.burn_in = burn_in;
    return s;
}

ParamSchedule ParamSchedule::cyclic(std::vector<std::uint64_t> order, int horizon, int burn_in) {
    ParamSchedule s;
    s.kind = ScheduleKind::Cyclic;
    s.order = std::move(order);
    s.horizon = horizon;
    s.burn_in = burn_in;
    return s;
}

ParamSchedule ParamSchedule::greedy(Direction direction, int horizon, int burn_in) {
    ParamSchedule s;
    s.kind = ScheduleKind::GreedyAdversarial;
    s.direction = direction;
    s.horizon = horizon;
    s.burn_in = burn_in;
    return s;
}

namespace {

class Scheduler {
public:
    Scheduler(const ParamSet& ps, const ParamSchedule& schedule)
        : ps_(ps), schedule_(schedule), rng_(schedule.seed), members_(ps.member_count()) {
        for (std::uint64_t m : schedule.order) {
            if (m >= members_) throw ValidationError("order", "member index " + std::to_string(m) + " out of range");
        }
    }

    Selection next(const ValueOperator& op, const VectorXd& V) {
        const std::uint64_t k = step_++;
        switch (schedule_.kind) {
        case ScheduleKind::IidUniform:
            return draw();
        case ScheduleKind::Cyclic:
            return schedule_.order.empty() ? ps_.member(k % members_)
                                           : ps_.member(schedule_.order[k % schedule_.order.size()]);
        case ScheduleKind::GreedyAdversarial:
            return greedy(op, V);
        }
        return ps_.member(0);
    }

private:
    Selection draw() {
        if (ps_.coupled()) return ps_.member(rng_.below(members_));
        Selection sel(std::size_t(ps_.num_states()), 0);
        for (Index s = 0; s < ps_.num_states(); ++s) {
            const auto n = std::uint64_t(ps_.candidate_count(s));
            if (n > 1) sel[std::size_t(s)] = Index(rng_.below(n));
        }
        return sel;
    }

    Selection greedy(const ValueOperator& op, const VectorXd& V) {
        const bool up = schedule_.direction == Direction::Upper;
        auto better = [up](double a, double b) { return up ? a > b : a < b; };
        if (ps_.coupled()) {
            std::uint64_t best = 0;
            double best_step = sup_distance(ps_.apply(op, V, ps_.member(0)), V);
            for (std::uint64_t m = 1; m < members_; ++m) {
                const double step = sup_distance(ps_.apply(op, V, ps_.member(m)), V);
                if (better(step, best_step)) {
                    best = m;
                    best_step = step;
                }
            }
            return ps_.member(best);
        }
        const Index S = ps_.num_states();
        std::vector<std::vector<double>> gap(static_cast<std::size_t>(S));
        for (Index s = 0; s < S; ++s) {
            for (const auto& block : ps_.candidates(s))
                gap[std::size_t(s)].push_back(std::abs(op.apply_state(s, V, block, ps_.discount()) - V(s)));
        }
        Selection sel(std::size_t(S), 0);
        if (!up) {
            for (std::size_t s = 0; s < gap.size(); ++s)
                sel[s] = Index(std::min_element(gap[s].begin(), gap[s].end()) - gap[s].begin());
            return sel;
        }
        // Some maximizer differs from the all-zero member in at most one state; pick the lowest such index.
        double top = 0;
        for (const auto& g : gap) top = std::max(top, *std::max_element(g.begin(), g.end()));
        for (const auto& g : gap) {
            if (g.front() == top) return sel;
        }
        long double best_index = std::numeric_limits<long double>::infinity();
        std::size_t best_s = 0;
        std::size_t best_j = 0;
        long double stride = 1;
        for (std::size_t s = gap.size(); s-- > 0;) {
            for (std::size_t j = 1; j < gap[s].size(); ++j) {
                if (gap[s][j] == top && stride * j < best_index) {
                    best_index = stride * j;
                    best_s = s;
                    best_j = j;
                }
            }
            stride *= gap[s].size();
        }
        sel[best_s] = Index(best_j);
        return sel;
    }

    const ParamSet& ps_;
    const ParamSchedule& schedule_;
    Rng rng_;
    std::uint64_t members_;
    std::uint64_t step_ = 0;
};

} // namespace

TrajectoryStats simulate(const ParamSet& ps, const ValueOperator& op, const ParamSchedule& schedule,
                         const VectorXd& V0, const VectorXd& box_lower, const VectorXd& box_upper) {
    op.check_dimensions(ps.num_states(), ps.num_actions());
    check_value_length(V0, ps.num_states(), "V0");
    check_value_length(box_lower, ps.num_states(), "box_lower");
    check_value_length(box_upper, ps.num_states(), "box_upper");
    if (schedule.horizon < 0) throw ValidationError("horizon", "must be non-negative");
    if (schedule.burn_in < 0) throw ValidationError("burn_in", "must be non-negative");

    Scheduler scheduler(ps, schedule);
    VectorXd V = V0;
    for (int b = 0; b < schedule.burn_in; ++b) V = ps.apply(op, V, scheduler.next(op, V));

    TrajectoryStats out;
    out.box_lower = box_lower;
    out.box_upper = box_upper;
    out.trace.reserve(std::size_t(schedule.horizon) + 1);
    out.trace.push_back(V);
    for (int k = 0; k < schedule.horizon; ++k) {
        V = ps.apply(op, V, scheduler.next(op, V));
        out.trace.push_back(V);
    }
    out.running_min = out.trace.front();
    out.running_max = out.trace.front();
    for (const auto& v : out.trace) {
        out.box_distance.push_back(box_distance(v, box_lower, box_upper));
        out.running_min = out.running_min.cwiseMin(v);
        out.running_max = out.running_max.cwiseMax(v);
    }
    return out;
}

TrajectoryStats simulate(const ParamSet& ps, const ValueOperator& op, const ParamSchedule& schedule,
                         const VectorXd& V0, const EnvelopeReport& envelope) {
    return simulate(ps, op, schedule, V0, envelope.box_lower(), envelope.box_upper());
}

int thread_count_from_env() {
    const char* raw = std::getenv("SETMDP_THREADS");
    if (raw == nullptr || *raw == '\0') return 1;
    char* end = nullptr;
    const long n = std::strtol(raw, &end, 10);
    if (*end != '\0' || n < 1 || n > 4096) throw ValidationError("SETMDP_THREADS", "expected an integer >= 1");
    return int(n);
}

MultiSeedStats simulate_seeds(const ParamSet& ps, const ValueOperator& op, const ParamSchedule& base, int seeds,
                              const VectorXd& V0, const VectorXd& box_lower, const VectorXd& box_upper,
                              int threads) {
    if (seeds < 1) throw ValidationError("seeds", "need at least one seed");
    if (threads <= 0) threads = thread_count_from_env();
    threads = std::min(threads, seeds);

    MultiSeedStats out;
    out.runs.resize(std::size_t(seeds));
    for (int i = 0; i < seeds; ++i) out.seeds.push_back(base.seed + std::uint64_t(i));

    auto run = [&](int i) {
        ParamSchedule schedule = base;
        schedule.seed = out.seeds[std::size_t(i)];
        out.runs[std::size_t(i)] = simulate(ps, op, schedule, V0, box_lower, box_upper);
    };
    if (threads == 1) {
        for (int i = 0; i < seeds; ++i) run(i);
    } else {
        std::vector<std::thread> workers;
        std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
        for (int w = 0; w < threads; ++w) {
            workers.emplace_back([&, w] {
                try {
                    for (int i = w; i < seeds; i += threads) run(i);
                } catch (...) {
                    errors[std::size_t(w)] = std::current_exception();
                }
            });
        }
        for (auto& t : workers) t.join();
        for (auto& e : errors) {
            if (e) std::rethrow_exception(e);
        }
    }

    const std::size_t steps = out.runs.front().trace.size();
    for (std::size_t k = 0; k < steps; ++k) {
        VectorXd mean = VectorXd::Zero(ps.num_states());
        for (const auto& r : out.runs) mean += r.trace[k];
        mean /= double(seeds);
        VectorXd var = VectorXd::Zero(ps.num_states());
        for (const auto& r : out.runs) var += (r.trace[k] - mean).cwiseAbs2();
        out.mean.push_back(mean);
        out.stdev.push_back((var / double(seeds)).cwiseSqrt());
    }
    return out;
}

int auto_burn_in(double gamma, double distance, double eps, double delta) {
    if (!(delta > 0)) throw ValidationError("delta", "must be positive");
    const double start = distance + 2 * eps;
    if (start <= delta) return 0;
    return int(std::ceil(std::log(delta / start) / std::log(gamma)));
}

DeploymentComparison deployment_compare(const ParamSet& ps, const DeploymentOptions& options) {
    if (options.horizon < 0) throw ValidationError("horizon", "must be non-negative");
    if (options.coordinate < 0 || options.coordinate >= ps.num_states())
        throw ValidationError("coordinate", "state index out of range");

    DeploymentComparison out;
    out.options = options;
    out.solution = solve_optimistic_and_robust(ps, options.eps);

    const std::vector<std::pair<std::string, ValueOperator>> ops = {
        {"optimistic", ValueOperator::policy_evaluation(out.solution.optimistic.policy)},
        {"robust", ValueOperator::policy_evaluation(out.solution.robust.policy)},
        {"bellman", ValueOperator::bellman()},
    };
    const VectorXd V0 = VectorXd::Zero(ps.num_states());
    EnvelopeOptions env_options;
    env_options.probe = false;
    env_options.keep_trace = false;

    double start_distance = 0;
    for (const auto& [name, op] : ops) {
        const auto env = algorithm1_envelope(ps, op, V0, options.eps, env_options);
        Deployment d;
        d.name = name;
        d.box_lower = env.box_lower();
        d.box_upper = env.box_upper();
        start_distance = std::max(start_distance, box_distance(V0, d.box_lower, d.box_upper));
        out.deployments.push_back(std::move(d));
    }
    out.burn_in = options.burn_in >= 0 ? options.burn_in
                                       : auto_burn_in(ps.discount(), start_distance, options.eps, options.delta);

    const ParamSchedule schedule = ParamSchedule::iid(options.seed, options.horizon, out.burn_in);
    const Index c = options.coordinate;
    for (std::size_t i = 0; i < ops.size(); ++i) {
        Deployment& d = out.deployments[i];
        d.stats = simulate_seeds(ps, ops[i].second, schedule, options.seeds, V0, d.box_lower, d.box_upper,
                                 options.threads);
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (std::size_t k = 0; k < d.stats.mean.size(); ++k) {
            double kmin = std::numeric_limits<double>::infinity();
            double kmax = -kmin;
            for (const auto& r : d.stats.runs) {
                kmin = std::min(kmin, r.trace[k](c));
                kmax = std::max(kmax, r.trace[k](c));
            }
            d.mean.push_back(d.stats.mean[k](c));
            d.stdev.push_back(d.stats.stdev[k](c));
            d.min.push_back(kmin);
            d.max.push_back(kmax);
            lo = std::min(lo, kmin);
            hi = std::max(hi, kmax);
        }
        d.spread = hi - lo;
        for (const auto& r : d.stats.runs) d.final_box_distance = std::max(d.final_box_distance, r.box_distance.back());
    }
    return out;
}

} // namespace setmdp
