#include "setmdp/cli.hpp"

#include "setmdp/io.hpp"
#include "setmdp/nonstationary.hpp"
#include "setmdp/robust.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace setmdp::cli {

namespace {

using io::Json;

const char* const kSubcommands[] = {"solve", "bounds", "robust", "ordering", "simulate", "windfield", "check"};

bool needs_input(const std::string& sub) { return sub != "windfield"; }

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open input file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ParamSet load(const RunConfig& c) {
    ParamSet ps = io::param_set_from_json(io::parse(read_file(c.input)));
    return c.gamma ? ps.with_discount(*c.gamma) : ps;
}

std::string render(const Json& j) { return j.dump(2) + "\n"; }

ValueOperator operator_for(const RunConfig& c, const ParamSet& ps) {
    if (c.op == "bellman") return ValueOperator::bellman();
    if (c.op == "optimistic") return ValueOperator::policy_evaluation(solve_optimistic(ps, c.eps).policy);
    return ValueOperator::policy_evaluation(solve_robust(ps, c.eps).policy);
}

ParamSchedule schedule_for(const RunConfig& c, int burn_in) {
    if (c.schedule == "cyclic") return ParamSchedule::cyclic({}, c.horizon, burn_in);
    if (c.schedule == "greedy-up") return ParamSchedule::greedy(Direction::Upper, c.horizon, burn_in);
    if (c.schedule == "greedy-down") return ParamSchedule::greedy(Direction::Lower, c.horizon, burn_in);
    ParamSchedule s = ParamSchedule::iid(c.seed, c.horizon, burn_in);
    return s;
}

WindConfig wind_config(const RunConfig& c) {
    WindConfig w;
    w.width = c.width;
    w.height = c.height;
    if (c.gamma) w.gamma = *c.gamma;
    w.up = c.up == "south" ? WindUp::South : WindUp::North;
    return w;
}

std::string cmd_solve(const RunConfig& c) {
    const ParamSet ps = load(c);
    if (ps.member_count() != 1)
        throw UnsupportedError("solve expects a single MDP; use bounds or robust for parameter sets");
    const Mdp m = ps.assemble(ps.member(0));
    const auto result = value_iteration(m, ValueOperator::bellman(), c.eps);
    const Policy pi = greedy_policy(result.value, m);
    if (c.format == "csv") {
        std::ostringstream out;
        out << "state,value,action\n";
        for (Index s = 0; s < m.num_states(); ++s) {
            Index a = 0;
            pi.row(s).maxCoeff(&a);
            out << s << ',' << io::format_double(result.value(s)) << ',' << a << '\n';
        }
        return out.str();
    }
    Json j = Json::object();
    j["value"] = io::to_json(result.value);
    j["policy"] = io::to_json(pi);
    j["iterations"] = result.iterations;
    j["residual"] = result.residual;
    j["eps"] = c.eps;
    return render(j);
}

std::string cmd_bounds(const RunConfig& c) {
    const ParamSet ps = load(c);
    const ValueOperator op = operator_for(c, ps);
    const VectorXd V0 = VectorXd::Zero(ps.num_states());
    const EnvelopeReport report = algorithm1_envelope(ps, op, V0, c.eps);
    if (c.format == "csv") return io::envelope_trace_csv(report);
    Json j = io::envelope_to_json(report, c.trace);
    j["operator"] = c.op;
    j["kind"] = to_string(ps.kind());
    if (c.particle_steps > 0) {
        ValueSetParticles cloud = ValueSetParticles::singleton(V0, c.cap);
        SetOperatorOptions options;
        options.seed = c.seed;
        Json steps = Json::array();
        for (int k = 1; k <= c.particle_steps; ++k) {
            ValueSetParticles next = set_operator_apply(cloud, ps, op, options);
            Json e = Json::object();
            e["k"] = k;
            e["particles"] = next.size();
            e["exact"] = next.exact();
            e["hausdorff_step"] = hausdorff_distance(cloud, next);
            e["lower"] = io::to_json(next.lower());
            e["upper"] = io::to_json(next.upper());
            steps.push_back(std::move(e));
            cloud = std::move(next);
        }
        j["particle_iterations"] = std::move(steps);
        j["cap"] = c.cap;
    }
    return render(j);
}

std::string cmd_robust(const RunConfig& c) {
    const ParamSet ps = load(c);
    const RobustSolution sol = solve_optimistic_and_robust(ps, c.eps);
    if (c.format == "csv") {
        std::ostringstream out;
        out << "state,optimistic,robust\n";
        for (Index s = 0; s < ps.num_states(); ++s)
            out << s << ',' << io::format_double(sol.optimistic.value(s)) << ','
                << io::format_double(sol.robust.value(s)) << '\n';
        return out.str();
    }
    Json j = io::robust_solution_to_json(sol);
    j["eps"] = c.eps;
    return render(j);
}

std::string cmd_ordering(const RunConfig& c) {
    const ParamSet ps = load(c);
    if (c.coordinate < 0 || c.coordinate >= ps.num_states())
        throw ValidationError("coordinate", "state index out of range");
    const OrderingReport report = ordering_check(ps, c.eps);
    if (c.format == "csv") return io::ordering_table_csv(report, c.coordinate);
    return render(io::ordering_to_json(report, c.coordinate));
}

std::string cmd_simulate(const RunConfig& c) {
    const ParamSet ps = load(c);
    if (c.deployments) {
        DeploymentOptions options;
        options.seeds = c.seeds;
        options.horizon = c.horizon;
        options.seed = c.seed;
        options.eps = c.eps;
        options.burn_in = c.burn_in;
        options.coordinate = c.coordinate;
        options.threads = c.threads;
        const auto cmp = deployment_compare(ps, options);
        return c.format == "csv" ? io::deployments_csv(cmp) : render(io::deployments_json(cmp));
    }
    const ValueOperator op = operator_for(c, ps);
    const VectorXd V0 = VectorXd::Zero(ps.num_states());
    EnvelopeOptions env_options;
    env_options.probe = false;
    env_options.keep_trace = false;
    const auto env = algorithm1_envelope(ps, op, V0, c.eps, env_options);
    const auto stats = simulate_seeds(ps, op, schedule_for(c, std::max(0, c.burn_in)), c.seeds, V0, env.box_lower(),
                                      env.box_upper(), c.threads);
    if (c.format == "csv") return io::trajectories_csv(stats);
    Json j = io::trajectories_summary_json(stats);
    j["operator"] = c.op;
    j["schedule"] = c.schedule;
    j["horizon"] = c.horizon;
    j["burn_in"] = std::max(0, c.burn_in);
    j["box_lower"] = io::to_json(env.box_lower());
    j["box_upper"] = io::to_json(env.box_upper());
    return render(j);
}

std::string cmd_windfield(const RunConfig& c) {
    const WindConfig w = wind_config(c);
    if (c.sampled) {
        const auto demo = sampled_wind_demo(w, c.models, c.samples, 9, c.seed, c.eps);
        std::ostringstream out;
        out << "model,state,value\n";
        for (std::size_t m = 0; m < demo.values.size(); ++m) {
            for (std::size_t k = 0; k < demo.states.size(); ++k)
                out << m << ',' << demo.states[k] << ',' << io::format_double(demo.values[m][k]) << '\n';
        }
        return out.str();
    }
    return render(io::scenario_to_json(build_scenario(w)));
}

std::string cmd_check(const RunConfig& c) {
    const ParamSet ps = load(c);
    Json j = Json::object();
    j["valid"] = true;
    j["kind"] = to_string(ps.kind());
    j["S"] = ps.num_states();
    j["A"] = ps.num_actions();
    j["gamma"] = ps.discount();
    j["members"] = ps.member_count();
    j["s_rectangular"] = is_s_rectangular(ps);
    j["sa_rectangular"] = is_sa_rectangular(ps);
    EnvelopeOptions options;
    options.keep_trace = false;
    const auto env = algorithm1_envelope(ps, ValueOperator::bellman(), VectorXd::Zero(ps.num_states()), c.eps, options);
    j["containment_probe"] = io::probe_to_json(*env.probe);
    return render(j);
}

void emit(const RunConfig& c, const std::string& text, std::ostream& out) {
    if (c.output.empty()) {
        out << text;
        return;
    }
    std::ofstream file(c.output, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open output file '" + c.output + "'");
    file << text;
    if (!file) throw std::runtime_error("failed writing '" + c.output + "'");
}

} // namespace

void validate(const RunConfig& c) {
    bool known = false;
    for (const char* s : kSubcommands) known = known || c.subcommand == s;
    if (!known) throw ValidationError("subcommand", "unknown subcommand '" + c.subcommand + "'");
    if (!(c.eps > 0)) throw ValidationError("eps", "must be positive");
    if (c.gamma && !(*c.gamma > 0 && *c.gamma < 1)) throw ValidationError("gamma", "must lie in (0,1)");
    if (needs_input(c.subcommand) && c.input.empty()) throw ValidationError("input", "an input file is required");
    if (c.format != "json" && c.format != "csv") throw ValidationError("format", "expected json or csv");
    if (c.op != "bellman" && c.op != "optimistic" && c.op != "robust")
        throw ValidationError("operator", "expected bellman, optimistic or robust");
    if (c.schedule != "iid" && c.schedule != "cyclic" && c.schedule != "greedy-up" && c.schedule != "greedy-down")
        throw ValidationError("schedule", "expected iid, cyclic, greedy-up or greedy-down");
    if (c.horizon < 0) throw ValidationError("horizon", "must be non-negative");
    if (c.seeds < 1) throw ValidationError("seeds", "must be positive");
    if (c.up != "north" && c.up != "south") throw ValidationError("up", "expected north or south");
    if (c.particle_steps < 0) throw ValidationError("particles", "must be non-negative");
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        validate(config);
        std::string text;
        const std::string& sub = config.subcommand;
        if (sub == "solve") text = cmd_solve(config);
        else if (sub == "bounds") text = cmd_bounds(config);
        else if (sub == "robust") text = cmd_robust(config);
        else if (sub == "ordering") text = cmd_ordering(config);
        else if (sub == "simulate") text = cmd_simulate(config);
        else if (sub == "windfield") text = cmd_windfield(config);
        else text = cmd_check(config);
        emit(config, text, out);
        return kOk;
    } catch (const ValidationError& e) {
        err << "error: invalid input: " << e.what() << '\n';
        return kInvalid;
    } catch (const UnsupportedError& e) {
        err << "error: unsupported: " << e.what() << '\n';
        return kUnsupported;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kFailure;
    }
}

} // namespace setmdp::cli
