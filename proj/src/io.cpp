#include "setmdp/io.hpp"

#include <cstdio>
#include <sstream>

namespace setmdp::io {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

Json to_json(const VectorXd& v) {
    Json out = Json::array();
    for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

Json to_json(const MatrixXd& m) {
    Json out = Json::array();
    for (Index r = 0; r < m.rows(); ++r) out.push_back(to_json(VectorXd(m.row(r).transpose())));
    return out;
}

namespace {

std::string member(const std::string& path, const char* key) { return path.empty() ? key : path + "." + key; }

const Json& field(const Json& j, const char* key, const std::string& path) {
    if (!j.is_object()) throw ValidationError(path.empty() ? "document" : path, "expected an object");
    const auto it = j.find(key);
    if (it == j.end()) throw ValidationError(member(path, key), "missing field");
    return *it;
}

double number(const Json& j, const std::string& path) {
    if (!j.is_number()) throw ValidationError(path, "expected a number");
    return j.get<double>();
}

Index positive_integer(const Json& j, const std::string& path) {
    if (!j.is_number_integer() || j.get<long long>() < 1) throw ValidationError(path, "expected a positive integer");
    return Index(j.get<long long>());
}

const Json& array(const Json& j, std::size_t size, const std::string& path) {
    if (!j.is_array()) throw ValidationError(path, "expected an array");
    if (size != std::size_t(-1) && j.size() != size)
        throw ValidationError(path, "expected " + std::to_string(size) + " entries, got " + std::to_string(j.size()));
    return j;
}

VectorXd vector(const Json& j, Index n, const std::string& path) {
    array(j, std::size_t(n), path);
    VectorXd v(n);
    for (Index i = 0; i < n; ++i) v(i) = number(j[std::size_t(i)], indexed(path, i));
    return v;
}

MatrixXd matrix(const Json& j, Index rows, Index cols, const std::string& path) {
    array(j, std::size_t(rows), path);
    MatrixXd m(rows, cols);
    for (Index r = 0; r < rows; ++r) m.row(r) = vector(j[std::size_t(r)], cols, indexed(path, r)).transpose();
    return m;
}

struct Header {
    Index S;
    Index A;
    double gamma;
};

Header header(const Json& j) {
    Header h{positive_integer(field(j, "S", ""), "S"), positive_integer(field(j, "A", ""), "A"),
             number(field(j, "gamma", ""), "gamma")};
    Mdp::validate_discount(h.gamma);
    return h;
}

std::vector<MatrixXd> transitions(const Json& j, Index S, Index A, const std::string& path) {
    array(j, std::size_t(S), path);
    std::vector<MatrixXd> out;
    for (Index s = 0; s < S; ++s) out.push_back(matrix(j[std::size_t(s)], A, S, indexed(path, s)));
    return out;
}

Mdp mdp_body(const Json& j, const Header& h, const std::string& path) {
    MatrixXd C = matrix(field(j, "C", path), h.S, h.A, member(path, "C"));
    auto P = transitions(field(j, "P", path), h.S, h.A, member(path, "P"));
    try {
        return Mdp::create(h.gamma, std::move(C), std::move(P));
    } catch (const ValidationError& e) {
        if (path.empty()) throw;
        throw ValidationError(path + "." + e.field(), std::string(e.what()).substr(e.field().size() + 2));
    }
}

Json block_to_json(const StateBlock& b) {
    Json out = Json::object();
    out["c"] = to_json(b.cost);
    out["P"] = to_json(b.trans);
    return out;
}

} // namespace

Json mdp_to_json(const Mdp& m) {
    Json out = Json::object();
    out["S"] = m.num_states();
    out["A"] = m.num_actions();
    out["gamma"] = m.discount();
    out["C"] = to_json(m.cost());
    Json P = Json::array();
    for (Index s = 0; s < m.num_states(); ++s) P.push_back(to_json(m.transitions(s)));
    out["P"] = std::move(P);
    return out;
}

Mdp mdp_from_json(const Json& j) { return mdp_body(j, header(j), ""); }

Json param_set_to_json(const ParamSet& ps) {
    Json out = Json::object();
    out["kind"] = to_string(ps.kind());
    out["S"] = ps.num_states();
    out["A"] = ps.num_actions();
    out["gamma"] = ps.discount();
    if (ps.coupled()) {
        Json elements = Json::array();
        for (Index n = 0; n < ps.candidate_count(0); ++n) {
            Json e = mdp_to_json(ps.element(n));
            Json body = Json::object();
            body["C"] = std::move(e["C"]);
            body["P"] = std::move(e["P"]);
            elements.push_back(std::move(body));
        }
        out["elements"] = std::move(elements);
        return out;
    }
    Json states = Json::array();
    for (Index s = 0; s < ps.num_states(); ++s) {
        Json list = Json::array();
        for (const auto& b : ps.candidates(s)) list.push_back(block_to_json(b));
        states.push_back(std::move(list));
    }
    out["states"] = std::move(states);
    return out;
}

ParamSet param_set_from_json(const Json& j) {
    if (!j.is_object()) throw ValidationError("document", "expected an object");
    const Header h = header(j);
    if (!j.contains("kind")) return ParamSet::singleton(mdp_body(j, h, ""));
    const Json& kind_node = j.at("kind");
    if (!kind_node.is_string()) throw ValidationError("kind", "expected a string");
    const std::string kind = kind_node.get<std::string>();
    if (kind == "finite") {
        const Json& list = field(j, "elements", "");
        array(list, std::size_t(-1), "elements");
        if (list.empty()) throw ValidationError("elements", "need at least one element");
        std::vector<Mdp> elements;
        for (std::size_t n = 0; n < list.size(); ++n) elements.push_back(mdp_body(list[n], h, indexed("elements", Index(n))));
        return ParamSet::finite_global(std::move(elements));
    }
    if (kind == "s_rect_finite" || kind == "s_rect_mixture") {
        const Json& node = array(field(j, "states", ""), std::size_t(h.S), "states");
        std::vector<std::vector<StateBlock>> states(std::size_t(h.S));
        for (Index s = 0; s < h.S; ++s) {
            const std::string path = indexed("states", s);
            const Json& list = array(node[std::size_t(s)], std::size_t(-1), path);
            for (std::size_t i = 0; i < list.size(); ++i) {
                const std::string item = indexed("states", s, Index(i));
                StateBlock b;
                b.cost = vector(field(list[i], "c", item), h.A, item + ".c");
                b.trans = matrix(field(list[i], "P", item), h.A, h.S, item + ".P");
                states[std::size_t(s)].push_back(std::move(b));
            }
        }
        return kind == "s_rect_finite" ? ParamSet::s_rect_finite(h.gamma, std::move(states))
                                       : ParamSet::s_rect_mixture(h.gamma, std::move(states));
    }
    throw ValidationError("kind", "unknown kind '" + kind + "'");
}

Json parse(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError("json", e.what());
    }
}

namespace {

Json selection_json(const std::optional<Selection>& sel) {
    if (!sel) return nullptr;
    Json out = Json::array();
    for (Index i : *sel) out.push_back(i);
    return out;
}

} // namespace

Json probe_to_json(const ContainmentProbeReport& report) {
    Json out = Json::object();
    out["kind"] = "probe";
    out["tau"] = report.tau;
    out["vertices_only"] = report.vertices_only;
    out["min_nonempty"] = report.min_nonempty();
    out["max_nonempty"] = report.max_nonempty();
    Json probes = Json::array();
    for (const auto& p : report.probes) {
        Json e = Json::object();
        e["probe"] = to_json(p.probe);
        e["min_nonempty"] = p.min_nonempty;
        e["max_nonempty"] = p.max_nonempty;
        e["min_witness"] = selection_json(p.min_witness);
        e["max_witness"] = selection_json(p.max_witness);
        probes.push_back(std::move(e));
    }
    out["probes"] = std::move(probes);
    return out;
}

Json envelope_to_json(const EnvelopeReport& report, bool include_trace) {
    Json out = Json::object();
    out["lower"] = to_json(report.lower);
    out["upper"] = to_json(report.upper);
    out["box_lower"] = to_json(report.box_lower());
    out["box_upper"] = to_json(report.box_upper());
    out["iterations"] = report.iterations;
    out["residual"] = report.residual;
    out["first_residual"] = report.first_step_residual;
    out["max_residual_ratio"] = report.max_residual_ratio;
    out["rate_violations"] = report.rate_violations;
    out["iteration_bound"] = report.iteration_bound();
    out["eps"] = report.eps;
    out["gamma"] = report.gamma;
    out["containment"] = report.probe ? probe_to_json(*report.probe) : Json(nullptr);
    if (include_trace) {
        Json trace = Json::array();
        for (const auto& step : report.trace) {
            Json e = Json::object();
            e["k"] = step.k;
            e["lower"] = to_json(step.lower);
            e["upper"] = to_json(step.upper);
            e["residual"] = step.residual;
            trace.push_back(std::move(e));
        }
        out["trace"] = std::move(trace);
    }
    return out;
}

std::string envelope_trace_csv(const EnvelopeReport& report) {
    std::ostringstream out;
    const Index S = report.lower.size();
    out << "k";
    for (Index s = 0; s < S; ++s) out << ",lower_" << s;
    for (Index s = 0; s < S; ++s) out << ",upper_" << s;
    out << ",residual\n";
    for (const auto& step : report.trace) {
        out << step.k;
        for (Index s = 0; s < S; ++s) out << ',' << format_double(step.lower(s));
        for (Index s = 0; s < S; ++s) out << ',' << format_double(step.upper(s));
        out << ',' << format_double(step.residual) << '\n';
    }
    return out.str();
}

Json robust_solution_to_json(const RobustSolution& solution) {
    Json out = Json::object();
    Json o = Json::object();
    o["value"] = to_json(solution.optimistic.value);
    o["policy"] = to_json(solution.optimistic.policy);
    Json params = Json::array();
    for (Index i : solution.optimistic.parameters) params.push_back(i);
    o["parameters"] = std::move(params);
    o["iterations"] = solution.optimistic.iterations;
    o["residual"] = solution.optimistic.residual;
    Json r = Json::object();
    r["value"] = to_json(solution.robust.value);
    r["policy"] = to_json(solution.robust.policy);
    r["game_values"] = to_json(solution.robust.game_values);
    r["iterations"] = solution.robust.iterations;
    r["residual"] = solution.robust.residual;
    out["optimistic"] = std::move(o);
    out["robust"] = std::move(r);
    return out;
}

Json ordering_to_json(const OrderingReport& report, Index coordinate) {
    Json out = Json::object();
    out["eps"] = report.eps;
    out["tolerance"] = report.tolerance;
    out["all_hold"] = report.all_hold();
    out["max_violation"] = report.max_violation;
    Json relations = Json::array();
    for (const auto& r : report.relations) {
        Json e = Json::object();
        e["relation"] = r.name;
        e["holds"] = r.holds;
        e["gap"] = r.gap;
        relations.push_back(std::move(e));
    }
    out["relations"] = std::move(relations);
    out["coordinate"] = coordinate;
    Json table = Json::object();
    auto row = [&](const char* name, const VectorXd& hi, const VectorXd& lo) {
        Json e = Json::object();
        e["max"] = hi(coordinate);
        e["min"] = lo(coordinate);
        table[name] = std::move(e);
    };
    row("bellman", report.upper_bellman, report.lower_bellman);
    row("optimistic", report.upper_optimistic, report.lower_optimistic);
    row("robust", report.upper_robust, report.lower_robust);
    out["table"] = std::move(table);
    out["upper_bellman_given_at_coordinate"] = report.upper_bellman_given(coordinate);
    out["lower_bellman"] = to_json(report.lower_bellman);
    out["lower_optimistic"] = to_json(report.lower_optimistic);
    out["lower_robust"] = to_json(report.lower_robust);
    out["upper_bellman"] = to_json(report.upper_bellman);
    out["upper_optimistic"] = to_json(report.upper_optimistic);
    out["upper_robust"] = to_json(report.upper_robust);
    out["upper_bellman_given"] = to_json(report.upper_bellman_given);
    out["solution"] = robust_solution_to_json(report.solution);
    return out;
}

std::string ordering_table_csv(const OrderingReport& report, Index coordinate) {
    std::ostringstream out;
    out << "set,max,min\n";
    out << "bellman," << format_double(report.upper_bellman(coordinate)) << ','
        << format_double(report.lower_bellman(coordinate)) << '\n';
    out << "optimistic," << format_double(report.upper_optimistic(coordinate)) << ','
        << format_double(report.lower_optimistic(coordinate)) << '\n';
    out << "robust," << format_double(report.upper_robust(coordinate)) << ','
        << format_double(report.lower_robust(coordinate)) << '\n';
    return out.str();
}

std::string trajectories_csv(const MultiSeedStats& stats) {
    std::ostringstream out;
    out << "seed,k,coordinate,value,box_lower,box_upper\n";
    for (std::size_t i = 0; i < stats.runs.size(); ++i) {
        const auto& run = stats.runs[i];
        for (std::size_t k = 0; k < run.trace.size(); ++k) {
            for (Index s = 0; s < run.trace[k].size(); ++s) {
                out << stats.seeds[i] << ',' << k << ',' << s << ',' << format_double(run.trace[k](s)) << ','
                    << format_double(run.box_lower(s)) << ',' << format_double(run.box_upper(s)) << '\n';
            }
        }
    }
    return out.str();
}

Json trajectories_summary_json(const MultiSeedStats& stats) {
    Json out = Json::object();
    Json seeds = Json::array();
    for (auto s : stats.seeds) seeds.push_back(s);
    out["seeds"] = std::move(seeds);
    Json mean = Json::array();
    Json stdev = Json::array();
    for (const auto& m : stats.mean) mean.push_back(to_json(m));
    for (const auto& s : stats.stdev) stdev.push_back(to_json(s));
    out["mean"] = std::move(mean);
    out["stdev"] = std::move(stdev);
    double worst = 0;
    for (const auto& r : stats.runs) worst = std::max(worst, r.box_distance.back());
    out["final_box_distance_max"] = worst;
    return out;
}

std::string deployments_csv(const DeploymentComparison& cmp) {
    std::ostringstream out;
    const Index c = cmp.options.coordinate;
    out << "deployment,k,mean,stdev,min,max,box_lower,box_upper\n";
    for (const auto& d : cmp.deployments) {
        for (std::size_t k = 0; k < d.mean.size(); ++k) {
            out << d.name << ',' << k << ',' << format_double(d.mean[k]) << ',' << format_double(d.stdev[k]) << ','
                << format_double(d.min[k]) << ',' << format_double(d.max[k]) << ',' << format_double(d.box_lower(c))
                << ',' << format_double(d.box_upper(c)) << '\n';
        }
    }
    return out.str();
}

Json deployments_json(const DeploymentComparison& cmp) {
    Json out = Json::object();
    out["seeds"] = cmp.options.seeds;
    out["horizon"] = cmp.options.horizon;
    out["seed"] = cmp.options.seed;
    out["eps"] = cmp.options.eps;
    out["burn_in"] = cmp.burn_in;
    out["coordinate"] = cmp.options.coordinate;
    Json list = Json::array();
    for (const auto& d : cmp.deployments) {
        Json e = Json::object();
        e["name"] = d.name;
        e["box_lower"] = d.box_lower(cmp.options.coordinate);
        e["box_upper"] = d.box_upper(cmp.options.coordinate);
        e["spread"] = d.spread;
        e["final_box_distance"] = d.final_box_distance;
        e["mean"] = d.mean;
        e["stdev"] = d.stdev;
        list.push_back(std::move(e));
    }
    out["deployments"] = std::move(list);
    return out;
}

Json scenario_to_json(const WindScenario& scenario) {
    Json out = param_set_to_json(scenario.params);
    Json meta = Json::object();
    meta["width"] = scenario.config.width;
    meta["height"] = scenario.config.height;
    meta["target"] = Json::array({scenario.config.target_x, scenario.config.target_y});
    meta["thrust_cost"] = scenario.config.thrust_cost;
    meta["up"] = scenario.config.up == WindUp::North ? "north" : "south";
    Json actions = Json::array();
    for (const char* name : wind_action_names()) actions.push_back(name);
    meta["actions"] = std::move(actions);
    Json regions = Json::array();
    for (auto r : scenario.regions) regions.push_back(to_string(r));
    meta["regions"] = std::move(regions);
    out["meta"] = std::move(meta);
    return out;
}

} // namespace setmdp::io
