#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"

#include "setmdp/io.hpp"
#include "setmdp/windfield.hpp"

using namespace setmdp;
using io::Json;

namespace {

bool same(const ParamSet& a, const ParamSet& b) {
    if (a.kind() != b.kind() || a.num_states() != b.num_states() || a.num_actions() != b.num_actions() ||
        a.discount() != b.discount())
        return false;
    for (Index s = 0; s < a.num_states(); ++s) {
        if (a.candidate_count(s) != b.candidate_count(s)) return false;
        for (Index i = 0; i < a.candidate_count(s); ++i) {
            const auto& x = a.candidates(s)[std::size_t(i)];
            const auto& y = b.candidates(s)[std::size_t(i)];
            if (x.cost != y.cost || x.trans != y.trans) return false;
        }
    }
    return true;
}

std::string field_of(const std::string& text) {
    try {
        io::param_set_from_json(io::parse(text));
    } catch (const ValidationError& e) {
        return e.field();
    }
    return "";
}

} // namespace

TEST_CASE("round trips are bitwise") {
    Rng rng(33);
    const std::vector<ParamSet> sets = {
        oracle::random_finite(rng, 3, 2, 3, 0.9), oracle::random_s_rect(rng, 3, 2, 3, 0.7),
        oracle::random_s_rect(rng, 2, 3, 2, 0.95, true), build_scenario().params};
    for (const auto& ps : sets) {
        const std::string text = io::param_set_to_json(ps).dump();
        const ParamSet back = io::param_set_from_json(io::parse(text));
        CHECK(same(ps, back));
        CHECK(io::param_set_to_json(back).dump() == text);
    }

    const Mdp m = oracle::random_mdp(rng, 3, 2, 0.9);
    const Mdp back = io::mdp_from_json(io::parse(io::mdp_to_json(m).dump()));
    CHECK(back.cost() == m.cost());
    for (Index s = 0; s < 3; ++s) CHECK(back.transitions(s) == m.transitions(s));

    const auto single = io::param_set_from_json(io::mdp_to_json(m));
    CHECK(single.member_count() == 1);
    CHECK(single.assemble(single.member(0)).cost() == m.cost());

    const auto scenario = build_scenario();
    CHECK(same(io::param_set_from_json(io::scenario_to_json(scenario)), scenario.params));
}

TEST_CASE("schema errors name the field") {
    const std::string row08 = R"({"S":2,"A":1,"gamma":0.9,"C":[[1],[2]],"P":[[[1,0]],[[0.5,0.3]]]})";
    try {
        io::mdp_from_json(io::parse(row08));
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        CHECK(e.field() == "P[1][0]");
    }
    CHECK(field_of(row08) == "P[1][0]");
    CHECK(field_of(R"({"S":1,"A":1,"gamma":0.9,"C":[[1]]})") == "P");
    CHECK(field_of(R"({"S":1,"A":1,"gamma":1.5,"C":[[1]],"P":[[[1]]]})") == "gamma");
    CHECK(field_of(R"({"S":1,"A":1,"gamma":0.5,"C":[["x"]],"P":[[[1]]]})") == "C[0][0]");
    CHECK(field_of(R"({"S":1,"A":1,"gamma":0.5,"C":[[1,2]],"P":[[[1]]]})") == "C[0]");
    CHECK(field_of(R"({"S":0,"A":1,"gamma":0.5})") == "S");
    CHECK(field_of(R"({"kind":"ellipsoid","S":1,"A":1,"gamma":0.5})") == "kind");
    CHECK(field_of(R"({"kind":"finite","S":1,"A":1,"gamma":0.5,"elements":[]})") == "elements");
    CHECK(field_of(R"({"kind":"finite","S":1,"A":1,"gamma":0.5,"elements":[{"C":[[1]],"P":[[[0.9]]]}]})") ==
          "elements[0].P[0][0]");
    CHECK(field_of(R"({"kind":"s_rect_finite","S":1,"A":1,"gamma":0.5,"states":[[{"c":[1],"P":[[0.2]]}]]})") ==
          "states[0][0].P[0]");
    CHECK(field_of(R"({"kind":"s_rect_finite","S":1,"A":1,"gamma":0.5,"states":[[]]})") == "states[0]");
    CHECK(field_of("{not json") == "json");
    CHECK(field_of("[1, 2]") == "document");
}

TEST_CASE("numbers render with 17 significant digits") {
    CHECK(io::format_double(0.1) == "0.10000000000000001");
    CHECK(io::format_double(1.0) == "1");
    CHECK(std::stod(io::format_double(2.0 / 3)) == 2.0 / 3);
}

TEST_CASE("csv reports") {
    const auto ps = fixture::two_state_pair();
    const auto env = algorithm1_envelope(ps, ValueOperator::bellman(), VectorXd::Zero(2), 1e-4);
    const std::string csv = io::envelope_trace_csv(env);
    CHECK(csv.rfind("k,lower_0,lower_1,upper_0,upper_1,residual\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == long(env.trace.size()) + 1);

    const Json j = io::envelope_to_json(env, true);
    CHECK(j["iterations"] == env.iterations);
    CHECK(j["trace"].size() == env.trace.size());
    CHECK(j["containment"]["kind"] == "probe");
}
