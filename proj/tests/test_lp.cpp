#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"

#include "setmdp/lp.hpp"

using namespace setmdp;
using fixture::rows;
using fixture::vec;

namespace {

struct RandomLp {
    LpProblem problem;
    oracle::Mat A;
    oracle::Vec b, c;
};

RandomLp random_lp(Rng& rng, Index m, Index n) {
    RandomLp out;
    out.problem.objective = oracle::random_vector(rng, n, -1, 1);
    out.problem.constraints = MatrixXd(m, n);
    out.problem.rhs = oracle::random_vector(rng, m, 0.5, 2);
    for (Index i = 0; i < m; ++i)
        for (Index j = 0; j < n; ++j) out.problem.constraints(i, j) = rng.uniform(0.05, 1.0);
    out.A.assign(std::size_t(m), oracle::Vec(std::size_t(n)));
    for (Index i = 0; i < m; ++i)
        for (Index j = 0; j < n; ++j) out.A[std::size_t(i)][std::size_t(j)] = out.problem.constraints(i, j);
    out.b = oracle::to_vec(out.problem.rhs);
    out.c = oracle::to_vec(out.problem.objective);
    return out;
}

} // namespace

TEST_CASE("single variable lower bound") {
    LpProblem p{vec({1}), rows({{1}}), vec({3}), {ConstraintSense::GreaterEqual}};
    const auto r = lp_solve(p);
    REQUIRE(r.optimal());
    CHECK(r.x(0) == doctest::Approx(3));
    CHECK(r.value == doctest::Approx(3));
}

TEST_CASE("degenerate problem with redundant constraints terminates") {
    // Several constraints meet at the optimum and one equality is repeated.
    LpProblem p;
    p.objective = vec({-1, -1});
    p.constraints = rows({{1, 1}, {1, 0}, {0, 1}, {1, 1}, {2, 2}, {1, 1}});
    p.rhs = vec({1, 1, 1, 1, 2, 1});
    p.senses = {ConstraintSense::LessEqual, ConstraintSense::LessEqual, ConstraintSense::LessEqual,
                ConstraintSense::LessEqual, ConstraintSense::Equal, ConstraintSense::Equal};
    const auto r = lp_solve(p);
    REQUIRE(r.optimal());
    CHECK(r.value == doctest::Approx(-1));

    // Classic cycling example for Dantzig's rule.
    LpProblem beale;
    beale.objective = vec({-0.75, 150, -0.02, 6});
    beale.constraints = rows({{0.25, -60, -0.04, 9}, {0.5, -90, -0.02, 3}, {0, 0, 1, 0}});
    beale.rhs = vec({0, 0, 1});
    const auto b = lp_solve(beale);
    REQUIRE(b.optimal());
    CHECK(b.value == doctest::Approx(-0.05));
}

TEST_CASE("infeasible and unbounded problems") {
    LpProblem infeasible{vec({1}), rows({{1}, {1}}), vec({1, 2}),
                         {ConstraintSense::LessEqual, ConstraintSense::GreaterEqual}};
    CHECK(lp_solve(infeasible).status == LpStatus::Infeasible);

    LpProblem unbounded{vec({-1, 0}), rows({{0, 1}}), vec({1}), {}};
    CHECK(lp_solve(unbounded).status == LpStatus::Unbounded);

    LpProblem bad{vec({1, 1}), rows({{1}}), vec({1}), {}};
    CHECK_THROWS_AS(lp_solve(bad), ValidationError);
}

TEST_CASE("random 5x5 problems match vertex enumeration") {
    Rng rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        const RandomLp lp = random_lp(rng, 5, 5);
        const auto r = lp_solve(lp.problem);
        const auto expected = oracle::lp_vertex_enumeration(lp.c, lp.A, lp.b);
        REQUIRE(expected.has_value());
        REQUIRE(r.optimal());
        CHECK(std::abs(r.value - *expected) <= 1e-7);
    }
}

TEST_CASE("feasibility, objective and duality gap") {
    Rng rng(78);
    for (int trial = 0; trial < 100; ++trial) {
        const Index m = 2 + Index(rng.below(5));
        const Index n = 2 + Index(rng.below(5));
        const RandomLp lp = random_lp(rng, m, n);
        const auto r = lp_solve(lp.problem);
        REQUIRE(r.optimal());
        CHECK((r.x.array() >= -1e-9).all());
        CHECK(((lp.problem.constraints * r.x - lp.problem.rhs).array() <= 1e-9).all());
        CHECK(std::abs(r.value - lp.problem.objective.dot(r.x)) <= 1e-9);

        // Dual: max -b.u s.t. A^T u >= -c, u >= 0, written as a minimization.
        LpProblem dual;
        dual.objective = lp.problem.rhs;
        dual.constraints = lp.problem.constraints.transpose();
        dual.rhs = -lp.problem.objective;
        dual.senses.assign(std::size_t(n), ConstraintSense::GreaterEqual);
        const auto d = lp_solve(dual);
        REQUIRE(d.optimal());
        CHECK(std::abs(r.value + d.value) <= 1e-7);
    }
}
