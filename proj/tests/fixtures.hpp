#pragma once

#include "setmdp/uncertainty.hpp"

#include <vector>

namespace fixture {

using setmdp::Index;
using setmdp::MatrixXd;
using setmdp::Mdp;
using setmdp::ParamSet;
using setmdp::StateBlock;
using setmdp::VectorXd;

inline MatrixXd rows(std::initializer_list<std::initializer_list<double>> r) {
    MatrixXd m(Index(r.size()), Index(r.begin()->size()));
    Index i = 0;
    for (const auto& row : r) {
        Index j = 0;
        for (double x : row) m(i, j++) = x;
        ++i;
    }
    return m;
}

inline VectorXd vec(std::initializer_list<double> v) {
    VectorXd out(Index(v.size()));
    Index i = 0;
    for (double x : v) out(i++) = x;
    return out;
}

/// One absorbing state with a single action of cost `cost`.
inline Mdp absorbing(double cost, double gamma) { return Mdp::create(gamma, rows({{cost}}), {rows({{1.0}})}); }

/**
 * Four states coupled through alpha in {0, 1} at s1 and s4 (actions duplicated so A = 2).
 * s1: cost 0, to s2 w.p. 1 - alpha, s3 w.p. alpha. s2: absorbing, cost 1. s3: absorbing, cost 0.
 * s4: action 0 costs 2 and goes to s3; action 1 costs 0 and goes to s2 w.p. alpha, s3 otherwise.
 */
inline Mdp example2_member(double alpha, double gamma) {
    MatrixXd C = rows({{0, 0}, {1, 1}, {0, 0}, {2, 0}});
    std::vector<MatrixXd> P = {
        rows({{0, 1 - alpha, alpha, 0}, {0, 1 - alpha, alpha, 0}}),
        rows({{0, 1, 0, 0}, {0, 1, 0, 0}}),
        rows({{0, 0, 1, 0}, {0, 0, 1, 0}}),
        rows({{0, 0, 1, 0}, {0, alpha, 1 - alpha, 0}}),
    };
    return Mdp::create(gamma, C, P);
}

inline ParamSet example2(double gamma = 0.9) {
    return ParamSet::finite_global({example2_member(0, gamma), example2_member(1, gamma)});
}

/// S = 3, A = 2 instance.
inline Mdp three_state(double gamma = 0.9) {
    MatrixXd C = rows({{1.0, 4.0}, {2.5, 0.5}, {3.0, 1.5}});
    std::vector<MatrixXd> P = {
        rows({{0.2, 0.5, 0.3}, {0.0, 0.1, 0.9}}),
        rows({{0.6, 0.4, 0.0}, {0.3, 0.3, 0.4}}),
        rows({{0.1, 0.1, 0.8}, {0.5, 0.0, 0.5}}),
    };
    return Mdp::create(gamma, C, P);
}

/// Two 2-state parameters with different transitions and costs.
inline ParamSet two_state_pair(double gamma = 0.8) {
    Mdp m1 = Mdp::create(gamma, rows({{1, 2}, {0.5, 3}}), {rows({{0.9, 0.1}, {0.2, 0.8}}), rows({{0.5, 0.5}, {0, 1}})});
    Mdp m2 = Mdp::create(gamma, rows({{2, 1}, {1.5, 0.2}}), {rows({{0.3, 0.7}, {1, 0}}), rows({{0.1, 0.9}, {0.6, 0.4}})});
    return ParamSet::finite_global({m1, m2});
}

/**
 * One self-looping state, two actions, two parameters with costs (1, 0) and (0, 1):
 * the robust player must mix 50/50.
 */
inline ParamSet matching_pennies_state(double gamma = 0.5) {
    const MatrixXd loop = rows({{1}, {1}});
    std::vector<std::vector<StateBlock>> states(1);
    states[0].push_back({vec({1, 0}), loop});
    states[0].push_back({vec({0, 1}), loop});
    return ParamSet::s_rect_finite(gamma, states);
}

} // namespace fixture
