#pragma once

#include "setmdp/lp.hpp"

namespace setmdp {

template <typename Scalar>
struct BasicGameSolution {
    Scalar value{};
    Vector<Scalar> strategy;  // row player's mixed strategy over the A rows
};

using GameSolution = BasicGameSolution<double>;

/**
 * Value of the zero-sum game min_{pi in simplex} max_j (G^T pi)_j for an A x N
 * payoff matrix G (rows: minimizer's actions, columns: maximizer's choices).
 *
 * A column that weakly dominates every other column reduces the game to a pure
 * minimum, resolved toward the lowest row index. Otherwise the payoffs are shifted
 * to be positive and the LP  min t  s.t.  G^T pi <= t,  sum(pi) = 1  is solved.
 */
template <typename Scalar>
BasicGameSolution<Scalar> matrix_game_value(const Matrix<Scalar>& G) {
    const Index A = G.rows();
    const Index N = G.cols();
    if (A <= 0 || N <= 0) throw ValidationError("G", "empty payoff matrix");
    if (!G.allFinite()) throw ValidationError("G", "non-finite payoff");

    BasicGameSolution<Scalar> out;
    out.strategy = Vector<Scalar>::Zero(A);

    for (Index j = 0; j < N; ++j) {
        if (((G.colwise() - G.col(j)).array() <= Scalar(0)).all()) {
            Index best = 0;
            for (Index a = 1; a < A; ++a) {
                if (G(a, j) < G(best, j)) best = a;
            }
            out.value = G(best, j);
            out.strategy(best) = Scalar(1);
            return out;
        }
    }

    const Scalar shift = Scalar(1) - G.minCoeff();
    BasicLpProblem<Scalar> lp;
    lp.objective = Vector<Scalar>::Zero(A + 1);
    lp.objective(A) = Scalar(1);
    lp.constraints = Matrix<Scalar>::Zero(N + 1, A + 1);
    lp.constraints.topLeftCorner(N, A) = (G.array() + shift).matrix().transpose();
    lp.constraints.col(A).head(N).setConstant(Scalar(-1));
    lp.constraints.row(N).head(A).setOnes();
    lp.rhs = Vector<Scalar>::Zero(N + 1);
    lp.rhs(N) = Scalar(1);
    lp.senses.assign(std::size_t(N), ConstraintSense::LessEqual);
    lp.senses.push_back(ConstraintSense::Equal);

    const auto sol = lp_solve(lp);
    if (!sol.optimal()) throw std::runtime_error("matrix_game_value: game LP did not reach an optimum");
    Vector<Scalar> pi = sol.x.head(A).cwiseMax(Scalar(0));
    pi /= pi.sum();
    out.strategy = pi;
    out.value = sol.value - shift;
    return out;
}

} // namespace setmdp
