#pragma once

#include "setmdp/core.hpp"

#include <limits>
#include <optional>
#include <vector>

namespace setmdp {

enum class ConstraintSense { LessEqual, GreaterEqual, Equal };

/**
 * minimize c^T x  subject to  row_i(A) x (<=|>=|=) b_i,  x >= 0.
 *
 * `senses` may be left empty, in which case every row is `<=`.
 */
template <typename Scalar>
struct BasicLpProblem {
    Vector<Scalar> objective;
    Matrix<Scalar> constraints;
    Vector<Scalar> rhs;
    std::vector<ConstraintSense> senses;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

template <typename Scalar>
struct BasicLpResult {
    LpStatus status = LpStatus::Infeasible;
    Vector<Scalar> x;  // set when optimal
    Scalar value{};    // set when optimal
    int pivots = 0;

    bool optimal() const { return status == LpStatus::Optimal; }
};

template <typename Scalar>
struct LpTolerances {
    Scalar pivot = Scalar(1e-11);
    Scalar feasibility = Scalar(1e-9);
    Scalar optimality = Scalar(1e-12);
};

namespace detail {

/// Dense two-phase tableau. The last row holds reduced costs, the last column the rhs.
template <typename Scalar>
class Tableau {
public:
    Tableau(Matrix<Scalar> table, std::vector<Index> basis, LpTolerances<Scalar> tol)
        : t_(std::move(table)), basis_(std::move(basis)), tol_(tol) {}

    Index rows() const { return t_.rows() - 1; }
    Index cols() const { return t_.cols() - 1; }
    Matrix<Scalar>& table() { return t_; }
    std::vector<Index>& basis() { return basis_; }
    int pivots() const { return pivots_; }

    void pivot(Index r, Index c) {
        t_.row(r) /= t_(r, c);
        for (Index i = 0; i < t_.rows(); ++i) {
            if (i == r) continue;
            const Scalar factor = t_(i, c);
            if (factor != Scalar(0)) t_.row(i) -= factor * t_.row(r);
        }
        basis_[std::size_t(r)] = c;
        ++pivots_;
    }

    /// Sets the cost row for the given column costs, priced out against the current basis.
    void set_objective(const Vector<Scalar>& costs) {
        auto z = t_.row(t_.rows() - 1);
        z.setZero();
        z.head(costs.size()) = costs.transpose();
        for (Index r = 0; r < rows(); ++r) {
            const Scalar cb = t_(t_.rows() - 1, basis_[std::size_t(r)]);
            if (cb != Scalar(0)) z -= cb * t_.row(r);
        }
    }

    /// Runs Bland's rule over columns [0, allowed). Returns false if unbounded.
    bool optimize(Index allowed) {
        const Index zrow = t_.rows() - 1;
        for (;;) {
            Index enter = -1;
            for (Index j = 0; j < allowed; ++j) {
                if (t_(zrow, j) < -tol_.optimality) {
                    enter = j;
                    break;
                }
            }
            if (enter < 0) return true;
            Index leave = -1;
            Scalar best = std::numeric_limits<Scalar>::infinity();
            for (Index r = 0; r < rows(); ++r) {
                const Scalar a = t_(r, enter);
                if (a <= tol_.pivot) continue;
                const Scalar ratio = t_(r, cols()) / a;
                if (ratio < best - tol_.pivot ||
                    (ratio <= best + tol_.pivot && leave >= 0 && basis_[std::size_t(r)] < basis_[std::size_t(leave)])) {
                    if (ratio < best) best = ratio;
                    leave = r;
                }
            }
            if (leave < 0) return false;
            pivot(leave, enter);
        }
    }

    Scalar objective_value() const { return -t_(t_.rows() - 1, cols()); }

    void drop_row(Index r) {
        Matrix<Scalar> next(t_.rows() - 1, t_.cols());
        next.topRows(r) = t_.topRows(r);
        next.bottomRows(t_.rows() - 1 - r) = t_.bottomRows(t_.rows() - 1 - r);
        t_ = std::move(next);
        basis_.erase(basis_.begin() + r);
    }

private:
    Matrix<Scalar> t_;
    std::vector<Index> basis_;
    LpTolerances<Scalar> tol_;
    int pivots_ = 0;
};

} // namespace detail

/**
 * Two-phase dense simplex with Bland's rule (lowest-index entering column,
 * lowest-index leaving variable on ratio ties). Deterministic and cycle-free;
 * intended for the small problems that arise in per-state matrix games.
 */
template <typename Scalar>
BasicLpResult<Scalar> lp_solve(const BasicLpProblem<Scalar>& p, LpTolerances<Scalar> tol = {}) {
    const Index n = p.objective.size();
    const Index m = p.constraints.rows();
    if (p.constraints.cols() != n)
        throw ValidationError("constraints", "expected " + std::to_string(n) + " columns, got " +
                                                 std::to_string(p.constraints.cols()));
    if (p.rhs.size() != m) throw ValidationError("rhs", "expected length " + std::to_string(m));
    if (!p.senses.empty() && Index(p.senses.size()) != m)
        throw ValidationError("senses", "expected " + std::to_string(m) + " entries");
    if (!p.objective.allFinite() || !p.constraints.allFinite() || !p.rhs.allFinite())
        throw ValidationError("lp", "non-finite entry");

    std::vector<ConstraintSense> senses = p.senses;
    if (senses.empty()) senses.assign(std::size_t(m), ConstraintSense::LessEqual);

    Matrix<Scalar> rows = p.constraints;
    Vector<Scalar> rhs = p.rhs;
    for (Index i = 0; i < m; ++i) {
        if (rhs(i) < Scalar(0)) {
            rows.row(i) *= Scalar(-1);
            rhs(i) = -rhs(i);
            auto& sense = senses[std::size_t(i)];
            if (sense == ConstraintSense::LessEqual)
                sense = ConstraintSense::GreaterEqual;
            else if (sense == ConstraintSense::GreaterEqual)
                sense = ConstraintSense::LessEqual;
        }
    }

    Index n_slack = 0;
    Index n_art = 0;
    for (auto sense : senses) {
        if (sense != ConstraintSense::Equal) ++n_slack;
        if (sense != ConstraintSense::LessEqual) ++n_art;
    }
    const Index n_cols = n + n_slack + n_art;
    const Index art_begin = n + n_slack;

    Matrix<Scalar> table = Matrix<Scalar>::Zero(m + 1, n_cols + 1);
    std::vector<Index> basis(static_cast<std::size_t>(m));
    Index slack = n;
    Index art = art_begin;
    for (Index i = 0; i < m; ++i) {
        table.row(i).head(n) = rows.row(i);
        table(i, n_cols) = rhs(i);
        switch (senses[std::size_t(i)]) {
        case ConstraintSense::LessEqual:
            table(i, slack) = Scalar(1);
            basis[std::size_t(i)] = slack++;
            break;
        case ConstraintSense::GreaterEqual:
            table(i, slack++) = Scalar(-1);
            table(i, art) = Scalar(1);
            basis[std::size_t(i)] = art++;
            break;
        case ConstraintSense::Equal:
            table(i, art) = Scalar(1);
            basis[std::size_t(i)] = art++;
            break;
        }
    }

    detail::Tableau<Scalar> tab(std::move(table), std::move(basis), tol);
    BasicLpResult<Scalar> result;

    if (n_art > 0) {
        Vector<Scalar> phase1 = Vector<Scalar>::Zero(n_cols);
        phase1.tail(n_art).setOnes();
        tab.set_objective(phase1);
        tab.optimize(n_cols);
        if (tab.objective_value() > tol.feasibility * std::max<Scalar>(Scalar(1), rhs.cwiseAbs().maxCoeff())) {
            result.status = LpStatus::Infeasible;
            result.pivots = tab.pivots();
            return result;
        }
        // Drive remaining artificials out of the basis; rows where that is impossible are redundant.
        for (Index r = tab.rows() - 1; r >= 0; --r) {
            if (tab.basis()[std::size_t(r)] < art_begin) continue;
            Index col = -1;
            for (Index j = 0; j < art_begin; ++j) {
                if (std::abs(tab.table()(r, j)) > tol.pivot) {
                    col = j;
                    break;
                }
            }
            if (col >= 0)
                tab.pivot(r, col);
            else
                tab.drop_row(r);
        }
    }

    Vector<Scalar> phase2 = Vector<Scalar>::Zero(n_cols);
    phase2.head(n) = p.objective;
    tab.set_objective(phase2);
    if (!tab.optimize(art_begin)) {
        result.status = LpStatus::Unbounded;
        result.pivots = tab.pivots();
        return result;
    }

    result.status = LpStatus::Optimal;
    result.x = Vector<Scalar>::Zero(n);
    for (Index r = 0; r < tab.rows(); ++r) {
        const Index b = tab.basis()[std::size_t(r)];
        if (b < n) result.x(b) = std::max(Scalar(0), tab.table()(r, tab.cols()));
    }
    result.value = p.objective.dot(result.x);
    result.pivots = tab.pivots();
    return result;
}

using LpProblem = BasicLpProblem<double>;
using LpResult = BasicLpResult<double>;

} // namespace setmdp
