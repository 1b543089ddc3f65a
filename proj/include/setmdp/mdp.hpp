#pragma once

#include "setmdp/core.hpp"

#include <Eigen/LU>

#include <limits>
#include <string>
#include <vector>

namespace setmdp {

/**
 * Parameters of a single state: the cost of every action and the transition
 * distributions. `trans` is A x S with row `a` holding p_{sa}.
 */
template <typename Scalar>
struct BasicStateBlock {
    Vector<Scalar> cost;
    Matrix<Scalar> trans;
};

/**
 * A finite discounted MDP (S states, A actions, discount in (0,1)).
 *
 * Instances are validated on construction and immutable afterwards. Costs are an
 * S x A matrix; transitions are stored per state as A x S matrices.
 */
template <typename Scalar>
class BasicMdp {
public:
    using StateBlock = BasicStateBlock<Scalar>;

    /// Validates and builds an instance. Throws ValidationError naming `gamma`, `C` or `P[s][a]`.
    static BasicMdp create(Scalar gamma, Matrix<Scalar> cost, std::vector<Matrix<Scalar>> trans) {
        validate_discount(gamma);
        const Index S = cost.rows();
        const Index A = cost.cols();
        if (S <= 0) throw ValidationError("S", "need at least one state");
        if (A <= 0) throw ValidationError("A", "need at least one action");
        if (!cost.allFinite()) throw ValidationError("C", "non-finite cost");
        if (Index(trans.size()) != S)
            throw ValidationError("P", "expected " + std::to_string(S) + " state blocks, got " +
                                           std::to_string(trans.size()));
        for (Index s = 0; s < S; ++s) validate_block(trans[s], S, A, s, indexed("P", s));
        BasicMdp m;
        m.gamma_ = gamma;
        m.cost_ = std::move(cost);
        m.trans_ = std::move(trans);
        return m;
    }

    static BasicMdp from_blocks(Scalar gamma, const std::vector<StateBlock>& blocks) {
        if (blocks.empty()) throw ValidationError("S", "need at least one state");
        const Index S = Index(blocks.size());
        const Index A = blocks.front().cost.size();
        Matrix<Scalar> cost(S, A);
        std::vector<Matrix<Scalar>> trans;
        trans.reserve(blocks.size());
        for (Index s = 0; s < S; ++s) {
            if (blocks[s].cost.size() != A) throw ValidationError(indexed("C", s), "action count mismatch");
            cost.row(s) = blocks[s].cost.transpose();
            trans.push_back(blocks[s].trans);
        }
        return create(gamma, std::move(cost), std::move(trans));
    }

    static void validate_discount(Scalar gamma) {
        if (!(gamma > Scalar(0) && gamma < Scalar(1)))
            throw ValidationError("gamma", "discount must lie in (0,1), got " + std::to_string(double(gamma)));
    }

    /// Checks one A x S transition block; `label` is the block's name, e.g. `P[3]`.
    static void validate_block(Matrix<Scalar>& block, Index S, Index A, Index /*state*/,
                               const std::string& label) {
        if (block.rows() != A || block.cols() != S)
            throw ValidationError(label, "expected " + std::to_string(A) + "x" + std::to_string(S) +
                                             " block, got " + std::to_string(block.rows()) + "x" +
                                             std::to_string(block.cols()));
        for (Index a = 0; a < A; ++a) {
            Vector<Scalar> row = block.row(a).transpose();
            validate_simplex(row, label + "[" + std::to_string(a) + "]");
            block.row(a) = row.transpose();
        }
    }

    Index num_states() const { return cost_.rows(); }
    Index num_actions() const { return cost_.cols(); }
    Scalar discount() const { return gamma_; }
    const Matrix<Scalar>& cost() const { return cost_; }
    const std::vector<Matrix<Scalar>>& transitions() const { return trans_; }
    const Matrix<Scalar>& transitions(Index s) const { return trans_[std::size_t(s)]; }

    StateBlock block(Index s) const { return {cost_.row(s).transpose(), trans_[std::size_t(s)]}; }

    BasicMdp with_discount(Scalar gamma) const {
        validate_discount(gamma);
        BasicMdp m = *this;
        m.gamma_ = gamma;
        return m;
    }

private:
    BasicMdp() = default;

    Scalar gamma_{};
    Matrix<Scalar> cost_;
    std::vector<Matrix<Scalar>> trans_;
};

using Mdp = BasicMdp<double>;
using StateBlock = BasicStateBlock<double>;
using Policy = MatrixXd;

template <typename Scalar>
void check_value_length(const Vector<Scalar>& v, Index S, const char* name = "V") {
    if (v.size() != S)
        throw ValidationError(name, "expected length S=" + std::to_string(S) + ", got " + std::to_string(v.size()));
    if (!v.allFinite()) throw ValidationError(name, "non-finite entry");
}

/// Validates an S x A row-stochastic policy matrix.
template <typename Scalar>
Matrix<Scalar> validated_policy(Matrix<Scalar> pi, Index S, Index A) {
    if (pi.rows() != S || pi.cols() != A)
        throw ValidationError("policy", "expected " + std::to_string(S) + "x" + std::to_string(A) + ", got " +
                                            std::to_string(pi.rows()) + "x" + std::to_string(pi.cols()));
    for (Index s = 0; s < S; ++s) {
        Vector<Scalar> row = pi.row(s).transpose();
        validate_simplex(row, indexed("policy", s));
        pi.row(s) = row.transpose();
    }
    return pi;
}

/**
 * Handle for a value operator: either the Bellman operator f or the policy
 * evaluation operator g^pi for a fixed policy. Evaluation is per state, since
 * both operators read only the parameters of the state they update.
 */
template <typename Scalar>
class BasicValueOperator {
public:
    enum class Kind { Bellman, PolicyEvaluation };

    static BasicValueOperator bellman() { return BasicValueOperator(Kind::Bellman, {}); }

    /// Rows of `pi` are validated (and renormalized within tolerance) here.
    static BasicValueOperator policy_evaluation(Matrix<Scalar> pi) {
        const Index S = pi.rows();
        const Index A = pi.cols();
        return BasicValueOperator(Kind::PolicyEvaluation, validated_policy<Scalar>(std::move(pi), S, A));
    }

    Kind kind() const { return kind_; }
    bool is_bellman() const { return kind_ == Kind::Bellman; }
    const Matrix<Scalar>& policy() const { return pi_; }
    std::string name() const { return is_bellman() ? "bellman" : "policy"; }

    /// Throws unless the handle fits an S-state, A-action model.
    void check_dimensions(Index S, Index A) const {
        if (!is_bellman() && (pi_.rows() != S || pi_.cols() != A))
            throw ValidationError("policy", "expected " + std::to_string(S) + "x" + std::to_string(A) + ", got " +
                                                std::to_string(pi_.rows()) + "x" + std::to_string(pi_.cols()));
    }

    /// h_s(V, (c_s, P_s)).
    Scalar apply_state(Index s, const Vector<Scalar>& V, const Vector<Scalar>& cost, const Matrix<Scalar>& trans,
                       Scalar gamma) const {
        if (is_bellman()) {
            const Vector<Scalar> q = cost + gamma * (trans * V);
            return q.minCoeff();
        }
        const auto pi_s = pi_.row(s);
        return pi_s.dot(cost.transpose()) + gamma * (pi_s * trans).dot(V.transpose());
    }

    Scalar apply_state(Index s, const Vector<Scalar>& V, const BasicStateBlock<Scalar>& block, Scalar gamma) const {
        return apply_state(s, V, block.cost, block.trans, gamma);
    }

    /// h(V, m) for all states.
    Vector<Scalar> apply(const Vector<Scalar>& V, const BasicMdp<Scalar>& m) const {
        check_dimensions(m.num_states(), m.num_actions());
        check_value_length(V, m.num_states());
        Vector<Scalar> out(m.num_states());
        for (Index s = 0; s < m.num_states(); ++s) {
            out(s) = apply_state(s, V, m.cost().row(s).transpose(), m.transitions(s), m.discount());
        }
        return out;
    }

private:
    BasicValueOperator(Kind kind, Matrix<Scalar> pi) : kind_(kind), pi_(std::move(pi)) {}

    Kind kind_;
    Matrix<Scalar> pi_;
};

using ValueOperator = BasicValueOperator<double>;

/// g^pi(V, C, P), coordinate-wise c_s^T pi_s + gamma (P_s pi_s)^T V.
template <typename Scalar>
Vector<Scalar> policy_eval_apply(const Vector<Scalar>& V, const Matrix<Scalar>& pi, const BasicMdp<Scalar>& m) {
    return BasicValueOperator<Scalar>::policy_evaluation(pi).apply(V, m);
}

/// f(V, C, P): per state the minimum over actions of C_sa + gamma p_sa^T V.
template <typename Scalar>
Vector<Scalar> bellman_apply(const Vector<Scalar>& V, const BasicMdp<Scalar>& m) {
    return BasicValueOperator<Scalar>::bellman().apply(V, m);
}

/// Deterministic greedy policy; ties go to the lowest action index.
template <typename Scalar>
Matrix<Scalar> greedy_policy(const Vector<Scalar>& V, const BasicMdp<Scalar>& m) {
    check_value_length(V, m.num_states());
    Matrix<Scalar> pi = Matrix<Scalar>::Zero(m.num_states(), m.num_actions());
    for (Index s = 0; s < m.num_states(); ++s) {
        const Vector<Scalar> q = m.cost().row(s).transpose() + m.discount() * (m.transitions(s) * V);
        Index best = 0;
        for (Index a = 1; a < q.size(); ++a) {
            if (q(a) < q(best)) best = a;
        }
        pi(s, best) = Scalar(1);
    }
    return pi;
}

template <typename Scalar>
struct BasicIterationResult {
    Vector<Scalar> value;
    int iterations = 0;
    Scalar residual{};
};

using IterationResult = BasicIterationResult<double>;

/// Upper bound on iterations of any residual-certified loop before we give up.
inline constexpr int kMaxIterations = 10'000'000;

/**
 * Plain value iteration with the contraction certificate
 * ||V^k - V*|| <= gamma/(1-gamma) ||V^k - V^{k-1}||. Stops as soon as that bound
 * drops below `eps`.
 */
template <typename Scalar>
BasicIterationResult<Scalar> value_iteration(const BasicMdp<Scalar>& m, const BasicValueOperator<Scalar>& op,
                                             Vector<Scalar> V0, Scalar eps) {
    if (!(eps > Scalar(0))) throw ValidationError("eps", "tolerance must be positive");
    check_value_length(V0, m.num_states(), "V0");
    const Scalar gamma = m.discount();
    const Scalar ratio = gamma / (Scalar(1) - gamma);
    BasicIterationResult<Scalar> out;
    out.value = std::move(V0);
    Scalar residual = eps / ratio;
    for (bool first = true; first || ratio * residual >= eps; first = false) {
        if (out.iterations >= kMaxIterations) throw std::runtime_error("value_iteration: iteration limit reached");
        Vector<Scalar> next = op.apply(out.value, m);
        residual = sup_distance(next, out.value);
        out.value = std::move(next);
        ++out.iterations;
    }
    out.residual = residual;
    return out;
}

template <typename Scalar>
BasicIterationResult<Scalar> value_iteration(const BasicMdp<Scalar>& m, const BasicValueOperator<Scalar>& op,
                                             Scalar eps) {
    return value_iteration(m, op, Vector<Scalar>::Zero(m.num_states()).eval(), eps);
}

/// Exact fixed point of g^pi by solving (I - gamma P^pi) V = c^pi.
template <typename Scalar>
Vector<Scalar> policy_value(const BasicMdp<Scalar>& m, const Matrix<Scalar>& policy) {
    const Matrix<Scalar> pi = validated_policy<Scalar>(policy, m.num_states(), m.num_actions());
    const Index S = m.num_states();
    Matrix<Scalar> system = Matrix<Scalar>::Identity(S, S);
    Vector<Scalar> rhs(S);
    for (Index s = 0; s < S; ++s) {
        rhs(s) = pi.row(s).dot(m.cost().row(s));
        system.row(s) -= m.discount() * (pi.row(s) * m.transitions(s));
    }
    return system.partialPivLu().solve(rhs);
}

/**
 * Distance between two parameter instances used by the Lipschitz bound
 * |f(V,m) - f(V,m')| <= max(1, gamma ||V||) d(m, m'):
 * the cost sup-norm plus the largest L1 distance between matching transition rows.
 */
template <typename Scalar>
Scalar parameter_distance(const BasicMdp<Scalar>& a, const BasicMdp<Scalar>& b) {
    Scalar cost_gap = (a.cost() - b.cost()).cwiseAbs().maxCoeff();
    Scalar trans_gap = 0;
    for (Index s = 0; s < a.num_states(); ++s) {
        trans_gap = std::max<Scalar>(
            trans_gap, (a.transitions(s) - b.transitions(s)).cwiseAbs().rowwise().sum().maxCoeff());
    }
    return cost_gap + trans_gap;
}

} // namespace setmdp
