#include "setmdp/uncertainty.hpp"

#include <algorithm>
#include <limits>

namespace setmdp {

std::string to_string(ParamSetKind kind) {
    switch (kind) {
    case ParamSetKind::FiniteGlobal:
        return "finite";
    case ParamSetKind::SRectFinite:
        return "s_rect_finite";
    case ParamSetKind::SRectMixture:
        return "s_rect_mixture";
    }
    return "unknown";
}

bool blocks_equal(const StateBlock& a, const StateBlock& b, double tol) {
    if (a.cost.size() != b.cost.size() || a.trans.rows() != b.trans.rows() || a.trans.cols() != b.trans.cols())
        return false;
    return (a.cost - b.cost).cwiseAbs().maxCoeff() <= tol && (a.trans - b.trans).cwiseAbs().maxCoeff() <= tol;
}

namespace {

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) return std::numeric_limits<std::uint64_t>::max();
    return a * b;
}

std::vector<StateBlock> dedupe(const std::vector<StateBlock>& blocks) {
    std::vector<StateBlock> out;
    for (const auto& b : blocks) {
        bool seen = false;
        for (const auto& o : out) {
            if (blocks_equal(b, o)) {
                seen = true;
                break;
            }
        }
        if (!seen) out.push_back(b);
    }
    return out;
}

// Number of distinct (cost[a], trans.row(a)) pairs among `blocks`.
std::size_t distinct_action_components(const std::vector<StateBlock>& blocks, Index a) {
    std::vector<std::size_t> reps;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        bool seen = false;
        for (std::size_t r : reps) {
            if (std::abs(blocks[i].cost(a) - blocks[r].cost(a)) <= kBlockTolerance &&
                (blocks[i].trans.row(a) - blocks[r].trans.row(a)).cwiseAbs().maxCoeff() <= kBlockTolerance) {
                seen = true;
                break;
            }
        }
        if (!seen) reps.push_back(i);
    }
    return reps.size();
}

std::size_t distinct_elements(const ParamSet& ps) {
    std::vector<Index> reps;
    for (Index n = 0; n < ps.candidate_count(0); ++n) {
        bool seen = false;
        for (Index r : reps) {
            bool same = true;
            for (Index s = 0; s < ps.num_states() && same; ++s)
                same = blocks_equal(ps.candidates(s)[std::size_t(n)], ps.candidates(s)[std::size_t(r)]);
            if (same) {
                seen = true;
                break;
            }
        }
        if (!seen) reps.push_back(n);
    }
    return reps.size();
}

} // namespace

ParamSet ParamSet::build(ParamSetKind kind, double gamma, std::vector<std::vector<StateBlock>> states,
                         const std::string& root) {
    Mdp::validate_discount(gamma);
    if (states.empty()) throw ValidationError("S", "need at least one state");
    const Index S = Index(states.size());
    if (states.front().empty()) throw ValidationError(indexed(root, 0), "empty parameter list");
    const Index A = states.front().front().cost.size();
    if (A <= 0) throw ValidationError("A", "need at least one action");
    for (Index s = 0; s < S; ++s) {
        auto& list = states[std::size_t(s)];
        if (list.empty()) throw ValidationError(indexed(root, s), "empty parameter list");
        for (std::size_t i = 0; i < list.size(); ++i) {
            const std::string label = indexed(root, s, Index(i));
            auto& block = list[i];
            if (block.cost.size() != A) throw ValidationError(label + ".c", "expected " + std::to_string(A) + " costs");
            if (!block.cost.allFinite()) throw ValidationError(label + ".c", "non-finite cost");
            Mdp::validate_block(block.trans, S, A, s, label + ".P");
        }
    }
    ParamSet ps;
    ps.kind_ = kind;
    ps.gamma_ = gamma;
    ps.actions_ = A;
    ps.states_ = std::move(states);
    return ps;
}

ParamSet ParamSet::finite_global(std::vector<Mdp> elements) {
    if (elements.empty()) throw ValidationError("elements", "need at least one element");
    const Mdp& first = elements.front();
    const Index S = first.num_states();
    const Index A = first.num_actions();
    std::vector<std::vector<StateBlock>> states(static_cast<std::size_t>(S));
    for (std::size_t n = 0; n < elements.size(); ++n) {
        const Mdp& m = elements[n];
        const std::string label = indexed("elements", Index(n));
        if (m.num_states() != S) throw ValidationError(label + ".S", "state count mismatch");
        if (m.num_actions() != A) throw ValidationError(label + ".A", "action count mismatch");
        if (m.discount() != first.discount()) throw ValidationError(label + ".gamma", "discount mismatch");
        for (Index s = 0; s < S; ++s) states[std::size_t(s)].push_back(m.block(s));
    }
    ParamSet ps;
    ps.kind_ = ParamSetKind::FiniteGlobal;
    ps.gamma_ = first.discount();
    ps.actions_ = A;
    ps.states_ = std::move(states);
    return ps;
}

ParamSet ParamSet::s_rect_finite(double gamma, std::vector<std::vector<StateBlock>> states) {
    return build(ParamSetKind::SRectFinite, gamma, std::move(states), "states");
}

ParamSet ParamSet::s_rect_mixture(double gamma, std::vector<std::vector<StateBlock>> states) {
    return build(ParamSetKind::SRectMixture, gamma, std::move(states), "states");
}

ParamSet ParamSet::singleton(const Mdp& m) { return finite_global({m}); }

std::uint64_t ParamSet::member_count() const {
    if (coupled()) return std::uint64_t(states_.front().size());
    std::uint64_t total = 1;
    for (const auto& list : states_) total = saturating_mul(total, list.size());
    return total;
}

Selection ParamSet::member(std::uint64_t index) const {
    if (index >= member_count()) throw ValidationError("member", "index out of range");
    if (coupled()) return Selection(states_.size(), Index(index));
    Selection sel(states_.size(), 0);
    for (std::size_t s = states_.size(); s-- > 0;) {
        const std::uint64_t radix = states_[s].size();
        sel[s] = Index(index % radix);
        index /= radix;
    }
    return sel;
}

bool ParamSet::valid_selection(const Selection& sel) const {
    if (sel.size() != states_.size()) return false;
    for (std::size_t s = 0; s < sel.size(); ++s) {
        if (sel[s] < 0 || sel[s] >= Index(states_[s].size())) return false;
        if (coupled() && sel[s] != sel[0]) return false;
    }
    return true;
}

Mdp ParamSet::element(Index n) const {
    if (!coupled()) throw UnsupportedError("element() is defined for finite sets only");
    return assemble(Selection(states_.size(), n));
}

Mdp ParamSet::assemble(const Selection& sel) const {
    if (!valid_selection(sel)) throw ValidationError("selection", "not a member of the parameter set");
    std::vector<StateBlock> blocks;
    blocks.reserve(states_.size());
    for (std::size_t s = 0; s < sel.size(); ++s) blocks.push_back(states_[s][std::size_t(sel[s])]);
    return Mdp::from_blocks(gamma_, blocks);
}

VectorXd ParamSet::apply(const ValueOperator& op, const VectorXd& V, const Selection& sel) const {
    op.check_dimensions(num_states(), num_actions());
    check_value_length(V, num_states());
    if (!valid_selection(sel)) throw ValidationError("selection", "not a member of the parameter set");
    VectorXd out(num_states());
    for (Index s = 0; s < num_states(); ++s) out(s) = op.apply_state(s, V, candidates(s)[std::size_t(sel[s])], gamma_);
    return out;
}

ParamSet ParamSet::with_discount(double gamma) const {
    Mdp::validate_discount(gamma);
    ParamSet ps = *this;
    ps.gamma_ = gamma;
    return ps;
}

ParamSet ParamSet::rectangular_projection() const {
    ParamSet ps = *this;
    ps.kind_ = kind_ == ParamSetKind::SRectMixture ? kind_ : ParamSetKind::SRectFinite;
    for (auto& list : ps.states_) list = dedupe(list);
    return ps;
}

ParamSet ParamSet::convex_hull() const {
    ParamSet ps = rectangular_projection();
    ps.kind_ = ParamSetKind::SRectMixture;
    return ps;
}

bool is_s_rectangular(const ParamSet& ps) {
    if (!ps.coupled()) return true;
    const std::size_t elements = distinct_elements(ps);
    std::uint64_t product = 1;
    for (Index s = 0; s < ps.num_states(); ++s) {
        product = saturating_mul(product, dedupe(ps.candidates(s)).size());
        if (product > elements) return false;
    }
    return product == elements;
}

bool is_sa_rectangular(const ParamSet& ps) {
    if (ps.coupled()) {
        const std::size_t elements = distinct_elements(ps);
        std::uint64_t product = 1;
        for (Index s = 0; s < ps.num_states(); ++s) {
            for (Index a = 0; a < ps.num_actions(); ++a) {
                product = saturating_mul(product, distinct_action_components(ps.candidates(s), a));
                if (product > elements) return false;
            }
        }
        return product == elements;
    }
    for (Index s = 0; s < ps.num_states(); ++s) {
        const auto blocks = dedupe(ps.candidates(s));
        std::uint64_t product = 1;
        for (Index a = 0; a < ps.num_actions() && product <= blocks.size(); ++a)
            product = saturating_mul(product, distinct_action_components(blocks, a));
        if (product != blocks.size()) return false;
    }
    return true;
}

bool ContainmentProbeReport::min_nonempty() const {
    return std::all_of(probes.begin(), probes.end(), [](const ProbeVerdict& v) { return v.min_nonempty; });
}

bool ContainmentProbeReport::max_nonempty() const {
    return std::all_of(probes.begin(), probes.end(), [](const ProbeVerdict& v) { return v.max_nonempty; });
}

namespace {

// Per-state flags marking candidates within slack of the optimum in the given direction.
std::vector<std::vector<bool>> near_optimal(const ParamSet& ps, const ValueOperator& op, const VectorXd& V,
                                            double tau, bool maximize) {
    std::vector<std::vector<bool>> flags(std::size_t(ps.num_states()));
    for (Index s = 0; s < ps.num_states(); ++s) {
        const auto& list = ps.candidates(s);
        std::vector<double> values(list.size());
        for (std::size_t i = 0; i < list.size(); ++i) values[i] = op.apply_state(s, V, list[i], ps.discount());
        const double best = maximize ? *std::max_element(values.begin(), values.end())
                                     : *std::min_element(values.begin(), values.end());
        const double slack = tau * std::max(1.0, std::abs(best));
        auto& f = flags[std::size_t(s)];
        f.resize(list.size());
        for (std::size_t i = 0; i < list.size(); ++i)
            f[i] = maximize ? values[i] >= best - slack : values[i] <= best + slack;
    }
    return flags;
}

std::optional<Selection> common_member(const ParamSet& ps, const std::vector<std::vector<bool>>& flags) {
    const std::size_t S = flags.size();
    if (ps.coupled()) {
        for (std::size_t n = 0; n < flags.front().size(); ++n) {
            bool all = true;
            for (std::size_t s = 0; s < S && all; ++s) all = flags[s][n];
            if (all) return Selection(S, Index(n));
        }
        return std::nullopt;
    }
    Selection sel(S);
    for (std::size_t s = 0; s < S; ++s) {
        const auto it = std::find(flags[s].begin(), flags[s].end(), true);
        sel[s] = Index(it - flags[s].begin());
    }
    return sel;
}

} // namespace

ContainmentProbeReport probe_containment(const ParamSet& ps, const ValueOperator& op,
                                         const std::vector<VectorXd>& probes, double tau, bool allow_vertices) {
    if (!(tau > 0)) throw ValidationError("tau", "slack must be positive");
    if (!ps.enumerable() && !allow_vertices)
        throw UnsupportedError("probe_containment: s_rect_mixture sets can only be probed on vertices");
    op.check_dimensions(ps.num_states(), ps.num_actions());
    ContainmentProbeReport report;
    report.tau = tau;
    report.vertices_only = !ps.enumerable();
    for (const VectorXd& V : probes) {
        check_value_length(V, ps.num_states(), "probe");
        ProbeVerdict verdict;
        verdict.probe = V;
        verdict.min_witness = common_member(ps, near_optimal(ps, op, V, tau, false));
        verdict.max_witness = common_member(ps, near_optimal(ps, op, V, tau, true));
        verdict.min_nonempty = verdict.min_witness.has_value();
        verdict.max_nonempty = verdict.max_witness.has_value();
        report.probes.push_back(std::move(verdict));
    }
    return report;
}

} // namespace setmdp
