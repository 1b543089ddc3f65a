#pragma once

#include "setmdp/mdp.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace setmdp {

enum class ParamSetKind { FiniteGlobal, SRectFinite, SRectMixture };

std::string to_string(ParamSetKind kind);

/// Per-state parameter choice: `selection[s]` indexes `ParamSet::candidates(s)`.
using Selection = std::vector<Index>;

/// Tolerance for structural equality of parameter blocks.
inline constexpr double kBlockTolerance = 1e-9;

bool blocks_equal(const StateBlock& a, const StateBlock& b, double tol = kBlockTolerance);

/**
 * A compact set of MDP parameters sharing S, A and the discount.
 *
 * Every variant is stored as per-state candidate lists. For FiniteGlobal the
 * lists all have N entries and are coupled: element n uses candidate n at every
 * state. For the s-rectangular variants any per-state combination is a member;
 * SRectMixture additionally includes the convex hull of each state's list.
 */
class ParamSet {
public:
    static ParamSet finite_global(std::vector<Mdp> elements);
    static ParamSet s_rect_finite(double gamma, std::vector<std::vector<StateBlock>> states);
    static ParamSet s_rect_mixture(double gamma, std::vector<std::vector<StateBlock>> states);
    static ParamSet singleton(const Mdp& m);

    ParamSetKind kind() const { return kind_; }
    Index num_states() const { return Index(states_.size()); }
    Index num_actions() const { return actions_; }
    double discount() const { return gamma_; }
    bool coupled() const { return kind_ == ParamSetKind::FiniteGlobal; }
    bool enumerable() const { return kind_ != ParamSetKind::SRectMixture; }

    const std::vector<StateBlock>& candidates(Index s) const { return states_[std::size_t(s)]; }
    Index candidate_count(Index s) const { return Index(states_[std::size_t(s)].size()); }

    /// Number of global members (saturates at UINT64_MAX). For mixtures: vertex combinations.
    std::uint64_t member_count() const;
    /// Decodes a member index; for s-rectangular sets state S-1 varies fastest.
    Selection member(std::uint64_t index) const;
    bool valid_selection(const Selection& sel) const;

    /// Element n of a FiniteGlobal set.
    Mdp element(Index n) const;
    Mdp assemble(const Selection& sel) const;

    /// h(V, m) for the member picked by `sel`, without materializing an Mdp.
    VectorXd apply(const ValueOperator& op, const VectorXd& V, const Selection& sel) const;

    ParamSet with_discount(double gamma) const;
    /// Per-state projections with duplicates removed, as an SRectFinite set.
    ParamSet rectangular_projection() const;
    /// The same per-state lists read as mixture vertices (convex hull of the s-rectangular closure).
    ParamSet convex_hull() const;

private:
    ParamSet() = default;
    static ParamSet build(ParamSetKind kind, double gamma, std::vector<std::vector<StateBlock>> states,
                          const std::string& root);

    ParamSetKind kind_ = ParamSetKind::FiniteGlobal;
    double gamma_ = 0;
    Index actions_ = 0;
    std::vector<std::vector<StateBlock>> states_;
};

bool is_s_rectangular(const ParamSet& ps);
bool is_sa_rectangular(const ParamSet& ps);

struct ProbeVerdict {
    VectorXd probe;
    bool min_nonempty = false;
    bool max_nonempty = false;
    std::optional<Selection> min_witness;
    std::optional<Selection> max_witness;
};

/**
 * Result of a sampled containment probe. A positive verdict is necessary for the
 * containment condition at that point, not a proof of it.
 */
struct ContainmentProbeReport {
    std::vector<ProbeVerdict> probes;
    double tau = 0;
    bool vertices_only = false;

    bool min_nonempty() const;
    bool max_nonempty() const;
};

inline constexpr double kDefaultProbeTau = 1e-7;

/**
 * For each probe V, finds per-state argmin/argmax sets of h_s(V, m) within a
 * relative slack `tau` and checks whether they share a member. Mixture sets are
 * probed on their vertices only and need `allow_vertices`.
 */
ContainmentProbeReport probe_containment(const ParamSet& ps, const ValueOperator& op,
                                         const std::vector<VectorXd>& probes, double tau = kDefaultProbeTau,
                                         bool allow_vertices = false);

} // namespace setmdp
