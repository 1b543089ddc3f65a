#include "setmdp/set_ops.hpp"

#include "setmdp/game.hpp"
#include "setmdp/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace setmdp {

namespace {

bool lex_less(const VectorXd& a, const VectorXd& b) {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

void sort_unique(std::vector<VectorXd>& points) {
    std::sort(points.begin(), points.end(), lex_less);
    points.erase(std::unique(points.begin(), points.end(), [](const VectorXd& a, const VectorXd& b) { return a == b; }),
                 points.end());
}

} // namespace

ValueSetParticles::ValueSetParticles(std::vector<VectorXd> points, std::size_t cap, bool exact)
    : points_(std::move(points)), cap_(cap), exact_(exact) {
    if (points_.empty()) throw ValidationError("particles", "need at least one particle");
    const Index S = points_.front().size();
    if (S <= 0) throw ValidationError("particles", "empty value vector");
    if (cap_ < std::size_t(2 * S))
        throw ValidationError("cap", "cap " + std::to_string(cap_) + " cannot retain the " + std::to_string(2 * S) +
                                         " envelope witnesses");
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (points_[i].size() != S) throw ValidationError(indexed("particles", Index(i)), "dimension mismatch");
        if (!points_[i].allFinite()) throw ValidationError(indexed("particles", Index(i)), "non-finite entry");
    }
    lower_ = points_.front();
    upper_ = points_.front();
    for (const auto& p : points_) {
        lower_ = lower_.cwiseMin(p);
        upper_ = upper_.cwiseMax(p);
    }
    if (points_.size() > cap_) thin();
}

ValueSetParticles ValueSetParticles::singleton(VectorXd v, std::size_t cap) {
    return ValueSetParticles({std::move(v)}, cap);
}

void ValueSetParticles::thin() {
    const std::size_t n = points_.size();
    const Index S = dimension();
    std::vector<bool> chosen(n, false);
    std::vector<std::size_t> picked;
    for (Index s = 0; s < S; ++s) {
        std::size_t lo = 0;
        std::size_t hi = 0;
        for (std::size_t i = 1; i < n; ++i) {
            if (points_[i](s) < points_[lo](s)) lo = i;
            if (points_[i](s) > points_[hi](s)) hi = i;
        }
        for (std::size_t w : {lo, hi}) {
            if (!chosen[w]) {
                chosen[w] = true;
                picked.push_back(w);
            }
        }
    }
    std::vector<double> dist(n, std::numeric_limits<double>::infinity());
    auto absorb = [&](std::size_t w) {
        for (std::size_t i = 0; i < n; ++i) dist[i] = std::min(dist[i], sup_distance(points_[i], points_[w]));
    };
    for (std::size_t w : picked) absorb(w);
    while (picked.size() < cap_) {
        std::size_t far = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (!chosen[i] && (far == n || dist[i] > dist[far])) far = i;
        }
        if (far == n) break;
        chosen[far] = true;
        picked.push_back(far);
        absorb(far);
    }
    std::vector<VectorXd> kept;
    kept.reserve(picked.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (chosen[i]) kept.push_back(std::move(points_[i]));
    }
    points_ = std::move(kept);
    exact_ = false;
}

double point_to_set_distance(const VectorXd& W, const ValueSetParticles& set) {
    check_value_length(W, set.dimension(), "W");
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : set.particles()) best = std::min(best, sup_distance(W, p));
    return best;
}

namespace {

double directed_distance(const ValueSetParticles& from, const ValueSetParticles& to) {
    double worst = 0;
    for (const auto& p : from.particles()) worst = std::max(worst, point_to_set_distance(p, to));
    return worst;
}

} // namespace

double hausdorff_distance(const ValueSetParticles& a, const ValueSetParticles& b) {
    if (a.dimension() != b.dimension()) throw ValidationError("particles", "dimension mismatch");
    return std::max(directed_distance(a, b), directed_distance(b, a));
}

namespace {

// Distinct values h_s(V, c) over the candidates of each state, sorted ascending.
std::vector<std::vector<double>> state_images(const ParamSet& ps, const ValueOperator& op, const VectorXd& V) {
    std::vector<std::vector<double>> out(std::size_t(ps.num_states()));
    for (Index s = 0; s < ps.num_states(); ++s) {
        auto& vals = out[std::size_t(s)];
        for (const auto& block : ps.candidates(s)) vals.push_back(op.apply_state(s, V, block, ps.discount()));
        std::sort(vals.begin(), vals.end());
        vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    }
    return out;
}

std::uint64_t product_size(const std::vector<std::vector<double>>& lists) {
    std::uint64_t total = 1;
    for (const auto& l : lists) {
        if (total > std::numeric_limits<std::uint64_t>::max() / l.size()) return std::numeric_limits<std::uint64_t>::max();
        total *= l.size();
    }
    return total;
}

void enumerate_product(const std::vector<std::vector<double>>& lists, std::vector<VectorXd>& out) {
    const std::size_t S = lists.size();
    std::vector<std::size_t> digit(S, 0);
    VectorXd v(static_cast<Index>(S));
    for (;;) {
        for (std::size_t s = 0; s < S; ++s) v(Index(s)) = lists[s][digit[s]];
        out.push_back(v);
        std::size_t s = S;
        while (s-- > 0) {
            if (++digit[s] < lists[s].size()) break;
            digit[s] = 0;
        }
        if (s == std::size_t(-1)) return;
    }
}

} // namespace

ValueSetParticles set_operator_apply(const ValueSetParticles& particles, const ParamSet& ps,
                                     const ValueOperator& op, const SetOperatorOptions& options) {
    op.check_dimensions(ps.num_states(), ps.num_actions());
    if (particles.dimension() != ps.num_states())
        throw ValidationError("particles", "dimension does not match the parameter set");

    const std::size_t n = particles.size();
    bool exact = particles.exact() && ps.enumerable();
    std::vector<VectorXd> images;

    if (ps.coupled()) {
        const std::uint64_t members = ps.member_count();
        const bool sample = std::uint64_t(n) * members > options.enumeration_limit;
        const std::uint64_t budget = sample ? std::max<std::uint64_t>(1, options.enumeration_limit / n) : members;
        Rng rng(options.seed);
        for (const auto& V : particles.particles()) {
            if (!sample) {
                for (std::uint64_t m = 0; m < members; ++m) images.push_back(ps.apply(op, V, ps.member(m)));
                continue;
            }
            for (std::uint64_t b = 0; b < budget; ++b) images.push_back(ps.apply(op, V, ps.member(rng.below(members))));
        }
        exact = exact && !sample;
    } else {
        std::vector<std::vector<std::vector<double>>> per_particle;
        per_particle.reserve(n);
        std::uint64_t total = 0;
        for (const auto& V : particles.particles()) {
            per_particle.push_back(state_images(ps, op, V));
            const std::uint64_t size = product_size(per_particle.back());
            total = size > std::numeric_limits<std::uint64_t>::max() - total ? std::numeric_limits<std::uint64_t>::max()
                                                                             : total + size;
        }
        if (total <= options.enumeration_limit) {
            for (const auto& lists : per_particle) enumerate_product(lists, images);
        } else {
            exact = false;
            Rng rng(options.seed);
            const std::uint64_t budget = std::max<std::uint64_t>(2, options.enumeration_limit / n);
            for (const auto& lists : per_particle) {
                const Index S = Index(lists.size());
                VectorXd lo(S), hi(S);
                for (Index s = 0; s < S; ++s) {
                    lo(s) = lists[std::size_t(s)].front();
                    hi(s) = lists[std::size_t(s)].back();
                }
                images.push_back(lo);
                images.push_back(hi);
                for (std::uint64_t b = 2; b < budget; ++b) {
                    VectorXd v(S);
                    for (Index s = 0; s < S; ++s) {
                        const auto& l = lists[std::size_t(s)];
                        v(s) = l[std::size_t(rng.below(l.size()))];
                    }
                    images.push_back(std::move(v));
                }
            }
        }
    }
    sort_unique(images);
    return ValueSetParticles(std::move(images), particles.cap(), exact);
}

VectorXd bound_operator_apply(const VectorXd& V, const ParamSet& ps, const ValueOperator& op, Direction direction) {
    op.check_dimensions(ps.num_states(), ps.num_actions());
    check_value_length(V, ps.num_states());
    const double gamma = ps.discount();
    const bool game = direction == Direction::Upper && op.is_bellman() && ps.kind() == ParamSetKind::SRectMixture;
    VectorXd out(ps.num_states());
    for (Index s = 0; s < ps.num_states(); ++s) {
        const auto& list = ps.candidates(s);
        if (game) {
            MatrixXd G(ps.num_actions(), Index(list.size()));
            for (std::size_t j = 0; j < list.size(); ++j)
                G.col(Index(j)) = list[j].cost + gamma * (list[j].trans * V);
            out(s) = matrix_game_value(G).value;
            continue;
        }
        double best = op.apply_state(s, V, list.front(), gamma);
        for (std::size_t j = 1; j < list.size(); ++j) {
            const double v = op.apply_state(s, V, list[j], gamma);
            best = direction == Direction::Lower ? std::min(best, v) : std::max(best, v);
        }
        out(s) = best;
    }
    return out;
}

int EnvelopeReport::iteration_bound() const {
    const double e1 = first_step_residual;
    if (!(e1 > 0)) return 1;
    const double bound = std::ceil(std::log(eps * (1 - gamma) / e1) / std::log(gamma));
    return std::max(0, int(bound)) + 2;
}

EnvelopeReport algorithm1_envelope(const ParamSet& ps, const ValueOperator& op, const VectorXd& V0, double eps,
                                   const EnvelopeOptions& options) {
    if (!(eps > 0)) throw ValidationError("eps", "tolerance must be positive");
    op.check_dimensions(ps.num_states(), ps.num_actions());
    check_value_length(V0, ps.num_states(), "V0");

    EnvelopeReport report;
    report.eps = eps;
    report.gamma = ps.discount();
    const double ratio = report.gamma / (1 - report.gamma);
    VectorXd lo = V0;
    VectorXd hi = V0;
    double e = eps / ratio;
    double prev_scale = 0;
    if (options.keep_trace) report.trace.push_back({0, lo, hi, e});
    int k = 0;
    for (bool first = true; first || ratio * e >= eps; first = false) {
        if (k >= kMaxIterations) throw std::runtime_error("algorithm1_envelope: iteration limit reached");
        VectorXd next_lo = bound_operator_apply(lo, ps, op, Direction::Lower);
        VectorXd next_hi = bound_operator_apply(hi, ps, op, Direction::Upper);
        const double prev = e;
        e = std::max(sup_distance(next_lo, lo), sup_distance(next_hi, hi));
        const double scale = std::max({1.0, next_lo.cwiseAbs().maxCoeff(), next_hi.cwiseAbs().maxCoeff()});
        if (k >= 1) {
            const double r = prev > 0 ? e / prev : (e > 0 ? std::numeric_limits<double>::infinity() : 0.0);
            report.max_residual_ratio = std::max(report.max_residual_ratio, r);
            const double slack = kRateRoundingUlps * std::numeric_limits<double>::epsilon() * std::max(scale, prev_scale);
            if (e > (report.gamma + kRateTolerance) * prev + slack) ++report.rate_violations;
        }
        prev_scale = scale;
        lo = std::move(next_lo);
        hi = std::move(next_hi);
        if (++k == 1) report.first_step_residual = e;
        if (options.keep_trace) report.trace.push_back({k, lo, hi, e});
    }
    report.lower = std::move(lo);
    report.upper = std::move(hi);
    report.iterations = k;
    report.residual = e;
    if (options.probe)
        report.probe = probe_containment(ps, op, {report.lower, report.upper}, options.tau, !ps.enumerable());
    return report;
}

double box_distance(const VectorXd& V, const VectorXd& lo, const VectorXd& hi) {
    if (V.size() != lo.size() || V.size() != hi.size()) throw ValidationError("box", "dimension mismatch");
    return std::max({0.0, (lo - V).maxCoeff(), (V - hi).maxCoeff()});
}

} // namespace setmdp
