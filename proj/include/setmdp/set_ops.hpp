#pragma once

#include "setmdp/uncertainty.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace setmdp {

inline constexpr std::size_t kDefaultParticleCap = 4096;
inline constexpr double kDefaultEps = 1e-6;

/**
 * Finite point cloud standing in for a compact set of value vectors, with its
 * coordinate-wise envelope. Clouds larger than `cap` are thinned by farthest-point
 * selection seeded with the 2S particles that attain the envelope, so the envelope
 * is preserved exactly.
 */
class ValueSetParticles {
public:
    explicit ValueSetParticles(std::vector<VectorXd> points, std::size_t cap = kDefaultParticleCap,
                               bool exact = true);

    static ValueSetParticles singleton(VectorXd v, std::size_t cap = kDefaultParticleCap);

    const std::vector<VectorXd>& particles() const { return points_; }
    std::size_t size() const { return points_.size(); }
    std::size_t cap() const { return cap_; }
    Index dimension() const { return lower_.size(); }
    const VectorXd& lower() const { return lower_; }
    const VectorXd& upper() const { return upper_; }
    /// False once thinning dropped points or the cloud came from sampled images.
    bool exact() const { return exact_; }

private:
    void thin();

    std::vector<VectorXd> points_;
    std::size_t cap_;
    bool exact_;
    VectorXd lower_;
    VectorXd upper_;
};

double point_to_set_distance(const VectorXd& W, const ValueSetParticles& set);
double hausdorff_distance(const ValueSetParticles& a, const ValueSetParticles& b);

struct SetOperatorOptions {
    /// Above this many image points the product is sampled instead of enumerated.
    std::uint64_t enumeration_limit = 1u << 16;
    std::uint64_t seed = 0;
};

/**
 * H(V) = { h(V, m) : V in the cloud, m in M }, thinned back to the input cap.
 * Mixture sets contribute their vertices only, and the result is flagged inexact.
 */
ValueSetParticles set_operator_apply(const ValueSetParticles& particles, const ParamSet& ps,
                                     const ValueOperator& op, const SetOperatorOptions& options = {});

enum class Direction { Lower, Upper };

/// Coordinate-wise inf (Lower) or sup (Upper) of h(V, m) over the parameter set.
VectorXd bound_operator_apply(const VectorXd& V, const ParamSet& ps, const ValueOperator& op, Direction direction);

/// Tolerance on the residual ratio test, and the rounding allowance in units of epsilon * ||V||.
inline constexpr double kRateTolerance = 1e-9;
inline constexpr double kRateRoundingUlps = 16;

struct EnvelopeStep {
    int k = 0;
    VectorXd lower;
    VectorXd upper;
    double residual = 0;
};

struct EnvelopeReport {
    VectorXd lower;
    VectorXd upper;
    int iterations = 0;
    double residual = 0;
    double eps = 0;
    double gamma = 0;
    /// e^1, the first computed residual.
    double first_step_residual = 0;
    /// Row k = 0 holds the start point and the initial residual (1 - gamma) eps / gamma.
    std::vector<EnvelopeStep> trace;
    std::optional<ContainmentProbeReport> probe;

    VectorXd box_lower() const { return lower.array() - eps; }
    VectorXd box_upper() const { return upper.array() + eps; }
    /// Largest e^{k+1} / e^k over k >= 1 (0 if fewer than two computed residuals).
    double max_residual_ratio = 0;
    /**
     * Steps k >= 1 with e^{k+1} > (gamma + 1e-9) e^k + rounding slack, where the
     * slack is kRateRoundingUlps * machine epsilon * max(1, sup norms of the iterates involved).
     */
    int rate_violations = 0;
    bool rate_certified() const { return rate_violations == 0; }
    /// ceil(log(eps (1 - gamma) / e^1) / log gamma) + 2.
    int iteration_bound() const;
};

struct EnvelopeOptions {
    bool probe = true;
    double tau = kDefaultProbeTau;
    bool keep_trace = true;
};

/**
 * Iterates V_lo <- h_lo(V_lo), V_hi <- h_hi(V_hi) from V0 until
 * gamma / (1 - gamma) * e^k < eps, where e^k is the larger sup-norm step of the two.
 */
EnvelopeReport algorithm1_envelope(const ParamSet& ps, const ValueOperator& op, const VectorXd& V0, double eps,
                                   const EnvelopeOptions& options = {});

/// Distance from V to the axis-aligned box [lo, hi] in the sup norm.
double box_distance(const VectorXd& V, const VectorXd& lo, const VectorXd& hi);

} // namespace setmdp
