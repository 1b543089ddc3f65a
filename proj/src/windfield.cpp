#include "setmdp/windfield.hpp"

#include "setmdp/random.hpp"

#include <cmath>

namespace setmdp {

std::string to_string(WindRegion region) {
    switch (region) {
    case WindRegion::Calm:
        return "calm";
    case WindRegion::Gusty:
        return "gusty";
    case WindRegion::Unreliable:
        return "unreliable";
    }
    return "unknown";
}

const std::array<const char*, kWindActions>& wind_action_names() {
    static const std::array<const char*, kWindActions> names = {"stay", "E", "NE", "N", "NW", "W", "SW", "S", "SE"};
    return names;
}

WindRegion wind_region(Index i, Index j, Index width, Index height) {
    if (3 * i < width || 3 * i >= 2 * width) return WindRegion::Calm;
    if (3 * j >= height && 3 * j < 2 * height) return WindRegion::Gusty;
    return WindRegion::Unreliable;
}

namespace {

struct Grid {
    Index width;
    Index height;

    bool inside(Index i, Index j) const { return i >= 0 && i < width && j >= 0 && j < height; }
    Index state(Index i, Index j) const { return i * height + j; }

    /// Uniform over the on-grid cells of `cells`; a self-loop if none remain.
    VectorXd uniform(const std::vector<std::array<Index, 2>>& cells, Index self) const {
        VectorXd row = VectorXd::Zero(width * height);
        int kept = 0;
        for (const auto& c : cells) kept += inside(c[0], c[1]) ? 1 : 0;
        if (kept == 0) {
            row(self) = 1;
            return row;
        }
        for (const auto& c : cells) {
            if (inside(c[0], c[1])) row(state(c[0], c[1])) += 1.0 / kept;
        }
        return row;
    }
};

void validate(const WindConfig& c) {
    if (c.width < 2) throw ValidationError("width", "grid must be at least 2x2");
    if (c.height < 2) throw ValidationError("height", "grid must be at least 2x2");
    const Index tx = c.target_x < 0 ? c.width - 1 : c.target_x;
    const Index ty = c.target_y < 0 ? c.height - 1 : c.target_y;
    if (tx >= c.width) throw ValidationError("target_x", "outside the grid");
    if (ty >= c.height) throw ValidationError("target_y", "outside the grid");
    if (!(c.thrust_cost >= 0) || !std::isfinite(c.thrust_cost))
        throw ValidationError("thrust_cost", "must be finite and non-negative");
    Mdp::validate_discount(c.gamma);
}

} // namespace

WindScenario build_scenario(const WindConfig& input) {
    validate(input);
    WindConfig config = input;
    if (config.target_x < 0) config.target_x = config.width - 1;
    if (config.target_y < 0) config.target_y = config.height - 1;

    const Grid grid{config.width, config.height};
    const Index S = config.width * config.height;
    const Index A = kWindActions;
    const Index dy = config.up == WindUp::North ? 1 : -1;

    std::vector<std::vector<StateBlock>> states(static_cast<std::size_t>(S));
    std::vector<StateBlock> blocks1;
    std::vector<StateBlock> blocks2;
    std::vector<WindRegion> regions(static_cast<std::size_t>(S));
    std::vector<Index> unreliable;

    for (Index i = 0; i < config.width; ++i) {
        for (Index j = 0; j < config.height; ++j) {
            const Index s = grid.state(i, j);
            const WindRegion region = wind_region(i, j, config.width, config.height);
            regions[std::size_t(s)] = region;
            const double distance = std::hypot(double(i - config.target_x), double(j - config.target_y));

            StateBlock p1{VectorXd(A), MatrixXd(A, S)};
            StateBlock p2{VectorXd(A), MatrixXd(A, S)};
            for (Index a = 0; a < A; ++a) {
                const auto& move = kWindMoves[std::size_t(a)];
                p1.cost(a) = distance + (a == 0 ? 0.0 : config.thrust_cost);
                VectorXd row1;
                VectorXd row2;
                switch (region) {
                case WindRegion::Calm: {
                    std::vector<std::array<Index, 2>> cells;
                    if (a == 0) {
                        cells.push_back({i, j});
                    } else {
                        for (int d : {-1, 0, 1}) {
                            const auto& m = kWindMoves[std::size_t(1 + (a - 1 + d + 8) % 8)];
                            cells.push_back({i + m[0], j + m[1]});
                        }
                    }
                    row1 = row2 = grid.uniform(cells, s);
                    break;
                }
                case WindRegion::Gusty: {
                    std::vector<std::array<Index, 2>> cells;
                    for (int k = 1; k < kWindActions; ++k)
                        cells.push_back({i + kWindMoves[std::size_t(k)][0], j + kWindMoves[std::size_t(k)][1]});
                    row1 = row2 = grid.uniform(cells, s);
                    break;
                }
                case WindRegion::Unreliable:
                    row1 = grid.uniform({{i + move[0], j + move[1]}}, s);
                    row2 = grid.uniform({{i, j + dy}, {i + 1, j + dy}}, s);
                    break;
                }
                p1.trans.row(a) = row1.transpose();
                p2.trans.row(a) = row2.transpose();
            }
            p2.cost = p1.cost;
            blocks1.push_back(p1);
            blocks2.push_back(p2);
            if (region == WindRegion::Unreliable) {
                unreliable.push_back(s);
                states[std::size_t(s)] = {p1, p2};
            } else {
                states[std::size_t(s)] = {p1};
            }
        }
    }

    return WindScenario{config,
                        std::move(regions),
                        std::move(unreliable),
                        ParamSet::s_rect_finite(config.gamma, std::move(states)),
                        Mdp::from_blocks(config.gamma, blocks1),
                        Mdp::from_blocks(config.gamma, blocks2)};
}

WindScenario shrink(const WindConfig& config, Index width, Index height) {
    if (width < 2 || height < 2) throw ValidationError("shrink", "grid must be at least 2x2");
    WindConfig small = config;
    small.width = width;
    small.height = height;
    small.target_x = -1;
    small.target_y = -1;
    return build_scenario(small);
}

SampledWindResult sampled_wind_demo(const WindConfig& input, int models, int samples, int tracked,
                                    std::uint64_t seed, double eps) {
    if (models < 1) throw ValidationError("models", "need at least one model");
    if (samples < 1) throw ValidationError("samples", "need at least one sample");
    const WindScenario base = build_scenario(input);
    const WindConfig& config = base.config;
    const Grid grid{config.width, config.height};
    const Index S = base.num_states();
    const Index A = kWindActions;
    const double flip = config.up == WindUp::North ? 1.0 : -1.0;
    const double pi = std::acos(-1.0);

    Rng pick(seed, 1);
    SampledWindResult out;
    const int count = std::max(1, std::min<int>(tracked, int(S)));
    std::vector<bool> used(std::size_t(S), false);
    while (int(out.states.size()) < count) {
        const Index s = Index(pick.below(std::uint64_t(S)));
        if (!used[std::size_t(s)]) {
            used[std::size_t(s)] = true;
            out.states.push_back(s);
        }
    }

    for (int model = 0; model < models; ++model) {
        Rng rng(seed, std::uint64_t(model) + 2);
        std::vector<MatrixXd> trans(std::size_t(S), MatrixXd::Zero(A, S));
        for (Index i = 0; i < config.width; ++i) {
            for (Index j = 0; j < config.height; ++j) {
                const Index s = grid.state(i, j);
                const WindRegion region = base.regions[std::size_t(s)];
                for (int n = 0; n < samples; ++n) {
                    double magnitude = 0;
                    double angle = 0;
                    switch (region) {
                    case WindRegion::Calm:
                        magnitude = rng.uniform(0.0, 0.5);
                        angle = rng.uniform(0.0, 2 * pi);
                        break;
                    case WindRegion::Gusty:
                        magnitude = 1;
                        angle = rng.uniform(0.0, 2 * pi);
                        break;
                    case WindRegion::Unreliable:
                        magnitude = rng.below(2) == 0 ? 0.0 : 1.0;
                        angle = rng.uniform(pi / 4, pi / 2);
                        break;
                    }
                    const double wx = magnitude * std::cos(angle);
                    const double wy = flip * magnitude * std::sin(angle);
                    for (Index a = 0; a < A; ++a) {
                        const auto& m = kWindMoves[std::size_t(a)];
                        const double norm = a == 0 ? 1.0 : std::hypot(double(m[0]), double(m[1]));
                        const Index ni = i + Index(std::lround(wx + m[0] / norm));
                        const Index nj = j + Index(std::lround(wy + m[1] / norm));
                        if (grid.inside(ni, nj)) trans[std::size_t(s)](a, grid.state(ni, nj)) += 1;
                    }
                }
                for (Index a = 0; a < A; ++a) {
                    auto row = trans[std::size_t(s)].row(a);
                    const double hits = row.sum();
                    if (hits == 0)
                        row(s) = 1;
                    else
                        row /= hits;
                }
            }
        }
        const Mdp mdp = Mdp::create(config.gamma, base.trend1.cost(), std::move(trans));
        const auto solved = value_iteration(mdp, ValueOperator::bellman(), eps);
        std::vector<double> row;
        for (Index s : out.states) row.push_back(solved.value(s));
        out.values.push_back(std::move(row));
    }
    return out;
}

} // namespace setmdp
