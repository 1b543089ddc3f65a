#pragma once

#include "setmdp/uncertainty.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace setmdp {

enum class WindRegion { Calm, Gusty, Unreliable };

std::string to_string(WindRegion region);

/// Which grid direction the unreliable wind front pushes toward: +y (North) or -y (South).
enum class WindUp { North, South };

struct WindConfig {
    Index width = 9;
    Index height = 9;
    /// Negative means the far corner (width - 1, height - 1).
    Index target_x = -1;
    Index target_y = -1;
    double gamma = 0.9;
    double thrust_cost = 0.5;
    WindUp up = WindUp::North;
};

/// Actions: stay, then E, NE, N, NW, W, SW, S, SE.
inline constexpr int kWindActions = 9;
inline constexpr std::array<std::array<int, 2>, kWindActions> kWindMoves = {{
    {0, 0}, {1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1},
}};
const std::array<const char*, kWindActions>& wind_action_names();

/**
 * Grid navigation under wind. Cell (i, j) is state i * height + j; the origin
 * (0, 0) is state 0. Calm cells move to the thrust direction or one of its two
 * 45-degree neighbours, gusty cells to any of the 8 neighbours, and unreliable
 * cells switch between a deterministic move (P1) and a push to the up and
 * up-right cells (P2). Off-grid successors are dropped and the rest renormalized.
 */
struct WindScenario {
    WindConfig config;
    std::vector<WindRegion> regions;
    std::vector<Index> unreliable;
    ParamSet params;  // SRectFinite: {P1, P2} on unreliable cells, a singleton elsewhere
    Mdp trend1;       // P1 everywhere
    Mdp trend2;       // P2 on unreliable cells

    Index num_states() const { return config.width * config.height; }
    Index state(Index i, Index j) const { return i * config.height + j; }
    Index origin() const { return 0; }
};

WindScenario build_scenario(const WindConfig& config = {});

/// The same layout rules on a smaller grid; the target moves to the new far corner.
WindScenario shrink(const WindConfig& config, Index width, Index height);

WindRegion wind_region(Index i, Index j, Index width, Index height);

struct SampledWindResult {
    std::vector<Index> states;                // the tracked states
    std::vector<std::vector<double>> values;  // values[model][k] for states[k]
};

/**
 * Builds `models` stationary MDPs from `samples` wind vectors per cell (calm:
 * magnitude U[0, 0.5], gusty: 1, unreliable: 0 or 1 with equal odds; directions
 * uniform over [0, 2 pi), or [pi/4, pi/2] in unreliable cells), adds the thrust
 * vector, rounds to the nearest cell and solves each model with Bellman iteration.
 */
SampledWindResult sampled_wind_demo(const WindConfig& config, int models, int samples, int tracked,
                                    std::uint64_t seed, double eps);

} // namespace setmdp
