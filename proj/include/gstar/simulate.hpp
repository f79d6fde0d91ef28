#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gstar/common.hpp"
#include "gstar/models.hpp"
#include "gstar/rng.hpp"

namespace gstar {

struct SimulationSpec {
    GstarModel model;
    double sigma = 1.0;
    int T = 100;
    int burn_in = 200;
    std::uint64_t seed = 0;
};

struct StationarityCheck {
    bool stable = false;
    double spectral_radius = 0.0;
};

/// Companion matrix of the VAR expansion of the model.
Eigen::MatrixXd companion_matrix(const VarModel& var);

/// Spectral-radius estimate by Gelfand iteration (||C^m v||^(1/m), m = 256,
/// maximized over 8 deterministic start vectors); stable iff < 1 - 1e-3.
StationarityCheck check_stationarity(const GstarModel& model);

/// Iterates the model forward from zero initial conditions for burn_in + T
/// steps with i.i.d. N(0, sigma^2) noise; returns the last T columns.
SpatioTemporalSeries simulate(const SimulationSpec& spec);

/// Support pattern generator for test fixtures. With prefix_structured the
/// per-location support is a random prefix of the lag-major chain order.
struct SparsityPlan {
    double density = 0.5;          // used when not prefix-structured
    double magnitude_lo = 0.2;
    double magnitude_hi = 1.0;
    bool prefix_structured = false;
    double radius_lo = 0.5;        // target spectral-radius band
    double radius_hi = 0.9;
};

/// Random sparse stable model: coefficients drawn on the planned support,
/// rescaled by bisection until the spectral-radius estimate lands in the
/// plan's band.
GstarModel random_sparse_model(int k, ModelOrder order, const SparsityPlan& plan,
                               const AdjacencyGraph& graph, std::uint64_t seed);

}  // namespace gstar
