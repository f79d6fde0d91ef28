#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "gstar/common.hpp"
#include "gstar/penalty.hpp"
#include "gstar/series.hpp"
#include "gstar/solver.hpp"
#include "gstar/weights.hpp"

namespace gstar {

/// Space-time AR model: one length-eta*p coefficient vector per location,
/// lag-major over (lag j, level l), plus the weights and scaling that fix
/// its prediction semantics.
struct GstarModel {
    std::vector<std::string> locations;
    ModelOrder order;
    std::vector<Eigen::VectorXd> coefficients;  // k vectors, length eta*p
    NeighborhoodWeights weights;
    StandardizationStats stats;
    PenaltySpec penalty;
    std::vector<FitDiagnostics> diagnostics;
    std::uint64_t adjacency_fingerprint = 0;

    int k() const { return static_cast<int>(coefficients.size()); }
    int nonzero_count(double threshold = 1e-10) const;
};

/// VAR(p) with lag matrices A_1..A_p; intercept fixed at zero.
struct VarModel {
    std::vector<std::string> locations;
    int p = 1;
    std::vector<Eigen::MatrixXd> lag_matrices;  // p dense k x k matrices
    StandardizationStats stats;

    int k() const { return lag_matrices.empty() ? 0 : static_cast<int>(lag_matrices[0].rows()); }
    int nonzero_count(double threshold = 1e-10) const;
};

/// Per-location least squares; minimum-norm solution on rank-deficient designs.
GstarModel fit_star_ols(const SpatioTemporalSeries& series,
                        const NeighborhoodWeights& W, ModelOrder order,
                        TimeRange fit_range);

GstarModel fit_gstar_penalized(const SpatioTemporalSeries& series,
                               const NeighborhoodWeights& W, ModelOrder order,
                               const PenaltySpec& spec,
                               const SolverConfig& config, TimeRange fit_range);

/// Per-equation least squares on k*p lagged regressors; minimum-norm when the
/// design is rank-deficient (the usual case when k*p > T_eff).
VarModel fit_var_ols(const SpatioTemporalSeries& series, int p,
                     TimeRange fit_range);

/// history: k x p matrix, column j-1 holds Y(t-j) (standardized scale).
Eigen::VectorXd predict_one_step(const GstarModel& model,
                                 const Eigen::MatrixXd& history);
Eigen::VectorXd predict_one_step(const VarModel& model,
                                 const Eigen::MatrixXd& history);

/// Expands the constrained form: row i of A_j = sum_l phi_i^(j,l) W_i^(l).
VarModel gstar_to_var(const GstarModel& model);

/// JSON round-trip; floats carry 17 significant digits so predictions reload
/// bit-identically.
std::string model_to_json(const GstarModel& model);
GstarModel model_from_json(const std::string& text);
void save_model(const GstarModel& model, const std::string& path);
GstarModel load_model(const std::string& path);

}  // namespace gstar
