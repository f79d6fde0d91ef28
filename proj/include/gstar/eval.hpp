#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "gstar/common.hpp"
#include "gstar/models.hpp"

namespace gstar {

/// Three-way split of the time axis: fit on [0, T1), select lambda on
/// [T1, T2), report on [T2, T).
struct SplitSpec {
    int T1 = 0;
    int T2 = 0;

    static SplitSpec defaults_for(int T) { return {T / 3, 2 * T / 3}; }
    void validate(int T) const {
        if (!(0 < T1 && T1 < T2 && T2 < T))
            throw InvalidArgument("split must satisfy 0 < T1 < T2 < T");
    }
};

/// Strictly decreasing lambda grid.
struct LambdaGrid {
    std::vector<double> values;

    /// 20 points log-spaced from lambda_max down to lambda_max * 1e-3.
    static LambdaGrid log_spaced(double lambda_max, int points = 20,
                                 double ratio = 1e-3);
    void validate() const;
};

/// max_i ||Z_i' y_i||_inf over the training window; the smallest lambda at
/// which the lasso solution is identically zero.
double lambda_max(const SpatioTemporalSeries& series, const NeighborhoodWeights& W,
                  ModelOrder order, TimeRange fit_range);

double mspe(const Eigen::MatrixXd& actual, const Eigen::MatrixXd& predicted);

struct MrpeResult {
    double value = 0.0;
    int excluded = 0;  // terms dropped because the actual was exactly zero
};
MrpeResult mrpe(const Eigen::MatrixXd& actual, const Eigen::MatrixXd& predicted);

struct InformationCriteria {
    double aic = 0.0;
    double bic = 0.0;
    bool interpolating = false;  // RSS == 0; aic/bic are -inf sentinels
};
InformationCriteria information_criteria(const GstarModel& model,
                                         const SpatioTemporalSeries& series,
                                         TimeRange fit_range);
InformationCriteria information_criteria(const VarModel& model,
                                         const SpatioTemporalSeries& series,
                                         TimeRange fit_range);

/// One-step-ahead predictions at each t in `targets`, coefficients fixed,
/// actual lagged values as regressors. Returns k x targets.length().
Eigen::MatrixXd one_step_predictions(const GstarModel& model,
                                     const SpatioTemporalSeries& series,
                                     TimeRange targets);
Eigen::MatrixXd one_step_predictions(const VarModel& model,
                                     const SpatioTemporalSeries& series,
                                     TimeRange targets);

struct CvResult {
    double selected_lambda = 0.0;
    std::vector<double> validation_mspe;  // one per grid value, grid order
};

/// Fits on [0, T1) per grid value, scores one-step MSPE on [T1, T2);
/// ties break toward the larger lambda.
CvResult rolling_cv(const SpatioTemporalSeries& series,
                    const NeighborhoodWeights& W, ModelOrder order,
                    PenaltyKind kind, const LambdaGrid& grid,
                    const SplitSpec& split, const SolverConfig& config);

struct ReportRow {
    std::string model;  // VAR | STAR | LASSO | HGLASSO | DHGLASSO
    int eta = 0;        // 0 for VAR (eta-independent)
    double mspe = 0.0;
    double mrpe = 0.0;
    int mrpe_excluded = 0;
    double aic = 0.0;
    double bic = 0.0;
    bool interpolating = false;
    double lambda = 0.0;
    int nonzero = 0;
};

struct EvaluationReport {
    std::vector<ReportRow> rows;

    std::string to_text() const;
    std::string to_json() const;
};

/// Refit with the selected lambda on [0, T2); test MSPE/MRPE on [T2, T).
ReportRow evaluate_final(const SpatioTemporalSeries& series,
                         const NeighborhoodWeights& W, ModelOrder order,
                         PenaltyKind kind, double selected_lambda,
                         const SplitSpec& split, const SolverConfig& config,
                         GstarModel* fitted_out = nullptr);

/// One row per requested penalty kind per eta, plus a single VAR row.
EvaluationReport compare_models(const SpatioTemporalSeries& series,
                                const AdjacencyGraph& graph, int p,
                                const std::vector<int>& etas,
                                const std::vector<PenaltyKind>& kinds,
                                const SplitSpec& split, int grid_points,
                                const SolverConfig& config,
                                std::vector<GstarModel>* models_out = nullptr);

/// CSV of per-coefficient magnitudes keyed by (location id, lag, level).
std::string coefficient_csv(const std::vector<GstarModel>& models);

}  // namespace gstar
