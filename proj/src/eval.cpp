#include "gstar/eval.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace gstar {

LambdaGrid LambdaGrid::log_spaced(double lambda_max, int points, double ratio) {
    if (points < 1) throw InvalidArgument("grid needs at least one point");
    if (lambda_max <= 0.0) return LambdaGrid{{0.0}};
    LambdaGrid grid;
    if (points == 1) {
        grid.values.push_back(lambda_max);
        return grid;
    }
    const double log_max = std::log(lambda_max);
    const double log_min = std::log(lambda_max * ratio);
    for (int q = 0; q < points; ++q) {
        const double f = static_cast<double>(q) / (points - 1);
        grid.values.push_back(std::exp(log_max + f * (log_min - log_max)));
    }
    grid.validate();
    return grid;
}

void LambdaGrid::validate() const {
    if (values.empty()) throw InvalidArgument("empty lambda grid");
    for (size_t q = 0; q < values.size(); ++q) {
        if (values[q] < 0.0) throw InvalidArgument("negative lambda in grid");
        if (q > 0 && values[q] >= values[q - 1])
            throw InvalidArgument("lambda grid must be strictly decreasing");
    }
}

double lambda_max(const SpatioTemporalSeries& series, const NeighborhoodWeights& W,
                  ModelOrder order, TimeRange fit_range) {
    double best = 0.0;
    for (int i = 0; i < series.k(); ++i) {
        DesignPair d = build_design(series, W, order, i, fit_range);
        best = std::max(best,
                        (d.Z.transpose() * d.y).lpNorm<Eigen::Infinity>());
    }
    return best;
}

double mspe(const Eigen::MatrixXd& actual, const Eigen::MatrixXd& predicted) {
    if (actual.rows() != predicted.rows() || actual.cols() != predicted.cols())
        throw InvalidArgument("mspe shape mismatch");
    if (actual.size() == 0) throw InvalidArgument("mspe on empty matrices");
    return (actual - predicted).squaredNorm() / static_cast<double>(actual.size());
}

MrpeResult mrpe(const Eigen::MatrixXd& actual, const Eigen::MatrixXd& predicted) {
    if (actual.rows() != predicted.rows() || actual.cols() != predicted.cols())
        throw InvalidArgument("mrpe shape mismatch");
    double total = 0.0;
    int used = 0;
    int excluded = 0;
    for (int i = 0; i < actual.rows(); ++i) {
        for (int t = 0; t < actual.cols(); ++t) {
            if (actual(i, t) == 0.0) {
                ++excluded;
                continue;
            }
            total += std::abs((actual(i, t) - predicted(i, t)) / actual(i, t));
            ++used;
        }
    }
    if (used == 0) throw AllZeroActuals("every actual value is zero");
    return {total / used, excluded};
}

namespace {

InformationCriteria criteria_from(double rss, double tss, int N, int df) {
    InformationCriteria ic;
    // rounding leaves a nonzero residual even when the fit interpolates, so
    // "zero" is judged relative to the response scale
    if (rss <= 1e-18 * std::max(tss, 1e-300)) {
        ic.interpolating = true;
        ic.aic = ic.bic = -std::numeric_limits<double>::infinity();
        return ic;
    }
    const double base = N * std::log(rss / N);
    ic.aic = base + 2.0 * df;
    ic.bic = base + std::log(static_cast<double>(N)) * df;
    return ic;
}

}  // namespace

InformationCriteria information_criteria(const GstarModel& model,
                                         const SpatioTemporalSeries& series,
                                         TimeRange fit_range) {
    double rss = 0.0, tss = 0.0;
    for (int i = 0; i < series.k(); ++i) {
        DesignPair d = build_design(series, model.weights, model.order, i, fit_range);
        rss += (d.y - d.Z * model.coefficients[static_cast<size_t>(i)]).squaredNorm();
        tss += d.y.squaredNorm();
    }
    const int N = series.k() * (fit_range.length() - model.order.p);
    return criteria_from(rss, tss, N, model.nonzero_count());
}

InformationCriteria information_criteria(const VarModel& model,
                                         const SpatioTemporalSeries& series,
                                         TimeRange fit_range) {
    const int p = model.p;
    double rss = 0.0, tss = 0.0;
    for (int t = fit_range.begin + p; t < fit_range.end; ++t) {
        Eigen::MatrixXd history(series.k(), p);
        for (int j = 1; j <= p; ++j) history.col(j - 1) = series.values.col(t - j);
        rss += (series.values.col(t) - predict_one_step(model, history)).squaredNorm();
        tss += series.values.col(t).squaredNorm();
    }
    const int N = series.k() * (fit_range.length() - p);
    return criteria_from(rss, tss, N, model.nonzero_count());
}

namespace {

template <class Model>
Eigen::MatrixXd predict_over(const Model& model, const SpatioTemporalSeries& series,
                             TimeRange targets, int p) {
    if (targets.begin < p)
        throw WindowTooShort("prediction targets start before lag-p history exists");
    if (targets.end > series.T() || targets.length() < 1)
        throw InvalidArgument("prediction target range out of bounds");
    Eigen::MatrixXd out(series.k(), targets.length());
    Eigen::MatrixXd history(series.k(), p);
    for (int t = targets.begin; t < targets.end; ++t) {
        for (int j = 1; j <= p; ++j) history.col(j - 1) = series.values.col(t - j);
        out.col(t - targets.begin) = predict_one_step(model, history);
    }
    return out;
}

}  // namespace

Eigen::MatrixXd one_step_predictions(const GstarModel& model,
                                     const SpatioTemporalSeries& series,
                                     TimeRange targets) {
    return predict_over(model, series, targets, model.order.p);
}

Eigen::MatrixXd one_step_predictions(const VarModel& model,
                                     const SpatioTemporalSeries& series,
                                     TimeRange targets) {
    return predict_over(model, series, targets, model.p);
}

CvResult rolling_cv(const SpatioTemporalSeries& series,
                    const NeighborhoodWeights& W, ModelOrder order,
                    PenaltyKind kind, const LambdaGrid& grid,
                    const SplitSpec& split, const SolverConfig& config) {
    grid.validate();
    split.validate(series.T());
    if (series.T() <= 3 * order.p)
        throw WindowTooShort("series too short for the rolling split");
    const TimeRange train{0, split.T1};
    const TimeRange validation{split.T1, split.T2};
    const Eigen::MatrixXd actual =
        series.values.middleCols(validation.begin, validation.length());

    CvResult result;
    double best = std::numeric_limits<double>::infinity();
    for (double lambda : grid.values) {
        PenaltySpec spec{kind, lambda, order};
        GstarModel model =
            fit_gstar_penalized(series, W, order, spec, config, train);
        const double score =
            mspe(actual, one_step_predictions(model, series, validation));
        result.validation_mspe.push_back(score);
        if (score < best) {  // grid is decreasing, so ties keep the larger lambda
            best = score;
            result.selected_lambda = lambda;
        }
    }
    return result;
}

ReportRow evaluate_final(const SpatioTemporalSeries& series,
                         const NeighborhoodWeights& W, ModelOrder order,
                         PenaltyKind kind, double selected_lambda,
                         const SplitSpec& split, const SolverConfig& config,
                         GstarModel* fitted_out) {
    split.validate(series.T());
    const TimeRange fit{0, split.T2};
    const TimeRange test{split.T2, series.T()};

    GstarModel model;
    if (kind == PenaltyKind::None) {
        model = fit_star_ols(series, W, order, fit);
    } else {
        PenaltySpec spec{kind, selected_lambda, order};
        model = fit_gstar_penalized(series, W, order, spec, config, fit);
    }

    const Eigen::MatrixXd actual =
        series.values.middleCols(test.begin, test.length());
    const Eigen::MatrixXd predicted = one_step_predictions(model, series, test);

    ReportRow row;
    row.model = kind == PenaltyKind::None ? "STAR" : to_string(kind);
    std::transform(row.model.begin(), row.model.end(), row.model.begin(),
                   [](unsigned char c) { return std::toupper(c); });
    row.eta = order.eta;
    row.mspe = mspe(actual, predicted);
    const MrpeResult rel = mrpe(actual, predicted);
    row.mrpe = rel.value;
    row.mrpe_excluded = rel.excluded;
    const InformationCriteria ic = information_criteria(model, series, fit);
    row.aic = ic.aic;
    row.bic = ic.bic;
    row.interpolating = ic.interpolating;
    row.lambda = kind == PenaltyKind::None ? 0.0 : selected_lambda;
    row.nonzero = model.nonzero_count();
    if (fitted_out) *fitted_out = std::move(model);
    return row;
}

EvaluationReport compare_models(const SpatioTemporalSeries& series,
                                const AdjacencyGraph& graph, int p,
                                const std::vector<int>& etas,
                                const std::vector<PenaltyKind>& kinds,
                                const SplitSpec& split, int grid_points,
                                const SolverConfig& config,
                                std::vector<GstarModel>* models_out) {
    if (etas.empty()) throw InvalidArgument("eta list is empty");
    split.validate(series.T());
    const int max_eta = *std::max_element(etas.begin(), etas.end());
    const NeighborhoodWeights W = build_weights(graph, max_eta);
    const std::uint64_t fp = graph.fingerprint();

    EvaluationReport report;

    {  // VAR baseline, eta-independent
        const TimeRange fit{0, split.T2};
        const TimeRange test{split.T2, series.T()};
        VarModel var = fit_var_ols(series, p, fit);
        const Eigen::MatrixXd actual =
            series.values.middleCols(test.begin, test.length());
        const Eigen::MatrixXd predicted = one_step_predictions(var, series, test);
        ReportRow row;
        row.model = "VAR";
        row.eta = 0;
        row.mspe = mspe(actual, predicted);
        const MrpeResult rel = mrpe(actual, predicted);
        row.mrpe = rel.value;
        row.mrpe_excluded = rel.excluded;
        const InformationCriteria ic = information_criteria(var, series, fit);
        row.aic = ic.aic;
        row.bic = ic.bic;
        row.interpolating = ic.interpolating;
        row.nonzero = var.nonzero_count();
        report.rows.push_back(std::move(row));
    }

    const std::vector<PenaltyKind> order_of_kinds = {
        PenaltyKind::None, PenaltyKind::Lasso, PenaltyKind::Hglasso,
        PenaltyKind::Dhglasso};
    for (int eta : etas) {
        const ModelOrder order{p, eta};
        for (PenaltyKind kind : order_of_kinds) {
            if (std::find(kinds.begin(), kinds.end(), kind) == kinds.end())
                continue;
            double lambda = 0.0;
            if (kind != PenaltyKind::None) {
                const double lmax =
                    lambda_max(series, W, order, TimeRange{0, split.T1});
                const LambdaGrid grid = LambdaGrid::log_spaced(lmax, grid_points);
                lambda = rolling_cv(series, W, order, kind, grid, split, config)
                             .selected_lambda;
            }
            GstarModel fitted;
            report.rows.push_back(evaluate_final(series, W, order, kind, lambda,
                                                 split, config, &fitted));
            fitted.adjacency_fingerprint = fp;
            if (models_out) models_out->push_back(std::move(fitted));
        }
    }
    return report;
}

std::string EvaluationReport::to_text() const {
    std::ostringstream out;
    out << std::left << std::setw(10) << "Model" << std::right << std::setw(5)
        << "eta" << std::setw(14) << "MSPE" << std::setw(14) << "MRPE"
        << std::setw(14) << "AIC" << std::setw(14) << "BIC" << std::setw(14)
        << "lambda" << std::setw(9) << "nonzero" << '\n';
    for (const auto& r : rows) {
        out << std::left << std::setw(10) << r.model << std::right
            << std::setw(5);
        if (r.eta > 0)
            out << r.eta;
        else
            out << "-";
        out << std::setprecision(6) << std::fixed;
        out << std::setw(14) << r.mspe << std::setw(14) << r.mrpe;
        if (r.interpolating)
            out << std::setw(14) << "-inf" << std::setw(14) << "-inf";
        else
            out << std::setw(14) << r.aic << std::setw(14) << r.bic;
        out << std::setw(14) << std::setprecision(6) << std::scientific
            << r.lambda << std::setw(9) << r.nonzero << '\n';
        out.unsetf(std::ios_base::floatfield);
    }
    return out.str();
}

std::string EvaluationReport::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows) {
        nlohmann::json row;
        row["model"] = r.model;
        row["eta"] = r.eta;
        row["mspe"] = r.mspe;
        row["mrpe"] = r.mrpe;
        row["mrpe_excluded"] = r.mrpe_excluded;
        if (r.interpolating) {
            row["aic"] = nullptr;
            row["bic"] = nullptr;
            row["interpolating"] = true;
        } else {
            row["aic"] = r.aic;
            row["bic"] = r.bic;
        }
        row["lambda"] = r.lambda;
        row["nonzero"] = r.nonzero;
        arr.push_back(std::move(row));
    }
    return nlohmann::json{{"rows", arr}}.dump(2);
}

std::string coefficient_csv(const std::vector<GstarModel>& models) {
    std::ostringstream out;
    out << "model,eta,location,lag,level,coefficient,magnitude\n";
    out << std::setprecision(17);
    for (const auto& m : models) {
        std::string name =
            m.penalty.kind == PenaltyKind::None ? "STAR" : to_string(m.penalty.kind);
        std::transform(name.begin(), name.end(), name.begin(),
                       [](unsigned char c) { return std::toupper(c); });
        for (int i = 0; i < m.k(); ++i) {
            const auto& phi = m.coefficients[static_cast<size_t>(i)];
            for (int j = 1; j <= m.order.p; ++j) {
                for (int l = 0; l < m.order.eta; ++l) {
                    const double c = phi[(j - 1) * m.order.eta + l];
                    out << name << ',' << m.order.eta << ','
                        << m.locations[static_cast<size_t>(i)] << ',' << j << ','
                        << l << ',' << c << ',' << std::abs(c) << '\n';
                }
            }
        }
    }
    return out.str();
}

}  // namespace gstar
