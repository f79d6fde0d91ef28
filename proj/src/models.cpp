#include "gstar/models.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace gstar {

namespace {

Eigen::VectorXd min_norm_solve(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
    // minimum-norm least squares via the SVD pseudoinverse
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(1e-12);
    return svd.solve(b);
}

}  // namespace

int GstarModel::nonzero_count(double threshold) const {
    int count = 0;
    for (const auto& phi : coefficients)
        count += static_cast<int>((phi.array().abs() > threshold).count());
    return count;
}

int VarModel::nonzero_count(double threshold) const {
    int count = 0;
    for (const auto& A : lag_matrices)
        count += static_cast<int>((A.array().abs() > threshold).count());
    return count;
}

GstarModel fit_star_ols(const SpatioTemporalSeries& series,
                        const NeighborhoodWeights& W, ModelOrder order,
                        TimeRange fit_range) {
    GstarModel model;
    model.locations = series.locations;
    model.order = order;
    model.weights = W;
    model.penalty = PenaltySpec{PenaltyKind::None, 0.0, order};
    for (int i = 0; i < series.k(); ++i) {
        DesignPair d = build_design(series, W, order, i, fit_range);
        Eigen::VectorXd phi = min_norm_solve(d.Z, d.y);
        FitDiagnostics diag;
        diag.converged = true;
        diag.objective = 0.5 * (d.y - d.Z * phi).squaredNorm();
        model.diagnostics.push_back(std::move(diag));
        model.coefficients.push_back(std::move(phi));
    }
    return model;
}

GstarModel fit_gstar_penalized(const SpatioTemporalSeries& series,
                               const NeighborhoodWeights& W, ModelOrder order,
                               const PenaltySpec& spec,
                               const SolverConfig& config, TimeRange fit_range) {
    spec.validate();
    GstarModel model;
    model.locations = series.locations;
    model.order = order;
    model.weights = W;
    model.penalty = spec;
    for (int i = 0; i < series.k(); ++i) {
        DesignPair d = build_design(series, W, order, i, fit_range);
        if (d.Z.isZero(0.0)) {
            // no regressor signal; the penalized minimizer is zero
            Eigen::VectorXd phi = Eigen::VectorXd::Zero(order.dim());
            FitDiagnostics diag;
            diag.converged = true;
            diag.objective = 0.5 * d.y.squaredNorm();
            model.coefficients.push_back(std::move(phi));
            model.diagnostics.push_back(std::move(diag));
            continue;
        }
        auto [phi, diag] = fista(d.Z, d.y, spec, config);
        model.coefficients.push_back(std::move(phi));
        model.diagnostics.push_back(std::move(diag));
    }
    return model;
}

VarModel fit_var_ols(const SpatioTemporalSeries& series, int p,
                     TimeRange fit_range) {
    if (p < 1) throw InvalidArgument("p must be >= 1");
    if (!fit_range.valid() || fit_range.end > series.T())
        throw InvalidArgument("fit_range out of bounds");
    if (fit_range.length() <= p)
        throw WindowTooShort("fit range too short for VAR(" + std::to_string(p) + ")");
    const int k = series.k();
    const int t0 = fit_range.begin + p;
    const int n = fit_range.end - t0;
    Eigen::MatrixXd X(n, k * p);
    Eigen::MatrixXd Y(n, k);
    for (int r = 0; r < n; ++r) {
        const int t = t0 + r;
        Y.row(r) = series.values.col(t).transpose();
        for (int j = 1; j <= p; ++j)
            X.block(r, (j - 1) * k, 1, k) = series.values.col(t - j).transpose();
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(1e-12);
    Eigen::MatrixXd B = svd.solve(Y);  // (k*p) x k, equation per column

    VarModel model;
    model.locations = series.locations;
    model.p = p;
    for (int j = 0; j < p; ++j)
        model.lag_matrices.push_back(B.middleRows(j * k, k).transpose());
    return model;
}

Eigen::VectorXd predict_one_step(const GstarModel& model,
                                 const Eigen::MatrixXd& history) {
    const int k = model.k();
    const int p = model.order.p;
    const int eta = model.order.eta;
    if (history.rows() != k || history.cols() < p)
        throw InvalidArgument("history must be k x p (columns Y(t-1)..Y(t-p))");
    Eigen::VectorXd out(k);
    for (int i = 0; i < k; ++i) {
        double acc = 0.0;
        const Eigen::VectorXd& phi = model.coefficients[static_cast<size_t>(i)];
        for (int j = 1; j <= p; ++j) {
            const auto lagged = history.col(j - 1);
            for (int l = 0; l < eta; ++l)
                acc += phi[(j - 1) * eta + l] *
                       model.weights.level(l).row(i).dot(lagged);
        }
        out[i] = acc;
    }
    return out;
}

Eigen::VectorXd predict_one_step(const VarModel& model,
                                 const Eigen::MatrixXd& history) {
    const int k = model.k();
    if (history.rows() != k || history.cols() < model.p)
        throw InvalidArgument("history must be k x p (columns Y(t-1)..Y(t-p))");
    Eigen::VectorXd out = Eigen::VectorXd::Zero(k);
    for (int j = 1; j <= model.p; ++j)
        out += model.lag_matrices[static_cast<size_t>(j - 1)] * history.col(j - 1);
    return out;
}

VarModel gstar_to_var(const GstarModel& model) {
    const int k = model.k();
    const int p = model.order.p;
    const int eta = model.order.eta;
    VarModel var;
    var.locations = model.locations;
    var.p = p;
    var.stats = model.stats;
    for (int j = 1; j <= p; ++j) {
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(k, k);
        for (int i = 0; i < k; ++i) {
            const Eigen::VectorXd& phi = model.coefficients[static_cast<size_t>(i)];
            for (int l = 0; l < eta; ++l)
                A.row(i) += phi[(j - 1) * eta + l] * model.weights.level(l).row(i);
        }
        var.lag_matrices.push_back(std::move(A));
    }
    return var;
}

namespace {

using nlohmann::json;

json vector_to_json(const Eigen::VectorXd& v) {
    json arr = json::array();
    for (int q = 0; q < v.size(); ++q) arr.push_back(v[q]);
    return arr;
}

Eigen::VectorXd vector_from_json(const json& arr) {
    Eigen::VectorXd v(arr.size());
    for (size_t q = 0; q < arr.size(); ++q) v[static_cast<int>(q)] = arr[q].get<double>();
    return v;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (int r = 0; r < m.rows(); ++r) rows.push_back(vector_to_json(m.row(r)));
    return rows;
}

Eigen::MatrixXd matrix_from_json(const json& rows) {
    const int nr = static_cast<int>(rows.size());
    const int nc = nr ? static_cast<int>(rows[0].size()) : 0;
    Eigen::MatrixXd m(nr, nc);
    for (int r = 0; r < nr; ++r)
        for (int c = 0; c < nc; ++c) m(r, c) = rows[r][c].get<double>();
    return m;
}

}  // namespace

std::string model_to_json(const GstarModel& model) {
    json j;
    j["locations"] = model.locations;
    j["order"] = {{"p", model.order.p}, {"eta", model.order.eta}};
    json coeffs = json::array();
    for (const auto& phi : model.coefficients) coeffs.push_back(vector_to_json(phi));
    j["coefficients"] = coeffs;
    json mats = json::array();
    for (const auto& m : model.weights.mats) mats.push_back(matrix_to_json(m));
    j["weights"] = {{"eta", model.weights.eta}, {"k", model.weights.k}, {"mats", mats}};
    if (model.stats.mean.size() > 0) {
        j["stats"] = {{"mean", vector_to_json(model.stats.mean)},
                      {"std", vector_to_json(model.stats.std)}};
    }
    j["penalty"] = {{"kind", to_string(model.penalty.kind)},
                    {"lambda", model.penalty.lambda}};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(model.adjacency_fingerprint));
    j["adjacency_fingerprint"] = std::string(buf);
    return j.dump(2);
}

GstarModel model_from_json(const std::string& text) {
    json j = json::parse(text);
    GstarModel model;
    model.locations = j.at("locations").get<std::vector<std::string>>();
    model.order.p = j.at("order").at("p").get<int>();
    model.order.eta = j.at("order").at("eta").get<int>();
    for (const auto& arr : j.at("coefficients"))
        model.coefficients.push_back(vector_from_json(arr));
    model.weights.eta = j.at("weights").at("eta").get<int>();
    model.weights.k = j.at("weights").at("k").get<int>();
    for (const auto& m : j.at("weights").at("mats"))
        model.weights.mats.push_back(matrix_from_json(m));
    if (j.contains("stats")) {
        model.stats.mean = vector_from_json(j["stats"]["mean"]);
        model.stats.std = vector_from_json(j["stats"]["std"]);
    }
    model.penalty.kind = penalty_kind_from_string(j.at("penalty").at("kind").get<std::string>());
    model.penalty.lambda = j.at("penalty").at("lambda").get<double>();
    model.penalty.order = model.order;
    model.adjacency_fingerprint =
        std::stoull(j.at("adjacency_fingerprint").get<std::string>(), nullptr, 16);
    return model;
}

void save_model(const GstarModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write model file '" + path + "'");
    out << model_to_json(model) << '\n';
}

GstarModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open model file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return model_from_json(ss.str());
}

}  // namespace gstar
