#include "gstar/simulate.hpp"

#include <algorithm>
#include <cmath>

namespace gstar {

Eigen::MatrixXd companion_matrix(const VarModel& var) {
    const int k = var.k();
    const int p = var.p;
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(k * p, k * p);
    for (int j = 0; j < p; ++j)
        C.block(0, j * k, k, k) = var.lag_matrices[static_cast<size_t>(j)];
    if (p > 1)
        C.block(k, 0, k * (p - 1), k * (p - 1)) =
            Eigen::MatrixXd::Identity(k * (p - 1), k * (p - 1));
    return C;
}

StationarityCheck check_stationarity(const GstarModel& model) {
    const Eigen::MatrixXd C = companion_matrix(gstar_to_var(model));
    const int n = static_cast<int>(C.rows());
    const int m = 256;
    double best = 0.0;
    for (std::uint64_t s = 0; s < 8; ++s) {
        CounterRng rng(0xC0FFEEULL + s);
        Eigen::VectorXd v(n);
        for (int q = 0; q < n; ++q) v[q] = rng.next_gaussian();
        v.normalize();
        double log_growth = 0.0;
        bool vanished = false;
        for (int it = 0; it < m; ++it) {
            v = C * v;
            const double norm = v.norm();
            if (norm == 0.0) {  // nilpotent direction
                vanished = true;
                break;
            }
            log_growth += std::log(norm);
            v /= norm;
        }
        if (!vanished) best = std::max(best, std::exp(log_growth / m));
    }
    StationarityCheck out;
    out.spectral_radius = best;
    out.stable = best < 1.0 - 1e-3;
    return out;
}

SpatioTemporalSeries simulate(const SimulationSpec& spec) {
    if (spec.T < 1) throw InvalidArgument("T must be >= 1");
    if (spec.burn_in < 0) throw InvalidArgument("burn_in must be >= 0");
    if (spec.sigma < 0.0) throw InvalidArgument("sigma must be >= 0");
    if (spec.sigma > 0.0 && !check_stationarity(spec.model).stable)
        throw UnstableModel("refusing to simulate noise through an unstable model");

    const GstarModel& model = spec.model;
    const int k = model.k();
    const int p = model.order.p;
    const int total = spec.burn_in + spec.T;

    CounterRng rng(spec.seed);
    Eigen::MatrixXd values = Eigen::MatrixXd::Zero(k, total + p);
    Eigen::MatrixXd history(k, p);
    for (int step = 0; step < total; ++step) {
        const int t = p + step;
        for (int j = 1; j <= p; ++j) history.col(j - 1) = values.col(t - j);
        Eigen::VectorXd next = predict_one_step(model, history);
        for (int i = 0; i < k; ++i) next[i] += spec.sigma * rng.next_gaussian();
        values.col(t) = next;
    }

    SpatioTemporalSeries out;
    out.locations = model.locations;
    if (out.locations.empty())
        for (int i = 0; i < k; ++i) out.locations.push_back("loc" + std::to_string(i));
    out.values = values.rightCols(spec.T);
    for (int t = 0; t < spec.T; ++t) out.times.push_back(std::to_string(t + 1));
    return out;
}

GstarModel random_sparse_model(int k, ModelOrder order, const SparsityPlan& plan,
                               const AdjacencyGraph& graph, std::uint64_t seed) {
    order.validate();
    if (graph.size() != k)
        throw InvalidArgument("graph size does not match k");
    if (plan.magnitude_lo < 0.0 || plan.magnitude_hi < plan.magnitude_lo)
        throw InvalidArgument("bad magnitude range");
    if (!(0.0 < plan.radius_lo && plan.radius_lo < plan.radius_hi &&
          plan.radius_hi < 1.0))
        throw InvalidArgument("radius band must satisfy 0 < lo < hi < 1");

    const int d = order.dim();
    GstarModel model;
    model.locations = graph.locations();
    model.order = order;
    model.weights = build_weights(graph, order.eta);
    model.adjacency_fingerprint = graph.fingerprint();
    model.penalty = PenaltySpec{PenaltyKind::None, 0.0, order};

    CounterRng rng(seed);
    bool any_nonzero = false;
    for (int i = 0; i < k; ++i) {
        Eigen::VectorXd phi = Eigen::VectorXd::Zero(d);
        std::vector<bool> support(static_cast<size_t>(d), false);
        if (plan.prefix_structured) {
            // prefix of the lag-major order, length uniform in 1..d
            const int len = 1 + static_cast<int>(rng.next_uniform() * d);
            for (int q = 0; q < std::min(len, d); ++q) support[static_cast<size_t>(q)] = true;
        } else {
            for (int q = 0; q < d; ++q)
                support[static_cast<size_t>(q)] = rng.next_uniform() < plan.density;
        }
        for (int q = 0; q < d; ++q) {
            if (!support[static_cast<size_t>(q)]) continue;
            const double mag = plan.magnitude_lo +
                               rng.next_uniform() *
                                   (plan.magnitude_hi - plan.magnitude_lo);
            const double sign = rng.next_uniform() < 0.5 ? -1.0 : 1.0;
            phi[q] = sign * mag;
            if (phi[q] != 0.0) any_nonzero = true;
        }
        model.coefficients.push_back(std::move(phi));
    }
    if (!any_nonzero) return model;  // zero model is trivially stable

    auto radius_at = [&](double scale) {
        GstarModel scaled = model;
        for (auto& phi : scaled.coefficients) phi *= scale;
        return check_stationarity(scaled).spectral_radius;
    };

    const double target = 0.5 * (plan.radius_lo + plan.radius_hi);
    double lo = 0.0, hi = 1.0;
    while (radius_at(hi) < target && hi < 1e6) hi *= 2.0;
    if (radius_at(hi) < plan.radius_lo) {
        // a (near-)nilpotent companion pattern: the radius never reaches the
        // band, so the model is stable at any scale; keep it as drawn
        return model;
    }
    double scale = hi;
    bool ok = false;
    for (int step = 0; step < 60; ++step) {
        scale = 0.5 * (lo + hi);
        const double r = radius_at(scale);
        if (r >= plan.radius_lo && r <= plan.radius_hi) {
            ok = true;
            break;
        }
        (r < target ? lo : hi) = scale;
    }
    if (!ok)
        throw FailedToStabilize(
            "could not rescale the random model into the target radius band");
    for (auto& phi : model.coefficients) phi *= scale;
    return model;
}

}  // namespace gstar
