#include "gstar/solver.hpp"

#include <cmath>
#include <cstdint>

namespace gstar {

namespace {

// splitmix64 finalizer; gives a reproducible start vector for power iteration
double unit_interval(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    x = x ^ (x >> 31);
    return (static_cast<double>(x >> 11) + 0.5) * 0x1p-53;
}

}  // namespace

double largest_singular_value(const Eigen::MatrixXd& Z) {
    if (Z.size() == 0 || Z.isZero(0.0))
        throw InvalidArgument("largest_singular_value requires a nonzero matrix");
    const Eigen::MatrixXd G = Z.transpose() * Z;
    const int d = static_cast<int>(G.rows());
    Eigen::VectorXd v(d);
    for (int q = 0; q < d; ++q)
        v[q] = unit_interval(static_cast<std::uint64_t>(q) + 1) - 0.5;
    v.normalize();
    double prev = 0.0;
    const int cap = 100000;
    for (int it = 0; it < cap; ++it) {
        Eigen::VectorXd w = G * v;
        const double norm = w.norm();
        if (norm == 0.0) {
            // start vector landed in the null space; perturb deterministically
            for (int q = 0; q < d; ++q)
                v[q] += unit_interval(static_cast<std::uint64_t>(q + d) + 17);
            v.normalize();
            continue;
        }
        v = w / norm;
        const double est = v.dot(G * v);
        if (it > 0 && std::abs(est - prev) <= 1e-13 * std::max(est, 1e-300))
            return std::sqrt(est);
        prev = est;
    }
    throw NonConvergence("power iteration failed to converge");
}

double penalized_objective(const Eigen::MatrixXd& Z, const Eigen::VectorXd& y,
                           const Eigen::VectorXd& phi, const PenaltySpec& spec) {
    const double rss = (y - Z * phi).squaredNorm();
    return 0.5 * rss + spec.lambda * penalty_value(phi, spec);
}

std::pair<Eigen::VectorXd, FitDiagnostics> fista(const Eigen::MatrixXd& Z,
                                                 const Eigen::VectorXd& y,
                                                 const PenaltySpec& spec,
                                                 const SolverConfig& config,
                                                 const Eigen::VectorXd& init) {
    spec.validate();
    config.validate();
    if (Z.rows() != y.size())
        throw InvalidArgument("Z and y row counts differ");
    if (static_cast<int>(Z.cols()) != spec.order.dim())
        throw InvalidArgument("Z column count does not match eta*p");
    if (init.size() != Z.cols())
        throw InvalidArgument("init length does not match Z columns");

    double step;
    if (config.explicit_step) {
        step = *config.explicit_step;
    } else {
        const double sigma1 = largest_singular_value(Z);
        step = config.step_safety / (sigma1 * sigma1);
    }

    // precomputed normal-equation form: grad(phi) = G*phi - b
    const Eigen::MatrixXd G = Z.transpose() * Z;
    const Eigen::VectorXd b = Z.transpose() * y;

    Eigen::VectorXd x_prev = init;
    Eigen::VectorXd x_prev2 = init;
    FitDiagnostics diag;
    double obj_prev = penalized_objective(Z, y, init, spec);
    if (config.record_trajectory) diag.trajectory.push_back(obj_prev);

    Eigen::VectorXd x = init;
    // momentum counter; reset on adaptive restart so the objective trajectory
    // stays non-increasing despite the extrapolation
    int r_mom = 0;
    for (int r = 1; r <= config.max_iter; ++r) {
        ++r_mom;
        const double momentum = static_cast<double>(r_mom - 2) / (r_mom + 1);
        Eigen::VectorXd extrapolated = x_prev + momentum * (x_prev - x_prev2);
        Eigen::VectorXd grad = G * extrapolated - b;
        x = prox(extrapolated - step * grad, spec, step);
        diag.iterations = r;
        const double obj = penalized_objective(Z, y, x, spec);
        // the restart threshold tolerates rounding noise so the solver cannot
        // stall rejecting steps at the minimizer
        if (obj > obj_prev + 1e-12 * (1.0 + std::abs(obj_prev))) {
            // momentum overshoot: reject the step, restart from x_prev; the
            // next step is a plain proximal-gradient step, which cannot
            // increase the objective at this step size
            r_mom = 0;
            x = x_prev;
            x_prev2 = x_prev;
            if (config.record_trajectory) diag.trajectory.push_back(obj_prev);
            continue;
        }
        obj_prev = obj;
        if (config.record_trajectory) diag.trajectory.push_back(obj);
        const double change = (x - x_prev).lpNorm<Eigen::Infinity>();
        const double scale = 1.0 + x.lpNorm<Eigen::Infinity>();
        x_prev2 = x_prev;
        x_prev = x;
        if (change <= config.tol * scale) {
            diag.converged = true;
            break;
        }
    }
    diag.objective = penalized_objective(Z, y, x, spec);
    Eigen::VectorXd grad_at_x = G * x - b;
    diag.fixed_point_residual =
        (x - prox(x - step * grad_at_x, spec, step)).lpNorm<Eigen::Infinity>();
    return {std::move(x), std::move(diag)};
}

std::pair<Eigen::VectorXd, FitDiagnostics> fista(const Eigen::MatrixXd& Z,
                                                 const Eigen::VectorXd& y,
                                                 const PenaltySpec& spec,
                                                 const SolverConfig& config) {
    return fista(Z, y, spec, config, Eigen::VectorXd::Zero(Z.cols()));
}

}  // namespace gstar
