#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "gstar/common.hpp"
#include "gstar/penalty.hpp"

namespace gstar {

/// FISTA configuration. With step_safety = 1 the gradient step is exactly
/// 1/sigma_1(Z)^2; smaller values guard against a power-iteration
/// underestimate of the spectral norm.
struct SolverConfig {
    int max_iter = 10000;
    double tol = 1e-8;
    std::optional<double> explicit_step;  // overrides the spectral-norm step
    double step_safety = 1.0;
    bool record_trajectory = false;

    void validate() const {
        if (max_iter < 1) throw InvalidArgument("max_iter must be positive");
        if (tol <= 0.0) throw InvalidArgument("tol must be positive");
        if (explicit_step && *explicit_step <= 0.0)
            throw InvalidArgument("explicit step must be positive");
        if (step_safety <= 0.0 || step_safety > 1.0)
            throw InvalidArgument("step_safety must be in (0, 1]");
    }
};

struct FitDiagnostics {
    int iterations = 0;
    double objective = 0.0;
    bool converged = false;
    double fixed_point_residual = 0.0;
    std::vector<double> trajectory;  // objective per iterate, when recorded
};

/// Largest singular value of Z via power iteration on Z'Z with a
/// deterministic start vector. Relative accuracy ~1e-8.
double largest_singular_value(const Eigen::MatrixXd& Z);

/// 0.5*||y - Z*phi||^2 + lambda*Omega(phi)
double penalized_objective(const Eigen::MatrixXd& Z, const Eigen::VectorXd& y,
                           const Eigen::VectorXd& phi, const PenaltySpec& spec);

/// Accelerated proximal gradient with momentum coefficient (r-2)/(r+1).
/// Stops when the relative infinity-norm iterate change drops below tol.
std::pair<Eigen::VectorXd, FitDiagnostics> fista(const Eigen::MatrixXd& Z,
                                                 const Eigen::VectorXd& y,
                                                 const PenaltySpec& spec,
                                                 const SolverConfig& config,
                                                 const Eigen::VectorXd& init);

/// Convenience overload starting from zeros.
std::pair<Eigen::VectorXd, FitDiagnostics> fista(const Eigen::MatrixXd& Z,
                                                 const Eigen::VectorXd& y,
                                                 const PenaltySpec& spec,
                                                 const SolverConfig& config);

}  // namespace gstar
