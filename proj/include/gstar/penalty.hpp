#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "gstar/common.hpp"

namespace gstar {

enum class PenaltyKind { None, Lasso, Hglasso, Dhglasso };

PenaltyKind penalty_kind_from_string(const std::string& s);
std::string to_string(PenaltyKind kind);

/// Penalty kind plus tuning parameter; the group chain is derived from
/// (kind, order) alone.
struct PenaltySpec {
    PenaltyKind kind = PenaltyKind::None;
    double lambda = 0.0;
    ModelOrder order;

    void validate() const {
        order.validate();
        if (lambda < 0.0) throw InvalidArgument("lambda must be nonnegative");
    }
};

/// The strictly nested suffix groups of the hierarchical penalties, as start
/// offsets into the lag-major coefficient layout. Outermost (start 0) first.
/// Empty for kinds none and lasso.
std::vector<int> group_chain(PenaltyKind kind, ModelOrder order);

double penalty_value(const Eigen::VectorXd& phi, const PenaltySpec& spec);

Eigen::VectorXd soft_threshold(const Eigen::VectorXd& v, double tau);

/// Shrinks the suffix v[start..] toward zero by tau in Euclidean norm;
/// entries before start are unchanged.
Eigen::VectorXd group_soft_threshold(const Eigen::VectorXd& v, int start,
                                     double tau);

/// Exact Prox_{scale*lambda*Omega}(v). For the hierarchical kinds this is the
/// innermost-to-outermost composition of group soft-thresholds.
Eigen::VectorXd prox(const Eigen::VectorXd& v, const PenaltySpec& spec,
                     double scale);

}  // namespace gstar
