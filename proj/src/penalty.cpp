#include "gstar/penalty.hpp"

#include <cmath>

namespace gstar {

PenaltyKind penalty_kind_from_string(const std::string& s) {
    if (s == "none" || s == "star") return PenaltyKind::None;
    if (s == "lasso") return PenaltyKind::Lasso;
    if (s == "hglasso") return PenaltyKind::Hglasso;
    if (s == "dhglasso") return PenaltyKind::Dhglasso;
    throw InvalidArgument("unknown penalty kind '" + s + "'");
}

std::string to_string(PenaltyKind kind) {
    switch (kind) {
        case PenaltyKind::None: return "none";
        case PenaltyKind::Lasso: return "lasso";
        case PenaltyKind::Hglasso: return "hglasso";
        case PenaltyKind::Dhglasso: return "dhglasso";
    }
    return "?";
}

std::vector<int> group_chain(PenaltyKind kind, ModelOrder order) {
    order.validate();
    std::vector<int> starts;
    if (kind == PenaltyKind::Hglasso) {
        for (int j = 0; j < order.p; ++j) starts.push_back(j * order.eta);
    } else if (kind == PenaltyKind::Dhglasso) {
        for (int q = 0; q < order.dim(); ++q) starts.push_back(q);
    }
    return starts;
}

namespace {

void check_length(const Eigen::VectorXd& v, const PenaltySpec& spec) {
    if (static_cast<int>(v.size()) != spec.order.dim())
        throw InvalidArgument("coefficient length " + std::to_string(v.size()) +
                              " does not match eta*p = " +
                              std::to_string(spec.order.dim()));
}

}  // namespace

double penalty_value(const Eigen::VectorXd& phi, const PenaltySpec& spec) {
    spec.validate();
    check_length(phi, spec);
    switch (spec.kind) {
        case PenaltyKind::None:
            return 0.0;
        case PenaltyKind::Lasso:
            return phi.lpNorm<1>();
        case PenaltyKind::Hglasso:
        case PenaltyKind::Dhglasso: {
            double total = 0.0;
            for (int start : group_chain(spec.kind, spec.order))
                total += phi.tail(phi.size() - start).norm();
            return total;
        }
    }
    return 0.0;
}

Eigen::VectorXd soft_threshold(const Eigen::VectorXd& v, double tau) {
    if (tau < 0.0) throw InvalidArgument("tau must be nonnegative");
    return v.array().sign() * (v.array().abs() - tau).max(0.0);
}

Eigen::VectorXd group_soft_threshold(const Eigen::VectorXd& v, int start,
                                     double tau) {
    if (tau < 0.0) throw InvalidArgument("tau must be nonnegative");
    if (start < 0 || start > v.size())
        throw InvalidArgument("group start out of range");
    Eigen::VectorXd out = v;
    auto tail = out.tail(v.size() - start);
    const double norm = tail.norm();
    if (norm <= tau)
        tail.setZero();
    else
        tail *= 1.0 - tau / norm;
    return out;
}

Eigen::VectorXd prox(const Eigen::VectorXd& v, const PenaltySpec& spec,
                     double scale) {
    spec.validate();
    check_length(v, spec);
    if (scale < 0.0) throw InvalidArgument("scale must be nonnegative");
    const double tau = scale * spec.lambda;
    switch (spec.kind) {
        case PenaltyKind::None:
            return v;
        case PenaltyKind::Lasso:
            return soft_threshold(v, tau);
        case PenaltyKind::Hglasso:
        case PenaltyKind::Dhglasso: {
            if (tau == 0.0) return v;
            auto chain = group_chain(spec.kind, spec.order);
            Eigen::VectorXd out = v;
            // innermost (deepest suffix) first, full vector last
            for (auto it = chain.rbegin(); it != chain.rend(); ++it)
                out = group_soft_threshold(out, *it, tau);
            return out;
        }
    }
    return v;
}

}  // namespace gstar
