#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <vector>

#include "gstar/common.hpp"
#include "gstar/weights.hpp"

namespace gstar {

/// k locations x T time points of observations Y_i(t). Row i of `values`
/// is location i's series; the time axis is evenly spaced.
struct SpatioTemporalSeries {
    std::vector<std::string> locations;
    std::vector<std::string> times;  // labels: integer indices or ISO timestamps
    Eigen::MatrixXd values;          // k x T

    int k() const { return static_cast<int>(values.rows()); }
    int T() const { return static_cast<int>(values.cols()); }
    TimeRange full_range() const { return {0, T()}; }

    void validate() const;

    /// CSV: first column `time`, one column per location id.
    static SpatioTemporalSeries from_csv(std::istream& in);
    static SpatioTemporalSeries from_csv_file(const std::string& path);
    void to_csv(std::ostream& out) const;
    void to_csv_file(const std::string& path) const;
};

/// Per-location sample mean and standard deviation used for scaling.
struct StandardizationStats {
    Eigen::VectorXd mean;
    Eigen::VectorXd std;
};

/// Subtracts the per-location mean and divides by the per-location sample
/// standard deviation, both computed over stats_window only.
std::pair<SpatioTemporalSeries, StandardizationStats> standardize(
    const SpatioTemporalSeries& series, TimeRange stats_window);

/// Keeps locations with at least min_nonzero nonzero observations.
SpatioTemporalSeries filter_active_locations(const SpatioTemporalSeries& series,
                                             int min_nonzero);

/// One location's response/design pair. Column (j-1)*eta + l (0-based) holds
/// the regressor W_i^(l) Y(t-j), lag-major over (j, l).
struct DesignPair {
    Eigen::MatrixXd Z;   // T_eff x (eta*p)
    Eigen::VectorXd y;   // T_eff
    int location = 0;
    TimeRange covered;   // times whose responses appear in y
};

DesignPair build_design(const SpatioTemporalSeries& series,
                        const NeighborhoodWeights& W, ModelOrder order,
                        int location, TimeRange fit_range);

}  // namespace gstar
