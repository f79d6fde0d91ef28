#include "gstar/series.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace gstar {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        if (!cell.empty() && cell.back() == '\r') cell.pop_back();
        out.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

}  // namespace

void SpatioTemporalSeries::validate() const {
    if (static_cast<int>(locations.size()) != k())
        throw InvalidArgument("location list does not match value rows");
    if (static_cast<int>(times.size()) != T())
        throw InvalidArgument("time list does not match value columns");
    if (!values.allFinite())
        throw InvalidArgument("series contains non-finite values");
}

SpatioTemporalSeries SpatioTemporalSeries::from_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw EmptyInput("series CSV is empty");
    auto header = split_csv_line(line);
    if (header.size() < 2 || header[0] != "time")
        throw ParseError("series CSV must start with a 'time' column");
    SpatioTemporalSeries s;
    s.locations.assign(header.begin() + 1, header.end());
    std::vector<std::vector<double>> cols;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto cells = split_csv_line(line);
        if (cells.size() != header.size())
            throw ParseError("series CSV line " + std::to_string(lineno) +
                             ": expected " + std::to_string(header.size()) + " cells");
        s.times.push_back(cells[0]);
        std::vector<double> col;
        col.reserve(cells.size() - 1);
        for (size_t c = 1; c < cells.size(); ++c) {
            try {
                col.push_back(std::stod(cells[c]));
            } catch (const std::exception&) {
                throw ParseError("series CSV line " + std::to_string(lineno) +
                                 ": bad number '" + cells[c] + "'");
            }
        }
        cols.push_back(std::move(col));
    }
    if (cols.empty()) throw EmptyInput("series CSV has no data rows");
    const int k = static_cast<int>(s.locations.size());
    const int T = static_cast<int>(cols.size());
    s.values.resize(k, T);
    for (int t = 0; t < T; ++t)
        for (int i = 0; i < k; ++i)
            s.values(i, t) = cols[static_cast<size_t>(t)][static_cast<size_t>(i)];
    s.validate();
    return s;
}

SpatioTemporalSeries SpatioTemporalSeries::from_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open series file '" + path + "'");
    return from_csv(in);
}

void SpatioTemporalSeries::to_csv(std::ostream& out) const {
    out << "time";
    for (const auto& id : locations) out << ',' << id;
    out << '\n';
    out << std::setprecision(17);
    for (int t = 0; t < T(); ++t) {
        out << times[static_cast<size_t>(t)];
        for (int i = 0; i < k(); ++i) out << ',' << values(i, t);
        out << '\n';
    }
}

void SpatioTemporalSeries::to_csv_file(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write series file '" + path + "'");
    to_csv(out);
}

std::pair<SpatioTemporalSeries, StandardizationStats> standardize(
    const SpatioTemporalSeries& series, TimeRange stats_window) {
    series.validate();
    if (!stats_window.valid() || stats_window.end > series.T() ||
        stats_window.length() < 2)
        throw InvalidArgument("stats_window must hold at least two time points");
    const int k = series.k();
    const int n = stats_window.length();
    StandardizationStats stats;
    stats.mean.resize(k);
    stats.std.resize(k);
    auto window = series.values.middleCols(stats_window.begin, n);
    for (int i = 0; i < k; ++i) {
        const double mean = window.row(i).mean();
        const double ss = (window.row(i).array() - mean).square().sum();
        const double sd = std::sqrt(ss / (n - 1));
        if (sd <= 0.0)
            throw ConstantSeries("location '" +
                                 series.locations[static_cast<size_t>(i)] +
                                 "' has zero variance over the stats window");
        stats.mean[i] = mean;
        stats.std[i] = sd;
    }
    SpatioTemporalSeries out = series;
    out.values = (series.values.colwise() - stats.mean).array().colwise() /
                 stats.std.array();
    return {std::move(out), std::move(stats)};
}

SpatioTemporalSeries filter_active_locations(const SpatioTemporalSeries& series,
                                             int min_nonzero) {
    series.validate();
    std::vector<int> keep;
    for (int i = 0; i < series.k(); ++i) {
        int nz = 0;
        for (int t = 0; t < series.T(); ++t)
            if (series.values(i, t) != 0.0) ++nz;
        if (nz >= min_nonzero) keep.push_back(i);
    }
    if (keep.empty())
        throw AllFiltered("no location has >= " + std::to_string(min_nonzero) +
                          " nonzero observations");
    SpatioTemporalSeries out;
    out.times = series.times;
    out.values.resize(static_cast<int>(keep.size()), series.T());
    for (size_t r = 0; r < keep.size(); ++r) {
        out.locations.push_back(series.locations[static_cast<size_t>(keep[r])]);
        out.values.row(static_cast<int>(r)) = series.values.row(keep[r]);
    }
    return out;
}

DesignPair build_design(const SpatioTemporalSeries& series,
                        const NeighborhoodWeights& W, ModelOrder order,
                        int location, TimeRange fit_range) {
    order.validate();
    if (W.eta < order.eta)
        throw InvalidArgument("weights provide fewer levels than the model order");
    if (W.k != series.k())
        throw InvalidArgument("weights and series disagree on location count");
    if (location < 0 || location >= series.k())
        throw InvalidArgument("location index out of range");
    if (!fit_range.valid() || fit_range.end > series.T())
        throw InvalidArgument("fit_range out of bounds");
    if (fit_range.length() <= order.p)
        throw WindowTooShort("fit range of length " +
                             std::to_string(fit_range.length()) +
                             " cannot support p = " + std::to_string(order.p));

    const int p = order.p;
    const int eta = order.eta;
    const int t0 = fit_range.begin + p;
    const int n = fit_range.end - t0;
    DesignPair d;
    d.location = location;
    d.covered = {t0, fit_range.end};
    d.Z.resize(n, p * eta);
    d.y.resize(n);
    for (int r = 0; r < n; ++r) {
        const int t = t0 + r;
        d.y[r] = series.values(location, t);
        for (int j = 1; j <= p; ++j) {
            const auto lagged = series.values.col(t - j);
            for (int l = 0; l < eta; ++l)
                d.Z(r, (j - 1) * eta + l) = W.level(l).row(location).dot(lagged);
        }
    }
    return d;
}

}  // namespace gstar
