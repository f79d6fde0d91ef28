#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gstar/common.hpp"
#include "gstar/eval.hpp"
#include "gstar/series.hpp"

namespace gstar {

/// Parses integer epoch seconds or ISO timestamps
/// (YYYY-MM-DD[ T]HH:MM[:SS]); returns epoch seconds.
std::int64_t parse_time(const std::string& text);
std::string format_time(std::int64_t epoch_seconds, bool iso);

struct AggregateResult {
    SpatioTemporalSeries series;
    int parsed = 0;
    int failed = 0;
    std::vector<std::string> parse_errors;  // first few, with line numbers
};

/// Counts trip records (timestamp,zone CSV) into half-open interval bins.
/// A record exactly on a bin boundary lands in the later bin. Zones come out
/// sorted lexicographically; every bin in the range is materialized.
AggregateResult aggregate_trips(std::istream& in, int interval_minutes,
                                std::optional<std::int64_t> range_start = {},
                                std::optional<std::int64_t> range_end = {});

struct PipelineConfig {
    std::string series_path;   // exactly one of series_path / trips_path
    std::string trips_path;
    std::string adjacency_path;
    int interval_minutes = 15;
    int min_nonzero = -1;      // -1: 10% of T
    int p = 1;
    std::vector<int> etas = {1, 2, 3, 4, 5, 6};
    std::vector<std::string> kinds = {"star", "lasso", "hglasso", "dhglasso"};
    int grid_points = 20;
    std::optional<int> T1, T2;
    SolverConfig solver;
    bool train_only_standardization = false;
    std::uint64_t seed = 0;
    std::string out_dir;

    static PipelineConfig from_json_file(const std::string& path);
    std::string to_json() const;
};

/// Runs the whole pipeline and writes report.txt, report.json,
/// coefficients.csv, models/*.json and manifest.json under config.out_dir.
/// Timing lives only in the manifest so the report files are reproducible
/// byte for byte.
void run_pipeline(const PipelineConfig& config);

}  // namespace gstar
