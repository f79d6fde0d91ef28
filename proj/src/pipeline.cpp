#include "gstar/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace gstar {

namespace {

constexpr std::int64_t kSecondsPerDay = 86400;

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

std::int64_t parse_time(const std::string& text) {
    const std::string t = trim(text);
    if (t.empty()) throw ParseError("empty timestamp");
    if (t.find_first_not_of("-0123456789") == std::string::npos &&
        t.find('-', 1) == std::string::npos) {
        return std::stoll(t);  // plain integer epoch seconds (or index)
    }
    std::tm tm{};
    int year, month, day, hour, minute, second = 0;
    char sep;
    int n = std::sscanf(t.c_str(), "%d-%d-%d%c%d:%d:%d", &year, &month, &day,
                        &sep, &hour, &minute, &second);
    if (n < 6 || (sep != ' ' && sep != 'T'))
        throw ParseError("unparseable timestamp '" + t + "'");
    tm.tm_year = year - 1900;
    tm.tm_mon = month - 1;
    tm.tm_mday = day;
    tm.tm_hour = hour;
    tm.tm_min = minute;
    tm.tm_sec = second;
    const std::time_t epoch = timegm(&tm);
    if (epoch == static_cast<std::time_t>(-1))
        throw ParseError("timestamp out of range '" + t + "'");
    return static_cast<std::int64_t>(epoch);
}

std::string format_time(std::int64_t epoch_seconds, bool iso) {
    if (!iso) return std::to_string(epoch_seconds);
    std::time_t tt = static_cast<std::time_t>(epoch_seconds);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[80];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d %02d:%02d:%02d",
                  tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday, tm.tm_hour,
                  tm.tm_min, tm.tm_sec);
    return buf;
}

AggregateResult aggregate_trips(std::istream& in, int interval_minutes,
                                std::optional<std::int64_t> range_start,
                                std::optional<std::int64_t> range_end) {
    if (interval_minutes <= 0 || (24 * 60) % interval_minutes != 0)
        throw InvalidArgument("interval must divide 24 hours evenly");
    const std::int64_t interval = static_cast<std::int64_t>(interval_minutes) * 60;

    struct Record {
        std::int64_t ts;
        std::string zone;
    };
    std::vector<Record> records;
    AggregateResult result;
    std::string line;
    int lineno = 0;
    bool first_data_line = true;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto comma = t.find(',');
        std::string ts_text = comma == std::string::npos ? t : t.substr(0, comma);
        std::string zone = comma == std::string::npos ? "" : trim(t.substr(comma + 1));
        try {
            if (comma == std::string::npos) throw ParseError("missing zone column");
            if (zone.empty()) throw ParseError("empty zone id");
            records.push_back({parse_time(ts_text), zone});
            ++result.parsed;
        } catch (const Error& e) {
            if (first_data_line && comma != std::string::npos) {
                first_data_line = false;  // tolerate a header line
                continue;
            }
            ++result.failed;
            if (result.parse_errors.size() < 20)
                result.parse_errors.push_back("line " + std::to_string(lineno) +
                                              ": " + e.what());
        }
        first_data_line = false;
    }
    if (records.empty()) throw EmptyInput("no parseable trip records");

    std::int64_t min_ts = records[0].ts, max_ts = records[0].ts;
    for (const auto& r : records) {
        min_ts = std::min(min_ts, r.ts);
        max_ts = std::max(max_ts, r.ts);
    }
    auto floor_to = [interval](std::int64_t ts) {
        std::int64_t f = ts % interval;
        if (f < 0) f += interval;
        return ts - f;
    };
    const std::int64_t start = range_start ? *range_start : floor_to(min_ts);
    const std::int64_t end =
        range_end ? *range_end : floor_to(max_ts) + interval;
    if (end <= start) throw InvalidArgument("empty aggregation range");
    const int bins = static_cast<int>((end - start + interval - 1) / interval);

    std::set<std::string> zone_set;
    for (const auto& r : records) zone_set.insert(r.zone);
    std::vector<std::string> zones(zone_set.begin(), zone_set.end());
    std::map<std::string, int> zone_index;
    for (size_t z = 0; z < zones.size(); ++z) zone_index[zones[z]] = static_cast<int>(z);

    SpatioTemporalSeries& s = result.series;
    s.locations = zones;
    s.values = Eigen::MatrixXd::Zero(static_cast<int>(zones.size()), bins);
    const bool iso_labels = interval % kSecondsPerDay != 0 || start != 0;
    for (int b = 0; b < bins; ++b)
        s.times.push_back(format_time(start + b * interval, iso_labels));
    for (const auto& r : records) {
        if (r.ts < start || r.ts >= end) continue;
        const int b = static_cast<int>((r.ts - start) / interval);
        s.values(zone_index[r.zone], b) += 1.0;
    }
    return result;
}

PipelineConfig PipelineConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ParseError(std::string("config JSON: ") + e.what());
    }
    PipelineConfig c;
    c.series_path = j.value("series", "");
    c.trips_path = j.value("trips", "");
    c.adjacency_path = j.value("adjacency", "");
    c.interval_minutes = j.value("interval_minutes", 15);
    c.min_nonzero = j.value("min_nonzero", -1);
    c.p = j.value("p", 1);
    if (j.contains("etas")) c.etas = j["etas"].get<std::vector<int>>();
    if (j.contains("kinds")) c.kinds = j["kinds"].get<std::vector<std::string>>();
    c.grid_points = j.value("grid_points", 20);
    if (j.contains("T1")) c.T1 = j["T1"].get<int>();
    if (j.contains("T2")) c.T2 = j["T2"].get<int>();
    if (j.contains("solver")) {
        const auto& s = j["solver"];
        c.solver.max_iter = s.value("max_iter", c.solver.max_iter);
        c.solver.tol = s.value("tol", c.solver.tol);
        c.solver.step_safety = s.value("step_safety", c.solver.step_safety);
    }
    c.train_only_standardization = j.value("standardize", std::string("full")) == "train";
    c.seed = j.value("seed", 0ULL);
    c.out_dir = j.value("out", "");
    return c;
}

std::string PipelineConfig::to_json() const {
    nlohmann::json j;
    if (!series_path.empty()) j["series"] = series_path;
    if (!trips_path.empty()) j["trips"] = trips_path;
    j["adjacency"] = adjacency_path;
    j["interval_minutes"] = interval_minutes;
    j["min_nonzero"] = min_nonzero;
    j["p"] = p;
    j["etas"] = etas;
    j["kinds"] = kinds;
    j["grid_points"] = grid_points;
    if (T1) j["T1"] = *T1;
    if (T2) j["T2"] = *T2;
    j["solver"] = {{"max_iter", solver.max_iter},
                   {"tol", solver.tol},
                   {"step_safety", solver.step_safety}};
    j["standardize"] = train_only_standardization ? "train" : "full";
    j["seed"] = seed;
    j["out"] = out_dir;
    return j.dump(2);
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << content;
}

}  // namespace

void run_pipeline(const PipelineConfig& config) {
    using clock = std::chrono::steady_clock;
    const auto t_start = clock::now();
    if (config.out_dir.empty()) throw InvalidArgument("output directory not set");
    if (config.adjacency_path.empty())
        throw InvalidArgument("adjacency file not set");
    if (config.series_path.empty() == config.trips_path.empty())
        throw InvalidArgument("exactly one of 'series' and 'trips' must be set");
    if (config.etas.empty()) throw InvalidArgument("eta list is empty");

    std::filesystem::create_directories(config.out_dir);
    const std::filesystem::path out_dir(config.out_dir);

    int trips_parsed = 0, trips_failed = 0;
    SpatioTemporalSeries raw;
    if (!config.trips_path.empty()) {
        std::ifstream in(config.trips_path);
        if (!in) throw IoError("cannot open trips file '" + config.trips_path + "'");
        AggregateResult agg = aggregate_trips(in, config.interval_minutes);
        for (const auto& msg : agg.parse_errors)
            std::cerr << "warning: unparseable trip record, " << msg << '\n';
        trips_parsed = agg.parsed;
        trips_failed = agg.failed;
        raw = std::move(agg.series);
    } else {
        raw = SpatioTemporalSeries::from_csv_file(config.series_path);
    }

    AdjacencyGraph graph = AdjacencyGraph::from_file(config.adjacency_path);
    {
        std::set<std::string> graph_locs(graph.locations().begin(),
                                         graph.locations().end());
        std::vector<std::string> keep;
        for (const auto& id : raw.locations) {
            if (graph_locs.count(id)) {
                keep.push_back(id);
            } else {
                std::cerr << "warning: zone '" << id
                          << "' has data but no adjacency entry; dropped\n";
            }
        }
        if (keep.size() != raw.locations.size() || keep.empty()) {
            if (keep.empty())
                throw AllFiltered("no zone appears in both data and adjacency");
            SpatioTemporalSeries sub;
            sub.times = raw.times;
            sub.values.resize(static_cast<int>(keep.size()), raw.T());
            for (size_t r = 0; r < keep.size(); ++r) {
                int src = static_cast<int>(
                    std::find(raw.locations.begin(), raw.locations.end(), keep[r]) -
                    raw.locations.begin());
                sub.values.row(static_cast<int>(r)) = raw.values.row(src);
                sub.locations.push_back(keep[r]);
            }
            raw = std::move(sub);
        }
    }

    const int min_nonzero =
        config.min_nonzero >= 0 ? config.min_nonzero : (raw.T() + 9) / 10;
    SpatioTemporalSeries active = filter_active_locations(raw, min_nonzero);
    graph = graph.induced_subgraph(active.locations);

    const int T = active.T();
    SplitSpec split = SplitSpec::defaults_for(T);
    if (config.T1) split.T1 = *config.T1;
    if (config.T2) split.T2 = *config.T2;
    split.validate(T);

    const TimeRange stats_window =
        config.train_only_standardization ? TimeRange{0, split.T2}
                                          : TimeRange{0, T};
    auto [series, stats] = standardize(active, stats_window);

    std::vector<PenaltyKind> kinds;
    for (const auto& name : config.kinds)
        kinds.push_back(penalty_kind_from_string(name));

    std::vector<GstarModel> models;
    EvaluationReport report =
        compare_models(series, graph, config.p, config.etas, kinds, split,
                       config.grid_points, config.solver, &models);
    for (auto& m : models) m.stats = stats;

    write_file(out_dir / "report.txt", report.to_text());
    write_file(out_dir / "report.json", report.to_json());
    write_file(out_dir / "coefficients.csv", coefficient_csv(models));
    std::filesystem::create_directories(out_dir / "models");
    for (const auto& m : models) {
        std::string name = m.penalty.kind == PenaltyKind::None
                               ? "star"
                               : to_string(m.penalty.kind);
        save_model(m, (out_dir / "models" /
                       (name + "_eta" + std::to_string(m.order.eta) + ".json"))
                          .string());
    }

    const double wall_seconds =
        std::chrono::duration<double>(clock::now() - t_start).count();
    nlohmann::json manifest;
    manifest["config"] = nlohmann::json::parse(config.to_json());
    manifest["seed"] = config.seed;
    manifest["locations_modeled"] = series.locations;
    manifest["T"] = T;
    manifest["split"] = {{"T1", split.T1}, {"T2", split.T2}};
    if (!config.trips_path.empty()) {
        manifest["trips_parsed"] = trips_parsed;
        manifest["trips_failed"] = trips_failed;
    }
    manifest["wall_seconds"] = wall_seconds;
    write_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
}

}  // namespace gstar
