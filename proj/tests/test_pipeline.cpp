#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gstar/pipeline.hpp"
#include "gstar/simulate.hpp"

using namespace gstar;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) {
        path = fs::temp_directory_path() / ("gstar_test_" + name);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("parse_time accepts ISO and integer forms") {
    CHECK(parse_time("0") == 0);
    CHECK(parse_time("1970-01-01 00:00:00") == 0);
    CHECK(parse_time("1970-01-01T00:15:00") == 900);
    CHECK(parse_time("1970-01-02 00:00") == 86400);
    CHECK_THROWS_AS(parse_time("yesterday"), ParseError);
}

TEST_CASE("aggregate_trips counts, boundaries, zero cells") {
    std::istringstream in(
        "pickup_time,zone\n"
        "1970-01-01 00:01:00,Z2\n"
        "1970-01-01 00:02:00,Z2\n"
        "1970-01-01 00:14:59,Z2\n"
        "1970-01-01 00:15:00,Z1\n"
        "1970-01-01 00:40:00,Z1\n");
    auto r = aggregate_trips(in, 15);
    CHECK(r.parsed == 5);
    CHECK(r.failed == 0);
    const auto& s = r.series;
    REQUIRE(s.locations == std::vector<std::string>{"Z1", "Z2"});
    REQUIRE(s.T() == 3);
    CHECK(s.values(1, 0) == 3.0);       // three records in the first bin
    CHECK(s.values(0, 1) == 1.0);       // boundary record lands in the later bin
    CHECK(s.values(1, 1) == 0.0);       // explicit zero cell
    CHECK(s.values(0, 2) == 1.0);
    CHECK(s.values.sum() == r.parsed);  // totals identity
}

TEST_CASE("a full day of 15-minute bins is 96 columns") {
    std::ostringstream trips;
    trips << "pickup_time,zone\n";
    trips << "1970-01-01 00:00:30,A\n";
    trips << "1970-01-01 23:59:00,A\n";
    std::istringstream in(trips.str());
    auto r = aggregate_trips(in, 15);
    CHECK(r.series.T() == 96);
}

TEST_CASE("bad records are counted and skipped, not fatal") {
    std::istringstream in(
        "1970-01-01 00:01:00,Z1\n"
        "not-a-time,Z1\n"
        "1970-01-01 00:02:00,\n"
        "1970-01-01 00:03:00,Z1\n");
    auto r = aggregate_trips(in, 15);
    CHECK(r.parsed == 2);
    CHECK(r.failed == 2);
    CHECK(r.parse_errors.size() == 2);
    CHECK(r.series.values.sum() == 2.0);

    std::istringstream empty("# nothing\n");
    CHECK_THROWS_AS(aggregate_trips(empty, 15), EmptyInput);

    std::istringstream some("1970-01-01 00:00:00,A\n");
    CHECK_THROWS_AS(aggregate_trips(some, 7), InvalidArgument);
}

TEST_CASE("pipeline config JSON round trip") {
    PipelineConfig c;
    c.series_path = "s.csv";
    c.adjacency_path = "adj.txt";
    c.etas = {1, 3};
    c.kinds = {"star", "dhglasso"};
    c.T1 = 20;
    c.solver.tol = 1e-6;
    c.train_only_standardization = true;
    c.seed = 99;
    c.out_dir = "out";
    TempDir dir("config");
    {
        std::ofstream out(dir.path / "config.json");
        out << c.to_json();
    }
    PipelineConfig back =
        PipelineConfig::from_json_file((dir.path / "config.json").string());
    CHECK(back.series_path == c.series_path);
    CHECK(back.etas == c.etas);
    CHECK(back.kinds == c.kinds);
    CHECK(back.T1.value() == 20);
    CHECK(!back.T2.has_value());
    CHECK(back.solver.tol == c.solver.tol);
    CHECK(back.train_only_standardization);
    CHECK(back.seed == 99);
}

TEST_CASE("run_pipeline writes deterministic artifacts with the row contract") {
    TempDir dir("pipeline");

    // synthetic input series + adjacency
    std::vector<std::string> locs;
    for (int i = 0; i < 6; ++i) locs.push_back("Z" + std::to_string(i));
    std::vector<std::pair<std::string, std::string>> edges;
    for (int i = 0; i + 1 < 6; ++i) edges.emplace_back(locs[i], locs[i + 1]);
    AdjacencyGraph graph(locs, edges);
    {
        std::ofstream adj(dir.path / "adj.txt");
        for (int i = 0; i + 1 < 6; ++i)
            adj << locs[i] << ',' << locs[i + 1] << '\n';
    }
    SparsityPlan plan;
    plan.density = 0.7;
    GstarModel truth = random_sparse_model(6, ModelOrder{1, 2}, plan, graph, 31);
    SimulationSpec spec;
    spec.model = truth;
    spec.sigma = 1.0;
    spec.T = 60;
    spec.seed = 7;
    simulate(spec).to_csv_file((dir.path / "series.csv").string());

    PipelineConfig config;
    config.series_path = (dir.path / "series.csv").string();
    config.adjacency_path = (dir.path / "adj.txt").string();
    config.etas = {1, 2};
    config.kinds = {"star", "lasso", "dhglasso"};
    config.grid_points = 6;
    config.min_nonzero = 0;
    config.seed = 7;
    config.out_dir = (dir.path / "run1").string();
    run_pipeline(config);

    config.out_dir = (dir.path / "run2").string();
    run_pipeline(config);

    // 1 VAR row + |etas| * |kinds|
    const std::string report = read_file(dir.path / "run1" / "report.json");
    CHECK(report == read_file(dir.path / "run2" / "report.json"));
    CHECK(read_file(dir.path / "run1" / "report.txt") ==
          read_file(dir.path / "run2" / "report.txt"));
    CHECK(read_file(dir.path / "run1" / "coefficients.csv") ==
          read_file(dir.path / "run2" / "coefficients.csv"));
    size_t rows = 0, pos = 0;
    while ((pos = report.find("\"model\"", pos)) != std::string::npos) {
        ++rows;
        ++pos;
    }
    CHECK(rows == 1 + 2 * 3);

    // model files reload and are byte-identical across runs
    for (const auto& name : {"star_eta1.json", "star_eta2.json",
                             "lasso_eta1.json", "dhglasso_eta2.json"}) {
        CHECK(read_file(dir.path / "run1" / "models" / name) ==
              read_file(dir.path / "run2" / "models" / name));
        CHECK_NOTHROW(load_model((dir.path / "run1" / "models" / name).string()));
    }
    CHECK(fs::exists(dir.path / "run1" / "manifest.json"));
}

TEST_CASE("pipeline drops zones missing from the adjacency with a warning") {
    TempDir dir("dropzone");
    {
        std::ofstream adj(dir.path / "adj.txt");
        adj << "A,B\n";
    }
    {
        std::ofstream csv(dir.path / "series.csv");
        csv << "time,A,B,GHOST\n";
        for (int t = 0; t < 30; ++t)
            csv << t << ',' << 0.5 * ((t * 7) % 5) << ',' << 0.3 * ((t * 3) % 7)
                << ',' << t << '\n';
    }
    PipelineConfig config;
    config.series_path = (dir.path / "series.csv").string();
    config.adjacency_path = (dir.path / "adj.txt").string();
    config.etas = {1};
    config.kinds = {"star"};
    config.min_nonzero = 0;
    config.out_dir = (dir.path / "out").string();
    run_pipeline(config);
    const std::string manifest = read_file(dir.path / "out" / "manifest.json");
    CHECK(manifest.find("GHOST") == std::string::npos);
    CHECK(manifest.find("\"A\"") != std::string::npos);
}
