#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "gstar/eval.hpp"
#include "gstar/models.hpp"
#include "gstar/pipeline.hpp"
#include "gstar/simulate.hpp"

namespace {

using namespace gstar;

int cmd_aggregate(const std::string& trips, const std::string& out,
                  int interval, const std::string& start, const std::string& end) {
    std::ifstream in(trips);
    if (!in) throw IoError("cannot open trips file '" + trips + "'");
    std::optional<std::int64_t> s, e;
    if (!start.empty()) s = parse_time(start);
    if (!end.empty()) e = parse_time(end);
    AggregateResult r = aggregate_trips(in, interval, s, e);
    for (const auto& msg : r.parse_errors)
        std::cerr << "warning: unparseable trip record, " << msg << '\n';
    if (r.failed > 0)
        std::cerr << "warning: " << r.failed << " record(s) skipped, "
                  << r.parsed << " parsed\n";
    r.series.to_csv_file(out);
    std::cerr << "wrote " << r.series.k() << " zones x " << r.series.T()
              << " bins to " << out << '\n';
    return 0;
}

int cmd_simulate(const std::string& adjacency, const std::string& out_dir,
                 std::uint64_t seed, int T, int burn_in, double sigma, int p,
                 int eta, double density, bool prefix) {
    AdjacencyGraph graph = AdjacencyGraph::from_file(adjacency);
    SparsityPlan plan;
    plan.density = density;
    plan.prefix_structured = prefix;
    GstarModel truth =
        random_sparse_model(graph.size(), ModelOrder{p, eta}, plan, graph, seed);
    SimulationSpec spec;
    spec.model = truth;
    spec.sigma = sigma;
    spec.T = T;
    spec.burn_in = burn_in;
    spec.seed = seed + 1;  // model draw and noise use distinct streams
    SpatioTemporalSeries series = simulate(spec);
    std::filesystem::create_directories(out_dir);
    series.to_csv_file(out_dir + "/series.csv");
    save_model(truth, out_dir + "/truth_model.json");
    std::cerr << "wrote " << series.k() << " x " << series.T()
              << " series and truth model to " << out_dir << '\n';
    return 0;
}

int cmd_fit(const std::string& series_path, const std::string& adjacency,
            int p, int eta, const std::string& kind_name, double lambda,
            const std::string& out) {
    SpatioTemporalSeries raw = SpatioTemporalSeries::from_csv_file(series_path);
    AdjacencyGraph graph = AdjacencyGraph::from_file(adjacency);
    graph = graph.induced_subgraph(raw.locations);
    auto [series, stats] = standardize(raw, raw.full_range());
    NeighborhoodWeights W = build_weights(graph, eta);
    const ModelOrder order{p, eta};
    const PenaltyKind kind = penalty_kind_from_string(kind_name);
    GstarModel model;
    if (kind == PenaltyKind::None) {
        model = fit_star_ols(series, W, order, series.full_range());
    } else {
        PenaltySpec spec{kind, lambda, order};
        model = fit_gstar_penalized(series, W, order, spec, SolverConfig{},
                                    series.full_range());
    }
    model.stats = stats;
    model.adjacency_fingerprint = graph.fingerprint();
    save_model(model, out);
    std::cerr << "wrote model (" << model.nonzero_count() << " nonzero of "
              << model.k() * order.dim() << ") to " << out << '\n';
    return 0;
}

int cmd_report(const std::string& in_path) {
    std::ifstream in(in_path);
    if (!in) throw IoError("cannot open report '" + in_path + "'");
    nlohmann::json j;
    in >> j;
    EvaluationReport report;
    for (const auto& row : j.at("rows")) {
        ReportRow r;
        r.model = row.at("model").get<std::string>();
        r.eta = row.at("eta").get<int>();
        r.mspe = row.at("mspe").get<double>();
        r.mrpe = row.at("mrpe").get<double>();
        if (row.value("interpolating", false)) {
            r.interpolating = true;
        } else {
            r.aic = row.at("aic").get<double>();
            r.bic = row.at("bic").get<double>();
        }
        r.lambda = row.at("lambda").get<double>();
        r.nonzero = row.at("nonzero").get<int>();
        report.rows.push_back(std::move(r));
    }
    std::cout << report.to_text();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"GSTAR spatio-temporal forecasting pipeline"};
    app.require_subcommand(1);

    auto* agg = app.add_subcommand("aggregate",
                                   "Bin trip records into a series CSV");
    std::string agg_trips, agg_out, agg_start, agg_end;
    int agg_interval = 15;
    agg->add_option("--trips", agg_trips, "trips CSV (timestamp,zone)")->required();
    agg->add_option("--out", agg_out, "output series CSV")->required();
    agg->add_option("--interval", agg_interval, "bin width in minutes");
    agg->add_option("--start", agg_start, "range start (inclusive)");
    agg->add_option("--end", agg_end, "range end (exclusive)");

    auto* sim = app.add_subcommand("simulate",
                                   "Draw a random stable model and simulate from it");
    std::string sim_adj, sim_out;
    std::uint64_t sim_seed = 0;
    int sim_T = 96, sim_burn = 200, sim_p = 1, sim_eta = 2;
    double sim_sigma = 1.0, sim_density = 0.5;
    bool sim_prefix = false;
    sim->add_option("--adjacency", sim_adj, "adjacency edge-list file")->required();
    sim->add_option("--out", sim_out, "output directory")->required();
    sim->add_option("--seed", sim_seed, "random seed")->required();
    sim->add_option("--T", sim_T, "series length");
    sim->add_option("--burn-in", sim_burn, "discarded prefix length");
    sim->add_option("--sigma", sim_sigma, "noise standard deviation");
    sim->add_option("--p", sim_p, "time-lag order");
    sim->add_option("--eta", sim_eta, "neighborhood levels");
    sim->add_option("--density", sim_density, "support density");
    sim->add_flag("--prefix-structured", sim_prefix,
                  "supports form chain prefixes");

    auto* fit = app.add_subcommand("fit", "Fit one model on a series CSV");
    std::string fit_series, fit_adj, fit_kind = "none", fit_out;
    int fit_p = 1, fit_eta = 1;
    double fit_lambda = 0.0;
    fit->add_option("--series", fit_series, "series CSV")->required();
    fit->add_option("--adjacency", fit_adj, "adjacency edge-list file")->required();
    fit->add_option("--out", fit_out, "output model JSON")->required();
    fit->add_option("--p", fit_p, "time-lag order");
    fit->add_option("--eta", fit_eta, "neighborhood levels");
    fit->add_option("--kind", fit_kind, "none|lasso|hglasso|dhglasso");
    fit->add_option("--lambda", fit_lambda, "penalty tuning parameter");

    auto* eval = app.add_subcommand(
        "evaluate", "Cross-validate and compare all model families");
    std::string eval_config, eval_out;
    std::uint64_t eval_seed = 0;
    eval->add_option("--config", eval_config, "pipeline config JSON")->required();
    eval->add_option("--seed", eval_seed, "random seed (recorded in manifest)")
        ->required();
    eval->add_option("--out", eval_out, "output directory")->required();

    auto* rep = app.add_subcommand("report", "Render a report.json as text");
    std::string rep_in;
    rep->add_option("--in", rep_in, "report.json path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (agg->parsed())
            return cmd_aggregate(agg_trips, agg_out, agg_interval, agg_start,
                                 agg_end);
        if (sim->parsed())
            return cmd_simulate(sim_adj, sim_out, sim_seed, sim_T, sim_burn,
                                sim_sigma, sim_p, sim_eta, sim_density,
                                sim_prefix);
        if (fit->parsed())
            return cmd_fit(fit_series, fit_adj, fit_p, fit_eta, fit_kind,
                           fit_lambda, fit_out);
        if (eval->parsed()) {
            PipelineConfig config = PipelineConfig::from_json_file(eval_config);
            config.seed = eval_seed;
            config.out_dir = eval_out;
            run_pipeline(config);
            return 0;
        }
        if (rep->parsed()) return cmd_report(rep_in);
    } catch (const gstar::Error& e) {
        std::cerr << "ERROR " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "ERROR Unhandled: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
