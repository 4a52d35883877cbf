// edgesample command-line tool: generate | linegraph | sample | eval | experiment.
// Exit codes: 0 success, 1 usage error, 2 data error.

#include "edgesample/edgesample.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>

namespace es = edgesample;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

es::Graph read_input_graph(const std::string& path, bool drop_self_loops)
{
    if (es::ends_with(path, ".mtx"))
        return es::read_matrix_market(path, {drop_self_loops});
    return es::read_edge_list(path);
}

void write_text(const std::string& path, const std::string& text)
{
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    auto out = es::detail::open_out(path);
    out << text;
}

es::Method method_or_usage(const std::string& name)
{
    const auto m = es::parse_method(name);
    if (!m)
        throw UsageError("unknown method \"" + name + "\"; valid methods: " + std::string(es::kMethodList));
    return *m;
}

std::filesystem::path default_output_dir()
{
    const char* env = std::getenv("EDGESAMPLE_OUTPUT_DIR");
    return env && *env ? std::filesystem::path(env) : std::filesystem::path(".");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Edge sampling on graphs via line graphs and localization operators"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(es::kVersion));

    // generate
    auto* gen = app.add_subcommand("generate", "Write a synthetic graph as an edge list");
    std::string gen_family = "community";
    std::size_t gen_nodes = 100;
    std::size_t gen_k = 6;
    double gen_p = 0.1;
    std::size_t gen_communities = 5;
    std::size_t gen_clusters = 2;
    std::uint64_t gen_seed = 1;
    bool gen_weighted = false;
    std::string gen_out;
    std::string gen_coords;
    std::string gen_labels;
    gen->add_option("--family", gen_family, "sensor | erdos_renyi | community | knn")
        ->check(CLI::IsMember({"sensor", "erdos_renyi", "community", "knn"}))
        ->capture_default_str();
    gen->add_option("--nodes,-n", gen_nodes, "Number of nodes")->capture_default_str();
    gen->add_option("--k", gen_k, "Neighbors for sensor / knn")->capture_default_str();
    gen->add_option("--p", gen_p, "Edge probability for erdos_renyi")->capture_default_str();
    gen->add_option("--communities", gen_communities, "Communities for community")->capture_default_str();
    gen->add_option("--clusters", gen_clusters, "Point clusters for knn")->capture_default_str();
    gen->add_flag("--weighted", gen_weighted, "Random weights for erdos_renyi");
    gen->add_option("--seed", gen_seed, "Generator seed")->capture_default_str();
    gen->add_option("--out,-o", gen_out, "Edge-list output (default stdout)");
    gen->add_option("--coords", gen_coords, "Coordinate sidecar output");
    gen->add_option("--labels", gen_labels, "Planted label output, one per line");

    // linegraph
    auto* lg = app.add_subcommand("linegraph", "Write the line-graph adjacency W_L as Matrix Market");
    std::string lg_in;
    std::string lg_out;
    bool lg_unweighted = false;
    bool lg_laplacian = false;
    bool lg_drop = false;
    lg->add_option("--in,-i", lg_in, "Input graph (.mtx or edge list)")->required();
    lg->add_option("--out,-o", lg_out, "Output .mtx (default stdout)");
    lg->add_flag("--unweighted", lg_unweighted, "Ignore edge weights");
    lg->add_flag("--laplacian", lg_laplacian, "Write L_L instead of W_L");
    lg->add_flag("--drop-self-loops", lg_drop, "Skip diagonal Matrix Market entries");

    // sample
    auto* smp = app.add_subcommand("sample", "Select an edge sampling set");
    std::string smp_method;
    std::string smp_size_text;
    std::size_t smp_q = 0;
    std::uint64_t smp_seed = 0;
    std::string smp_in;
    std::string smp_out;
    bool smp_drop = false;
    std::string smp_operator = "edge_laplacian";
    std::string smp_filter = "cpa";
    int smp_degree = 6;
    double smp_tau = 4.0;
    double smp_epsilon = 1e-8;
    std::optional<double> smp_eta;
    smp->add_option("--method,-m", smp_method, std::string("One of: ") + std::string(es::kMethodList))->required();
    auto* size_opt = smp->add_option("--size,-s", smp_size_text, "Edges to select: a count, or a fraction of |E| such as 0.5");
    auto* q_opt = smp->add_option("--gsparse-q", smp_q, "GSparse draw count");
    size_opt->excludes(q_opt);
    smp->add_option("--seed", smp_seed, "GSparse seed")->capture_default_str();
    smp->add_option("--in,-i", smp_in, "Input graph (.mtx or edge list)")->required();
    smp->add_option("--out,-o", smp_out, "SampleResult JSON (default stdout)");
    smp->add_flag("--drop-self-loops", smp_drop, "Skip diagonal Matrix Market entries");
    smp->add_option("--line-operator", smp_operator, "edge_laplacian | line_laplacian (nslg)")
        ->check(CLI::IsMember({"edge_laplacian", "line_laplacian"}))
        ->capture_default_str();
    smp->add_option("--filter", smp_filter, "cpa | exact")->check(CLI::IsMember({"cpa", "exact"}))->capture_default_str();
    smp->add_option("--cpa-degree", smp_degree, "Chebyshev degree")->capture_default_str();
    smp->add_option("--tau", smp_tau, "Heat kernel scale")->capture_default_str();
    smp->add_option("--epsilon", smp_epsilon, "A-NSLG regularizer")->capture_default_str();
    smp->add_option("--eta", smp_eta, "Greedy threshold (default: max column l1 norm)");

    // eval
    auto* ev = app.add_subcommand("eval", "Evaluate a SampleResult against the original graph");
    std::string ev_in;
    std::string ev_sample;
    std::string ev_out;
    std::string ev_config;
    std::vector<std::string> ev_set;
    bool ev_drop = false;
    std::size_t ev_trials = 1;
    ev->add_option("--in,-i", ev_in, "Original graph (.mtx or edge list)")->required();
    ev->add_option("--sample", ev_sample, "SampleResult JSON")->required();
    ev->add_option("--out,-o", ev_out, "MetricReport JSON (default stdout)");
    ev->add_option("--config,-c", ev_config, "Key-value config for synthesis and metric settings");
    ev->add_option("--set", ev_set, "Override a config key (key=value)");
    ev->add_option("--trials", ev_trials, "Trials to evaluate")->capture_default_str();
    ev->add_flag("--drop-self-loops", ev_drop, "Skip diagonal Matrix Market entries");

    // experiment
    auto* ex = app.add_subcommand("experiment", "Run a (method, size, trial) sweep");
    std::string ex_config;
    std::vector<std::string> ex_set;
    std::string ex_graph;
    std::string ex_methods;
    std::string ex_sizes;
    std::optional<std::size_t> ex_trials;
    std::optional<std::uint64_t> ex_seed;
    std::string ex_csv;
    std::string ex_json;
    bool ex_drop = false;
    ex->add_option("--config,-c", ex_config, "Key-value config file");
    ex->add_option("--set", ex_set, "Override a config key (key=value)");
    ex->add_option("--graph-path", ex_graph, "Input graph file");
    ex->add_option("--methods", ex_methods, "Comma-separated methods");
    ex->add_option("--sizes", ex_sizes, "Comma-separated sizes (integers or fractions of |E|)");
    ex->add_option("--trials", ex_trials, "Trials per cell");
    ex->add_option("--seed", ex_seed, "Master seed");
    ex->add_option("--csv", ex_csv, "CSV output path");
    ex->add_option("--json", ex_json, "JSON output path");
    ex->add_flag("--drop-self-loops", ex_drop, "Skip diagonal Matrix Market entries");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    const auto apply_overrides = [](es::ExperimentConfig& cfg, const std::vector<std::string>& sets) {
        for (const std::string& s : sets) {
            const auto eq = s.find('=');
            if (eq == std::string::npos)
                throw UsageError("--set expects key=value, got \"" + s + "\"");
            es::apply_setting(cfg, s.substr(0, eq), s.substr(eq + 1));
        }
    };

    try {
        if (*gen) {
            es::GeneratedGraph g;
            if (gen_family == "sensor")
                g = es::gen_sensor(gen_nodes, gen_k, gen_seed);
            else if (gen_family == "erdos_renyi")
                g = es::gen_erdos_renyi(gen_nodes, gen_p, gen_seed, {gen_weighted});
            else if (gen_family == "community")
                g = es::gen_community(gen_nodes, gen_communities, gen_seed);
            else
                g = es::gen_knn_clusters(gen_nodes, gen_k, gen_clusters, gen_seed);
            std::ostringstream os;
            es::write_edge_list(g.graph, os);
            write_text(gen_out, os.str());
            if (!gen_coords.empty()) {
                if (!g.graph.coords())
                    throw UsageError("family " + gen_family + " has no coordinates");
                es::write_coords(*g.graph.coords(), gen_coords);
            }
            if (!gen_labels.empty()) {
                if (!g.labels)
                    throw UsageError("family " + gen_family + " has no planted labels");
                std::ostringstream ls;
                for (std::size_t l : *g.labels)
                    ls << l << '\n';
                write_text(gen_labels, ls.str());
            }
        } else if (*lg) {
            es::Graph g = read_input_graph(lg_in, lg_drop);
            if (lg_unweighted)
                g = g.unweighted();
            const es::LineGraph line = es::line_graph(g);
            std::ostringstream os;
            es::write_matrix_market(lg_laplacian ? line.laplacian : line.adjacency, os, true);
            write_text(lg_out, os.str());
        } else if (*smp) {
            const es::Method method = method_or_usage(smp_method);
            const es::Graph g = read_input_graph(smp_in, smp_drop);
            const std::size_t smp_size =
                smp_size_text.empty() ? 0 : es::parse_size(smp_size_text).resolve(g.num_edges());
            es::SampleResult r;
            if (method == es::Method::GSparse) {
                std::size_t q = smp_q;
                if (q == 0) {
                    if (smp_size == 0)
                        throw UsageError("gsparse needs --gsparse-q or --size");
                    q = es::gsparse_q_for_size(es::gsparse_probabilities(g), static_cast<double>(smp_size));
                }
                r = es::gsparse_select(g, q, smp_seed);
            } else {
                if (smp_size == 0)
                    throw UsageError(std::string(es::to_string(method)) + " needs --size");
                es::NslgParams p;
                p.line_operator =
                    smp_operator == "edge_laplacian" ? es::LineOperator::EdgeLaplacian : es::LineOperator::LineLaplacian;
                p.filter = smp_filter == "cpa" ? es::FilterMode::Cpa : es::FilterMode::Exact;
                p.cpa_degree = smp_degree;
                p.tau = smp_tau;
                p.epsilon = smp_epsilon;
                p.eta = smp_eta;
                switch (method) {
                case es::Method::Nslg: r = es::nslg(g, smp_size, p); break;
                case es::Method::Anslg: r = es::anslg(g, smp_size, p); break;
                case es::Method::MaxDegree: r = es::maxdegree_select(g, smp_size); break;
                case es::Method::NetMelt: r = es::netmelt_select(g, smp_size); break;
                case es::Method::GSparse: break;
                }
            }
            write_text(smp_out, es::to_json(r).dump(2) + "\n");
        } else if (*ev) {
            es::ExperimentConfig cfg;
            if (!ev_config.empty())
                cfg = es::load_config(ev_config);
            apply_overrides(cfg, ev_set);
            const es::Graph g = read_input_graph(ev_in, ev_drop);
            auto in = es::detail::open_in(ev_sample);
            nlohmann::json j;
            try {
                in >> j;
            } catch (const nlohmann::json::exception& e) {
                throw es::Error(es::ErrorCode::ParseError, ev_sample + ": " + e.what());
            }
            const es::SampleResult sample = es::sample_from_json(j);
            for (es::EdgeId a : sample.selected)
                if (a >= g.num_edges())
                    throw es::Error(es::ErrorCode::InvalidEdgeId, "sample references edge " + std::to_string(a));
            const es::Evaluator evaluator(g, cfg);
            nlohmann::json rows = nlohmann::json::array();
            for (std::size_t t = 0; t < ev_trials; ++t) {
                es::MetricReport r = evaluator.evaluate(evaluator.make_trial(t), sample);
                r.size = sample.requested_size;
                rows.push_back(es::to_json(r));
            }
            write_text(ev_out, rows.dump(2) + "\n");
        } else if (*ex) {
            es::ExperimentConfig cfg;
            if (!ex_config.empty())
                cfg = es::load_config(ex_config);
            apply_overrides(cfg, ex_set);
            if (!ex_graph.empty())
                es::apply_setting(cfg, "graph_path", ex_graph);
            if (!ex_methods.empty())
                es::apply_setting(cfg, "methods", ex_methods);
            if (!ex_sizes.empty())
                es::apply_setting(cfg, "sizes", ex_sizes);
            if (ex_trials)
                cfg.trials = *ex_trials;
            if (ex_seed)
                cfg.master_seed = *ex_seed;
            if (!ex_csv.empty())
                cfg.csv_path = ex_csv;
            if (!ex_json.empty())
                cfg.json_path = ex_json;
            if (cfg.trials < 1)
                throw UsageError("trials must be >= 1");

            const es::Graph g = cfg.family == es::GraphFamily::File ? read_input_graph(cfg.graph_path, ex_drop)
                                                                    : es::load_graph(cfg).graph;
            const es::RunRecord rec = es::run_experiment(cfg, g);

            const std::string stem = "run_" + rec.config_hash;
            const auto dir = default_output_dir();
            const std::string csv = cfg.csv_path.empty() ? (dir / (stem + ".csv")).string() : cfg.csv_path;
            const std::string json = cfg.json_path.empty() ? (dir / (stem + ".json")).string() : cfg.json_path;
            if (cfg.csv_path.empty() || cfg.json_path.empty())
                std::filesystem::create_directories(dir);
            {
                auto out = es::detail::open_out(csv);
                es::write_csv(rec, out);
            }
            write_text(json, es::to_json(rec).dump(2) + "\n");
            std::cerr << "wrote " << csv << " and " << json << '\n';
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const es::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.code() == es::ErrorCode::InvalidArgument ? kExitUsage : kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
    return 0;
}
