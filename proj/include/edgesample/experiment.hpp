#pragma once

#include "edgesample/generators.hpp"
#include "edgesample/io.hpp"
#include "edgesample/line_graph.hpp"
#include "edgesample/metrics.hpp"
#include "edgesample/reconstruction.hpp"
#include "edgesample/samplers.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace edgesample {

inline constexpr std::string_view kVersion = "1.0.0";

// ---------------------------------------------------------------------------
// Configuration

enum class GraphFamily { Sensor, ErdosRenyi, Community, Knn, File };

constexpr std::string_view to_string(GraphFamily f) noexcept
{
    switch (f) {
    case GraphFamily::Sensor: return "sensor";
    case GraphFamily::ErdosRenyi: return "erdos_renyi";
    case GraphFamily::Community: return "community";
    case GraphFamily::Knn: return "knn";
    case GraphFamily::File: return "file";
    }
    return "unknown";
}

/// Sample size: an absolute edge count, or a fraction of |E| when written with a decimal point.
struct SizeSpec {
    double value = 0.5;
    bool fraction = true;

    [[nodiscard]] std::size_t resolve(std::size_t num_edges) const
    {
        const double raw = fraction ? value * static_cast<double>(num_edges) : value;
        return static_cast<std::size_t>(std::max(1.0, std::round(raw)));
    }

    friend bool operator==(const SizeSpec&, const SizeSpec&) = default;
};

inline SizeSpec parse_size(std::string_view text)
{
    SizeSpec s;
    s.fraction = text.find_first_of(".eE") != std::string_view::npos;
    if (!detail::parse_number(text, s.value) || !(s.value > 0.0))
        throw Error(ErrorCode::InvalidArgument, "bad size \"" + std::string(text) + "\"");
    if (s.fraction && s.value > 1.0)
        throw Error(ErrorCode::InvalidArgument, "fractional size above 1: \"" + std::string(text) + "\"");
    return s;
}

inline std::string format_size(const SizeSpec& s)
{
    if (!s.fraction)
        return std::to_string(static_cast<std::size_t>(s.value));
    std::string text = detail::format_double(s.value);
    if (text.find_first_of(".eE") == std::string::npos)
        text += ".0";
    return text;
}

struct ExperimentConfig {
    GraphFamily family = GraphFamily::Community;
    std::string graph_path; ///< family == File: .mtx is Matrix Market, anything else the edge-list TSV
    std::size_t num_nodes = 100;
    std::size_t knn_k = 6;
    double er_p = 0.1;
    bool er_weighted = true;
    std::size_t communities = 5;
    std::size_t knn_clusters = 2;
    std::uint64_t graph_seed = 1;

    std::vector<Method> methods{Method::Nslg, Method::Anslg, Method::MaxDegree, Method::NetMelt, Method::GSparse};
    std::vector<SizeSpec> sizes{SizeSpec{0.5, true}};
    std::size_t trials = 10;
    std::uint64_t master_seed = 2023;

    double bandwidth_divisor = 10.0; ///< K = |E| / divisor
    double signal_stddev = std::sqrt(0.2);
    double noise_stddev = 0.1;
    bool sample_noise = false; ///< inject a second noise draw on the sampled weights
    double ridge = 1e-8;

    bool metric_recon = true;
    bool metric_mse = true;
    std::size_t cluster_k = 5; ///< 0 disables the clustering metric
    std::size_t diffusion_support = 20;
    double diffusion_support_fraction = 0.0; ///< > 0: support = fraction * |E| (capped at N)
    std::optional<double> diffusion_t;       ///< default 4 / lambda_max(L_0)

    int cpa_degree = 6;
    double tau = 4.0;
    double epsilon = 1e-8;
    std::optional<double> eta;
    LineOperator line_operator = LineOperator::EdgeLaplacian;
    FilterMode filter = FilterMode::Cpa;
    bool gsparse_reweighted = true;

    bool timing = false; ///< record wall-clock times (makes outputs run-dependent)
    std::string csv_path;
    std::string json_path;
};

namespace detail {

inline bool parse_bool(std::string_view v)
{
    if (v == "true" || v == "1" || v == "yes")
        return true;
    if (v == "false" || v == "0" || v == "no")
        return false;
    throw Error(ErrorCode::InvalidArgument, "bad boolean \"" + std::string(v) + "\"");
}

template <typename T>
T parse_value(std::string_view key, std::string_view v)
{
    T out{};
    if (!parse_number(v, out))
        throw Error(ErrorCode::InvalidArgument, "bad value for " + std::string(key) + ": \"" + std::string(v) + "\"");
    return out;
}

inline std::vector<std::string_view> split_list(std::string_view v)
{
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (pos <= v.size()) {
        const std::size_t comma = std::min(v.find(',', pos), v.size());
        std::string_view item = v.substr(pos, comma - pos);
        while (!item.empty() && item.front() == ' ')
            item.remove_prefix(1);
        while (!item.empty() && item.back() == ' ')
            item.remove_suffix(1);
        if (!item.empty())
            out.push_back(item);
        pos = comma + 1;
    }
    return out;
}

} // namespace detail

/// Applies one key = value setting; unknown keys are rejected.
inline void apply_setting(ExperimentConfig& c, std::string_view key, std::string_view v)
{
    using detail::parse_bool;
    using detail::parse_value;
    if (key == "graph") {
        bool found = false;
        for (GraphFamily f : {GraphFamily::Sensor, GraphFamily::ErdosRenyi, GraphFamily::Community, GraphFamily::Knn,
                              GraphFamily::File})
            if (to_string(f) == v) {
                c.family = f;
                found = true;
            }
        if (!found)
            throw Error(ErrorCode::InvalidArgument, "unknown graph family \"" + std::string(v) + "\"");
    } else if (key == "graph_path") {
        c.graph_path = std::string(v);
        c.family = GraphFamily::File;
    } else if (key == "nodes") {
        c.num_nodes = parse_value<std::size_t>(key, v);
    } else if (key == "knn_k") {
        c.knn_k = parse_value<std::size_t>(key, v);
    } else if (key == "er_p") {
        c.er_p = parse_value<double>(key, v);
    } else if (key == "er_weighted") {
        c.er_weighted = parse_bool(v);
    } else if (key == "communities") {
        c.communities = parse_value<std::size_t>(key, v);
    } else if (key == "knn_clusters") {
        c.knn_clusters = parse_value<std::size_t>(key, v);
    } else if (key == "graph_seed") {
        c.graph_seed = parse_value<std::uint64_t>(key, v);
    } else if (key == "methods") {
        c.methods.clear();
        for (auto name : detail::split_list(v)) {
            const auto m = parse_method(name);
            if (!m)
                throw Error(ErrorCode::InvalidArgument,
                            "unknown method \"" + std::string(name) + "\"; valid: " + std::string(kMethodList));
            c.methods.push_back(*m);
        }
    } else if (key == "sizes") {
        c.sizes.clear();
        for (auto s : detail::split_list(v))
            c.sizes.push_back(parse_size(s));
    } else if (key == "trials") {
        c.trials = parse_value<std::size_t>(key, v);
    } else if (key == "seed") {
        c.master_seed = parse_value<std::uint64_t>(key, v);
    } else if (key == "bandwidth_divisor") {
        c.bandwidth_divisor = parse_value<double>(key, v);
    } else if (key == "signal_stddev") {
        c.signal_stddev = parse_value<double>(key, v);
    } else if (key == "noise_stddev") {
        c.noise_stddev = parse_value<double>(key, v);
    } else if (key == "sample_noise") {
        c.sample_noise = parse_bool(v);
    } else if (key == "ridge") {
        c.ridge = parse_value<double>(key, v);
    } else if (key == "metric_recon") {
        c.metric_recon = parse_bool(v);
    } else if (key == "metric_mse") {
        c.metric_mse = parse_bool(v);
    } else if (key == "cluster_k") {
        c.cluster_k = parse_value<std::size_t>(key, v);
    } else if (key == "diffusion_support") {
        c.diffusion_support = parse_value<std::size_t>(key, v);
    } else if (key == "diffusion_support_fraction") {
        c.diffusion_support_fraction = parse_value<double>(key, v);
    } else if (key == "diffusion_t") {
        if (v == "auto")
            c.diffusion_t.reset();
        else
            c.diffusion_t = parse_value<double>(key, v);
    } else if (key == "cpa_degree") {
        c.cpa_degree = parse_value<int>(key, v);
    } else if (key == "tau") {
        c.tau = parse_value<double>(key, v);
    } else if (key == "epsilon") {
        c.epsilon = parse_value<double>(key, v);
    } else if (key == "eta") {
        if (v == "auto")
            c.eta.reset();
        else
            c.eta = parse_value<double>(key, v);
    } else if (key == "line_operator") {
        if (v == "edge_laplacian")
            c.line_operator = LineOperator::EdgeLaplacian;
        else if (v == "line_laplacian")
            c.line_operator = LineOperator::LineLaplacian;
        else
            throw Error(ErrorCode::InvalidArgument, "line_operator is edge_laplacian or line_laplacian");
    } else if (key == "filter") {
        if (v == "cpa")
            c.filter = FilterMode::Cpa;
        else if (v == "exact")
            c.filter = FilterMode::Exact;
        else
            throw Error(ErrorCode::InvalidArgument, "filter is cpa or exact");
    } else if (key == "gsparse_reweighted") {
        c.gsparse_reweighted = parse_bool(v);
    } else if (key == "timing") {
        c.timing = parse_bool(v);
    } else if (key == "csv") {
        c.csv_path = std::string(v);
    } else if (key == "json") {
        c.json_path = std::string(v);
    } else {
        throw Error(ErrorCode::InvalidArgument, "unknown configuration key \"" + std::string(key) + "\"");
    }
}

/// Reads "key = value" lines ('#' comments) into the config.
inline void apply_config_text(ExperimentConfig& c, std::istream& in)
{
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view(line);
        view = view.substr(0, view.find('#'));
        const auto eq = view.find('=');
        const auto trim = [](std::string_view s) {
            while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
                s.remove_prefix(1);
            while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
                s.remove_suffix(1);
            return s;
        };
        if (trim(view).empty())
            continue;
        if (eq == std::string_view::npos)
            throw Error(ErrorCode::ParseError, detail::line_error(line_no, "expected key = value"));
        apply_setting(c, trim(view.substr(0, eq)), trim(view.substr(eq + 1)));
    }
}

inline ExperimentConfig load_config(const std::string& path)
{
    ExperimentConfig c;
    auto in = detail::open_in(path);
    apply_config_text(c, in);
    return c;
}

/// Every semantic setting in canonical form; output paths are excluded.
inline std::map<std::string, std::string> semantic_settings(const ExperimentConfig& c)
{
    using detail::format_double;
    std::map<std::string, std::string> kv;
    kv["graph"] = std::string(to_string(c.family));
    if (c.family == GraphFamily::File)
        kv["graph_path"] = c.graph_path;
    kv["nodes"] = std::to_string(c.num_nodes);
    kv["knn_k"] = std::to_string(c.knn_k);
    kv["er_p"] = format_double(c.er_p);
    kv["er_weighted"] = c.er_weighted ? "true" : "false";
    kv["communities"] = std::to_string(c.communities);
    kv["knn_clusters"] = std::to_string(c.knn_clusters);
    kv["graph_seed"] = std::to_string(c.graph_seed);
    std::string methods;
    for (Method m : c.methods)
        methods += (methods.empty() ? "" : ",") + std::string(to_string(m));
    kv["methods"] = methods;
    std::string sizes;
    for (const SizeSpec& s : c.sizes)
        sizes += (sizes.empty() ? "" : ",") + format_size(s);
    kv["sizes"] = sizes;
    kv["trials"] = std::to_string(c.trials);
    kv["seed"] = std::to_string(c.master_seed);
    kv["bandwidth_divisor"] = format_double(c.bandwidth_divisor);
    kv["signal_stddev"] = format_double(c.signal_stddev);
    kv["noise_stddev"] = format_double(c.noise_stddev);
    kv["sample_noise"] = c.sample_noise ? "true" : "false";
    kv["ridge"] = format_double(c.ridge);
    kv["metric_recon"] = c.metric_recon ? "true" : "false";
    kv["metric_mse"] = c.metric_mse ? "true" : "false";
    kv["cluster_k"] = std::to_string(c.cluster_k);
    kv["diffusion_support"] = std::to_string(c.diffusion_support);
    kv["diffusion_support_fraction"] = format_double(c.diffusion_support_fraction);
    kv["diffusion_t"] = c.diffusion_t ? format_double(*c.diffusion_t) : "auto";
    kv["cpa_degree"] = std::to_string(c.cpa_degree);
    kv["tau"] = format_double(c.tau);
    kv["epsilon"] = format_double(c.epsilon);
    kv["eta"] = c.eta ? format_double(*c.eta) : "auto";
    kv["line_operator"] = c.line_operator == LineOperator::EdgeLaplacian ? "edge_laplacian" : "line_laplacian";
    kv["filter"] = c.filter == FilterMode::Cpa ? "cpa" : "exact";
    kv["gsparse_reweighted"] = c.gsparse_reweighted ? "true" : "false";
    kv["timing"] = c.timing ? "true" : "false";
    return kv;
}

/// FNV-1a over the canonical semantic settings.
inline std::uint64_t config_hash(const ExperimentConfig& c)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    const auto feed = [&h](std::string_view s) {
        for (unsigned char ch : s) {
            h ^= ch;
            h *= 0x100000001b3ULL;
        }
        h ^= 0xff;
        h *= 0x100000001b3ULL;
    };
    for (const auto& [k, v] : semantic_settings(c)) {
        feed(k);
        feed(v);
    }
    return h;
}

inline std::string hex64(std::uint64_t v)
{
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << v;
    return os.str();
}

// ---------------------------------------------------------------------------
// Graph source

inline bool ends_with(std::string_view s, std::string_view suffix)
{
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

inline Graph read_graph_file(const std::string& path)
{
    if (ends_with(path, ".mtx"))
        return read_matrix_market(path);
    return read_edge_list(path);
}

inline GeneratedGraph load_graph(const ExperimentConfig& c)
{
    switch (c.family) {
    case GraphFamily::Sensor: return gen_sensor(c.num_nodes, c.knn_k, c.graph_seed);
    case GraphFamily::ErdosRenyi: return gen_erdos_renyi(c.num_nodes, c.er_p, c.graph_seed, {c.er_weighted});
    case GraphFamily::Community: return gen_community(c.num_nodes, c.communities, c.graph_seed);
    case GraphFamily::Knn: return gen_knn_clusters(c.num_nodes, c.knn_k, c.knn_clusters, c.graph_seed);
    case GraphFamily::File: return {read_graph_file(c.graph_path), std::nullopt};
    }
    throw Error(ErrorCode::InvalidArgument, "unknown graph family");
}

// ---------------------------------------------------------------------------
// Evaluation

struct MetricReport {
    Method method = Method::Nslg;
    std::size_t size = 0; ///< requested |F| (GSparse: target used to choose q)
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    std::size_t realized_size = 0;
    std::optional<double> recon_error;
    std::optional<double> recon_error_normalized;
    std::optional<double> mse;
    std::optional<double> mse_db;
    std::optional<double> inconsistency;
    std::size_t isolated_nodes = 0;
    double wall_ms = 0.0;
};

/**
 * Per-graph state shared by all trials: the unweighted line-graph basis, the
 * original Laplacian spectrum and the diffusion time.
 */
class Evaluator {
public:
    Evaluator(Graph graph, const ExperimentConfig& config) : graph_(std::move(graph)), config_(config)
    {
        require_edges(graph_);
        const auto m = graph_.num_edges();
        bandwidth_ = static_cast<Eigen::Index>(
            std::clamp(std::round(static_cast<double>(m) / config_.bandwidth_divisor), 1.0, static_cast<double>(m)));
        if (config_.metric_recon)
            basis_ = eig_sym(unweighted_line_graph(graph_).laplacian);
        if (config_.metric_mse) {
            l0_ = eig_sym(laplacian(graph_));
            t_ = config_.diffusion_t.value_or(4.0 / std::max(1e-12, l0_.eigenvalues.maxCoeff()));
        }
    }

    [[nodiscard]] const Graph& graph() const noexcept { return graph_; }
    [[nodiscard]] Eigen::Index bandwidth() const noexcept { return bandwidth_; }
    [[nodiscard]] double diffusion_time() const noexcept { return t_; }
    [[nodiscard]] const Spectrum& basis() const noexcept { return basis_; }

    [[nodiscard]] std::size_t diffusion_support() const
    {
        const std::size_t n = graph_.num_nodes();
        if (config_.diffusion_support_fraction > 0.0)
            return std::min(n, static_cast<std::size_t>(std::round(config_.diffusion_support_fraction *
                                                                   static_cast<double>(graph_.num_edges()))));
        return std::min(n, config_.diffusion_support);
    }

    /// Trial inputs derived from the trial seed.
    struct Trial {
        std::size_t index = 0;
        std::uint64_t seed = 0;
        Eigen::VectorXd weights;                 ///< synthesized edge signal
        Eigen::VectorXd diffusion_input;         ///< x
        Eigen::VectorXd diffused;                ///< y_0
        std::vector<std::size_t> labels;         ///< clustering of G_0
    };

    [[nodiscard]] Trial make_trial(std::size_t index) const
    {
        Trial t;
        t.index = index;
        t.seed = mix_seed(config_.master_seed, index);
        if (config_.metric_recon) {
            SynthesisSpec spec{bandwidth_, config_.signal_stddev, config_.noise_stddev, mix_seed(t.seed, 1)};
            t.weights = synth_edge_weights(basis_, spec);
        }
        if (config_.metric_mse) {
            Rng rng(mix_seed(t.seed, 2));
            t.diffusion_input = random_support_signal(graph_.num_nodes(), diffusion_support(), rng);
            t.diffused = heat_diffuse(l0_, t.diffusion_input, t_);
        }
        if (config_.cluster_k > 0)
            t.labels = spectral_cluster(graph_, config_.cluster_k, mix_seed(t.seed, 4));
        return t;
    }

    [[nodiscard]] MetricReport evaluate(const Trial& trial, const SampleResult& sample) const
    {
        MetricReport r;
        r.method = sample.method;
        r.trial = trial.index;
        r.seed = trial.seed;
        r.realized_size = sample.selected.size();
        r.isolated_nodes = isolated_nodes(graph_, sample.selected);
        if (config_.timing)
            r.wall_ms = sample.preparation_ms + sample.selection_ms;

        if (config_.metric_recon) {
            Eigen::VectorXd values(static_cast<Eigen::Index>(sample.selected.size()));
            Rng noise(mix_seed(trial.seed, 5));
            for (std::size_t k = 0; k < sample.selected.size(); ++k) {
                values[static_cast<Eigen::Index>(k)] = trial.weights[static_cast<Eigen::Index>(sample.selected[k])];
                if (config_.sample_noise)
                    values[static_cast<Eigen::Index>(k)] += noise.normal(0.0, config_.noise_stddev);
            }
            const Interpolation rec =
                interp_bandlimited(basis_.eigenvectors.leftCols(bandwidth_), sample.selected, values, config_.ridge);
            const ReconstructionError err = reconstruction_error(trial.weights, rec.values);
            r.recon_error = err.absolute;
            r.recon_error_normalized = err.normalized;
        }

        const bool reweight = sample.new_weights && config_.gsparse_reweighted;
        const Graph sparse = reweight ? sampled_graph(graph_, sample) : graph_.edge_subgraph(sample.selected);
        if (config_.metric_mse) {
            const Eigen::VectorXd y1 = heat_diffuse(laplacian(sparse), trial.diffusion_input, t_);
            const Mse mse = diffusion_mse(trial.diffused, y1);
            r.mse = mse.value;
            r.mse_db = mse.db;
        }
        if (config_.cluster_k > 0) {
            const auto labels = spectral_cluster(sparse, config_.cluster_k, mix_seed(trial.seed, 4));
            r.inconsistency = cluster_inconsistency(trial.labels, labels);
        }
        return r;
    }

private:
    Graph graph_;
    ExperimentConfig config_;
    Eigen::Index bandwidth_ = 1;
    Spectrum basis_;
    Spectrum l0_;
    double t_ = 1.0;
};

struct Aggregate {
    Method method = Method::Nslg;
    std::size_t size = 0;
    std::size_t trials = 0;
    std::map<std::string, std::array<double, 3>> stats; ///< metric -> {mean, min, max}
};

struct RunRecord {
    std::string config_hash;
    std::string version{kVersion};
    std::size_t num_nodes = 0;
    std::size_t num_edges = 0;
    Eigen::Index bandwidth = 0;
    double diffusion_t = 0.0;
    std::vector<MetricReport> rows;
    std::vector<Aggregate> aggregates;
    std::optional<std::string> started_at;
    std::optional<std::string> finished_at;

    /// Mean of a metric over the rows of one (method, size) cell.
    [[nodiscard]] const Aggregate& cell(Method m, std::size_t size) const
    {
        for (const Aggregate& a : aggregates)
            if (a.method == m && a.size == size)
                return a;
        throw Error(ErrorCode::InvalidArgument, "no aggregate for " + std::string(to_string(m)) + " at size " +
                                                    std::to_string(size));
    }
};

inline std::vector<std::pair<std::string, std::optional<double>>> metric_values(const MetricReport& r)
{
    return {{"recon_error", r.recon_error},
            {"recon_error_normalized", r.recon_error_normalized},
            {"mse", r.mse},
            {"mse_db", r.mse_db},
            {"inconsistency", r.inconsistency},
            {"isolated_nodes", static_cast<double>(r.isolated_nodes)},
            {"realized_size", static_cast<double>(r.realized_size)},
            {"wall_ms", r.wall_ms}};
}

inline std::vector<Aggregate> aggregate(const std::vector<MetricReport>& rows)
{
    std::vector<Aggregate> out;
    for (const MetricReport& r : rows) {
        auto it = std::find_if(out.begin(), out.end(),
                               [&](const Aggregate& a) { return a.method == r.method && a.size == r.size; });
        if (it == out.end()) {
            out.push_back({r.method, r.size, 0, {}});
            it = out.end() - 1;
        }
        ++it->trials;
        for (const auto& [name, value] : metric_values(r)) {
            if (!value)
                continue;
            auto [slot, inserted] = it->stats.try_emplace(name, std::array<double, 3>{0.0, *value, *value});
            slot->second[0] += *value;
            slot->second[1] = std::min(slot->second[1], *value);
            slot->second[2] = std::max(slot->second[2], *value);
        }
    }
    for (Aggregate& a : out)
        for (auto& [name, s] : a.stats)
            s[0] /= static_cast<double>(a.trials);
    return out;
}

inline std::string utc_timestamp()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

inline NslgParams nslg_params(const ExperimentConfig& c)
{
    NslgParams p;
    p.line_operator = c.line_operator;
    p.filter = c.filter;
    p.cpa_degree = c.cpa_degree;
    p.tau = c.tau;
    p.epsilon = c.epsilon;
    p.eta = c.eta;
    return p;
}

/**
 * Runs every (method, size, trial) cell. Deterministic samplers are prefix
 * monotone, so each runs once at the largest size and is truncated. GSparse
 * picks q so that its expected number of distinct edges matches the size.
 * Rows are ordered by method (config order), size, trial.
 */
inline RunRecord run_experiment(const ExperimentConfig& config, const Graph& graph)
{
    if (config.trials < 1)
        throw Error(ErrorCode::InvalidArgument, "trials must be >= 1");
    RunRecord rec;
    if (config.timing)
        rec.started_at = utc_timestamp();
    rec.config_hash = hex64(config_hash(config));
    const Evaluator eval(graph, config);
    rec.num_nodes = graph.num_nodes();
    rec.num_edges = graph.num_edges();
    rec.bandwidth = eval.bandwidth();
    rec.diffusion_t = eval.diffusion_time();

    std::vector<std::size_t> sizes;
    for (const SizeSpec& s : config.sizes) {
        const std::size_t n = s.resolve(graph.num_edges());
        if (n > graph.num_edges())
            throw Error(ErrorCode::SizeTooLarge, "size " + std::to_string(n) + " exceeds |E|=" +
                                                     std::to_string(graph.num_edges()));
        sizes.push_back(n);
    }
    std::sort(sizes.begin(), sizes.end());
    sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
    const std::size_t largest = sizes.back();

    std::vector<Evaluator::Trial> trials;
    for (std::size_t t = 0; t < config.trials; ++t) {
        try {
            trials.push_back(eval.make_trial(t));
        } catch (const Error& e) {
            throw Error(e.code(), e.what() + std::string(" [trial=") + std::to_string(t) + "]");
        }
    }

    const NslgParams params = nslg_params(config);
    for (Method m : config.methods) {
        const auto context = [&](std::size_t size, std::size_t trial) {
            return std::string(" [method=") + std::string(to_string(m)) + " size=" + std::to_string(size) +
                   " trial=" + std::to_string(trial) + "]";
        };
        try {
            std::optional<SampleResult> full;
            switch (m) {
            case Method::Nslg: full = nslg(graph, largest, params); break;
            case Method::Anslg: full = anslg(graph, largest, params); break;
            case Method::MaxDegree: full = maxdegree_select(graph, largest); break;
            case Method::NetMelt: full = netmelt_select(graph, largest); break;
            case Method::GSparse: break;
            }
            const Eigen::VectorXd probabilities =
                m == Method::GSparse ? gsparse_probabilities(graph) : Eigen::VectorXd();
            for (std::size_t size : sizes) {
                const std::size_t q =
                    m == Method::GSparse ? gsparse_q_for_size(probabilities, static_cast<double>(size)) : 0;
                for (const auto& trial : trials) {
                    try {
                        SampleResult sample;
                        if (full) {
                            sample = *full;
                            sample.selected.resize(size);
                            sample.scores.resize(size);
                            sample.requested_size = size;
                        } else {
                            sample = gsparse_select(graph, q, mix_seed(trial.seed, 3));
                        }
                        MetricReport row = eval.evaluate(trial, sample);
                        row.size = size;
                        rec.rows.push_back(row);
                    } catch (const Error& e) {
                        throw Error(e.code(), e.what() + context(size, trial.index));
                    }
                }
            }
        } catch (const Error& e) {
            if (std::string_view(e.what()).find("[method=") != std::string_view::npos)
                throw;
            throw Error(e.code(), e.what() + context(largest, 0));
        }
    }
    rec.aggregates = aggregate(rec.rows);
    if (config.timing)
        rec.finished_at = utc_timestamp();
    return rec;
}

inline RunRecord run_experiment(const ExperimentConfig& config)
{
    return run_experiment(config, load_graph(config).graph);
}

// ---------------------------------------------------------------------------
// Output

inline constexpr std::array<std::string_view, 12> kCsvColumns{
    "method", "size", "trial", "seed", "realized_size", "recon_error", "recon_error_normalized",
    "mse", "mse_db", "inconsistency", "isolated_nodes", "wall_ms"};

inline void write_csv(const RunRecord& rec, std::ostream& out)
{
    for (std::size_t c = 0; c < kCsvColumns.size(); ++c)
        out << (c ? "," : "") << kCsvColumns[c];
    out << '\n';
    const auto opt = [](const std::optional<double>& v) { return v ? detail::format_double(*v) : std::string(); };
    for (const MetricReport& r : rec.rows) {
        out << to_string(r.method) << ',' << r.size << ',' << r.trial << ',' << r.seed << ',' << r.realized_size
            << ',' << opt(r.recon_error) << ',' << opt(r.recon_error_normalized) << ',' << opt(r.mse) << ','
            << opt(r.mse_db) << ',' << opt(r.inconsistency) << ',' << r.isolated_nodes << ','
            << detail::format_double(r.wall_ms) << '\n';
    }
}

inline nlohmann::json to_json(const MetricReport& r)
{
    const auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
    return {{"method", std::string(to_string(r.method))},
            {"size", r.size},
            {"trial", r.trial},
            {"seed", r.seed},
            {"realized_size", r.realized_size},
            {"recon_error", opt(r.recon_error)},
            {"recon_error_normalized", opt(r.recon_error_normalized)},
            {"mse", opt(r.mse)},
            {"mse_db", opt(r.mse_db)},
            {"inconsistency", opt(r.inconsistency)},
            {"isolated_nodes", r.isolated_nodes},
            {"wall_ms", r.wall_ms}};
}

inline nlohmann::json to_json(const RunRecord& rec)
{
    nlohmann::json rows = nlohmann::json::array();
    for (const MetricReport& r : rec.rows)
        rows.push_back(to_json(r));
    nlohmann::json aggs = nlohmann::json::array();
    for (const Aggregate& a : rec.aggregates) {
        nlohmann::json stats = nlohmann::json::object();
        for (const auto& [name, s] : a.stats)
            stats[name] = {{"mean", s[0]}, {"min", s[1]}, {"max", s[2]}};
        aggs.push_back({{"method", std::string(to_string(a.method))}, {"size", a.size}, {"trials", a.trials},
                        {"stats", stats}});
    }
    nlohmann::json j = {{"config_hash", rec.config_hash},
                        {"version", rec.version},
                        {"num_nodes", rec.num_nodes},
                        {"num_edges", rec.num_edges},
                        {"bandwidth", rec.bandwidth},
                        {"diffusion_t", rec.diffusion_t},
                        {"rows", rows},
                        {"aggregates", aggs}};
    if (rec.started_at)
        j["started_at"] = *rec.started_at;
    if (rec.finished_at)
        j["finished_at"] = *rec.finished_at;
    return j;
}

inline nlohmann::json to_json(const SampleResult& s)
{
    nlohmann::json j = {{"method", std::string(to_string(s.method))},
                        {"requested_size", s.requested_size},
                        {"seed", s.seed},
                        {"selected", s.selected},
                        {"scores", s.scores}};
    if (s.new_weights)
        j["new_weights"] = *s.new_weights;
    if (s.method == Method::GSparse)
        j["q"] = s.gsparse_q;
    return j;
}

inline SampleResult sample_from_json(const nlohmann::json& j)
{
    SampleResult s;
    const auto m = parse_method(j.at("method").get<std::string>());
    if (!m)
        throw Error(ErrorCode::ParseError, "unknown method in sample file");
    s.method = *m;
    s.selected = j.at("selected").get<std::vector<EdgeId>>();
    s.requested_size = j.value("requested_size", s.selected.size());
    s.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("scores"))
        s.scores = j.at("scores").get<std::vector<double>>();
    if (j.contains("new_weights"))
        s.new_weights = j.at("new_weights").get<std::vector<double>>();
    s.gsparse_q = j.value("q", std::size_t{0});
    return s;
}

} // namespace edgesample
