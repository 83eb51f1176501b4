// ssclust command-line tool: semi-supervised Gaussian mixture clustering
// with a label-aware information criterion, plus the companion simulation
// and analysis workflows.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ssclust/ssclust.hpp"

namespace {

using nlohmann::json;

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    for (const auto& item : split_list(s)) out.push_back(std::stoi(item));
    return out;
}

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    for (const auto& item : split_list(s)) out.push_back(std::stod(item));
    return out;
}

std::vector<ssclust::CovModel> parse_models(const std::string& s) {
    std::vector<ssclust::CovModel> out;
    for (const auto& item : split_list(s)) out.push_back(ssclust::parse_cov_model(item));
    if (out.empty()) throw ssclust::InputError("empty model list");
    return out;
}

std::string models_to_string(const std::vector<ssclust::CovModel>& models) {
    std::string out;
    for (std::size_t i = 0; i < models.size(); ++i) {
        if (i) out += ",";
        out += ssclust::cov_model_name(models[i]);
    }
    return out;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ssclust::InputError("cannot open output file: " + path);
    return out;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ssclust::InputError("cannot open file: " + path);
    return json::parse(in);
}

// Per-command configuration merged from defaults, an optional JSON config
// file and command-line flags (flags win). Unknown config keys are usage
// errors so typos do not silently fall back to defaults.
class ConfigLayer {
public:
    ConfigLayer(CLI::App* cmd, std::string config_path,
                std::vector<std::string> known_keys)
        : cmd_(cmd), known_(std::move(known_keys)) {
        if (config_path.empty()) return;
        file_ = load_json_file(config_path);
        if (!file_.is_object()) {
            throw CLI::ValidationError("config", "config file must hold a JSON object");
        }
        for (const auto& [key, value] : file_.items()) {
            (void)value;
            if (std::find(known_.begin(), known_.end(), key) == known_.end()) {
                throw CLI::ValidationError("config", "unknown config key '" + key + "'");
            }
        }
    }

    template <class T>
    void merge(const std::string& flag, const std::string& key, T& value) const {
        if (cmd_->count("--" + flag) > 0) return;
        if (file_.contains(key)) value = file_.at(key).get<T>();
    }

    bool has(const std::string& key) const { return file_.contains(key); }

private:
    CLI::App* cmd_;
    json file_;
    std::vector<std::string> known_;
};

std::uint64_t resolve_seed(CLI::App* cmd, const ConfigLayer& cfg,
                           std::uint64_t flag_value) {
    if (cmd->count("--seed") > 0) return flag_value;
    std::uint64_t value = flag_value;
    cfg.merge("seed", "seed", value);
    if (value != flag_value) return value;
    if (const char* env = std::getenv("SSCLUST_SEED")) {
        return std::strtoull(env, nullptr, 10);
    }
    return flag_value;
}

void echo_config(const json& resolved) {
    std::cout << resolved.dump(2) << "\n";
}

json model_score_to_json(const ssclust::ModelScore& s) {
    json j;
    j["G"] = s.G;
    j["model"] = ssclust::cov_model_name(s.model);
    j["d"] = s.d;
    j["n1"] = s.n1;
    j["failed"] = s.failed;
    if (s.failed) {
        j["failure"] = s.failure;
        return j;
    }
    j["loglik"] = s.loglik;
    j["bic_star"] = s.bic_star;
    json bp = json::object();
    for (const auto& [m, value] : s.bic_prime) {
        bp[ssclust::format_double(m)] = value;
    }
    j["bic_prime"] = bp;
    return j;
}

// ---------------------------------------------------------------------------
// cluster
// ---------------------------------------------------------------------------

struct ClusterArgs {
    std::string data;
    std::string label_column;
    std::string config;
    int g_min = 1;
    int g_max = 5;
    std::string models = "EII,VII,EEE,VVV";
    int restarts = 5;
    int max_iter = 500;
    double rel_tol = 1e-8;
    int threads = 1;
    std::uint64_t seed = 0;
    std::string out_assignments = "assignments.csv";
    std::string out_scores = "scores.json";
};

int run_cluster(CLI::App* cmd, ClusterArgs& a) {
    ConfigLayer cfg(cmd, a.config,
                    {"data", "label_column", "g_min", "g_max", "models", "restarts",
                     "max_iter", "rel_tol", "threads", "seed", "out_assignments",
                     "out_scores"});
    cfg.merge("data", "data", a.data);
    cfg.merge("label-column", "label_column", a.label_column);
    cfg.merge("g-min", "g_min", a.g_min);
    cfg.merge("g-max", "g_max", a.g_max);
    cfg.merge("models", "models", a.models);
    cfg.merge("restarts", "restarts", a.restarts);
    cfg.merge("max-iter", "max_iter", a.max_iter);
    cfg.merge("rel-tol", "rel_tol", a.rel_tol);
    cfg.merge("threads", "threads", a.threads);
    cfg.merge("out-assignments", "out_assignments", a.out_assignments);
    cfg.merge("out-scores", "out_scores", a.out_scores);
    a.seed = resolve_seed(cmd, cfg, a.seed);
    if (a.data.empty()) throw CLI::RequiredError("--data");

    std::optional<std::string> label_col;
    if (!a.label_column.empty()) label_col = a.label_column;
    ssclust::DatasetFile file = ssclust::load_dataset(a.data, label_col);
    const ssclust::Dataset& data = file.dataset;

    if (data.n_unlabeled() == 0) {
        throw ssclust::UndefinedPenaltyError(
            "every row is labeled, so the label-aware BIC penalty log(n1) is "
            "undefined; leave at least one row unlabeled");
    }
    if (a.g_min < 1 || a.g_max < a.g_min) {
        throw CLI::ValidationError("--g-min/--g-max", "invalid G range");
    }
    if (a.g_min < data.num_classes()) {
        throw ssclust::InputError(
            "dataset has " + std::to_string(data.num_classes()) +
            " labeled classes; every candidate G must be at least that (raise "
            "--g-min)");
    }

    ssclust::SearchOptions opts;
    for (int g = a.g_min; g <= a.g_max; ++g) opts.G_range.push_back(g);
    opts.models = parse_models(a.models);
    opts.restarts = a.restarts;
    opts.seed = a.seed;
    opts.fit.max_iter = a.max_iter;
    opts.fit.rel_tol = a.rel_tol;
    opts.threads = a.threads;

    ssclust::SearchResult result = ssclust::model_search(data, opts);
    const ssclust::Candidate& best = result.best();
    const ssclust::FitResult& fit = *best.fit;

    json resolved = {{"command", "cluster"},
                     {"data", a.data},
                     {"label_column", a.label_column},
                     {"g_min", a.g_min},
                     {"g_max", a.g_max},
                     {"models", a.models},
                     {"restarts", a.restarts},
                     {"max_iter", a.max_iter},
                     {"rel_tol", a.rel_tol},
                     {"threads", a.threads},
                     {"seed", a.seed},
                     {"out_assignments", a.out_assignments},
                     {"out_scores", a.out_scores}};

    {
        auto out = open_output(a.out_assignments);
        std::vector<std::string> header{"row", "component"};
        for (int k = 0; k < best.score.G; ++k) {
            header.push_back("resp_" + std::to_string(k + 1));
        }
        ssclust::write_csv_row(out, header);
        std::vector<int> assigned = ssclust::map_labels(fit.resp);
        for (int i = 0; i < data.n(); ++i) {
            std::vector<std::string> row{std::to_string(i + 1),
                                         std::to_string(assigned[i] + 1)};
            for (int k = 0; k < best.score.G; ++k) {
                row.push_back(ssclust::format_double(fit.resp(i, k)));
            }
            ssclust::write_csv_row(out, row);
        }
    }

    {
        json scores;
        scores["config"] = resolved;
        scores["n"] = data.n();
        scores["n1"] = data.n_unlabeled();
        scores["dim"] = data.dim();
        scores["classes"] = file.class_names;
        scores["criterion"] = "bic_star";
        scores["best"] = model_score_to_json(best.score);
        scores["best"]["converged"] = fit.converged;
        scores["best"]["iterations"] = fit.iterations;
        json all = json::array();
        for (const auto& c : result.candidates) all.push_back(model_score_to_json(c.score));
        scores["candidates"] = all;
        auto out = open_output(a.out_scores);
        out << scores.dump(2) << "\n";
    }

    echo_config(resolved);
    return 0;
}

// ---------------------------------------------------------------------------
// sweep-penalty
// ---------------------------------------------------------------------------

struct SweepArgs {
    std::string config;
    int n_s = 100;
    std::string n_u = "5,10,20,40,80,160";
    int m_grid = 12;
    int replicates = 50;
    int g_min = 2;
    int g_max = 5;
    std::string models = "EII,VII,EEE,VVV";
    std::string weights = "";
    int restarts = 5;
    int threads = 1;
    bool full_scale = false;
    std::uint64_t seed = 0;
    std::string out = "penalty_sweep.csv";
};

int run_sweep(CLI::App* cmd, SweepArgs& a) {
    ConfigLayer cfg(cmd, a.config,
                    {"n_s", "n_u", "m_grid", "replicates", "g_min", "g_max", "models",
                     "weights", "restarts", "threads", "full_scale", "seed", "out"});
    cfg.merge("n-s", "n_s", a.n_s);
    cfg.merge("n-u", "n_u", a.n_u);
    cfg.merge("m-grid", "m_grid", a.m_grid);
    cfg.merge("replicates", "replicates", a.replicates);
    cfg.merge("g-min", "g_min", a.g_min);
    cfg.merge("g-max", "g_max", a.g_max);
    cfg.merge("models", "models", a.models);
    cfg.merge("weights", "weights", a.weights);
    cfg.merge("restarts", "restarts", a.restarts);
    cfg.merge("threads", "threads", a.threads);
    cfg.merge("full-scale", "full_scale", a.full_scale);
    cfg.merge("out", "out", a.out);
    a.seed = resolve_seed(cmd, cfg, a.seed);

    ssclust::PenaltySweepConfig sweep;
    sweep.n_s = a.n_s;
    if (a.full_scale && cmd->count("--n-u") == 0 && !cfg.has("n_u")) {
        sweep.n_u_list = {5, 10, 20, 40, 80, 160, 320, 640};
    } else {
        sweep.n_u_list = parse_int_list(a.n_u);
    }
    sweep.m_grid_size = a.m_grid;
    sweep.replicates = a.replicates;
    sweep.G_range.clear();
    for (int g = a.g_min; g <= a.g_max; ++g) sweep.G_range.push_back(g);
    sweep.models = parse_models(a.models);
    if (!a.weights.empty()) {
        auto w = parse_double_list(a.weights);
        sweep.weights = Eigen::Map<Eigen::VectorXd>(w.data(), w.size());
    }
    sweep.restarts = a.restarts;
    sweep.threads = a.threads;
    sweep.seed = a.seed;

    auto rows = ssclust::penalty_sweep_experiment(sweep);

    auto out = open_output(a.out);
    ssclust::write_csv_row(out, {"n_u", "m", "replicate", "selected_G",
                                 "selected_model", "ari"});
    for (const auto& r : rows) {
        ssclust::write_csv_row(
            out, {std::to_string(r.n_u), ssclust::format_double(r.m),
                  std::to_string(r.replicate + 1), std::to_string(r.selected_G),
                  ssclust::cov_model_name(r.selected_model),
                  ssclust::format_double(r.ari)});
    }

    std::string n_u_str;
    for (std::size_t i = 0; i < sweep.n_u_list.size(); ++i) {
        if (i) n_u_str += ",";
        n_u_str += std::to_string(sweep.n_u_list[i]);
    }
    echo_config({{"command", "sweep-penalty"},
                 {"n_s", sweep.n_s},
                 {"n_u", n_u_str},
                 {"m_grid", sweep.m_grid_size},
                 {"replicates", sweep.replicates},
                 {"g_min", a.g_min},
                 {"g_max", a.g_max},
                 {"models", models_to_string(sweep.models)},
                 {"weights", std::vector<double>(sweep.weights.data(),
                                                 sweep.weights.data() +
                                                     sweep.weights.size())},
                 {"restarts", sweep.restarts},
                 {"threads", sweep.threads},
                 {"seed", sweep.seed},
                 {"out", a.out}});
    return 0;
}

// ---------------------------------------------------------------------------
// analytic-probs
// ---------------------------------------------------------------------------

struct ProbsArgs {
    std::string config;
    int figure = 0;
    std::string axis;
    std::string grid;
    int d = 200;
    int d0 = 190;
    long n = 1000;
    int d0_gap = -1;
    std::string m_list;
    std::string out = "analytic_probs.csv";
};

int run_probs(CLI::App* cmd, ProbsArgs& a) {
    ConfigLayer cfg(cmd, a.config,
                    {"figure", "axis", "grid", "d", "d0", "n", "d0_gap", "m_list",
                     "out"});
    cfg.merge("figure", "figure", a.figure);
    cfg.merge("axis", "axis", a.axis);
    cfg.merge("grid", "grid", a.grid);
    cfg.merge("d", "d", a.d);
    cfg.merge("d0", "d0", a.d0);
    cfg.merge("n", "n", a.n);
    cfg.merge("d0-gap", "d0_gap", a.d0_gap);
    cfg.merge("m-list", "m_list", a.m_list);
    cfg.merge("out", "out", a.out);

    // e^1 .. e^4; e^2 is the AIC-style penalty.
    std::vector<double> m_list{2.718281828459045, 7.38905609893065,
                               20.085536923187668, 54.598150033144236};
    if (!a.m_list.empty()) m_list = parse_double_list(a.m_list);

    ssclust::SweepAxis axis;
    std::vector<double> grid;
    ssclust::NestedModelSpec base;
    std::optional<int> d0_gap;

    switch (a.figure) {
        case 1:
            axis = ssclust::SweepAxis::N;
            grid = {100,   178,   316,   562,    1000,   1778,  3162,  5623, 10000,
                    17783, 31623, 56234, 100000, 316228, 1000000};
            base = {200, 190, 1000, 1.0};
            break;
        case 2:
            axis = ssclust::SweepAxis::D;
            grid = {15, 20, 30, 50, 75, 100, 150, 200, 300, 400, 500};
            base = {200, 190, 1000, 1.0};
            d0_gap = 10;
            break;
        case 3:
            axis = ssclust::SweepAxis::D0;
            grid = {10, 30, 50, 70, 90, 110, 130, 150, 170, 190};
            base = {200, 190, 1000, 1.0};
            break;
        case 0: {
            if (a.axis.empty() || a.grid.empty()) {
                throw CLI::ValidationError(
                    "analytic-probs", "pass --figure 1|2|3 or both --axis and --grid");
            }
            axis = ssclust::parse_sweep_axis(a.axis);
            grid = parse_double_list(a.grid);
            base = {a.d, a.d0, a.n, 1.0};
            if (a.d0_gap >= 0) d0_gap = a.d0_gap;
            break;
        }
        default:
            throw CLI::ValidationError("--figure", "must be 1, 2 or 3");
    }

    ssclust::SweepTable table = ssclust::figure_sweep(axis, grid, base, m_list, d0_gap);
    for (const auto& w : table.warnings) std::cerr << "warning: " << w << "\n";

    auto out = open_output(a.out);
    ssclust::write_csv_row(out, {"axis", "value", "m", "prob_2a", "prob_2b"});
    for (const auto& r : table.rows) {
        ssclust::write_csv_row(out, {r.axis, ssclust::format_double(r.value),
                                     ssclust::format_double(r.m),
                                     ssclust::format_double(r.prob_2a),
                                     ssclust::format_double(r.prob_2b)});
    }

    std::string grid_str;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (i) grid_str += ",";
        grid_str += ssclust::format_double(grid[i]);
    }
    echo_config({{"command", "analytic-probs"},
                 {"figure", a.figure},
                 {"axis", ssclust::sweep_axis_name(axis)},
                 {"grid", grid_str},
                 {"d", base.d},
                 {"d0", base.d0},
                 {"n", base.n},
                 {"d0_gap", d0_gap ? json(*d0_gap) : json(nullptr)},
                 {"m_list", m_list},
                 {"out", a.out}});
    return 0;
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

struct SimulateArgs {
    std::string config;
    int n = -1;
    std::string spec_path;
    std::uint64_t seed = 0;
    std::string out = "sample.csv";
};

ssclust::MixtureSpec mixture_from_json(const json& j) {
    ssclust::MixtureSpec spec;
    auto weights = j.at("weights").get<std::vector<double>>();
    spec.weights = Eigen::Map<Eigen::VectorXd>(weights.data(), weights.size());
    for (const auto& mean : j.at("means")) {
        auto v = mean.get<std::vector<double>>();
        spec.means.emplace_back(Eigen::Map<Eigen::VectorXd>(v.data(), v.size()));
    }
    for (const auto& cov : j.at("covariances")) {
        auto rows = cov.get<std::vector<std::vector<double>>>();
        Eigen::MatrixXd m(rows.size(), rows.empty() ? 0 : rows.front().size());
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (rows[r].size() != static_cast<std::size_t>(m.cols())) {
                throw ssclust::InputError("ragged covariance matrix in mixture spec");
            }
            for (std::size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
        }
        spec.covariances.push_back(std::move(m));
    }
    spec.validate();
    return spec;
}

int run_simulate(CLI::App* cmd, SimulateArgs& a) {
    ConfigLayer cfg(cmd, a.config, {"n", "spec", "seed", "out"});
    cfg.merge("n", "n", a.n);
    cfg.merge("spec", "spec", a.spec_path);
    cfg.merge("out", "out", a.out);
    a.seed = resolve_seed(cmd, cfg, a.seed);
    if (a.n < 0) throw CLI::RequiredError("--n");

    ssclust::MixtureSpec spec;
    if (!a.spec_path.empty()) {
        spec = mixture_from_json(load_json_file(a.spec_path));
    } else {
        spec = ssclust::benchmark_mixture(Eigen::VectorXd::Constant(3, 1.0 / 3.0),
                                          ssclust::derive_seed(a.seed, {0x6d6978ULL}));
    }

    ssclust::MixtureSample sample = ssclust::sample_mixture(spec, a.n, a.seed);

    auto out = open_output(a.out);
    std::vector<std::string> header;
    for (int j = 0; j < spec.dim(); ++j) header.push_back("x" + std::to_string(j + 1));
    header.push_back("true_component");
    ssclust::write_csv_row(out, header);
    for (int i = 0; i < a.n; ++i) {
        std::vector<std::string> row;
        for (int j = 0; j < spec.dim(); ++j) {
            row.push_back(ssclust::format_double(sample.points(i, j)));
        }
        row.push_back(std::to_string(sample.components[i] + 1));
        ssclust::write_csv_row(out, row);
    }

    echo_config({{"command", "simulate"},
                 {"n", a.n},
                 {"spec", a.spec_path.empty() ? "builtin-benchmark" : a.spec_path},
                 {"G", spec.G()},
                 {"dim", spec.dim()},
                 {"seed", a.seed},
                 {"out", a.out}});
    return 0;
}

// ---------------------------------------------------------------------------
// hellinger-test
// ---------------------------------------------------------------------------

struct HellingerArgs {
    std::string config;
    std::string data;
    std::string cluster_column;
    std::string line_column;
    int B = 999;
    std::uint64_t seed = 0;
    std::string out = "hellinger_test.json";
};

int run_hellinger(CLI::App* cmd, HellingerArgs& a) {
    ConfigLayer cfg(cmd, a.config,
                    {"data", "cluster_column", "line_column", "b", "seed", "out"});
    cfg.merge("data", "data", a.data);
    cfg.merge("cluster-column", "cluster_column", a.cluster_column);
    cfg.merge("line-column", "line_column", a.line_column);
    cfg.merge("b", "b", a.B);
    cfg.merge("out", "out", a.out);
    a.seed = resolve_seed(cmd, cfg, a.seed);
    if (a.data.empty()) throw CLI::RequiredError("--data");
    if (a.cluster_column.empty()) throw CLI::RequiredError("--cluster-column");
    if (a.line_column.empty()) throw CLI::RequiredError("--line-column");

    ssclust::CsvTable table = ssclust::read_csv_file(a.data);
    long ci = -1, li = -1;
    for (std::size_t j = 0; j < table.header.size(); ++j) {
        if (table.header[j] == a.cluster_column) ci = static_cast<long>(j);
        if (table.header[j] == a.line_column) li = static_cast<long>(j);
    }
    if (ci < 0) throw ssclust::InputError("cluster column '" + a.cluster_column + "' not found");
    if (li < 0) throw ssclust::InputError("line column '" + a.line_column + "' not found");

    auto densify = [](const std::vector<std::string>& values) {
        std::vector<std::string> seen;
        std::vector<int> out;
        for (const auto& v : values) {
            auto it = std::find(seen.begin(), seen.end(), v);
            if (it == seen.end()) {
                seen.push_back(v);
                it = seen.end() - 1;
            }
            out.push_back(static_cast<int>(it - seen.begin()));
        }
        return out;
    };
    std::vector<std::string> cluster_values, line_values;
    for (const auto& row : table.rows) {
        cluster_values.push_back(row[static_cast<std::size_t>(ci)]);
        line_values.push_back(row[static_cast<std::size_t>(li)]);
    }
    std::vector<int> clusters = densify(cluster_values);
    std::vector<int> lines = densify(line_values);

    ssclust::TestOutcome outcome =
        ssclust::line_difference_test(clusters, lines, a.B, a.seed);

    json resolved = {{"command", "hellinger-test"}, {"data", a.data},
                     {"cluster_column", a.cluster_column},
                     {"line_column", a.line_column},
                     {"b", a.B},
                     {"seed", a.seed},
                     {"out", a.out}};
    json result;
    result["config"] = resolved;
    result["statistic"] = outcome.statistic;
    result["p_value"] = outcome.p_value;
    result["b"] = a.B;
    result["null_samples"] = outcome.null_samples;
    auto out = open_output(a.out);
    out << result.dump(2) << "\n";

    echo_config(resolved);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Semi-supervised Gaussian mixture clustering with a "
                 "label-aware BIC"};
    app.require_subcommand(1);

    ClusterArgs cluster_args;
    auto* cluster = app.add_subcommand(
        "cluster", "Fit mixtures over a (G, model) grid and select by the "
                   "label-aware BIC");
    cluster->add_option("--data", cluster_args.data, "Input CSV with a header row");
    cluster->add_option("--label-column", cluster_args.label_column,
                        "Column holding partial labels (empty cell or NA = unlabeled)");
    cluster->add_option("--config", cluster_args.config, "JSON config file");
    cluster->add_option("--g-min", cluster_args.g_min, "Smallest candidate G");
    cluster->add_option("--g-max", cluster_args.g_max, "Largest candidate G");
    cluster->add_option("--models", cluster_args.models, "Comma list of EII,VII,EEE,VVV");
    cluster->add_option("--restarts", cluster_args.restarts, "Seeded restarts per candidate");
    cluster->add_option("--max-iter", cluster_args.max_iter, "EM iteration cap");
    cluster->add_option("--rel-tol", cluster_args.rel_tol, "EM relative tolerance");
    cluster->add_option("--threads", cluster_args.threads, "Worker threads");
    cluster->add_option("--seed", cluster_args.seed, "RNG seed");
    cluster->add_option("--out-assignments", cluster_args.out_assignments,
                        "Assignments CSV path");
    cluster->add_option("--out-scores", cluster_args.out_scores, "Scores JSON path");

    SweepArgs sweep_args;
    auto* sweep = app.add_subcommand(
        "sweep-penalty", "Monte Carlo experiment sweeping the criterion "
                         "penalty between n_u and n_u + n_s");
    sweep->add_option("--config", sweep_args.config, "JSON config file");
    sweep->add_option("--n-s", sweep_args.n_s, "Labeled points per replicate");
    sweep->add_option("--n-u", sweep_args.n_u, "Comma list of unlabeled sizes");
    sweep->add_option("--m-grid", sweep_args.m_grid, "Penalty grid resolution");
    sweep->add_option("--replicates", sweep_args.replicates, "Monte Carlo replicates");
    sweep->add_option("--g-min", sweep_args.g_min, "Smallest candidate G");
    sweep->add_option("--g-max", sweep_args.g_max, "Largest candidate G");
    sweep->add_option("--models", sweep_args.models, "Comma list of EII,VII,EEE,VVV");
    sweep->add_option("--weights", sweep_args.weights,
                      "Mixture weights (default 1/3,1/3,1/3)");
    sweep->add_option("--restarts", sweep_args.restarts, "Restarts per candidate");
    sweep->add_option("--threads", sweep_args.threads, "Worker threads");
    sweep->add_flag("--full-scale", sweep_args.full_scale,
                    "Extend the unlabeled sizes up to 640");
    sweep->add_option("--seed", sweep_args.seed, "RNG seed");
    sweep->add_option("--out", sweep_args.out, "Output CSV path");

    ProbsArgs probs_args;
    auto* probs = app.add_subcommand(
        "analytic-probs", "Closed-form criterion-disagreement probability curves");
    probs->add_option("--config", probs_args.config, "JSON config file");
    probs->add_option("--figure", probs_args.figure, "Preset curve family (1, 2 or 3)");
    probs->add_option("--axis", probs_args.axis, "Swept axis: n, d or d0");
    probs->add_option("--grid", probs_args.grid, "Comma list of axis values");
    probs->add_option("--d", probs_args.d, "Full model dimension");
    probs->add_option("--d0", probs_args.d0, "Null model dimension");
    probs->add_option("--n", probs_args.n, "Sample size");
    probs->add_option("--d0-gap", probs_args.d0_gap,
                      "Keep d0 = d - gap while sweeping d");
    probs->add_option("--m-list", probs_args.m_list, "Comma list of penalties m");
    probs->add_option("--out", probs_args.out, "Output CSV path");

    SimulateArgs sim_args;
    auto* sim = app.add_subcommand("simulate", "Draw a labeled sample from a "
                                               "Gaussian mixture");
    sim->add_option("--config", sim_args.config, "JSON config file");
    sim->add_option("--n", sim_args.n, "Number of draws");
    sim->add_option("--spec", sim_args.spec_path, "Mixture spec JSON path");
    sim->add_option("--seed", sim_args.seed, "RNG seed");
    sim->add_option("--out", sim_args.out, "Output CSV path");

    HellingerArgs hell_args;
    auto* hell = app.add_subcommand(
        "hellinger-test", "Permutation test for two lines sharing one "
                          "cluster-membership distribution");
    hell->add_option("--config", hell_args.config, "JSON config file");
    hell->add_option("--data", hell_args.data, "CSV with cluster and line columns");
    hell->add_option("--cluster-column", hell_args.cluster_column, "Cluster id column");
    hell->add_option("--line-column", hell_args.line_column, "Line id column");
    hell->add_option("--b", hell_args.B, "Number of permutations");
    hell->add_option("--seed", hell_args.seed, "RNG seed");
    hell->add_option("--out", hell_args.out, "Output JSON path");

    try {
        app.parse(argc, argv);
        if (cluster->parsed()) return run_cluster(cluster, cluster_args);
        if (sweep->parsed()) return run_sweep(sweep, sweep_args);
        if (probs->parsed()) return run_probs(probs, probs_args);
        if (sim->parsed()) return run_simulate(sim, sim_args);
        if (hell->parsed()) return run_hellinger(hell, hell_args);
        return 2;
    } catch (const CLI::CallForHelp& e) {
        app.exit(e);
        return 0;
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << json{{"error", {{"type", "config"}, {"message", e.what()}}}}.dump()
                  << "\n";
        return 2;
    } catch (const ssclust::Error& e) {
        std::cerr << json{{"error", {{"type", e.kind()}, {"message", e.what()}}}}.dump()
                  << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << json{{"error", {{"type", "internal"}, {"message", e.what()}}}}.dump()
                  << "\n";
        return 1;
    }
}
