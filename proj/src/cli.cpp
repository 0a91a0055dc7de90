#include "mixedscore/cli.hpp"

#include <algorithm>
#include <chrono>
#include <climits>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

#include "mixedscore/dcmm.hpp"
#include "mixedscore/detect.hpp"
#include "mixedscore/errors.hpp"
#include "mixedscore/graph.hpp"
#include "mixedscore/io.hpp"
#include "mixedscore/metrics.hpp"

namespace mixedscore {

namespace {

struct DetectFlags {
    std::string edges;
    int K = 0;
    std::optional<double> tau;
    double t = 0.1;
    std::optional<double> tn;
    std::string vh = "kmeans";
    std::uint64_t seed = 0;
    int restarts = 10;
    std::string out;
    std::string format = "csv";
    bool one_based = false;
    bool largest_component = false;
    std::optional<std::size_t> nodes;
};

struct SimulateFlags {
    std::string experiment;
    int reps = 50;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    std::optional<double> tau;
    double t = 0.1;
    std::optional<double> tn;
    std::string vh = "kmeans";
    int restarts = 10;
    std::string out;
    std::string format = "csv";
    bool clip_omega = false;
};

struct EvalFlags {
    std::string estimated;
    std::string truth;
    std::string format = "text";
};

VhMethod parse_vh(const std::string& s) { return s == "kmedians" ? VhMethod::KMedians : VhMethod::KMeans; }

// Reads a flat key=value file into "--key value" tokens; "key=true" becomes a
// bare flag and "key=false" is dropped.
std::vector<std::string> config_tokens(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CLI::FileError::Missing(path);
    std::vector<std::string> tokens;
    std::string line;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#' || line[first] == ';') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw CLI::ConversionError("config line without '=': " + line);
        auto strip = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r\"");
            const auto b = s.find_last_not_of(" \t\r\"");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        std::string key = strip(line.substr(0, eq)), value = strip(line.substr(eq + 1));
        if (key.rfind("--", 0) != 0) key = "--" + key;
        if (value == "false") continue;
        tokens.push_back(key);
        if (value != "true") tokens.push_back(value);
    }
    return tokens;
}

// Splices config-file tokens in front of the explicit flags so the latter win.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
    std::vector<std::string> out;
    std::vector<std::string> config;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            config = config_tokens(args[++i]);
        } else if (args[i].rfind("--config=", 0) == 0) {
            config = config_tokens(args[i].substr(9));
        } else {
            out.push_back(args[i]);
        }
    }
    if (config.empty() || out.empty()) return out;
    out.insert(out.begin() + 1, config.begin(), config.end());
    return out;
}

std::filesystem::path sidecar_path(const std::filesystem::path& out) {
    auto p = out;
    p.replace_extension(".diagnostics.json");
    return p;
}

int cmd_detect(const DetectFlags& f, std::ostream& out, std::ostream& err) {
    const auto start = std::chrono::steady_clock::now();
    Graph g = load_edge_list(f.edges, f.one_based ? Indexing::OneBased : Indexing::ZeroBased, f.nodes);
    if (f.largest_component) {
        const auto before = g.size();
        g = largest_component(g);
        if (g.size() != before)
            err << "largest component keeps " << g.size() << " of " << before << " nodes\n";
    }

    DetectOptions opt;
    opt.tau = f.tau;
    opt.t = f.t;
    opt.T_n = f.tn;
    opt.vh = parse_vh(f.vh);
    opt.seed = f.seed;
    opt.restarts = f.restarts;
    const auto result = detect(g, f.K, opt);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    std::ostringstream body;
    if (f.format == "json") {
        body << membership_json(result.membership, g.labels()).dump(2) << '\n';
    } else {
        write_membership_csv(body, result.membership, g.labels());
    }

    auto diag = diagnostics_json(result.diagnostics);
    diag["n"] = g.size();
    diag["K"] = f.K;
    diag["vh"] = f.vh;
    diag["seed"] = f.seed;
    diag["restarts"] = f.restarts;
    diag["t"] = f.t;
    diag["wall_time_seconds"] = seconds;

    if (result.diagnostics.fallback_rows)
        err << "warning: " << result.diagnostics.fallback_rows
            << " rows had no positive weight after rectification and were set to uniform membership\n";

    if (f.out.empty()) {
        out << body.str();
        err << "tau=" << format_real(result.diagnostics.tau) << " M=" << result.diagnostics.M
            << " T_n=" << format_real(result.diagnostics.T_n)
            << " vh_objective=" << format_real(result.diagnostics.vh_objective) << '\n';
    } else {
        const std::filesystem::path path(f.out);
        write_file_atomic(path, body.str());
        write_file_atomic(sidecar_path(path), diag.dump(2) + "\n");
    }
    return kExitOk;
}

int cmd_simulate(const SimulateFlags& f, std::ostream& out, std::ostream& err) {
    const auto design = experiment_design(f.experiment);
    ExperimentOptions opt;
    opt.repetitions = f.reps;
    opt.seed = f.seed;
    opt.threads = f.threads;
    opt.clip_omega = f.clip_omega;
    opt.detect.tau = f.tau;
    opt.detect.t = f.t;
    opt.detect.T_n = f.tn;
    opt.detect.vh = parse_vh(f.vh);
    opt.detect.restarts = f.restarts;

    if (!design.note.empty()) err << "note: " << design.note << '\n';
    const auto results = run_experiment(design, opt);

    std::ostringstream body;
    if (f.format == "json")
        body << results_json(results).dump(2) << '\n';
    else
        write_results_csv(body, results);

    std::ostream& summary = f.out.empty() ? err : out;
    for (const auto& r : results) {
        summary << "experiment " << r.experiment << ' ' << r.grid_param << '=' << format_real(r.grid_value) << ' ';
        if (r.valid)
            summary << "mean=" << format_real(r.mean_error) << " sd=" << format_real(r.sd_error);
        else
            summary << "invalid";
        summary << " reps=" << r.repetitions << '\n';
        if (!r.valid)
            err << "warning: " << r.grid_param << '=' << format_real(r.grid_value) << ": " << r.note
                << " (rerun with --clip-omega to clamp Omega)\n";
        if (r.clipped_entries)
            err << "warning: " << r.grid_param << '=' << format_real(r.grid_value) << ": clamped "
                << r.clipped_entries << " Omega entries to 1\n";
    }

    if (f.out.empty())
        out << body.str();
    else
        write_file_atomic(f.out, body.str());
    return kExitOk;
}

int cmd_eval(const EvalFlags& f, std::ostream& out, std::ostream&) {
    const auto est = read_membership_table(std::filesystem::path(f.estimated));
    const auto truth = align_nodes(read_membership_table(std::filesystem::path(f.truth)), est.nodes);

    nlohmann::ordered_json report;
    report["n"] = est.nodes.size();
    if (est.pi && truth.pi) {
        if (est.pi->cols() != truth.pi->cols())
            throw ValidationError("estimated membership has K = " + std::to_string(est.pi->cols()) +
                                  " but ground truth has K = " + std::to_string(truth.pi->cols()));
        const auto r = mixed_hamming(*est.pi, *truth.pi);
        report["mixed_hamming"] = r.mixed_hamming;
        report["best_permutation"] = r.best_permutation;
    }
    if (truth.labels) {
        LabelVector hat;
        if (est.labels)
            hat = *est.labels;
        else if (est.pi)
            hat = hard_labels(MembershipMatrix<double>{*est.pi});
        else
            throw ValidationError("estimated file has neither labels nor membership weights");
        int K = 0;
        for (int l : hat) K = std::max(K, l);
        for (int l : *truth.labels) K = std::max(K, l);
        if (est.pi) K = std::max<int>(K, static_cast<int>(est.pi->cols()));
        const auto r = hamming_error(hat, *truth.labels, K);
        report["hamming"] = r.rate;
        report["misclassified"] = r.misclassified;
        report["hamming_fraction"] = std::to_string(r.misclassified) + "/" + std::to_string(r.n);
        if (!report.contains("best_permutation")) report["best_permutation"] = r.best_permutation;
    }
    if (!report.contains("mixed_hamming") && !report.contains("hamming"))
        throw ValidationError("no comparable columns: need membership weights in both files or labels in the truth file");

    if (f.format == "json") {
        out << report.dump(2) << '\n';
        return kExitOk;
    }
    if (report.contains("mixed_hamming"))
        out << "mixed_hamming: " << format_real(report["mixed_hamming"].get<double>()) << '\n';
    if (report.contains("hamming"))
        out << "hamming: " << format_real(report["hamming"].get<double>()) << " ("
            << report["hamming_fraction"].get<std::string>() << ")\n";
    out << "best_permutation:";
    // One-based, estimated community -> true community.
    for (const auto& b : report["best_permutation"]) out << ' ' << b.get<int>() + 1;
    out << '\n';
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Mixed membership community detection on networks"};
    app.name("mixedscore");
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.add_option("--config", "Flat key=value file of flags for the subcommand");

    const auto vh_check = CLI::IsMember({"kmeans", "kmedians"});

    DetectFlags df;
    auto* detect_cmd = app.add_subcommand("detect", "Estimate memberships of the nodes of an edge list");
    detect_cmd->add_option("--edges", df.edges, "Edge list file")->required()->check(CLI::ExistingFile);
    detect_cmd->add_option("--k", df.K, "Number of communities")->required()->check(CLI::Range(2, INT_MAX));
    detect_cmd->add_option("--tau", df.tau, "Laplacian regularizer (default 0.1 (d_max + d_min) / 2)")
        ->check(CLI::NonNegativeNumber);
    detect_cmd->add_option("--t", df.t, "Weak-signal threshold")->check(CLI::NonNegativeNumber);
    detect_cmd->add_option("--tn", df.tn, "Eigen-ratio clamp (default ln n)")->check(CLI::PositiveNumber);
    detect_cmd->add_option("--vh", df.vh, "Vertex hunting method")->check(vh_check);
    detect_cmd->add_option("--seed,--vh-seed", df.seed, "Vertex hunting seed");
    detect_cmd->add_option("--restarts,--vh-restarts", df.restarts, "Vertex hunting restarts")->check(CLI::Range(1, INT_MAX));
    detect_cmd->add_option("--out", df.out, "Output file (stdout when omitted)");
    detect_cmd->add_option("--format", df.format)->check(CLI::IsMember({"csv", "json"}));
    detect_cmd->add_flag("--one-based", df.one_based, "Edge list node ids start at 1");
    detect_cmd->add_flag("--largest-component", df.largest_component, "Keep only the largest connected component");
    detect_cmd->add_option("--nodes", df.nodes, "Node count override")->check(CLI::PositiveNumber);

    SimulateFlags sf;
    auto* sim_cmd = app.add_subcommand("simulate", "Run a synthetic DCMM experiment sweep");
    sim_cmd->add_option("--experiment", sf.experiment, "Experiment id 1a..4b")
        ->required()
        ->check(CLI::IsMember(experiment_ids()));
    sim_cmd->add_option("--reps", sf.reps, "Repetitions per grid point")->check(CLI::Range(1, INT_MAX));
    sim_cmd->add_option("--seed", sf.seed, "Master seed");
    sim_cmd->add_option("--threads", sf.threads, "Worker threads")->check(CLI::Range(1u, 1024u));
    sim_cmd->add_option("--tau", sf.tau)->check(CLI::NonNegativeNumber);
    sim_cmd->add_option("--t", sf.t)->check(CLI::NonNegativeNumber);
    sim_cmd->add_option("--tn", sf.tn)->check(CLI::PositiveNumber);
    sim_cmd->add_option("--vh", sf.vh)->check(vh_check);
    sim_cmd->add_option("--restarts,--vh-restarts", sf.restarts)->check(CLI::Range(1, INT_MAX));
    sim_cmd->add_option("--out", sf.out, "Result table file (stdout when omitted)");
    sim_cmd->add_option("--format", sf.format)->check(CLI::IsMember({"csv", "json"}));
    sim_cmd->add_flag("--clip-omega", sf.clip_omega, "Clamp edge probabilities above 1 instead of failing");

    EvalFlags ef;
    auto* eval_cmd = app.add_subcommand("eval", "Compare estimated memberships or labels with ground truth");
    eval_cmd->add_option("--estimated", ef.estimated, "Estimated membership/label CSV")
        ->required()
        ->check(CLI::ExistingFile);
    eval_cmd->add_option("--truth", ef.truth, "Ground-truth membership/label CSV")
        ->required()
        ->check(CLI::ExistingFile);
    eval_cmd->add_option("--format", ef.format)->check(CLI::IsMember({"text", "json"}));

    try {
        auto args = expand_config(raw_args);
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::Success& e) {
        app.exit(e, out, err);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n' << "run with --help for usage\n";
        return kExitUsage;
    }

    try {
        if (detect_cmd->parsed()) return cmd_detect(df, out, err);
        if (sim_cmd->parsed()) return cmd_simulate(sf, out, err);
        return cmd_eval(ef, out, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}

}  // namespace mixedscore
