#include <cctype>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "sapfocs/annealing.hpp"
#include "sapfocs/clustering.hpp"
#include "sapfocs/dataset.hpp"
#include "sapfocs/errors.hpp"
#include "sapfocs/oracle.hpp"
#include "sapfocs/report.hpp"
#include "sapfocs/similarity.hpp"
#include "sapfocs/tuning.hpp"

namespace {

using namespace sapfocs;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw validation_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_output(const std::optional<std::string>& path, const std::string& content) {
    if (!path) {
        std::cout << content;
        return;
    }
    std::ofstream out(*path, std::ios::binary);
    if (!out) throw validation_error("cannot write '" + path.value() + "'");
    out << content;
}

struct InputArgs {
    std::string builtin;
    std::string input;
    char delimiter = ',';
    bool force_header = false, no_header = false;
    bool force_part_column = false, no_part_column = false;

    void add_to(CLI::App& cmd) {
        auto* b = cmd.add_option("--builtin", builtin, "bundled dataset P1..P5");
        auto* i = cmd.add_option("--input", input, "CSV file of part codes");
        b->excludes(i);
        cmd.add_option("--delimiter", delimiter, "input field delimiter (default ',')");
        auto* h = cmd.add_flag("--header", force_header,
                               "first input row holds attribute names (default: sniffed)");
        cmd.add_flag("--no-header", no_header, "input has no attribute-name row")
            ->excludes(h);
        auto* pc = cmd.add_flag("--part-column", force_part_column,
                                "first input column holds part labels (default: sniffed)");
        cmd.add_flag("--no-part-column", no_part_column, "input has no part-label column")
            ->excludes(pc);
    }

    std::string name() const { return !builtin.empty() ? builtin : input; }

    PartCodeMatrix load() const {
        if (!builtin.empty()) return builtin_dataset(parse_builtin_id(builtin));
        if (input.empty()) throw validation_error("need --builtin or --input");
        ParseOptions opt;
        opt.delimiter = delimiter;
        if (force_header) opt.header = ParseOptions::Flag::Yes;
        if (no_header) opt.header = ParseOptions::Flag::No;
        if (force_part_column) opt.part_column = ParseOptions::Flag::Yes;
        if (no_part_column) opt.part_column = ParseOptions::Flag::No;
        return parse_matrix(read_file(input), opt);
    }
};

struct ConfigArgs {
    double t_init = 0, t_final = 0, alpha = 0;
    int markov = 0;
    std::uint64_t seed = 0;
    int stagnation = 0;
    bool strict_counting = false;
    std::string config_path;
    CLI::Option *o_tinit = nullptr, *o_tfinal = nullptr, *o_alpha = nullptr,
                *o_markov = nullptr, *o_seed = nullptr, *o_stagnation = nullptr;

    void add_to(CLI::App& cmd) {
        o_tinit = cmd.add_option("--t-init", t_init, "initial temperature");
        o_tfinal = cmd.add_option("--t-final", t_final, "freezing temperature");
        o_alpha = cmd.add_option("--alpha", alpha, "cooling factor in (0,1)");
        o_markov = cmd.add_option("--markov", markov, "proposals per temperature level");
        o_seed = cmd.add_option("--seed", seed, "random seed");
        o_stagnation = cmd.add_option("--stagnation-limit", stagnation,
                                      "stop after this many proposals without a new best");
        cmd.add_flag("--strict-move-counting", strict_counting,
                     "count only improving/equal moves toward the level budget");
        cmd.add_option("--config", config_path,
                       "JSON config file (SAPFOCS_CONFIG names a default)");
    }

    // precedence: explicit flags > config file > tuned defaults
    AnnealConfig resolve() const {
        AnnealConfig c;  // tuned defaults
        std::string path = config_path;
        if (path.empty()) {
            if (const char* env = std::getenv("SAPFOCS_CONFIG")) path = env;
        }
        if (!path.empty()) {
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(read_file(path));
            } catch (const nlohmann::json::exception& e) {
                throw config_error("bad config file '" + path + "': " + e.what());
            }
            try {
                if (j.contains("t_init")) c.t_init = j["t_init"].get<double>();
                if (j.contains("t_final")) c.t_final = j["t_final"].get<double>();
                if (j.contains("alpha")) c.alpha = j["alpha"].get<double>();
                if (j.contains("markov_len")) c.markov_len = j["markov_len"].get<int>();
                if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
                if (j.contains("stagnation_limit"))
                    c.stagnation_limit = j["stagnation_limit"].get<int>();
            } catch (const nlohmann::json::exception& e) {
                throw config_error("bad config value in '" + path + "': " + e.what());
            }
        }
        if (o_tinit->count()) c.t_init = t_init;
        if (o_tfinal->count()) c.t_final = t_final;
        if (o_alpha->count()) c.alpha = alpha;
        if (o_markov->count()) c.markov_len = markov;
        if (o_seed->count()) c.seed = seed;
        if (o_stagnation->count()) c.stagnation_limit = stagnation;
        c.strict_pseudocode_counting = strict_counting;
        c.validate();
        return c;
    }
};

struct Stages {
    PartCodeMatrix matrix;
    SymmetricMatrix sim;
    SymmetricMatrix dist;
    LinkageTree tree;
    Partition initial;
    double initial_objective = 0.0;
    int n = 0;
};

Stages build_stages(const InputArgs& in, std::optional<int> n_families, bool column_range_mode) {
    PartCodeMatrix m = in.load();
    std::vector<double> ranges =
        column_range_mode ? column_ranges(m) : default_ranges(m.cols());
    SymmetricMatrix sim = similarity_matrix(m, ranges);
    SymmetricMatrix dist = distance_matrix(sim);
    LinkageTree tree = complete_linkage(dist);
    int n = n_families.value_or(default_family_count(m.rows()));
    Partition initial = cut_tree(tree, n);
    double obj = objective(initial, sim);
    return Stages{std::move(m), std::move(sim), std::move(dist), std::move(tree),
                  std::move(initial), obj, n};
}

int run_dataset(const InputArgs& in, const std::string& format,
                const std::optional<std::string>& output) {
    PartCodeMatrix m = in.load();
    if (format == "csv")
        write_output(output, render_csv(m));
    else if (format == "json")
        write_output(output, render_json(m));
    else
        throw validation_error("unknown format '" + format + "' (expected csv or json)");
    return 0;
}

int run_cluster(const InputArgs& in, std::optional<int> families, bool column_range_mode,
                bool json_out, const std::optional<std::string>& output,
                const std::optional<std::string>& dendro_path, const std::string& dendro_format,
                const std::optional<std::string>& linkage_path,
                const std::optional<std::string>& distance_path,
                const std::optional<std::string>& similarity_path, bool matrices_as_json) {
    Stages st = build_stages(in, families, column_range_mode);
    if (dendro_path) write_output(dendro_path, export_dendrogram(st.tree, dendro_format));
    if (linkage_path) write_output(linkage_path, linkage_csv(st.tree));
    if (distance_path)
        write_output(distance_path, matrices_as_json ? st.dist.to_json() : st.dist.to_csv());
    if (similarity_path)
        write_output(similarity_path, matrices_as_json ? st.sim.to_json() : st.sim.to_csv());

    if (json_out) {
        nlohmann::json j;
        j["schema_version"] = 1;
        j["dataset"] = in.name();
        j["parts"] = st.matrix.rows();
        j["n_families"] = st.n;
        auto fams = nlohmann::json::array();
        for (const auto& fam : st.initial.families()) {
            nlohmann::json members = nlohmann::json::array();
            for (int part : fam) members.push_back(part + 1);
            fams.push_back(std::move(members));
        }
        j["families"] = std::move(fams);
        j["objective"] = st.initial_objective;
        j["perfection_pct"] = perfection_percentage(st.initial_objective, st.n);
        write_output(output, j.dump(2) + "\n");
    } else {
        std::ostringstream out;
        char buf[128];
        out << "dataset " << in.name() << ": " << st.matrix.rows() << " parts, " << st.n
            << " families (complete linkage)\n";
        std::snprintf(buf, sizeof buf, "objective %.6f   perfection %.2f%%\n",
                      st.initial_objective, perfection_percentage(st.initial_objective, st.n));
        out << buf << families_text(st.initial);
        write_output(output, out.str());
    }
    return 0;
}

int run_anneal(const InputArgs& in, std::optional<int> families, const ConfigArgs& cfg,
               int sweep, bool column_range_mode, bool json_out, bool timings,
               const std::optional<std::string>& output,
               const std::optional<std::string>& trace_path) {
    if (sweep < 1) throw config_error("--seed-sweep must be at least 1");
    AnnealConfig config = cfg.resolve();
    Stages st = build_stages(in, families, column_range_mode);
    AnnealResult best = sweep == 1 ? anneal(st.initial, st.sim, config)
                                   : anneal_seed_sweep(st.initial, st.sim, config, sweep);
    if (trace_path) write_output(trace_path, trace_csv(best));

    PipelineResult pipe{st.initial, st.initial_objective, std::move(best)};
    RunReport report = make_run_report(in.name(), pipe, config, sweep);
    if (json_out)
        write_output(output, run_report_json(report, timings));
    else
        write_output(output, run_report_text(report));
    std::fprintf(stderr, "sapfocs: %lld proposals in %.3f s\n",
                 static_cast<long long>(report.iterations), report.wall_seconds);
    return 0;
}

std::vector<double> parse_responses_file(const std::string& path) {
    std::istringstream in(read_file(path));
    std::vector<double> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        // take the last comma-separated field; skip non-numeric (header) lines
        std::size_t pos = line.find_last_of(',');
        std::string cell = pos == std::string::npos ? line : line.substr(pos + 1);
        try {
            std::size_t used = 0;
            double v = std::stod(cell, &used);
            while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used])))
                ++used;
            if (used != cell.size()) continue;
            out.push_back(v);
        } catch (const std::exception&) {
            continue;
        }
    }
    if (out.size() != 9)
        throw validation_error("responses file '" + path + "' holds " +
                               std::to_string(out.size()) + " values, expected 9");
    return out;
}

TaguchiDesign design_from_levels_file(const std::string& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw config_error("bad levels file '" + path + "': " + e.what());
    }
    auto levels = [&](const char* key) {
        if (!j.contains(key))
            throw config_error("levels file misses '" + std::string(key) + "'");
        auto arr = j[key];
        if (!arr.is_array() || arr.size() != 3)
            throw config_error("L9 requires 3 levels for '" + std::string(key) + "'");
        return std::array<double, 3>{arr[0].get<double>(), arr[1].get<double>(),
                                     arr[2].get<double>()};
    };
    return make_design(levels("t_init"), levels("alpha"), levels("markov_len"));
}

int run_tune(const InputArgs& in, std::optional<int> families, const ConfigArgs& cfg,
             int seeds, const std::optional<std::string>& levels_path,
             const std::optional<std::string>& responses_path, const std::string& format,
             const std::optional<std::string>& output) {
    AnnealConfig base = cfg.resolve();
    TaguchiDesign design = levels_path ? design_from_levels_file(*levels_path)
                                       : default_design();
    std::vector<double> responses;
    if (responses_path) {
        responses = parse_responses_file(*responses_path);  // analysis-only mode
    } else {
        if (seeds < 1) throw config_error("--seeds must be at least 1");
        std::vector<std::uint64_t> seedlist;
        for (int s = 0; s < seeds; ++s) seedlist.push_back(base.seed + s);
        responses = run_design(in.load(), design, base, seedlist, families);
    }
    TuneReport rep = analyze_design(design, responses, base);
    if (format == "json")
        write_output(output, tune_report_json(rep));
    else if (format == "csv")
        write_output(output, tune_report_csv(rep));
    else
        write_output(output, tune_report_text(rep));
    return 0;
}

int run_oracle(const InputArgs& in, std::optional<int> families, std::uint64_t cap,
               bool json_out, const std::optional<std::string>& output) {
    PartCodeMatrix m = in.load();
    int n = families.value_or(default_family_count(m.rows()));
    SymmetricMatrix sim = similarity_matrix(m);
    OracleResult res = brute_force_optimum(sim, n, cap);

    // reference best objectives of the bundled datasets, for certification
    std::optional<double> reference;
    if (!in.builtin.empty()) {
        switch (parse_builtin_id(in.builtin)) {
            case BuiltinId::P1: reference = 1.75599; break;
            case BuiltinId::P2: reference = 2.6269; break;
            case BuiltinId::P3: reference = 3.45274; break;
            case BuiltinId::P4: reference = 4.2510; break;
            case BuiltinId::P5: reference = 5.53717; break;
        }
    }
    std::string verdict;
    if (reference) {
        double diff = res.objective - *reference;
        if (std::abs(diff) <= 1e-4)
            verdict = "reference value is optimal";
        else if (diff > 0)
            verdict = "optimum improves on the reference value";
        else
            verdict = "reference value exceeds the exhaustive optimum";
    }

    if (json_out) {
        nlohmann::json j;
        j["schema_version"] = 1;
        j["dataset"] = in.name();
        j["n_families"] = n;
        j["enumerated"] = res.enumerated;
        j["objective"] = res.objective;
        auto fams = nlohmann::json::array();
        for (const auto& fam : res.best.families()) {
            nlohmann::json members = nlohmann::json::array();
            for (int part : fam) members.push_back(part + 1);
            fams.push_back(std::move(members));
        }
        j["families"] = std::move(fams);
        if (reference) {
            j["reference_objective"] = *reference;
            j["verdict"] = verdict;
        }
        write_output(output, j.dump(2) + "\n");
    } else {
        std::ostringstream out;
        char buf[128];
        out << "dataset " << in.name() << ": exhaustive optimum over " << res.enumerated
            << " partitions into " << n << " families\n";
        std::snprintf(buf, sizeof buf, "objective %.6f\n", res.objective);
        out << buf << families_text(res.best);
        if (reference) {
            std::snprintf(buf, sizeof buf, "reference %.5f: %s\n", *reference,
                          verdict.c_str());
            out << buf;
        }
        write_output(output, out.str());
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"part-family formation from digit-coded part attributes"};
    app.require_subcommand(1);

    // dataset
    auto* cmd_dataset = app.add_subcommand("dataset", "export or validate a code matrix");
    InputArgs ds_in;
    ds_in.add_to(*cmd_dataset);
    std::string ds_format = "csv";
    cmd_dataset->add_option("--format", ds_format, "csv or json");
    std::optional<std::string> ds_out;
    cmd_dataset->add_option("--output", ds_out, "write here instead of stdout");

    // cluster
    auto* cmd_cluster = app.add_subcommand("cluster", "complete-linkage part families");
    InputArgs cl_in;
    cl_in.add_to(*cmd_cluster);
    std::optional<int> cl_families;
    cmd_cluster->add_option("--families", cl_families, "family count (default: ceil(parts/4))");
    bool cl_colrange = false;
    cmd_cluster->add_flag("--column-ranges", cl_colrange,
                          "normalize by observed column ranges instead of the digit span 9");
    bool cl_json = false;
    cmd_cluster->add_flag("--json", cl_json, "machine-readable output");
    std::optional<std::string> cl_out, cl_dendro, cl_linkage, cl_dist, cl_sim;
    cmd_cluster->add_option("--output", cl_out, "write the report here");
    cmd_cluster->add_option("--dendrogram", cl_dendro, "write the dendrogram here");
    std::string cl_dendro_fmt = "newick";
    cmd_cluster->add_option("--dendrogram-format", cl_dendro_fmt, "newick, dot or json");
    cmd_cluster->add_option("--linkage-csv", cl_linkage, "write the merge table here");
    cmd_cluster->add_option("--distance-out", cl_dist, "write the distance matrix here");
    cmd_cluster->add_option("--similarity-out", cl_sim, "write the similarity matrix here");
    bool cl_matrix_json = false;
    cmd_cluster->add_flag("--matrix-json", cl_matrix_json,
                          "write the matrices as JSON instead of CSV");

    // anneal
    auto* cmd_anneal = app.add_subcommand("anneal", "anneal the part families");
    InputArgs an_in;
    an_in.add_to(*cmd_anneal);
    std::optional<int> an_families;
    cmd_anneal->add_option("--families", an_families, "family count (default: ceil(parts/4))");
    ConfigArgs an_cfg;
    an_cfg.add_to(*cmd_anneal);
    int an_sweep = 1;
    cmd_anneal->add_option("--seed-sweep", an_sweep,
                           "run this many consecutive seeds, report the best");
    bool an_colrange = false;
    cmd_anneal->add_flag("--column-ranges", an_colrange,
                         "normalize by observed column ranges instead of the digit span 9");
    bool an_json = false, an_timings = false;
    cmd_anneal->add_flag("--json", an_json, "machine-readable output");
    cmd_anneal->add_flag("--timings", an_timings, "include wall time in JSON output");
    std::optional<std::string> an_out, an_trace;
    cmd_anneal->add_option("--output", an_out, "write the report here");
    cmd_anneal->add_option("--trace-out", an_trace, "write the convergence trace CSV here");

    // tune
    auto* cmd_tune = app.add_subcommand("tune", "L9 parameter study with response/anova tables");
    InputArgs tu_in;
    tu_in.add_to(*cmd_tune);
    std::optional<int> tu_families;
    cmd_tune->add_option("--families", tu_families, "family count (default: ceil(parts/4))");
    ConfigArgs tu_cfg;
    tu_cfg.add_to(*cmd_tune);
    int tu_seeds = 5;
    cmd_tune->add_option("--seeds", tu_seeds, "seeds averaged per design row");
    std::optional<std::string> tu_levels, tu_responses, tu_out;
    cmd_tune->add_option("--levels", tu_levels, "JSON file with 3 levels per factor");
    cmd_tune->add_option("--responses", tu_responses,
                         "analyze these 9 responses instead of running the solver");
    std::string tu_format = "text";
    cmd_tune->add_option("--format", tu_format, "text, csv or json");
    bool tu_json = false;
    cmd_tune->add_flag("--json", tu_json, "shorthand for --format json");
    cmd_tune->add_option("--output", tu_out, "write the report here");

    // oracle
    auto* cmd_oracle = app.add_subcommand("oracle", "exhaustive optimum on small instances");
    InputArgs orc_in;
    orc_in.add_to(*cmd_oracle);
    std::optional<int> orc_families;
    cmd_oracle->add_option("--families", orc_families, "family count (default: ceil(parts/4))");
    std::uint64_t orc_cap = kDefaultEnumerationCap;
    cmd_oracle->add_option("--cap", orc_cap, "refuse enumerations above this count");
    bool orc_json = false;
    cmd_oracle->add_flag("--json", orc_json, "machine-readable output");
    std::optional<std::string> orc_out;
    cmd_oracle->add_option("--output", orc_out, "write the report here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 3;
    }

    try {
        if (*cmd_dataset) return run_dataset(ds_in, ds_format, ds_out);
        if (*cmd_cluster)
            return run_cluster(cl_in, cl_families, cl_colrange, cl_json, cl_out, cl_dendro,
                               cl_dendro_fmt, cl_linkage, cl_dist, cl_sim, cl_matrix_json);
        if (*cmd_anneal)
            return run_anneal(an_in, an_families, an_cfg, an_sweep, an_colrange, an_json,
                              an_timings, an_out, an_trace);
        if (*cmd_tune)
            return run_tune(tu_in, tu_families, tu_cfg, tu_seeds, tu_levels, tu_responses,
                            tu_json ? "json" : tu_format, tu_out);
        if (*cmd_oracle)
            return run_oracle(orc_in, orc_families, orc_cap, orc_json, orc_out);
    } catch (const cap_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    } catch (const config_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const validation_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
