#include "sapfocs/report.hpp"

#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sapfocs/errors.hpp"

namespace sapfocs {

double perfection_percentage(double objective_value, int n_families) {
    if (n_families < 1) throw validation_error("family count must be positive");
    return objective_value / n_families * 100.0;
}

RunReport make_run_report(const std::string& dataset_name, const PipelineResult& result,
                          const AnnealConfig& config, int seed_sweep) {
    RunReport r;
    r.dataset = dataset_name;
    r.parts = result.clinkage.size();
    r.n_families = result.clinkage.n_families;
    r.clinkage = result.clinkage;
    r.clinkage_objective = result.clinkage_objective;
    r.clinkage_perfection = perfection_percentage(r.clinkage_objective, r.n_families);
    r.sapfocs = result.annealed.best_partition;
    r.sapfocs_objective = result.annealed.best_objective;
    r.sapfocs_perfection = perfection_percentage(r.sapfocs_objective, r.n_families);
    r.initial_objective = result.annealed.initial_objective;
    r.iterations = result.annealed.iterations;
    r.wall_seconds = result.annealed.wall_seconds;
    r.config = config;
    r.seed_sweep = seed_sweep;
    return r;
}

namespace {

nlohmann::json families_json(const Partition& p) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& fam : p.families()) {
        nlohmann::json members = nlohmann::json::array();
        for (int part : fam) members.push_back(part + 1);
        out.push_back(std::move(members));
    }
    return out;
}

} // namespace

std::string run_report_json(const RunReport& r, bool include_timings) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["dataset"] = r.dataset;
    j["parts"] = r.parts;
    j["n_families"] = r.n_families;
    j["clinkage"] = {{"families", families_json(r.clinkage)},
                     {"objective", r.clinkage_objective},
                     {"perfection_pct", r.clinkage_perfection}};
    j["sapfocs"] = {{"families", families_json(r.sapfocs)},
                    {"objective", r.sapfocs_objective},
                    {"perfection_pct", r.sapfocs_perfection},
                    {"initial_objective", r.initial_objective},
                    {"iterations", r.iterations}};
    j["config"] = {{"t_init", r.config.t_init},
                   {"t_final", r.config.t_final},
                   {"alpha", r.config.alpha},
                   {"markov_len", r.config.markov_len},
                   {"seed", r.config.seed},
                   {"seed_sweep", r.seed_sweep}};
    if (include_timings) j["sapfocs"]["wall_seconds"] = r.wall_seconds;
    return j.dump(2) + "\n";
}

std::string families_text(const Partition& partition) {
    std::ostringstream out;
    auto fams = partition.families();
    for (std::size_t f = 0; f < fams.size(); ++f) {
        out << "  family " << (f + 1) << ": {";
        for (std::size_t i = 0; i < fams[f].size(); ++i) {
            if (i) out << ", ";
            out << (fams[f][i] + 1);
        }
        out << "}\n";
    }
    return out.str();
}

std::string run_report_text(const RunReport& r) {
    std::ostringstream out;
    char buf[256];
    out << "dataset " << r.dataset << ": " << r.parts << " parts, " << r.n_families
        << " families\n\n";
    std::snprintf(buf, sizeof buf, "c-linkage   objective %.6f   perfection %6.2f%%\n",
                  r.clinkage_objective, r.clinkage_perfection);
    out << buf << families_text(r.clinkage) << '\n';
    std::snprintf(buf, sizeof buf,
                  "sapfocs     objective %.6f   perfection %6.2f%%   (%d seed%s)\n",
                  r.sapfocs_objective, r.sapfocs_perfection, r.seed_sweep,
                  r.seed_sweep == 1 ? "" : "s");
    out << buf << families_text(r.sapfocs);
    std::snprintf(buf, sizeof buf, "\nimprovement over c-linkage: %+.6f (%+.2f%%)\n",
                  r.sapfocs_objective - r.clinkage_objective,
                  r.clinkage_objective != 0.0
                      ? (r.sapfocs_objective / r.clinkage_objective - 1.0) * 100.0
                      : 0.0);
    out << buf;
    return out.str();
}

} // namespace sapfocs
