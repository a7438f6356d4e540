#pragma once

#include <optional>
#include <string>

#include "sapfocs/annealing.hpp"

namespace sapfocs {

/// Normalized quality of a partition: mean family score x 100, in [0, 100]
/// up to the small slack the score denominators introduce.
double perfection_percentage(double objective_value, int n_families);

/// Side-by-side outcome of the two pipeline stages on one dataset.
struct RunReport {
    std::string dataset;  // builtin name or input path
    int parts = 0;
    int n_families = 0;
    Partition clinkage;
    double clinkage_objective = 0.0;
    double clinkage_perfection = 0.0;
    Partition sapfocs;
    double sapfocs_objective = 0.0;
    double sapfocs_perfection = 0.0;
    double initial_objective = 0.0;
    std::int64_t iterations = 0;
    double wall_seconds = 0.0;
    AnnealConfig config;
    int seed_sweep = 1;
};

RunReport make_run_report(const std::string& dataset_name, const PipelineResult& result,
                          const AnnealConfig& config, int seed_sweep);

/// Stable machine schema (schema_version 1). Wall-clock time is omitted unless
/// include_timings is set, so fixed-seed stdout stays byte-identical.
std::string run_report_json(const RunReport& report, bool include_timings = false);

std::string run_report_text(const RunReport& report);

/// One family per line, "family k: {p1, p2, ...}".
std::string families_text(const Partition& partition);

} // namespace sapfocs
