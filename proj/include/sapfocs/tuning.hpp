#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sapfocs/annealing.hpp"
#include "sapfocs/dataset.hpp"

namespace sapfocs {

struct TaguchiFactor {
    std::string name;
    std::array<double, 3> levels;
};

/// Three 3-level factors laid out on the standard L9 orthogonal array.
struct TaguchiDesign {
    std::array<TaguchiFactor, 3> factors;  // t_init, alpha, markov_len
    std::array<std::array<int, 3>, 9> rows;  // level indices, 0-based

    /// Annealer settings of one design row on top of a base configuration.
    AnnealConfig config_for_row(int row, const AnnealConfig& base) const;
};

/// The standard L9(3^3) level pattern: factor 1 blocked in triples, factors
/// 2 and 3 Latin-square arranged. 0-based level indices.
std::array<std::array<int, 3>, 9> l9_array();

/// Default design: t_init in {10,20,30}, alpha in {0.75,0.85,0.95},
/// markov_len in {20,30,40}.
TaguchiDesign default_design();

/// Build a design from explicit levels (3 per factor, markov lengths integral).
TaguchiDesign make_design(const std::array<double, 3>& t_init_levels,
                          const std::array<double, 3>& alpha_levels,
                          const std::array<double, 3>& markov_levels);

/// Evaluates one design cell: (row index, that row's settings, seed) -> response.
using RowRunner = std::function<double(int row, const AnnealConfig& config,
                                       std::uint64_t seed)>;

/// Response of each design row = mean runner value over the seeds.
/// Rows are independent and run concurrently.
std::vector<double> run_design_with(const TaguchiDesign& design, const AnnealConfig& base,
                                    std::span<const std::uint64_t> seeds,
                                    const RowRunner& runner);

/// Run the full pipeline once per design row per seed; the response of a row is
/// the best objective found, averaged over the given seeds.
std::vector<double> run_design(const PartCodeMatrix& matrix, const TaguchiDesign& design,
                               const AnnealConfig& base, std::span<const std::uint64_t> seeds,
                               std::optional<int> n_families = std::nullopt);

struct FactorResponse {
    std::string name;
    std::array<double, 3> level_means;
    double delta = 0.0;   // max level mean - min level mean
    int rank = 0;         // 1 = largest delta; ties keep factor order
    int best_level = 0;   // 1-based argmax of level means (larger is better)
};

struct ResponseTable {
    std::array<FactorResponse, 3> factors;
};

ResponseTable response_table(const TaguchiDesign& design, std::span<const double> responses);

struct AnovaRow {
    std::string name;
    int df = 0;
    double sum_sq = 0.0;
    double mean_sq = 0.0;
    std::optional<double> f_ratio;          // unset for the residual row
    std::optional<double> p_value;          // from the F(2,2) distribution
    std::optional<double> pct_contribution; // sum_sq / total_ss * 100
};

struct AnovaTable {
    std::array<AnovaRow, 3> factors;
    AnovaRow residual;
    double total_ss = 0.0;
    int total_df = 8;
};

/// Fixed-effects decomposition of the nine responses. F ratios test each
/// factor's mean square against the residual; with df (2,2) the upper tail
/// probability has the closed form p = 1 / (1 + F). A non-positive residual
/// leaves f_ratio/p_value unset rather than failing.
AnovaTable anova(const TaguchiDesign& design, std::span<const double> responses);

/// Larger-the-better signal-to-noise ratio: -10*log10(mean of 1/y^2).
double sn_ratio_larger_better(std::span<const double> replicates);

struct TuneReport {
    TaguchiDesign design;
    std::vector<double> responses;
    std::vector<double> sn_ratios;  // per design row
    ResponseTable response;
    AnovaTable variance;
    AnnealConfig recommended;  // best level of every factor on top of the base
};

TuneReport analyze_design(const TaguchiDesign& design, std::span<const double> responses,
                          const AnnealConfig& base);

std::string tune_report_json(const TuneReport& report);
std::string tune_report_text(const TuneReport& report);
std::string tune_report_csv(const TuneReport& report);

} // namespace sapfocs
