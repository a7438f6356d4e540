#include "sapfocs/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sapfocs/errors.hpp"

namespace sapfocs {

std::array<std::array<int, 3>, 9> l9_array() {
    return {{{0, 0, 0},
             {0, 1, 1},
             {0, 2, 2},
             {1, 0, 1},
             {1, 1, 2},
             {1, 2, 0},
             {2, 0, 2},
             {2, 1, 0},
             {2, 2, 1}}};
}

AnnealConfig TaguchiDesign::config_for_row(int row, const AnnealConfig& base) const {
    if (row < 0 || row >= 9) throw config_error("design row index outside [0..8]");
    AnnealConfig c = base;
    c.t_init = factors[0].levels[rows[row][0]];
    c.alpha = factors[1].levels[rows[row][1]];
    c.markov_len = static_cast<int>(factors[2].levels[rows[row][2]]);
    return c;
}

TaguchiDesign make_design(const std::array<double, 3>& t_init_levels,
                          const std::array<double, 3>& alpha_levels,
                          const std::array<double, 3>& markov_levels) {
    for (double m : markov_levels)
        if (m < 1.0 || m != std::floor(m))
            throw config_error("markov_len levels must be positive integers");
    for (double a : alpha_levels)
        if (!(a > 0.0 && a < 1.0)) throw config_error("alpha levels must lie in (0,1)");
    for (double t : t_init_levels)
        if (!(t > 0.0)) throw config_error("t_init levels must be positive");
    TaguchiDesign d;
    d.factors = {TaguchiFactor{"t_init", t_init_levels}, TaguchiFactor{"alpha", alpha_levels},
                 TaguchiFactor{"markov_len", markov_levels}};
    d.rows = l9_array();
    return d;
}

TaguchiDesign default_design() {
    return make_design({10.0, 20.0, 30.0}, {0.75, 0.85, 0.95}, {20.0, 30.0, 40.0});
}

std::vector<double> run_design_with(const TaguchiDesign& design, const AnnealConfig& base,
                                    std::span<const std::uint64_t> seeds,
                                    const RowRunner& runner) {
    if (seeds.empty()) throw config_error("run_design needs at least one seed");
    std::vector<std::future<double>> futures;
    futures.reserve(9);
    for (int row = 0; row < 9; ++row) {
        AnnealConfig cfg = design.config_for_row(row, base);
        futures.push_back(std::async(std::launch::async, [row, cfg, seeds, &runner] {
            double sum = 0.0;
            for (std::uint64_t s : seeds) sum += runner(row, cfg, s);
            return sum / static_cast<double>(seeds.size());
        }));
    }
    std::vector<double> responses;
    responses.reserve(9);
    for (auto& f : futures) responses.push_back(f.get());
    return responses;
}

std::vector<double> run_design(const PartCodeMatrix& matrix, const TaguchiDesign& design,
                               const AnnealConfig& base, std::span<const std::uint64_t> seeds,
                               std::optional<int> n_families) {
    return run_design_with(design, base, seeds,
                           [&matrix, n_families](int, const AnnealConfig& cfg,
                                                 std::uint64_t seed) {
                               AnnealConfig c = cfg;
                               c.seed = seed;
                               return run_pipeline(matrix, n_families, c)
                                   .annealed.best_objective;
                           });
}

namespace {

void check_responses(std::span<const double> responses) {
    if (responses.size() != 9)
        throw validation_error("expected 9 responses, got " +
                               std::to_string(responses.size()));
}

std::array<std::array<double, 3>, 3> level_means_of(const TaguchiDesign& design,
                                                    std::span<const double> responses) {
    std::array<std::array<double, 3>, 3> means{};
    for (int f = 0; f < 3; ++f) {
        for (int lv = 0; lv < 3; ++lv) {
            double sum = 0.0;
            int cnt = 0;
            for (int row = 0; row < 9; ++row) {
                if (design.rows[row][f] == lv) {
                    sum += responses[row];
                    ++cnt;
                }
            }
            means[f][lv] = sum / cnt;  // cnt == 3 by the L9 structure
        }
    }
    return means;
}

} // namespace

ResponseTable response_table(const TaguchiDesign& design, std::span<const double> responses) {
    check_responses(responses);
    auto means = level_means_of(design, responses);
    ResponseTable table;
    for (int f = 0; f < 3; ++f) {
        auto& fr = table.factors[f];
        fr.name = design.factors[f].name;
        fr.level_means = means[f];
        auto [lo, hi] = std::minmax_element(means[f].begin(), means[f].end());
        fr.delta = *hi - *lo;
        fr.best_level = static_cast<int>(std::max_element(means[f].begin(), means[f].end()) -
                                         means[f].begin()) + 1;
    }
    // rank 1 = largest delta; equal deltas keep factor order
    for (int f = 0; f < 3; ++f) {
        int rank = 1;
        for (int g = 0; g < 3; ++g) {
            if (g == f) continue;
            if (table.factors[g].delta > table.factors[f].delta ||
                (table.factors[g].delta == table.factors[f].delta && g < f))
                ++rank;
        }
        table.factors[f].rank = rank;
    }
    return table;
}

AnovaTable anova(const TaguchiDesign& design, std::span<const double> responses) {
    check_responses(responses);
    double grand = 0.0;
    for (double r : responses) grand += r;
    grand /= 9.0;

    AnovaTable t;
    t.total_ss = 0.0;
    for (double r : responses) t.total_ss += (r - grand) * (r - grand);
    t.total_df = 8;

    auto means = level_means_of(design, responses);
    double factor_ss_sum = 0.0;
    for (int f = 0; f < 3; ++f) {
        double ss = 0.0;
        for (int lv = 0; lv < 3; ++lv) ss += (means[f][lv] - grand) * (means[f][lv] - grand);
        ss *= 3.0;
        factor_ss_sum += ss;
        t.factors[f] = AnovaRow{design.factors[f].name, 2, ss, ss / 2.0, std::nullopt,
                                std::nullopt, std::nullopt};
    }
    double resid_ss = t.total_ss - factor_ss_sum;
    t.residual = AnovaRow{"residual", 2, resid_ss, resid_ss / 2.0, std::nullopt, std::nullopt,
                          std::nullopt};

    for (int f = 0; f < 3; ++f) {
        if (t.residual.mean_sq > 0.0) {
            double fr = t.factors[f].mean_sq / t.residual.mean_sq;
            t.factors[f].f_ratio = fr;
            t.factors[f].p_value = 1.0 / (1.0 + fr);  // exact for df (2,2)
        }
        if (t.total_ss > 0.0)
            t.factors[f].pct_contribution = t.factors[f].sum_sq / t.total_ss * 100.0;
    }
    if (t.total_ss > 0.0) t.residual.pct_contribution = resid_ss / t.total_ss * 100.0;
    return t;
}

double sn_ratio_larger_better(std::span<const double> replicates) {
    if (replicates.empty()) throw validation_error("sn ratio needs at least one replicate");
    double sum = 0.0;
    for (double y : replicates) {
        if (!(y > 0.0))
            throw validation_error("larger-the-better sn ratio needs positive replicates");
        sum += 1.0 / (y * y);
    }
    return -10.0 * std::log10(sum / static_cast<double>(replicates.size()));
}

TuneReport analyze_design(const TaguchiDesign& design, std::span<const double> responses,
                          const AnnealConfig& base) {
    check_responses(responses);
    TuneReport rep;
    rep.design = design;
    rep.responses.assign(responses.begin(), responses.end());
    for (double r : responses) rep.sn_ratios.push_back(sn_ratio_larger_better({&r, 1}));
    rep.response = response_table(design, responses);
    rep.variance = anova(design, responses);
    rep.recommended = base;
    rep.recommended.t_init = design.factors[0].levels[rep.response.factors[0].best_level - 1];
    rep.recommended.alpha = design.factors[1].levels[rep.response.factors[1].best_level - 1];
    rep.recommended.markov_len =
        static_cast<int>(design.factors[2].levels[rep.response.factors[2].best_level - 1]);
    return rep;
}

namespace {

nlohmann::json anova_row_json(const AnovaRow& r) {
    nlohmann::json j{{"name", r.name}, {"df", r.df}, {"sum_sq", r.sum_sq},
                     {"mean_sq", r.mean_sq}};
    j["f_ratio"] = r.f_ratio ? nlohmann::json(*r.f_ratio) : nlohmann::json(nullptr);
    j["p_value"] = r.p_value ? nlohmann::json(*r.p_value) : nlohmann::json(nullptr);
    j["pct_contribution"] =
        r.pct_contribution ? nlohmann::json(*r.pct_contribution) : nlohmann::json(nullptr);
    return j;
}

} // namespace

std::string tune_report_json(const TuneReport& rep) {
    nlohmann::json j;
    j["schema_version"] = 1;
    auto& design = j["design"] = nlohmann::json::array();
    for (int row = 0; row < 9; ++row) {
        design.push_back({{"row", row + 1},
                          {"t_init", rep.design.factors[0].levels[rep.design.rows[row][0]]},
                          {"alpha", rep.design.factors[1].levels[rep.design.rows[row][1]]},
                          {"markov_len", rep.design.factors[2].levels[rep.design.rows[row][2]]},
                          {"response", row < static_cast<int>(rep.responses.size())
                                           ? nlohmann::json(rep.responses[row])
                                           : nlohmann::json(nullptr)},
                          {"sn_ratio", row < static_cast<int>(rep.sn_ratios.size())
                                           ? nlohmann::json(rep.sn_ratios[row])
                                           : nlohmann::json(nullptr)}});
    }
    auto& resp = j["response_table"] = nlohmann::json::array();
    for (const auto& f : rep.response.factors)
        resp.push_back({{"factor", f.name},
                        {"level_means", f.level_means},
                        {"delta", f.delta},
                        {"rank", f.rank},
                        {"best_level", f.best_level}});
    auto& av = j["anova"] = nlohmann::json::array();
    for (const auto& f : rep.variance.factors) av.push_back(anova_row_json(f));
    av.push_back(anova_row_json(rep.variance.residual));
    j["anova_total"] = {{"df", rep.variance.total_df}, {"sum_sq", rep.variance.total_ss}};
    j["recommended"] = {{"t_init", rep.recommended.t_init},
                        {"alpha", rep.recommended.alpha},
                        {"markov_len", rep.recommended.markov_len},
                        {"t_final", rep.recommended.t_final}};
    return j.dump(2) + "\n";
}

std::string tune_report_text(const TuneReport& rep) {
    std::ostringstream out;
    char buf[160];
    out << "L9 design and responses\n";
    out << "  row   t_init  alpha  markov   response      s/n\n";
    for (int row = 0; row < 9; ++row) {
        std::snprintf(buf, sizeof buf, "  %3d   %6g  %5g  %6g   %9.5f  %7.3f\n", row + 1,
                      rep.design.factors[0].levels[rep.design.rows[row][0]],
                      rep.design.factors[1].levels[rep.design.rows[row][1]],
                      rep.design.factors[2].levels[rep.design.rows[row][2]],
                      rep.responses[row], rep.sn_ratios[row]);
        out << buf;
    }
    out << "\nresponse table (level means; larger is better)\n";
    out << "  factor       level1    level2    level3    delta  rank  best\n";
    for (const auto& f : rep.response.factors) {
        std::snprintf(buf, sizeof buf, "  %-10s %8.4f  %8.4f  %8.4f  %7.4f  %4d  %4d\n",
                      f.name.c_str(), f.level_means[0], f.level_means[1], f.level_means[2],
                      f.delta, f.rank, f.best_level);
        out << buf;
    }
    out << "\nanova (raw responses)\n";
    out << "  source      df   sum_sq     mean_sq    F      p      %contrib\n";
    auto row_line = [&](const AnovaRow& r) {
        std::string fs = r.f_ratio ? [&] {
            std::snprintf(buf, sizeof buf, "%5.2f", *r.f_ratio);
            return std::string(buf);
        }() : std::string("    -");
        std::string ps = r.p_value ? [&] {
            std::snprintf(buf, sizeof buf, "%5.3f", *r.p_value);
            return std::string(buf);
        }() : std::string("    -");
        std::string cs = r.pct_contribution ? [&] {
            std::snprintf(buf, sizeof buf, "%6.2f", *r.pct_contribution);
            return std::string(buf);
        }() : std::string("     -");
        std::snprintf(buf, sizeof buf, "  %-10s  %2d   %.6f  %.6f  %s  %s  %s\n",
                      r.name.c_str(), r.df, r.sum_sq, r.mean_sq, fs.c_str(), ps.c_str(),
                      cs.c_str());
        out << buf;
    };
    for (const auto& f : rep.variance.factors) row_line(f);
    row_line(rep.variance.residual);
    std::snprintf(buf, sizeof buf, "  %-10s  %2d   %.6f\n", "total", rep.variance.total_df,
                  rep.variance.total_ss);
    out << buf;
    std::snprintf(buf, sizeof buf,
                  "\nrecommended: t_init=%g alpha=%g markov_len=%d (t_final=%g)\n",
                  rep.recommended.t_init, rep.recommended.alpha, rep.recommended.markov_len,
                  rep.recommended.t_final);
    out << buf;
    return out.str();
}

std::string tune_report_csv(const TuneReport& rep) {
    std::ostringstream out;
    out << "section,row,t_init,alpha,markov_len,response,sn_ratio\n";
    char buf[160];
    for (int row = 0; row < 9; ++row) {
        std::snprintf(buf, sizeof buf, "design,%d,%g,%g,%g,%.9g,%.9g\n", row + 1,
                      rep.design.factors[0].levels[rep.design.rows[row][0]],
                      rep.design.factors[1].levels[rep.design.rows[row][1]],
                      rep.design.factors[2].levels[rep.design.rows[row][2]],
                      rep.responses[row], rep.sn_ratios[row]);
        out << buf;
    }
    out << "section,factor,level1_mean,level2_mean,level3_mean,delta,rank,best_level\n";
    for (const auto& f : rep.response.factors) {
        std::snprintf(buf, sizeof buf, "response,%s,%.9g,%.9g,%.9g,%.9g,%d,%d\n",
                      f.name.c_str(), f.level_means[0], f.level_means[1], f.level_means[2],
                      f.delta, f.rank, f.best_level);
        out << buf;
    }
    out << "section,source,df,sum_sq,mean_sq,f_ratio,p_value,pct_contribution\n";
    auto row_line = [&](const AnovaRow& r) {
        out << "anova," << r.name << ',' << r.df << ',';
        std::snprintf(buf, sizeof buf, "%.9g,%.9g", r.sum_sq, r.mean_sq);
        out << buf;
        if (r.f_ratio) {
            std::snprintf(buf, sizeof buf, ",%.9g", *r.f_ratio);
            out << buf;
        } else
            out << ',';
        if (r.p_value) {
            std::snprintf(buf, sizeof buf, ",%.9g", *r.p_value);
            out << buf;
        } else
            out << ',';
        if (r.pct_contribution) {
            std::snprintf(buf, sizeof buf, ",%.9g", *r.pct_contribution);
            out << buf;
        } else
            out << ',';
        out << '\n';
    };
    for (const auto& f : rep.variance.factors) row_line(f);
    row_line(rep.variance.residual);
    std::snprintf(buf, sizeof buf, "anova,total,%d,%.9g,,,,\n", rep.variance.total_df,
                  rep.variance.total_ss);
    out << buf;
    return out.str();
}

} // namespace sapfocs
