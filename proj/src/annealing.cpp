#include "sapfocs/annealing.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <future>
#include <sstream>

#include "sapfocs/errors.hpp"

namespace sapfocs {

namespace {

constexpr double kEqualTol = 1e-12;

// Family member lists kept sorted so scores are a pure function of the
// partition, independent of the move history that produced it.
class ObjectiveState {
public:
    ObjectiveState(const Partition& p, const SymmetricMatrix& sim)
        : sim_(sim), members_(p.n_families), scores_(p.n_families, 0.0) {
        for (int part = 0; part < p.size(); ++part)
            members_[p.assignment[part] - 1].push_back(part);
        for (auto& fam : members_) {
            std::sort(fam.begin(), fam.end());
            if (fam.empty())
                throw validation_error("annealing requires every family to be nonempty");
        }
        for (std::size_t f = 0; f < members_.size(); ++f) scores_[f] = score_of(members_[f]);
    }

    int family_count() const { return static_cast<int>(members_.size()); }
    int family_size(int f) const { return static_cast<int>(members_[f].size()); }

    double total() const {
        double t = 0.0;
        for (double s : scores_) t += s;
        return t;
    }

    /// Objective value after moving `part` from family `from` to family `to`,
    /// without changing the state.
    double peek_move(int part, int from, int to) const {
        std::vector<int> donor = members_[from];
        donor.erase(std::find(donor.begin(), donor.end(), part));
        std::vector<int> recipient = members_[to];
        recipient.insert(std::upper_bound(recipient.begin(), recipient.end(), part), part);
        double t = 0.0;
        for (int f = 0; f < family_count(); ++f) {
            if (f == from)
                t += donor.empty() ? 0.0 : score_of(donor);
            else if (f == to)
                t += score_of(recipient);
            else
                t += scores_[f];
        }
        return t;
    }

    void apply_move(int part, int from, int to) {
        auto& donor = members_[from];
        donor.erase(std::find(donor.begin(), donor.end(), part));
        auto& recipient = members_[to];
        recipient.insert(std::upper_bound(recipient.begin(), recipient.end(), part), part);
        scores_[from] = donor.empty() ? 0.0 : score_of(donor);
        scores_[to] = score_of(recipient);
    }

private:
    double score_of(const std::vector<int>& fam) const { return family_score(fam, sim_); }

    const SymmetricMatrix& sim_;
    std::vector<std::vector<int>> members_;
    std::vector<double> scores_;
};

#ifndef NDEBUG
Partition assignment_of(const std::vector<int>& assign, int n) {
    return Partition{assign, n};
}
#endif

} // namespace

void AnnealConfig::validate() const {
    if (!(t_init > 0.0)) throw config_error("t_init must be positive");
    if (!(t_final > 0.0)) throw config_error("t_final must be positive");
    if (!(t_final < t_init)) throw config_error("t_final must be below t_init");
    if (!(alpha > 0.0 && alpha < 1.0)) throw config_error("alpha must lie in (0,1)");
    if (markov_len < 1) throw config_error("markov_len must be at least 1");
    if (stagnation_limit < 0) throw config_error("stagnation_limit must be >= 0");
}

Partition single_move(const Partition& p, Rng& rng) {
    const int n = p.n_families;
    const int parts = p.size();
    if (n < 2) throw validation_error("single_move needs at least 2 families");
    std::vector<int> fam_size(n + 1, 0);
    for (int f : p.assignment) {
        if (f < 1 || f > n) throw validation_error("family index out of range in partition");
        ++fam_size[f];
    }
    if (*std::max_element(fam_size.begin() + 1, fam_size.end()) < 2)
        throw validation_error("single_move impossible: every family is a singleton");
    while (true) {
        int part = rng.uniform_int(parts);
        int from = p.assignment[part];
        int pick = rng.uniform_int(n - 1) + 1;
        int to = pick < from ? pick : pick + 1;
        if (fam_size[from] == 1) continue;  // would empty the donor; redraw
        Partition out = p;
        out.assignment[part] = to;
        return out;
    }
}

bool accept(double delta, double temperature, double r) {
    if (!(temperature > 0.0)) throw config_error("temperature must be positive");
    return std::exp(delta / temperature) > r;
}

AnnealResult anneal(const Partition& initial, const SymmetricMatrix& sim,
                    const AnnealConfig& config) {
    config.validate();
    if (initial.size() != sim.size())
        throw validation_error("initial partition does not cover the similarity matrix");
    if (sim.kind() != MatrixKind::similarity)
        throw validation_error("anneal expects a similarity matrix");

    const auto t_start = std::chrono::steady_clock::now();
    const int parts = initial.size();
    const int n = initial.n_families;

    ObjectiveState state(initial, sim);
    const double f0 = state.total();

    AnnealResult result;
    result.initial_objective = f0;
    result.best_objective = f0;
    result.best_partition = initial.canonical();
    result.iterations = 0;

    std::vector<int> current = initial.assignment;
    std::vector<int> best = initial.assignment;
    double f_cur = f0;
    double f_best = f0;

    const bool movable = n >= 2 && parts > n;
    if (movable) {
        Rng rng(config.seed);
        std::vector<int> fam_size(n + 1, 0);
        for (int f : current) ++fam_size[f];

        const long long strict_cap = 1000LL * config.markov_len;
        long long stagnant = 0;
        bool stop = false;

        for (double temp = config.t_init; temp >= config.t_final && !stop;
             temp *= config.alpha) {
            int count = 0;
            long long level_proposals = 0;
            while (count < config.markov_len) {
                if (config.strict_pseudocode_counting && level_proposals >= strict_cap) break;
                ++level_proposals;

                // propose: random part to a random other family, redrawing
                // draws that would empty the donor
                int part, from, to;
                while (true) {
                    part = rng.uniform_int(parts);
                    from = current[part];
                    int pick = rng.uniform_int(n - 1) + 1;
                    to = pick < from ? pick : pick + 1;
                    if (fam_size[from] > 1) break;
                }
                const double f_i = state.peek_move(part, from - 1, to - 1);

                bool counted = false;
                bool take = false;
                bool improved = false;
                if (f_i > f_best + kEqualTol) {
                    take = true;
                    counted = true;
                    improved = true;
                    stagnant = 0;
                    f_best = f_i;
                } else if (std::abs(f_i - f_best) <= kEqualTol) {
                    take = true;
                    counted = true;
                    ++stagnant;
                } else {
                    const double r = rng.uniform01();
                    take = accept(f_i - f_cur, temp, r);
                    ++stagnant;
                }
                if (take) {
                    state.apply_move(part, from - 1, to - 1);
                    --fam_size[from];
                    ++fam_size[to];
                    current[part] = to;
                    f_cur = f_i;
#ifndef NDEBUG
                    double full = objective(assignment_of(current, n), sim);
                    assert(std::abs(full - f_cur) <= 1e-12);
#endif
                    if (improved) best = current;
                }
                if (!config.strict_pseudocode_counting || counted) ++count;

                ++result.iterations;
                result.trace.push_back({result.iterations, temp, f_cur, f_best});
                if (config.stagnation_limit > 0 && stagnant >= config.stagnation_limit) {
                    stop = true;
                    break;
                }
            }
        }
    }

    result.best_objective = f_best;
    result.best_partition = Partition{best, n}.canonical();
    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return result;
}

std::string trace_csv(const AnnealResult& result) {
    std::ostringstream out;
    out << "iteration,temperature,f_current,f_best\n";
    char buf[128];
    for (const auto& t : result.trace) {
        std::snprintf(buf, sizeof buf, "%lld,%.9g,%.12g,%.12g",
                      static_cast<long long>(t.iteration), t.temperature, t.f_current,
                      t.f_best);
        out << buf << '\n';
    }
    return out.str();
}

PipelineResult run_pipeline(const PartCodeMatrix& matrix, std::optional<int> n_families,
                            const AnnealConfig& config) {
    config.validate();
    SymmetricMatrix sim = similarity_matrix(matrix);
    SymmetricMatrix dist = distance_matrix(sim);
    LinkageTree tree = complete_linkage(dist);
    const int n = n_families.value_or(default_family_count(matrix.rows()));
    PipelineResult out{cut_tree(tree, n), 0.0, {}};
    out.clinkage_objective = objective(out.clinkage, sim);
    out.annealed = anneal(out.clinkage, sim, config);
    return out;
}

AnnealResult anneal_seed_sweep(const Partition& initial, const SymmetricMatrix& sim,
                               const AnnealConfig& config, int count,
                               std::vector<double>* per_seed_best) {
    if (count < 1) throw config_error("seed sweep needs at least one run");
    std::vector<std::future<AnnealResult>> futures;
    futures.reserve(count);
    for (int k = 0; k < count; ++k) {
        AnnealConfig c = config;
        c.seed = config.seed + static_cast<std::uint64_t>(k);
        futures.push_back(std::async(std::launch::async, [=, &initial, &sim] {
            return anneal(initial, sim, c);
        }));
    }
    std::optional<AnnealResult> best;
    if (per_seed_best) per_seed_best->clear();
    for (auto& f : futures) {
        AnnealResult r = f.get();
        if (per_seed_best) per_seed_best->push_back(r.best_objective);
        if (!best || r.best_objective > best->best_objective) best = std::move(r);
    }
    return std::move(*best);
}

} // namespace sapfocs
