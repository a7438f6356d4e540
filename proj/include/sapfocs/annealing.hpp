#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sapfocs/clustering.hpp"
#include "sapfocs/rng.hpp"
#include "sapfocs/similarity.hpp"

namespace sapfocs {

struct AnnealConfig {
    double t_init = 30.0;
    double t_final = 0.002;
    double alpha = 0.85;
    int markov_len = 40;
    std::uint64_t seed = 1;
    /// Stop after this many consecutive proposals without a new best
    /// (0 disables the check).
    int stagnation_limit = 0;
    /// Count only improving/equal moves toward the per-level budget instead of
    /// every proposal. Study mode; levels are additionally capped at
    /// 1000 * markov_len proposals since nothing else bounds them.
    bool strict_pseudocode_counting = false;

    /// Throws config_error on violated bounds.
    void validate() const;
};

struct TraceRecord {
    std::int64_t iteration;
    double temperature;
    double f_current;
    double f_best;
};

struct AnnealResult {
    Partition best_partition;
    double best_objective = 0.0;
    double initial_objective = 0.0;
    std::int64_t iterations = 0;  // total proposals evaluated
    std::vector<TraceRecord> trace;
    double wall_seconds = 0.0;
};

/// Reassign one uniformly chosen part to a uniformly chosen different family.
/// Draws that would empty the donor family are redrawn, so the family count
/// never changes. Requires N >= 2 and at least one family of size > 1.
Partition single_move(const Partition& p, Rng& rng);

/// Metropolis criterion: accept iff exp(delta / temperature) > r.
bool accept(double delta, double temperature, double r);

/// Simulated-annealing refinement of a partition under geometric cooling.
/// Temperature starts at t_init and is multiplied by alpha after each level of
/// markov_len proposals, until it drops below t_final. Proposals that beat the
/// best-so-far are always taken; equal ones (within 1e-12) replace the current
/// solution; worse ones pass through accept(). Identical inputs (including the
/// seed) produce identical results and traces.
AnnealResult anneal(const Partition& initial, const SymmetricMatrix& sim,
                    const AnnealConfig& config);

/// CSV of (iteration, temperature, f_current, f_best).
std::string trace_csv(const AnnealResult& result);

struct PipelineResult {
    Partition clinkage;
    double clinkage_objective = 0.0;
    AnnealResult annealed;
};

/// similarity -> distance -> complete linkage -> cut -> anneal.
/// n_families defaults to default_family_count(p).
PipelineResult run_pipeline(const PartCodeMatrix& matrix, std::optional<int> n_families,
                            const AnnealConfig& config);

/// Best result over seeds config.seed, config.seed+1, ..., config.seed+count-1,
/// annealing each from the same initial partition. Ties go to the lowest seed.
/// Runs are independent and execute concurrently.
AnnealResult anneal_seed_sweep(const Partition& initial, const SymmetricMatrix& sim,
                               const AnnealConfig& config, int count,
                               std::vector<double>* per_seed_best = nullptr);

} // namespace sapfocs
