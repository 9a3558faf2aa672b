// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dmimo/channel.hpp"
#include "dmimo/combining.hpp"

namespace dmimo {

struct ApSplit {
    int q = 1;
    int s = 16;
};

enum class CsiMode { kModeledError, kPerfect };

/// Sweep configuration. Every split must satisfy q*s == total_antennas.
/// ChannelParams carries the physics; its Rician fields are overwritten per
/// kappa grid point (+infinity selects the pure-LoS flag).
struct SimulationConfig {
    int total_antennas = 16;
    std::vector<ApSplit> splits = {{1, 16}, {2, 8}, {4, 4}, {8, 2}, {16, 1}};
    int devices = 16;
    double side_length_m = 100.0;
    double h_ap = 12.0;
    double h_ue = 1.5;
    std::vector<double> kappa_db_grid = {-20, -15, -10, -5, 0, 5, 10, 15, 20, 25, 30};
    std::vector<CombinerKind> combiners = {CombinerKind::kMrc, CombinerKind::kZf,
                                           CombinerKind::kMmse};
    int n_net = 200;
    int n_ch = 100;
    std::uint64_t seed = 1;
    CsiMode csi_mode = CsiMode::kModeledError;
    ChannelParams params;
    int workers = 0;
    // Shifts the channel-draw substream indices; lets tests check that two
    // half-runs over disjoint index ranges average to the full run. Not a
    // recipe key.
    long channel_draw_offset = 0;

    void validate() const;  // throws config_error
};

/// Stream bookkeeping of one sweep point: word counters per purpose plus a
/// digest over the realizations' Frobenius norms. Combiners sharing a point
/// must agree on all of it - that is the common-random-numbers discipline.
struct SeedProvenance {
    std::uint64_t master_seed = 0;
    std::uint64_t placement_words = 0;
    std::uint64_t channel_words = 0;
    std::uint64_t csi_words = 0;
    std::uint64_t realization_digest = 0;
};

struct SweepResult {
    double kappa_db = 0.0;
    int q = 0;
    int s = 0;
    CombinerKind combiner = CombinerKind::kMrc;
    double mean_se = 0.0;          // geometry-weighted mean of Eq.-style per-user averages
    double se_std_error = 0.0;     // from per-geometry means; NaN when undefined
    double per_user_se_mean = 0.0; // sample-weighted grand mean over (draw, user)
    long n_effective = 0;
    long n_skipped_singular = 0;
    SeedProvenance seed_provenance;
};

/// One (kappa, split, combiner) point: n_net geometries, n_ch channel draws
/// each; the per-draw user SEs are averaged over draws (the expectation),
/// then over users, then over geometries. Singular-ZF realizations are
/// counted and skipped for ZF only.
SweepResult run_point(const SimulationConfig& config, double kappa_db, ApSplit split,
                      CombinerKind combiner);

/// Same point evaluated for several combiners on shared realizations;
/// bitwise identical to separate run_point calls because the substreams are
/// keyed by (seed, purpose, geometry, draw) alone.
std::vector<SweepResult> run_point_set(const SimulationConfig& config, double kappa_db,
                                       ApSplit split, std::span<const CombinerKind> kinds);

/// Cartesian product kappa grid x splits x combiners with common random
/// numbers across splits and combiners at each kappa.
std::vector<SweepResult> run_sweep(const SimulationConfig& config);

/// 1.96 * sample std / sqrt(n); nullopt marks undefined dispersion (n < 2).
std::optional<double> confidence_halfwidth(std::span<const double> per_geometry_means);

}  // namespace dmimo
