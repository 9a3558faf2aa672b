// SPDX-License-Identifier: Apache-2.0

#include "dmimo/montecarlo.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "dmimo/errors.hpp"
#include "dmimo/kernels.hpp"
#include "dmimo/parallel.hpp"

namespace dmimo {

namespace {

constexpr std::uint64_t kFnvOffset = 0xCBF29CE484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001B3ULL;

std::uint64_t fnv_accumulate(std::uint64_t hash, std::uint64_t word) {
    for (int b = 0; b < 8; ++b) {
        hash = (hash ^ ((word >> (8 * b)) & 0xFF)) * kFnvPrime;
    }
    return hash;
}

ChannelParams params_for_kappa(const SimulationConfig& config, double kappa_db) {
    ChannelParams p = config.params;
    p.set_rician_db(kappa_db);
    return p;
}

struct CombinerAccum {
    std::vector<double> user_se_sum;
    long used = 0;
    long skipped = 0;
    double grand_se_sum = 0.0;
};

struct GeoOutcome {
    std::vector<CombinerAccum> per_kind;
    std::uint64_t placement_words = 0;
    std::uint64_t channel_words = 0;
    std::uint64_t csi_words = 0;
    std::uint64_t digest = kFnvOffset;
};

}  // namespace

void SimulationConfig::validate() const {
    if (total_antennas < 1) throw config_error("total antenna count must be positive");
    if (devices < 1) throw config_error("device count must be positive");
    if (n_net < 1 || n_ch < 1) throw config_error("realization counts must be at least 1");
    if (kappa_db_grid.empty()) throw config_error("kappa grid must not be empty");
    if (splits.empty()) throw config_error("split list must not be empty");
    for (const ApSplit& sp : splits) {
        if (sp.q < 1 || sp.s < 1 || sp.q * sp.s != total_antennas) {
            throw config_error("split (q=" + std::to_string(sp.q) + ", s=" + std::to_string(sp.s) +
                               ") violates q*s = m = " + std::to_string(total_antennas));
        }
    }
}

std::vector<SweepResult> run_point_set(const SimulationConfig& config, double kappa_db,
                                       ApSplit split, std::span<const CombinerKind> kinds) {
    config.validate();
    if (split.q * split.s != config.total_antennas) {
        throw config_error("split (q=" + std::to_string(split.q) + ", s=" + std::to_string(split.s) +
                           ") violates q*s = m = " + std::to_string(config.total_antennas));
    }
    if (kinds.empty()) {
        return {};
    }
    const ChannelParams params = params_for_kappa(config, kappa_db);
    const int n_kinds = static_cast<int>(kinds.size());
    const int k_devices = config.devices;
    const bool perfect = config.csi_mode == CsiMode::kPerfect;

    std::vector<GeoOutcome> slots(static_cast<std::size_t>(config.n_net));
    parallel_for(config.n_net, config.workers, [&](long g) {
        GeoOutcome& slot = slots[static_cast<std::size_t>(g)];
        slot.per_kind.resize(n_kinds);
        for (auto& acc : slot.per_kind) acc.user_se_sum.assign(k_devices, 0.0);

        Stream place(config.seed, StreamPurpose::kPlacement, static_cast<std::uint64_t>(g));
        const NetworkGeometry geometry =
            make_geometry(split.q, split.s, k_devices, config.side_length_m, config.h_ap,
                          config.h_ue, place);
        const LinkTable links = link_table(geometry, params);
        slot.placement_words = place.draws();

        for (int c = 0; c < config.n_ch; ++c) {
            const auto draw_index = static_cast<std::uint64_t>(config.channel_draw_offset + c);
            Stream chan(config.seed, StreamPurpose::kChannel, static_cast<std::uint64_t>(g),
                        draw_index);
            const CMatrix h = draw_true_channel(links, params, chan);
            slot.channel_words += chan.draws();

            CMatrix estimated;
            if (perfect) {
                estimated = h;
            } else {
                Stream csi(config.seed, StreamPurpose::kCsiError, static_cast<std::uint64_t>(g),
                           draw_index);
                estimated = corrupt_csi(h, params, k_devices, csi);
                slot.csi_words += csi.draws();
            }

            const auto& kt = kernels::active();
            slot.digest = fnv_accumulate(
                slot.digest, std::bit_cast<std::uint64_t>(kt.sum_abs2(h.size(), h.data())));
            slot.digest = fnv_accumulate(
                slot.digest,
                std::bit_cast<std::uint64_t>(kt.sum_abs2(estimated.size(), estimated.data())));

            for (int ki = 0; ki < n_kinds; ++ki) {
                CombinerAccum& acc = slot.per_kind[ki];
                CMatrix v;
                try {
                    v = combiner_matrix(estimated, kinds[ki], params.tx_power_w,
                                        params.noise_power_w());
                } catch (const singular_matrix_error&) {
                    ++acc.skipped;
                    continue;
                }
                const std::vector<double> sinr =
                    sinr_per_user(h, v, params.tx_power_w, params.noise_power_w());
                const std::vector<double> se = se_from_sinr(sinr);
                for (int u = 0; u < k_devices; ++u) {
                    acc.user_se_sum[u] += se[u];
                    acc.grand_se_sum += se[u];
                }
                ++acc.used;
            }
        }
    });

    std::vector<SweepResult> results;
    results.reserve(n_kinds);
    for (int ki = 0; ki < n_kinds; ++ki) {
        SweepResult r;
        r.kappa_db = kappa_db;
        r.q = split.q;
        r.s = split.s;
        r.combiner = kinds[ki];
        r.seed_provenance.master_seed = config.seed;

        std::uint64_t digest = kFnvOffset;
        std::vector<double> geo_means;
        geo_means.reserve(slots.size());
        double grand_sum = 0.0;
        long total_used = 0;

        for (const GeoOutcome& slot : slots) {
            r.seed_provenance.placement_words += slot.placement_words;
            r.seed_provenance.channel_words += slot.channel_words;
            r.seed_provenance.csi_words += slot.csi_words;
            digest = fnv_accumulate(digest, slot.digest);

            const CombinerAccum& acc = slot.per_kind[ki];
            r.n_effective += acc.used;
            r.n_skipped_singular += acc.skipped;
            grand_sum += acc.grand_se_sum;
            total_used += acc.used;
            if (acc.used > 0) {
                double user_mean = 0.0;
                for (double s : acc.user_se_sum) user_mean += s / acc.used;
                geo_means.push_back(user_mean / k_devices);
            }
        }
        r.seed_provenance.realization_digest = digest;

        if (geo_means.empty()) {
            throw numerical_error("every realization of the point (kappa=" +
                                  std::to_string(kappa_db) + " dB, q=" + std::to_string(split.q) +
                                  ", " + std::string(combiner_name(kinds[ki])) +
                                  ") was singular");
        }
        const auto n_geo = static_cast<double>(geo_means.size());
        double mean = 0.0;
        for (double v : geo_means) mean += v;
        mean /= n_geo;
        r.mean_se = mean;
        if (geo_means.size() > 1) {
            double ss = 0.0;
            for (double v : geo_means) ss += (v - mean) * (v - mean);
            r.se_std_error = std::sqrt(ss / (n_geo - 1.0)) / std::sqrt(n_geo);
        } else {
            r.se_std_error = std::numeric_limits<double>::quiet_NaN();
        }
        r.per_user_se_mean = grand_sum / (static_cast<double>(total_used) * k_devices);
        results.push_back(std::move(r));
    }
    return results;
}

SweepResult run_point(const SimulationConfig& config, double kappa_db, ApSplit split,
                      CombinerKind combiner) {
    const std::array<CombinerKind, 1> one{combiner};
    return run_point_set(config, kappa_db, split, one)[0];
}

std::vector<SweepResult> run_sweep(const SimulationConfig& config) {
    config.validate();
    std::vector<SweepResult> all;
    all.reserve(config.kappa_db_grid.size() * config.splits.size() * config.combiners.size());
    for (double kappa_db : config.kappa_db_grid) {
        for (const ApSplit& split : config.splits) {
            std::vector<SweepResult> point = run_point_set(config, kappa_db, split,
                                                           config.combiners);
            for (auto& r : point) all.push_back(std::move(r));
        }
    }
    return all;
}

std::optional<double> confidence_halfwidth(std::span<const double> per_geometry_means) {
    const std::size_t n = per_geometry_means.size();
    if (n < 2) return std::nullopt;
    double mean = 0.0;
    for (double v : per_geometry_means) mean += v;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : per_geometry_means) ss += (v - mean) * (v - mean);
    const double sample_std = std::sqrt(ss / static_cast<double>(n - 1));
    return 1.96 * sample_std / std::sqrt(static_cast<double>(n));
}

}  // namespace dmimo
