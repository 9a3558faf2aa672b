// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "dmimo/linalg.hpp"

namespace dmimo {

enum class CombinerKind { kMrc = 0, kZf = 1, kMmse = 2 };

/// Case-insensitive parse of "mrc" | "zf" | "mmse".
CombinerKind parse_combiner(std::string_view name);
std::string_view combiner_name(CombinerKind kind);

/// Receive combining matrix from the channel ESTIMATE:
///   MRC : V = H^
///   ZF  : V = H^ (H^^H H^)^-1      (via pivoted QR, so conditioning is not squared)
///   MMSE: V = (H^ H^^H + (sigma_n^2/p) I)^-1 H^
/// ZF throws singular_matrix_error when the pivot test |R_ii| <= 1e-12 |R_00|
/// flags rank deficiency.
CMatrix combiner_matrix(const CMatrix& estimated, CombinerKind kind, double tx_power_w,
                        double noise_power_w);

/// Per-user SINR: the combiner columns come from the estimate while the
/// desired/interference powers use the TRUE channel columns - that mismatch
/// is exactly the CSI-error penalty.
std::vector<double> sinr_per_user(const CMatrix& true_matrix, const CMatrix& combiner,
                                  double tx_power_w, double noise_power_w);

/// Instantaneous spectral efficiency log2(1 + gamma) per user.
std::vector<double> se_from_sinr(const std::vector<double>& sinr);

/// Arithmetic mean over users.
double mean_per_user_se(const std::vector<double>& per_user_se);

struct SinrReport {
    std::vector<double> per_user_sinr;
    std::vector<double> per_user_se;
    CombinerKind combiner = CombinerKind::kMrc;
};

SinrReport make_sinr_report(const CMatrix& true_matrix, const CMatrix& combiner,
                            CombinerKind kind, double tx_power_w, double noise_power_w);

}  // namespace dmimo
