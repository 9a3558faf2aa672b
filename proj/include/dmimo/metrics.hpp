// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "dmimo/channel.hpp"
#include "dmimo/geometry.hpp"
#include "dmimo/linalg.hpp"

namespace dmimo {

/// Covariance matrices of the stacked channel vectors of two devices:
/// C_i = E[h_i h_i^H] and the cross-correlation C_12 = E[h_1 h_2^H].
struct CovariancePair {
    CMatrix c1;
    CMatrix c2;
    CMatrix c12;
};

/// Population covariances from geometry: the LoS rank-one terms plus the
/// block-diagonal NLoS covariance over APs; C_12 keeps only the LoS product
/// because distinct devices' NLoS components are independent and zero-mean.
CovariancePair analytic_covariances(int device_a, int device_b, const NetworkGeometry& geometry,
                                    const ChannelParams& params);

struct CorrelationDiag {
    double imag_ratio = 0.0;       // |Im tr(C12)| / |tr(C12)|
    bool imag_suspicious = false;  // above 1e-6, numerator phase is not noise
};

/// Generalized (Pearson-style) correlation coefficient
/// r = Re{tr(C12)} / tr((C1 C2)^{1/2}), in [-1, 1]. The square root is the
/// principal one, evaluated as tr((C1^{1/2} C2 C1^{1/2})^{1/2}) which equals
/// it for PSD factors.
double correlation_coefficient(const CovariancePair& pair, CorrelationDiag* diag = nullptr);

struct AverageCorrelation {
    double mean_abs = 0.0;
    double std_error = 0.0;
    long n_pairs = 0;
    long n_imag_suspicious = 0;
};

/// Monte Carlo E|r| over independently drawn device-position pairs on the
/// square, with a fixed AP layout. Pair positions are keyed only by
/// (seed, pair index), so sweeps over kappa or S reuse identical pairs.
AverageCorrelation average_correlation(int q, int s, double side_m, double h_ap, double h_ue,
                                       const ChannelParams& params, long n_pairs,
                                       std::uint64_t seed, int workers = 0);

struct ConditionNumber {
    double ratio = 1.0;  // sigma_max / sigma_min; +inf sentinel when singular
    double db = 0.0;     // 20 log10(ratio)
};

/// 2-norm condition number from singular values. sigma_min below 1e-300
/// (including exact zeros from rank deficiency) yields the +infinity
/// sentinel.
ConditionNumber condition_number(const CMatrix& matrix);

struct MeanConditionNumber {
    double mean_db = 0.0;
    double std_error_db = 0.0;  // from per-geometry means
    long n_samples = 0;
};

struct CondSweepConfig {
    int q = 1;
    int s = 16;
    int devices = 10;
    double side_m = 100.0;
    double h_ap = 12.0;
    double h_ue = 1.5;
    int n_net = 200;
    int n_ch = 100;
    std::uint64_t seed = 1;
    int workers = 0;
    bool average_in_db = true;  // dB-scale averaging; linear mean behind this flag
};

/// Mean condition number of sampled true channel matrices over
/// n_net geometries x n_ch channel draws.
MeanConditionNumber mean_condition_number(const CondSweepConfig& config,
                                          const ChannelParams& params);

}  // namespace dmimo
