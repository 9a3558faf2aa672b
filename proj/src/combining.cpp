// SPDX-License-Identifier: Apache-2.0

#include "dmimo/combining.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "dmimo/kernels.hpp"

namespace dmimo {

CombinerKind parse_combiner(std::string_view name) {
    std::string low(name);
    std::transform(low.begin(), low.end(), low.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (low == "mrc") return CombinerKind::kMrc;
    if (low == "zf") return CombinerKind::kZf;
    if (low == "mmse") return CombinerKind::kMmse;
    throw config_error("unknown combiner '" + std::string(name) + "' (expected mrc, zf or mmse)");
}

std::string_view combiner_name(CombinerKind kind) {
    switch (kind) {
        case CombinerKind::kMrc: return "mrc";
        case CombinerKind::kZf: return "zf";
        case CombinerKind::kMmse: return "mmse";
    }
    return "?";
}

namespace {

constexpr double kZfPivotTolerance = 1e-12;

CMatrix zf_combiner(const CMatrix& estimated) {
    const int m = estimated.rows();
    const int k = estimated.cols();
    if (m < k) {
        throw singular_matrix_error("ZF needs at least as many antennas as devices (M=" +
                                    std::to_string(m) + ", K=" + std::to_string(k) + ")");
    }
    QrPivoted f = qr_factor_pivoted(estimated);
    const double top = std::abs(f.qr(0, 0));
    for (int j = 0; j < k; ++j) {
        if (std::abs(f.qr(j, j)) <= kZfPivotTolerance * top) {
            throw singular_matrix_error(
                "rank-deficient estimate in ZF: pivot " + std::to_string(j) + " is " +
                std::to_string(std::abs(f.qr(j, j))) + " against leading pivot " +
                std::to_string(top));
        }
    }
    // With column pivoting H^ P = Q R, so H^(H^^H H^)^-1 = Q R^-H P^T.
    CMatrix x = CMatrix::identity(k);
    solve_upper_adjoint_inplace(f.qr, x);
    // One refinement pass on the triangular systems R^H X = I.
    CMatrix residual = CMatrix::identity(k);
    for (int j = 0; j < k; ++j) {
        for (int i = 0; i < k; ++i) {
            // (R^H X)(i,j) = conj-dot of R's column i head with X's column j.
            residual(i, j) -= kernels::active().cdotc(static_cast<std::size_t>(i + 1),
                                                      f.qr.col(i), x.col(j));
        }
    }
    solve_upper_adjoint_inplace(f.qr, residual);
    for (std::size_t i = 0; i < x.size(); ++i) x.data()[i] += residual.data()[i];

    const CMatrix q = qr_economy_q(f);
    const CMatrix v_permuted = multiply(q, x);
    CMatrix v(m, k);
    for (int j = 0; j < k; ++j) {
        std::copy_n(v_permuted.col(j), m, v.col(f.perm[j]));
    }
    return v;
}

}  // namespace

CMatrix combiner_matrix(const CMatrix& estimated, CombinerKind kind, double tx_power_w,
                        double noise_power_w) {
    switch (kind) {
        case CombinerKind::kMrc:
            return estimated;
        case CombinerKind::kZf:
            return zf_combiner(estimated);
        case CombinerKind::kMmse: {
            const CMatrix a = outer_self_adjoint(estimated, noise_power_w / tx_power_w);
            return solve_hermitian_pd(a, estimated);
        }
    }
    throw domain_error("unhandled combiner kind");
}

std::vector<double> sinr_per_user(const CMatrix& true_matrix, const CMatrix& combiner,
                                  double tx_power_w, double noise_power_w) {
    const int k = true_matrix.cols();
    if (combiner.rows() != true_matrix.rows() || combiner.cols() != k) {
        throw domain_error("combiner shape does not match the channel matrix");
    }
    const auto m = static_cast<std::size_t>(true_matrix.rows());
    const CMatrix z = adjoint_multiply(combiner, true_matrix);  // z(i,j) = v_i^H h_j

    std::vector<double> sinr(k);
    for (int i = 0; i < k; ++i) {
        const double vnorm2 = kernels::active().sum_abs2(m, combiner.col(i));
        if (vnorm2 == 0.0) {
            throw domain_error("combiner column " + std::to_string(i) + " is zero");
        }
        double interference = 0.0;
        for (int j = 0; j < k; ++j) {
            if (j != i) interference += std::norm(z(i, j));
        }
        const double desired = std::norm(z(i, i));
        sinr[i] = tx_power_w * desired / (tx_power_w * interference + noise_power_w * vnorm2);
    }
    return sinr;
}

std::vector<double> se_from_sinr(const std::vector<double>& sinr) {
    std::vector<double> se(sinr.size());
    for (std::size_t i = 0; i < sinr.size(); ++i) {
        if (!(sinr[i] >= 0.0)) {
            throw domain_error("SINR must be nonnegative, got " + std::to_string(sinr[i]));
        }
        se[i] = std::log2(1.0 + sinr[i]);
    }
    return se;
}

double mean_per_user_se(const std::vector<double>& per_user_se) {
    if (per_user_se.empty()) {
        throw domain_error("mean per-user SE of an empty set is undefined");
    }
    double sum = 0.0;
    for (double v : per_user_se) sum += v;
    return sum / static_cast<double>(per_user_se.size());
}

SinrReport make_sinr_report(const CMatrix& true_matrix, const CMatrix& combiner,
                            CombinerKind kind, double tx_power_w, double noise_power_w) {
    SinrReport r;
    r.per_user_sinr = sinr_per_user(true_matrix, combiner, tx_power_w, noise_power_w);
    r.per_user_se = se_from_sinr(r.per_user_sinr);
    r.combiner = kind;
    return r;
}

}  // namespace dmimo
