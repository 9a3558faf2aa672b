// SPDX-License-Identifier: Apache-2.0

#include "dmimo/metrics.hpp"

#include <cmath>
#include <string>

#include "dmimo/errors.hpp"
#include "dmimo/kernels.hpp"
#include "dmimo/parallel.hpp"

namespace dmimo {

namespace {

/// Stacked LoS vector of one device over all APs, carrying sqrt(beta).
CVector stacked_los(int device, const NetworkGeometry& geometry, const LinkTable& links,
                    const ChannelParams& params) {
    const int s = geometry.antennas_per_ap;
    CVector v(static_cast<std::size_t>(geometry.total_antennas));
    for (int q = 0; q < geometry.num_aps(); ++q) {
        const CVector block =
            los_vector(links.gain(q, device), links.angle(q, device), s, params.antenna_spacing);
        std::copy(block.begin(), block.end(), v.begin() + static_cast<std::size_t>(q) * s);
    }
    return v;
}

/// C += w * a b^H
void add_outer(CMatrix& c, double w, const CVector& a, const CVector& b) {
    const auto n = a.size();
    for (int col = 0; col < c.cols(); ++col) {
        const cd scale = w * std::conj(b[col]);
        if (scale != 0.0) {
            kernels::active().axpy(n, scale, a.data(), c.col(col));
        }
    }
}

void add_nlos_covariance(CMatrix& c, double w, int device, const NetworkGeometry& geometry,
                         const LinkTable& links, const ChannelParams& params) {
    const int s = geometry.antennas_per_ap;
    for (int q = 0; q < geometry.num_aps(); ++q) {
        const int base = q * s;
        if (params.nlos_covariance) {
            const CMatrix r = params.nlos_covariance(links.gain(q, device),
                                                     links.angle(q, device), s);
            for (int j = 0; j < s; ++j) {
                for (int i = 0; i < s; ++i) {
                    c(base + i, base + j) += w * r(i, j);
                }
            }
        } else {
            const double beta = links.gain(q, device);
            for (int i = 0; i < s; ++i) {
                c(base + i, base + i) += w * beta;
            }
        }
    }
}

std::pair<double, double> component_powers(const ChannelParams& params) {
    if (params.pure_los) return {1.0, 0.0};
    const double k = params.rician_factor;
    return {k / (1.0 + k), 1.0 / (1.0 + k)};
}

}  // namespace

CovariancePair analytic_covariances(int device_a, int device_b, const NetworkGeometry& geometry,
                                    const ChannelParams& params) {
    const LinkTable links = link_table(geometry, params);
    const auto [p_los, p_nlos] = component_powers(params);
    const int m = geometry.total_antennas;

    const CVector va = stacked_los(device_a, geometry, links, params);
    const CVector vb = stacked_los(device_b, geometry, links, params);

    CovariancePair pair{CMatrix(m, m), CMatrix(m, m), CMatrix(m, m)};
    add_outer(pair.c1, p_los, va, va);
    add_nlos_covariance(pair.c1, p_nlos, device_a, geometry, links, params);
    add_outer(pair.c2, p_los, vb, vb);
    add_nlos_covariance(pair.c2, p_nlos, device_b, geometry, links, params);
    add_outer(pair.c12, p_los, va, vb);
    return pair;
}

double correlation_coefficient(const CovariancePair& pair, CorrelationDiag* diag) {
    const cd numerator = trace(pair.c12);

    if (diag != nullptr) {
        const double mag = std::abs(numerator);
        diag->imag_ratio = mag > 0.0 ? std::abs(numerator.imag()) / mag : 0.0;
        diag->imag_suspicious = diag->imag_ratio > 1e-6;
    }

    // tr((C1 C2)^{1/2}) = tr((C1^{1/2} C2 C1^{1/2})^{1/2}) for PSD factors;
    // the inner form is Hermitian, which keeps the eigensolver happy.
    const CMatrix s1 = principal_sqrt_psd(pair.c1);
    CMatrix b = multiply(s1, multiply(pair.c2, s1));
    // Hermitize away the rounding skew before the eigendecomposition.
    for (int j = 0; j < b.rows(); ++j) {
        for (int i = 0; i < j; ++i) {
            const cd avg = 0.5 * (b(i, j) + std::conj(b(j, i)));
            b(i, j) = avg;
            b(j, i) = std::conj(avg);
        }
        b(j, j) = b(j, j).real();
    }
    const EigHermitian eig = eig_hermitian(std::move(b));
    double denom = 0.0;
    for (double lam : eig.values) {
        if (lam > 0.0) denom += std::sqrt(lam);
    }
    if (!(denom > 0.0)) {
        throw domain_error("correlation coefficient undefined: tr((C1 C2)^{1/2}) is zero");
    }
    return numerator.real() / denom;
}

AverageCorrelation average_correlation(int q, int s, double side_m, double h_ap, double h_ue,
                                       const ChannelParams& params, long n_pairs,
                                       std::uint64_t seed, int workers) {
    if (n_pairs < 1) {
        throw config_error("average correlation needs at least one pair");
    }
    const std::vector<ApPlacement> aps = place_aps(q, side_m, h_ap);

    std::vector<double> abs_r(static_cast<std::size_t>(n_pairs));
    std::vector<unsigned char> suspicious(static_cast<std::size_t>(n_pairs), 0);
    parallel_for(n_pairs, workers, [&](long p) {
        Stream stream(seed, StreamPurpose::kDevicePair, static_cast<std::uint64_t>(p));
        NetworkGeometry geometry;
        geometry.side_length_m = side_m;
        geometry.aps = aps;
        geometry.device_positions = place_devices(2, side_m, h_ue, stream);
        geometry.antennas_per_ap = s;
        geometry.total_antennas = q * s;

        CorrelationDiag diag;
        const double r =
            correlation_coefficient(analytic_covariances(0, 1, geometry, params), &diag);
        abs_r[static_cast<std::size_t>(p)] = std::abs(r);
        suspicious[static_cast<std::size_t>(p)] = diag.imag_suspicious ? 1 : 0;
    });

    AverageCorrelation out;
    out.n_pairs = n_pairs;
    double sum = 0.0;
    for (double v : abs_r) sum += v;
    out.mean_abs = sum / static_cast<double>(n_pairs);
    if (n_pairs > 1) {
        double ss = 0.0;
        for (double v : abs_r) ss += (v - out.mean_abs) * (v - out.mean_abs);
        out.std_error = std::sqrt(ss / static_cast<double>(n_pairs - 1)) /
                        std::sqrt(static_cast<double>(n_pairs));
    }
    for (unsigned char f : suspicious) out.n_imag_suspicious += f;
    return out;
}

ConditionNumber condition_number(const CMatrix& matrix) {
    if (matrix.empty() || frobenius_norm(matrix) == 0.0) {
        throw domain_error("condition number of an all-zero matrix is undefined");
    }
    const std::vector<double> sv = singular_values(matrix);
    ConditionNumber out;
    const double smin = sv.back();
    if (smin < 1e-300) {
        out.ratio = std::numeric_limits<double>::infinity();
        out.db = std::numeric_limits<double>::infinity();
        return out;
    }
    out.ratio = sv.front() / smin;
    out.db = 20.0 * std::log10(out.ratio);
    return out;
}

MeanConditionNumber mean_condition_number(const CondSweepConfig& config,
                                          const ChannelParams& params) {
    if (config.n_net < 1 || config.n_ch < 1) {
        throw config_error("realization counts must be at least 1");
    }
    std::vector<double> geo_means(static_cast<std::size_t>(config.n_net));
    parallel_for(config.n_net, config.workers, [&](long g) {
        Stream place(config.seed, StreamPurpose::kPlacement, static_cast<std::uint64_t>(g));
        const NetworkGeometry geometry = make_geometry(config.q, config.s, config.devices,
                                                       config.side_m, config.h_ap, config.h_ue,
                                                       place);
        const LinkTable links = link_table(geometry, params);
        double acc = 0.0;
        for (int c = 0; c < config.n_ch; ++c) {
            Stream chan(config.seed, StreamPurpose::kChannel, static_cast<std::uint64_t>(g),
                        static_cast<std::uint64_t>(c));
            const CMatrix h = draw_true_channel(links, params, chan);
            const ConditionNumber cond = condition_number(h);
            acc += config.average_in_db ? cond.db : cond.ratio;
        }
        geo_means[static_cast<std::size_t>(g)] = acc / config.n_ch;
    });

    double sum = 0.0;
    for (double v : geo_means) sum += v;
    const double mean = sum / config.n_net;
    double stderr_mean = 0.0;
    if (config.n_net > 1) {
        double ss = 0.0;
        for (double v : geo_means) ss += (v - mean) * (v - mean);
        stderr_mean = std::sqrt(ss / (config.n_net - 1)) / std::sqrt(double(config.n_net));
    }

    MeanConditionNumber out;
    out.n_samples = static_cast<long>(config.n_net) * config.n_ch;
    if (config.average_in_db) {
        out.mean_db = mean;
        out.std_error_db = stderr_mean;
    } else {
        // Linear-mean alternative: report the dB value of the linear mean;
        // the dispersion maps through the derivative of 20*log10 at the mean.
        out.mean_db = 20.0 * std::log10(mean);
        out.std_error_db = 20.0 / std::log(10.0) * (stderr_mean / mean);
    }
    return out;
}

}  // namespace dmimo
