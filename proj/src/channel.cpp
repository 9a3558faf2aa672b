// SPDX-License-Identifier: Apache-2.0

#include "dmimo/channel.hpp"

#include <cmath>
#include <string>

#include "dmimo/errors.hpp"

namespace dmimo {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

}  // namespace

void ChannelParams::set_rician_db(double kappa_db) {
    if (std::isinf(kappa_db) && kappa_db > 0.0) {
        pure_los = true;
        rician_factor = 0.0;
        return;
    }
    pure_los = false;
    rician_factor = std::pow(10.0, kappa_db / 10.0);
}

void ChannelParams::set_noise_figure_db(double nf_db) {
    noise_figure = std::pow(10.0, nf_db / 10.0);
}

double reference_loss_db(const ChannelParams& params) {
    return 20.0 * std::log10(2.0 * kTwoPi * params.reference_distance_m / params.wavelength_m());
}

double pathloss_gain(double distance_m, const ChannelParams& params) {
    if (!(distance_m > 0.0)) {
        throw domain_error("path loss requires a positive distance, got " +
                           std::to_string(distance_m));
    }
    const double d = std::max(distance_m, params.reference_distance_m);
    const double beta_db = -reference_loss_db(params) -
                           10.0 * params.pathloss_exponent *
                               std::log10(d / params.reference_distance_m);
    return std::pow(10.0, beta_db / 10.0);
}

CVector los_vector(double beta, double azimuth_rad, int s, double delta) {
    CVector v(s);
    const double amp = std::sqrt(beta);
    const double step = -kTwoPi * delta * std::sin(azimuth_rad);
    for (int m = 0; m < s; ++m) {
        const double ph = step * m;
        v[m] = cd{amp * std::cos(ph), amp * std::sin(ph)};
    }
    return v;
}

namespace {

/// Weights of the two Rician components; (1, 0) in the pure-LoS limit.
std::pair<double, double> rician_weights(const ChannelParams& params) {
    if (params.pure_los) {
        return {1.0, 0.0};
    }
    const double k = params.rician_factor;
    return {std::sqrt(k / (1.0 + k)), std::sqrt(1.0 / (1.0 + k))};
}

/// NLoS part under the general covariance hook: L z with R = L L^H.
CVector draw_general_nlos(const CMatrix& r, Stream& stream) {
    CMatrix factor = r;
    if (!cholesky_factor(factor)) {
        throw numerical_error("NLoS covariance from the hook is not positive definite");
    }
    const int s = r.rows();
    CVector z(s);
    for (int i = 0; i < s; ++i) z[i] = stream.normal_complex();
    CVector out(s, cd{0.0});
    for (int j = 0; j < s; ++j) {
        for (int i = j; i < s; ++i) {
            out[i] += factor(i, j) * z[j];
        }
    }
    return out;
}

}  // namespace

CVector draw_channel_vector(double beta, double azimuth_rad, const ChannelParams& params, int s,
                            Stream& stream) {
    const auto [w_los, w_nlos] = rician_weights(params);
    CVector h = los_vector(beta, azimuth_rad, s, params.antenna_spacing);
    if (w_los != 1.0) {
        for (auto& x : h) x *= w_los;
    }
    if (params.pure_los) {
        return h;
    }
    if (params.nlos_covariance) {
        const CVector g = draw_general_nlos(params.nlos_covariance(beta, azimuth_rad, s), stream);
        for (int m = 0; m < s; ++m) h[m] += w_nlos * g[m];
    } else {
        const double scale = w_nlos * std::sqrt(beta);
        for (int m = 0; m < s; ++m) h[m] += scale * stream.normal_complex();
    }
    return h;
}

LinkTable link_table(const NetworkGeometry& geometry, const ChannelParams& params) {
    LinkTable t;
    t.num_aps = geometry.num_aps();
    t.num_devices = geometry.num_devices();
    t.antennas_per_ap = geometry.antennas_per_ap;
    t.beta.resize(static_cast<std::size_t>(t.num_aps) * t.num_devices);
    t.azimuth.resize(t.beta.size());
    for (int q = 0; q < t.num_aps; ++q) {
        for (int k = 0; k < t.num_devices; ++k) {
            const LinkGeometry lg = link_geometry(geometry.device_positions[k], q, geometry);
            t.beta[q * t.num_devices + k] = pathloss_gain(lg.distance_m, params);
            t.azimuth[q * t.num_devices + k] = lg.azimuth_rad;
        }
    }
    return t;
}

CMatrix draw_true_channel(const LinkTable& links, const ChannelParams& params, Stream& stream) {
    const int s = links.antennas_per_ap;
    const int m = links.num_aps * s;
    CMatrix h(m, links.num_devices);
    for (int k = 0; k < links.num_devices; ++k) {
        cd* column = h.col(k);
        for (int q = 0; q < links.num_aps; ++q) {
            const CVector block =
                draw_channel_vector(links.gain(q, k), links.angle(q, k), params, s, stream);
            std::copy(block.begin(), block.end(), column + q * s);
        }
    }
    return h;
}

ChannelRealization assemble_channel_matrix(const NetworkGeometry& geometry,
                                           const ChannelParams& params, Stream& stream) {
    ChannelRealization r;
    r.links = link_table(geometry, params);
    r.true_matrix = draw_true_channel(r.links, params, stream);
    r.estimated_matrix = r.true_matrix;
    return r;
}

CMatrix corrupt_csi(const CMatrix& true_matrix, const ChannelParams& params, int devices,
                    Stream& stream) {
    if (devices < 1) {
        throw domain_error("CSI error model needs at least one device");
    }
    const double sigma = std::sqrt(params.csi_error_variance(devices));
    CMatrix est = true_matrix;
    for (std::size_t i = 0; i < est.size(); ++i) {
        est.data()[i] += sigma * stream.normal_complex();
    }
    return est;
}

}  // namespace dmimo
