// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <vector>

#include "dmimo/geometry.hpp"
#include "dmimo/linalg.hpp"
#include "dmimo/rng.hpp"

namespace dmimo {

/// Speed of light used throughout, fixed so golden outputs stay stable.
inline constexpr double kSpeedOfLightMps = 2.998e8;

/// Hook for non-identity NLoS spatial covariance: returns the S x S
/// covariance of one link given its large-scale gain and azimuth. Only the
/// path-loss-scaled identity ships; anything else is caller-supplied.
using NlosCovarianceFn = std::function<CMatrix(double beta, double azimuth_rad, int s)>;

/// Physical constants and model knobs. The Rician factor is stored linearly;
/// user-facing interfaces configure it in dB, and pure_los represents the
/// kappa -> infinity limit.
///
/// The NLoS covariance defaults to beta * I_S: a literal unit identity would
/// make the LoS/NLoS power ratio kappa*beta instead of kappa, contradicting
/// the Rician factor's definition as a power ratio, so the scaled form is
/// used and flagged here and in the README.
struct ChannelParams {
    double rician_factor = 1.0;  // kappa, linear, >= 0
    bool pure_los = false;
    double antenna_spacing = 0.5;       // Delta, fraction of wavelength
    double pathloss_exponent = 2.0;     // eta
    double reference_distance_m = 1.0;  // d0
    double carrier_hz = 3.5e9;
    double tx_power_w = 0.1;
    double noise_psd_w_per_hz = 4e-21;
    double bandwidth_hz = 2e7;
    double noise_figure = 7.943282347242816;  // linear, Table-default 9 dB
    NlosCovarianceFn nlos_covariance;         // empty = scaled identity

    double wavelength_m() const { return kSpeedOfLightMps / carrier_hz; }
    double noise_power_w() const { return noise_psd_w_per_hz * bandwidth_hz * noise_figure; }
    double snr() const { return tx_power_w / noise_power_w(); }  // rho
    double csi_error_variance(int devices) const { return 1.0 / (devices * snr()); }

    void set_rician_db(double kappa_db);
    void set_noise_figure_db(double nf_db);
};

/// Friis attenuation at the reference distance, in dB.
double reference_loss_db(const ChannelParams& params);

/// Log-distance path loss as a linear power gain. Distances below d0 clamp
/// to d0 (near-field links are outside the model's validity).
double pathloss_gain(double distance_m, const ChannelParams& params);

/// ULA steering vector scaled by sqrt(beta): element m is
/// sqrt(beta) * exp(-j 2 pi m Delta sin(azimuth)); squared norm is S*beta.
CVector los_vector(double beta, double azimuth_rad, int s, double delta);

/// One Rician channel vector for a single link:
/// sqrt(kappa/(1+kappa)) * los + sqrt(1/(1+kappa)) * nlos,
/// nlos ~ CN(0, beta I_S) under the default covariance. E||h||^2 = S*beta
/// for every kappa.
CVector draw_channel_vector(double beta, double azimuth_rad, const ChannelParams& params, int s,
                            Stream& stream);

/// Per-link large-scale coefficients of one geometry, indexed [ap][device].
struct LinkTable {
    int num_aps = 0;
    int num_devices = 0;
    int antennas_per_ap = 0;
    std::vector<double> beta;     // num_aps * num_devices, AP-major
    std::vector<double> azimuth;  // same layout

    double gain(int ap, int device) const { return beta[ap * num_devices + device]; }
    double angle(int ap, int device) const { return azimuth[ap * num_devices + device]; }
};

LinkTable link_table(const NetworkGeometry& geometry, const ChannelParams& params);

/// One draw of the channel: the true M x K matrix, its CSI-corrupted
/// estimate, and the per-link gains it was built from.
struct ChannelRealization {
    CMatrix true_matrix;       // H
    CMatrix estimated_matrix;  // H^; equals H until corrupt_csi fills it
    LinkTable links;
};

/// Column k stacks the per-AP channel vectors of device k; NLoS draws are
/// independent across links and devices. Draw order is fixed (device-major,
/// antenna within device) so the same substream yields the same raw fading
/// regardless of the (Q,S) split of M.
CMatrix draw_true_channel(const LinkTable& links, const ChannelParams& params, Stream& stream);

ChannelRealization assemble_channel_matrix(const NetworkGeometry& geometry,
                                           const ChannelParams& params, Stream& stream);

/// Adds i.i.d. CN(0, 1/(K rho)) estimation error to every entry; the input
/// is left untouched.
CMatrix corrupt_csi(const CMatrix& true_matrix, const ChannelParams& params, int devices,
                    Stream& stream);

}  // namespace dmimo
