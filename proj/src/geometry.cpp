// SPDX-License-Identifier: Apache-2.0

#include "dmimo/geometry.hpp"

#include <cmath>
#include <string>

#include "dmimo/errors.hpp"

namespace dmimo {

std::vector<ApPlacement> place_aps(int q, double side_m, double h_ap) {
    if (q <= 0) {
        throw config_error("number of APs must be positive, got " + std::to_string(q));
    }
    if (side_m < 0.0) {
        throw config_error("cell side length must be nonnegative");
    }
    // Balanced grid: r rows x c columns with r*c = q and r the largest
    // divisor of q not exceeding sqrt(q).
    int rows = 1;
    for (int r = 1; static_cast<double>(r) * r <= q; ++r) {
        if (q % r == 0) rows = r;
    }
    const int cols = q / rows;

    std::vector<ApPlacement> aps;
    aps.reserve(q);
    const double cell_w = side_m / cols;
    const double cell_h = side_m / rows;
    for (int j = 0; j < rows; ++j) {
        for (int i = 0; i < cols; ++i) {
            ApPlacement ap;
            ap.position = {(i + 0.5) * cell_w, (j + 0.5) * cell_h, h_ap};
            ap.boresight = {0.0, 1.0};
            aps.push_back(ap);
        }
    }
    return aps;
}

std::vector<Vec3> place_devices(int k, double side_m, double h_ue, Stream& stream) {
    if (k <= 0) {
        throw config_error("number of devices must be positive, got " + std::to_string(k));
    }
    std::vector<Vec3> devices;
    devices.reserve(k);
    for (int i = 0; i < k; ++i) {
        const double x = stream.uniform(side_m);
        const double y = stream.uniform(side_m);
        devices.push_back({x, y, h_ue});
    }
    return devices;
}

LinkGeometry link_geometry(const Vec3& device, int ap_index, const NetworkGeometry& geometry) {
    if (ap_index < 0 || ap_index >= geometry.num_aps()) {
        throw domain_error("AP index out of range: " + std::to_string(ap_index));
    }
    const ApPlacement& ap = geometry.aps[ap_index];
    const double dx = device.x - ap.position.x;
    const double dy = device.y - ap.position.y;
    const double dz = device.z - ap.position.z;

    LinkGeometry out;
    out.distance_m = std::sqrt(dx * dx + dy * dy + dz * dz);
    if (dx == 0.0 && dy == 0.0) {
        out.azimuth_rad = 0.0;  // device straight under/over the array
        return out;
    }
    const double cross = ap.boresight.x * dy - ap.boresight.y * dx;
    const double dot = ap.boresight.x * dx + ap.boresight.y * dy;
    double az = std::atan2(cross, dot);
    if (az <= -3.14159265358979323846) {
        az = 3.14159265358979323846;  // keep the range (-pi, pi]
    }
    out.azimuth_rad = az;
    return out;
}

NetworkGeometry make_geometry(int q, int s, int k, double side_m, double h_ap, double h_ue,
                              Stream& stream) {
    if (s <= 0) {
        throw config_error("antennas per AP must be positive, got " + std::to_string(s));
    }
    NetworkGeometry g;
    g.side_length_m = side_m;
    g.aps = place_aps(q, side_m, h_ap);
    g.device_positions = place_devices(k, side_m, h_ue, stream);
    g.antennas_per_ap = s;
    g.total_antennas = q * s;
    return g;
}

}  // namespace dmimo
