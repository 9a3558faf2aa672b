// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "dmimo/rng.hpp"

namespace dmimo {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;
};

struct Vec2 {
    double x = 0.0, y = 0.0;
};

/// One AP: array reference point plus the ULA boresight in the horizontal
/// plane. Every boresight points toward +y; the paper never fixes array
/// orientation, so a single common orientation is used and documented as a
/// modeling choice (only sin of the azimuth enters the steering phases).
struct ApPlacement {
    Vec3 position;
    Vec2 boresight;
};

/// Layout of one network realization: Q APs (S-element ULAs) and K devices
/// in an l x l cell. Immutable after construction; safe to share across
/// threads.
struct NetworkGeometry {
    double side_length_m = 0.0;
    std::vector<ApPlacement> aps;
    std::vector<Vec3> device_positions;
    int antennas_per_ap = 0;  // S
    int total_antennas = 0;   // M = Q*S, validated at construction

    int num_aps() const { return static_cast<int>(aps.size()); }
    int num_devices() const { return static_cast<int>(device_positions.size()); }
};

/// APs at the centers of a balanced r x c grid partition of the square,
/// r = largest divisor of q with r <= sqrt(q). Deterministic; rows scan
/// bottom-to-top, x varies fastest.
std::vector<ApPlacement> place_aps(int q, double side_m, double h_ap);

/// Device positions with x,y ~ U[0, l) at height h_ue; consumes two words
/// per device from the stream.
std::vector<Vec3> place_devices(int k, double side_m, double h_ue, Stream& stream);

struct LinkGeometry {
    double distance_m = 0.0;
    double azimuth_rad = 0.0;  // signed, CCW-positive from boresight, in (-pi, pi]
};

/// Full 3-D distance and horizontal-plane azimuth from an AP's boresight to
/// the AP->device direction. A device exactly at the AP's horizontal
/// position gets azimuth 0.
LinkGeometry link_geometry(const Vec3& device, int ap_index, const NetworkGeometry& geometry);

/// Validated constructor for one realization; rejects q*s mismatches and
/// nonpositive dimensions.
NetworkGeometry make_geometry(int q, int s, int k, double side_m, double h_ap, double h_ue,
                              Stream& stream);

}  // namespace dmimo
