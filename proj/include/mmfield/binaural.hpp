#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "mmfield/mode_matching.hpp"

namespace mmfield {

enum class Ear { Left, Right };

/// Rigid-sphere stand-in for a dummy head: ears on the sphere surface at
/// (0, +-a, 0).
struct HeadModel {
    double radius = 0.0875;
    Vec3 center{};

    Vec3 ear_position(Ear ear) const {
        double s = ear == Ear::Left ? 1.0 : -1.0;
        return center + Vec3{0.0, s * radius, 0.0};
    }
};

/// Total (incident + scattered) pressure at the ear point on a sound-hard
/// sphere due to a point source at src. Series truncated at
/// ceil(k a) + extra_order.
std::complex<double> rigid_sphere_pressure(Wavenumber k, const HeadModel& head, const Vec3& src,
                                           Ear ear, int extra_order = 20);

struct BinauralScenario {
    ArrayGeometry array;
    Vec3 primary{2.0, 0.0, 0.0};
    double speed_of_sound = 343.0;
    double lambda_factor = 1e-3;
    double sigma_floor = 1e-3;
    int order = 6;       // truncation for zones and the MM baseline
    int doa_order = 6;   // order N of the single-layer-potential weights
    double zone_offset = 0.0705;  // zone centers at (0, +-offset, 0)
    HeadModel head;
    std::vector<std::string> methods{"MM", "BCMM_conv", "BCMM_doa"};
};

struct BinauralRow {
    std::string method;
    char ear;  // 'L' or 'R'
    double frequency_hz;
    double ne_db;
};

struct BinauralReport {
    std::vector<BinauralRow> rows;
    std::vector<std::string> errors;
};

/// Per frequency and method: solve for driving signals in free field, then
/// compare reproduced and desired ear pressures through the rigid-sphere
/// head. NE = 10 log10(|p_rep - p_des|^2 / |p_des|^2), clamped at -200 dB.
BinauralReport binaural_ne(const BinauralScenario& scenario,
                           const std::vector<double>& frequencies_hz);

/// CSV: method,ear,frequency_hz,ne_db (LF, UTF-8).
void write_binaural_csv(const BinauralReport& report, std::ostream& os);

std::vector<double> log_spaced(double f_start, double f_stop, int count);

}  // namespace mmfield
