#pragma once

#include <complex>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mmfield/mode_matching.hpp"

namespace mmfield {

/// Axis-aligned lattice points inside a ball; the center is always a lattice
/// point.
struct BallGrid {
    Vec3 center;
    double radius = 0.0;
    double spacing = 0.0;
    std::vector<Vec3> points;
};

BallGrid ball_grid(const Vec3& center, double radius, double spacing);

/// p_rep(r) = sum_l d_l * green_free(k, r_l, r).
std::vector<std::complex<double>> reproduced_pressure(const ArrayGeometry& array,
                                                      const Eigen::VectorXcd& d, Wavenumber k,
                                                      const std::vector<Vec3>& points);

/// 10 log10( sum |p_rep - p_des|^2 / sum |p_des|^2 ), clamped below at -200 dB.
double nre(std::span<const std::complex<double>> p_rep,
           std::span<const std::complex<double>> p_des);

struct SweepScenario {
    ArrayGeometry array;
    ZoneSet zones;
    double frequency_hz = 1000.0;
    double speed_of_sound = 343.0;
    double primary_distance = 2.0;
    std::vector<std::pair<double, double>> directions;  // (theta, phi) radians
    std::vector<std::string> methods{"conventional", "doa"};
    double lambda_factor = 1e-3;
    double sigma_floor = 1e-3;
    int doa_order = 6;
    std::vector<double> radius_factors{0.8, 1.0, 1.2};
    double grid_spacing = 0.01;
};

struct SweepRow {
    std::string method;
    double theta_deg;
    double phi_deg;
    double radius_factor;
    int zone_index;
    double nre_db;
};

struct SweepReport {
    std::vector<SweepRow> rows;
    std::vector<std::string> errors;  // per-direction failures, sweep continues
    double lambda = 0.0;
    double wavenumber = 0.0;
    // Driving signals per (direction, method), keyed "<dir_index>/<method>".
    std::vector<std::pair<std::string, Eigen::VectorXcd>> driving;
};

/// Figure-1 style sweep: one C and lambda per scenario, per-direction solves,
/// NRE on ball grids of each radius factor about every zone center.
SweepReport direction_sweep(const SweepScenario& scenario);

/// CSV: method,theta_deg,phi_deg,radius_factor,zone_index,nre_db (LF, UTF-8).
void write_sweep_csv(const SweepReport& report, std::ostream& os);

/// 72 directions in the horizontal plane (theta = pi/2), evenly spaced phi.
std::vector<std::pair<double, double>> horizontal_directions(int count);

/// Deterministic float formatting: 17 significant digits, scientific.
std::string format_float(double v);

}  // namespace mmfield
