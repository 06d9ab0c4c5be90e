#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "mmfield/binaural.hpp"
#include "mmfield/evaluation.hpp"

namespace mmfield {

struct GeometrySpec {
    std::string file;       // point file, one "x y z" per line
    std::string generator;  // "fibonacci" when no file is given
    int count = 0;
    double radius = 0.0;
};

struct FrequencySweep {
    double start_hz = 100.0;
    double stop_hz = 8000.0;
    int count = 50;
};

/// One experiment description, loaded from a JSON document.
struct Scenario {
    int version = 1;
    double speed_of_sound = 343.0;
    GeometrySpec geometry;
    std::vector<Vec3> zone_centers;
    int zone_order = 6;
    double frequency_hz = 1000.0;
    FrequencySweep frequency_sweep;
    double primary_distance = 2.0;
    std::vector<std::pair<double, double>> directions;  // (theta, phi) radians
    double lambda_factor = 1e-3;
    double sigma_floor = 1e-3;
    int doa_order = 6;
    std::vector<std::string> methods{"conventional", "doa"};
    double grid_spacing = 0.01;
    std::vector<double> radius_factors{0.8, 1.0, 1.2};
    double head_radius = 0.0875;
    double zone_offset = 0.0705;
    std::vector<std::string> binaural_methods{"MM", "BCMM_conv", "BCMM_doa"};
};

Scenario load_scenario(const std::string& path);
Scenario parse_scenario(const std::string& json_text);

/// Empty when valid; otherwise one message per offending field, each naming
/// the field.
std::vector<std::string> validate_scenario(const Scenario& scenario);

ArrayGeometry fibonacci_sphere(int count, double radius);
ArrayGeometry load_geometry_file(const std::string& path);
ArrayGeometry load_geometry(const GeometrySpec& spec);
void save_geometry(const ArrayGeometry& array, std::ostream& os);

SweepScenario make_sweep_scenario(const Scenario& scenario);
BinauralScenario make_binaural_scenario(const Scenario& scenario);

// Exit codes: 0 success, 2 validation error, 3 numerical failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

/// command is one of validate | solve | sweep | binaural; artifacts are
/// written under out_dir, progress and derived quantities to log.
int run_command(const std::string& command, const Scenario& scenario,
                const std::string& out_dir, std::ostream& log);

}  // namespace mmfield
