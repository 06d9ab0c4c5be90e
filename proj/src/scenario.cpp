#include "mmfield/scenario.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace mmfield {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDeg = kPi / 180.0;

using nlohmann::json;

Vec3 parse_vec3(const json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 3)
        throw std::runtime_error(field + ": expected an array of 3 numbers");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

}  // namespace

Scenario parse_scenario(const std::string& json_text) {
    json j = json::parse(json_text);
    Scenario sc;
    sc.version = j.value("version", 1);

    sc.speed_of_sound = j.value("speed_of_sound", sc.speed_of_sound);
    if (j.contains("geometry")) {
        const json& g = j["geometry"];
        sc.geometry.file = g.value("file", "");
        sc.geometry.generator = g.value("generator", "");
        sc.geometry.count = g.value("count", 0);
        sc.geometry.radius = g.value("radius", 0.0);
    }
    if (j.contains("zones")) {
        const json& z = j["zones"];
        if (z.contains("centers"))
            for (const auto& c : z["centers"])
                sc.zone_centers.push_back(parse_vec3(c, "zones.centers"));
        sc.zone_order = z.value("order", sc.zone_order);
    }
    sc.frequency_hz = j.value("frequency_hz", sc.frequency_hz);
    if (j.contains("frequency_sweep")) {
        const json& f = j["frequency_sweep"];
        sc.frequency_sweep.start_hz = f.value("start_hz", sc.frequency_sweep.start_hz);
        sc.frequency_sweep.stop_hz = f.value("stop_hz", sc.frequency_sweep.stop_hz);
        sc.frequency_sweep.count = f.value("count", sc.frequency_sweep.count);
    }
    if (j.contains("primary")) {
        const json& p = j["primary"];
        sc.primary_distance = p.value("distance_m", sc.primary_distance);
        if (p.contains("directions_deg")) {
            for (const auto& d : p["directions_deg"]) {
                if (!d.is_array() || d.size() != 2)
                    throw std::runtime_error("primary.directions_deg: expected [theta, phi] pairs");
                sc.directions.emplace_back(d[0].get<double>() * kDeg, d[1].get<double>() * kDeg);
            }
        } else {
            int count = p.value("azimuth_count", 72);
            double elev = p.value("elevation_deg", 0.0);
            double theta = (90.0 - elev) * kDeg;
            for (int i = 0; i < count; ++i)
                sc.directions.emplace_back(theta, 2.0 * kPi * i / count);
        }
    }
    sc.lambda_factor = j.value("lambda_factor", sc.lambda_factor);
    sc.sigma_floor = j.value("sigma_floor", sc.sigma_floor);
    sc.doa_order = j.value("doa_order", sc.doa_order);
    if (j.contains("methods"))
        sc.methods = j["methods"].get<std::vector<std::string>>();
    sc.grid_spacing = j.value("grid_spacing_m", sc.grid_spacing);
    if (j.contains("radius_factors"))
        sc.radius_factors = j["radius_factors"].get<std::vector<double>>();
    if (j.contains("binaural")) {
        const json& b = j["binaural"];
        sc.head_radius = b.value("head_radius_m", sc.head_radius);
        sc.zone_offset = b.value("zone_offset_m", sc.zone_offset);
        if (b.contains("methods"))
            sc.binaural_methods = b["methods"].get<std::vector<std::string>>();
    }
    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open scenario file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

std::vector<std::string> validate_scenario(const Scenario& sc) {
    std::vector<std::string> errors;
    auto req = [&](bool ok, const std::string& msg) {
        if (!ok) errors.push_back(msg);
    };
    req(sc.speed_of_sound > 0.0, "speed_of_sound: must be > 0");
    req(!sc.geometry.file.empty() || sc.geometry.generator == "fibonacci",
        "geometry: need a file or the fibonacci generator");
    if (sc.geometry.file.empty() && sc.geometry.generator == "fibonacci") {
        req(sc.geometry.count > 0, "geometry.count: must be > 0");
        req(sc.geometry.radius > 0.0, "geometry.radius: must be > 0");
    }
    req(!sc.zone_centers.empty(), "zones.centers: at least one zone required");
    req(sc.zone_order >= 0, "zones.order: must be >= 0");
    req(sc.frequency_hz > 0.0, "frequency_hz: must be > 0");
    req(sc.frequency_sweep.start_hz > 0.0, "frequency_sweep.start_hz: must be > 0");
    req(sc.frequency_sweep.stop_hz > sc.frequency_sweep.start_hz,
        "frequency_sweep.stop_hz: must be > start_hz");
    req(sc.frequency_sweep.count >= 2, "frequency_sweep.count: must be >= 2");
    req(sc.primary_distance > 0.0, "primary.distance_m: must be > 0");
    req(!sc.directions.empty(), "primary: at least one direction required");
    req(sc.lambda_factor > 0.0, "lambda_factor: must be > 0");
    req(sc.sigma_floor > 0.0 && sc.sigma_floor <= 1.0, "sigma_floor: must be in (0, 1]");
    req(sc.doa_order >= 0, "doa_order: must be >= 0");
    req(!sc.methods.empty(), "methods: at least one method required");
    for (const auto& m : sc.methods)
        req(m == "conventional" || m == "doa", "methods: unknown method '" + m + "'");
    req(sc.grid_spacing > 0.0, "grid_spacing_m: must be > 0");
    req(!sc.radius_factors.empty(), "radius_factors: at least one factor required");
    for (double f : sc.radius_factors)
        req(f > 0.0, "radius_factors: factors must be > 0");
    req(sc.head_radius > 0.0, "binaural.head_radius_m: must be > 0");
    req(sc.zone_offset > 0.0, "binaural.zone_offset_m: must be > 0");
    for (const auto& m : sc.binaural_methods)
        req(m == "MM" || m == "BCMM_conv" || m == "BCMM_doa",
            "binaural.methods: unknown method '" + m + "'");

    if (errors.empty()) {
        // Geometry-dependent checks: zones must lie inside the array.
        try {
            ArrayGeometry array = load_geometry(sc.geometry);
            double min_r = array.positions.front().norm();
            for (const auto& p : array.positions) min_r = std::min(min_r, p.norm());
            for (std::size_t q = 0; q < sc.zone_centers.size(); ++q)
                if (sc.zone_centers[q].norm() >= min_r)
                    errors.push_back("zones.centers[" + std::to_string(q) +
                                     "]: zone center outside the loudspeaker array");
            if (sc.primary_distance <= min_r)
                errors.push_back("primary.distance_m: primary source inside the array");
        } catch (const std::exception& ex) {
            errors.push_back(std::string("geometry: ") + ex.what());
        }
    }
    return errors;
}

ArrayGeometry fibonacci_sphere(int count, double radius) {
    if (count < 1) throw std::invalid_argument("fibonacci_sphere: count must be >= 1");
    if (!(radius > 0.0)) throw std::invalid_argument("fibonacci_sphere: radius must be > 0");
    ArrayGeometry array;
    array.label = "fibonacci-" + std::to_string(count);
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
        double z = 1.0 - 2.0 * (i + 0.5) / count;
        double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
        double phi = golden * i;
        array.positions.push_back({radius * rho * std::cos(phi),
                                   radius * rho * std::sin(phi), radius * z});
    }
    return array;
}

ArrayGeometry load_geometry_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open geometry file: " + path);
    ArrayGeometry array;
    array.label = path;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string stripped = line.substr(0, line.find('#'));
        std::istringstream ss(stripped);
        double x, y, z;
        if (!(ss >> x)) continue;  // blank or comment-only line
        if (!(ss >> y >> z)) {
            throw std::runtime_error("geometry file " + path + " line " +
                                     std::to_string(line_no) + ": expected 'x y z'");
        }
        double extra;
        if (ss >> extra)
            throw std::runtime_error("geometry file " + path + " line " +
                                     std::to_string(line_no) + ": trailing fields");
        array.positions.push_back({x, y, z});
    }
    if (array.positions.empty())
        throw std::runtime_error("geometry file " + path + ": no points");
    return array;
}

ArrayGeometry load_geometry(const GeometrySpec& spec) {
    if (!spec.file.empty()) return load_geometry_file(spec.file);
    if (spec.generator == "fibonacci") return fibonacci_sphere(spec.count, spec.radius);
    throw std::runtime_error("geometry: no file and no known generator");
}

void save_geometry(const ArrayGeometry& array, std::ostream& os) {
    os << "# loudspeaker positions, meters, one 'x y z' per line\n";
    for (const auto& p : array.positions)
        os << format_float(p.x) << ' ' << format_float(p.y) << ' ' << format_float(p.z)
           << '\n';
}

SweepScenario make_sweep_scenario(const Scenario& sc) {
    SweepScenario out;
    out.array = load_geometry(sc.geometry);
    out.zones = ZoneSet::uniform(sc.zone_centers, sc.zone_order);
    out.frequency_hz = sc.frequency_hz;
    out.speed_of_sound = sc.speed_of_sound;
    out.primary_distance = sc.primary_distance;
    out.directions = sc.directions;
    out.methods = sc.methods;
    out.lambda_factor = sc.lambda_factor;
    out.sigma_floor = sc.sigma_floor;
    out.doa_order = sc.doa_order;
    out.radius_factors = sc.radius_factors;
    out.grid_spacing = sc.grid_spacing;
    return out;
}

BinauralScenario make_binaural_scenario(const Scenario& sc) {
    BinauralScenario out;
    out.array = load_geometry(sc.geometry);
    auto [theta, phi] = sc.directions.front();
    out.primary = from_spherical({sc.primary_distance, theta, phi});
    out.speed_of_sound = sc.speed_of_sound;
    out.lambda_factor = sc.lambda_factor;
    out.sigma_floor = sc.sigma_floor;
    out.order = sc.zone_order;
    out.doa_order = sc.doa_order;
    out.zone_offset = sc.zone_offset;
    out.head.radius = sc.head_radius;
    out.methods = sc.binaural_methods;
    return out;
}

namespace {

void write_errors(const std::vector<std::string>& errors, const std::string& out_dir,
                  const std::string& name) {
    if (errors.empty()) return;
    std::ofstream out(std::filesystem::path(out_dir) / name, std::ios::binary);
    for (const auto& e : errors) out << e << '\n';
}

int run_solve(const Scenario& sc, const std::string& out_dir, std::ostream& log) {
    SweepScenario ss = make_sweep_scenario(sc);
    Wavenumber k = Wavenumber::from_frequency(ss.frequency_hz, ss.speed_of_sound);
    Eigen::MatrixXcd C = build_transfer_matrix(ss.array, ss.zones, k);
    double lambda = compute_lambda(C, ss.lambda_factor);
    auto [theta, phi] = ss.directions.front();
    Vec3 primary = from_spherical({ss.primary_distance, theta, phi});
    Eigen::VectorXcd b = build_primary_vector(primary, ss.zones, k);
    for (const std::string& method : ss.methods) {
        Eigen::VectorXcd d;
        if (method == "conventional") {
            d = solve_conventional(C, b, lambda);
        } else {
            ExpansionCoefficients field =
                interior_expansion_point_source(k, primary, Vec3{}, ss.doa_order);
            DoAWeights w = doa_weights(field, ss.array, k, ss.doa_order);
            d = solve_doa(C, b, lambda, build_sigma(w, ss.sigma_floor));
        }
        std::ofstream out(std::filesystem::path(out_dir) / ("driving_" + method + ".csv"),
                          std::ios::binary);
        out << "loudspeaker_index,re,im\n";
        for (int l = 0; l < d.size(); ++l)
            out << l << ',' << format_float(d(l).real()) << ',' << format_float(d(l).imag())
                << '\n';
        log << "wrote driving_" << method << ".csv (" << d.size() << " loudspeakers)\n";
    }
    return kExitOk;
}

int run_sweep(const Scenario& sc, const std::string& out_dir, std::ostream& log) {
    SweepScenario ss = make_sweep_scenario(sc);
    SweepReport report = direction_sweep(ss);
    {
        std::ofstream out(std::filesystem::path(out_dir) / "sweep.csv", std::ios::binary);
        write_sweep_csv(report, out);
    }
    write_errors(report.errors, out_dir, "sweep_errors.txt");
    log << "wrote sweep.csv (" << report.rows.size() << " rows, " << report.errors.size()
        << " failed directions)\n";
    return report.errors.empty() ? kExitOk : kExitNumerical;
}

int run_binaural(const Scenario& sc, const std::string& out_dir, std::ostream& log) {
    BinauralScenario bs = make_binaural_scenario(sc);
    std::vector<double> freqs = log_spaced(sc.frequency_sweep.start_hz,
                                           sc.frequency_sweep.stop_hz,
                                           sc.frequency_sweep.count);
    BinauralReport report = binaural_ne(bs, freqs);
    {
        std::ofstream out(std::filesystem::path(out_dir) / "binaural.csv", std::ios::binary);
        write_binaural_csv(report, out);
    }
    write_errors(report.errors, out_dir, "binaural_errors.txt");
    log << "wrote binaural.csv (" << report.rows.size() << " rows, " << report.errors.size()
        << " failed frequencies)\n";
    return report.errors.empty() ? kExitOk : kExitNumerical;
}

int run_validate(const Scenario& sc, std::ostream& log) {
    SweepScenario ss = make_sweep_scenario(sc);
    Wavenumber k = Wavenumber::from_frequency(ss.frequency_hz, ss.speed_of_sound);
    log << "loudspeakers: " << ss.array.size() << '\n';
    log << "zones: " << ss.zones.zone_count() << " (order " << sc.zone_order << ")\n";
    log << "k = " << k.k << " rad/m at " << ss.frequency_hz << " Hz (c = "
        << ss.speed_of_sound << " m/s)\n";
    double sweet = sc.zone_order / k.k;
    log << "sweet-spot radius N/k = " << sweet << " m\n";
    for (double f : ss.radius_factors)
        log << "  evaluation radius " << f << " * N/k = " << f * sweet << " m\n";
    Eigen::MatrixXcd C = build_transfer_matrix(ss.array, ss.zones, k);
    log << "C: " << C.rows() << " x " << C.cols() << '\n';
    log << "lambda = " << compute_lambda(C, ss.lambda_factor) << " (factor "
        << ss.lambda_factor << ")\n";
    log << "primary distance = " << ss.primary_distance
        << " m (scenario parameter, no canonical default)\n";
    return kExitOk;
}

}  // namespace

int run_command(const std::string& command, const Scenario& sc, const std::string& out_dir,
                std::ostream& log) {
    std::vector<std::string> errors = validate_scenario(sc);
    if (!errors.empty()) {
        for (const auto& e : errors) log << "invalid scenario: " << e << '\n';
        return kExitValidation;
    }
    if (command != "validate") std::filesystem::create_directories(out_dir);
    try {
        if (command == "validate") return run_validate(sc, log);
        if (command == "solve") return run_solve(sc, out_dir, log);
        if (command == "sweep") return run_sweep(sc, out_dir, log);
        if (command == "binaural") return run_binaural(sc, out_dir, log);
    } catch (const std::exception& ex) {
        log << "error: " << ex.what() << '\n';
        return kExitNumerical;
    }
    log << "unknown command: " << command << '\n';
    return kExitValidation;
}

}  // namespace mmfield
