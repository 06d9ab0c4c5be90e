#include "mmfield/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <stdexcept>

#include "parallel.hpp"

namespace mmfield {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kNreFloorDb = -200.0;
}  // namespace

BallGrid ball_grid(const Vec3& center, double radius, double spacing) {
    if (!(radius > 0.0)) throw std::invalid_argument("ball_grid: radius must be > 0");
    if (!(spacing > 0.0)) throw std::invalid_argument("ball_grid: spacing must be > 0");
    BallGrid grid;
    grid.center = center;
    grid.radius = radius;
    grid.spacing = spacing;
    const double limit = radius * (1.0 + 1e-12);
    int m = static_cast<int>(std::floor(limit / spacing));
    double r2 = (limit / spacing) * (limit / spacing);
    for (int i = -m; i <= m; ++i)
        for (int j = -m; j <= m; ++j)
            for (int l = -m; l <= m; ++l) {
                if (static_cast<double>(i) * i + static_cast<double>(j) * j +
                        static_cast<double>(l) * l > r2)
                    continue;
                grid.points.push_back(center + Vec3{i * spacing, j * spacing, l * spacing});
            }
    return grid;
}

std::vector<std::complex<double>> reproduced_pressure(const ArrayGeometry& array,
                                                      const Eigen::VectorXcd& d, Wavenumber k,
                                                      const std::vector<Vec3>& points) {
    if (d.size() != array.size())
        throw std::invalid_argument("reproduced_pressure: driving-signal length mismatch");
    std::vector<std::complex<double>> out(points.size(), 0.0);
    detail::parallel_chunks(points.size(), [&](std::size_t b, std::size_t e) {
        for (std::size_t p = b; p < e; ++p) {
            std::complex<double> acc = 0.0;
            for (int l = 0; l < array.size(); ++l)
                acc += std::complex<double>(d(l)) * green_free(k, array.positions[l], points[p]);
            out[p] = acc;
        }
    });
    return out;
}

double nre(std::span<const std::complex<double>> p_rep,
           std::span<const std::complex<double>> p_des) {
    if (p_rep.size() != p_des.size() || p_rep.empty())
        throw std::invalid_argument("nre: sequences must have equal nonzero length");
    double err = 0.0, des = 0.0;
    for (std::size_t i = 0; i < p_rep.size(); ++i) {
        err += std::norm(p_rep[i] - p_des[i]);
        des += std::norm(p_des[i]);
    }
    if (!(des > 0.0)) throw std::invalid_argument("nre: desired field identically zero");
    double ratio = err / des;
    if (ratio <= 0.0) return kNreFloorDb;
    return std::max(10.0 * std::log10(ratio), kNreFloorDb);
}

std::vector<std::pair<double, double>> horizontal_directions(int count) {
    std::vector<std::pair<double, double>> dirs;
    dirs.reserve(count);
    for (int i = 0; i < count; ++i)
        dirs.emplace_back(kPi / 2.0, 2.0 * kPi * i / count);
    return dirs;
}

std::string format_float(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.16e", v);
    return buf;
}

SweepReport direction_sweep(const SweepScenario& sc) {
    if (sc.directions.empty()) throw std::invalid_argument("direction_sweep: no directions");
    if (sc.methods.empty()) throw std::invalid_argument("direction_sweep: no methods");

    const Wavenumber k = Wavenumber::from_frequency(sc.frequency_hz, sc.speed_of_sound);
    const int n_dir = static_cast<int>(sc.directions.size());
    const int n_meth = static_cast<int>(sc.methods.size());
    const int n_zone = sc.zones.zone_count();

    SweepReport report;
    report.wavenumber = k.k;

    const Eigen::MatrixXcd C = build_transfer_matrix(sc.array, sc.zones, k);
    const double lambda = compute_lambda(C, sc.lambda_factor);
    report.lambda = lambda;

    // Solve phase: driving signals per (direction, method).
    std::vector<Vec3> primaries(n_dir);
    std::vector<std::vector<Eigen::VectorXcd>> d(n_dir);
    std::vector<char> direction_ok(n_dir, 0);
    for (int i = 0; i < n_dir; ++i) {
        auto [theta, phi] = sc.directions[i];
        primaries[i] = from_spherical({sc.primary_distance, theta, phi});
        try {
            Eigen::VectorXcd b = build_primary_vector(primaries[i], sc.zones, k);
            d[i].resize(n_meth);
            for (int m = 0; m < n_meth; ++m) {
                const std::string& method = sc.methods[m];
                if (method == "conventional") {
                    d[i][m] = solve_conventional(C, b, lambda);
                } else if (method == "doa") {
                    ExpansionCoefficients field = interior_expansion_point_source(
                        k, primaries[i], Vec3{}, sc.doa_order);
                    DoAWeights w = doa_weights(field, sc.array, k, sc.doa_order);
                    d[i][m] = solve_doa(C, b, lambda, build_sigma(w, sc.sigma_floor));
                } else {
                    throw std::invalid_argument("direction_sweep: unknown method " + method);
                }
                report.driving.emplace_back(std::to_string(i) + "/" + method, d[i][m]);
            }
            direction_ok[i] = 1;
        } catch (const std::exception& ex) {
            report.errors.push_back("direction " + std::to_string(i) + ": " + ex.what());
        }
    }

    std::vector<double> factors = sc.radius_factors;
    std::sort(factors.begin(), factors.end());
    const int n_fac = static_cast<int>(factors.size());

    // nre_db[dir][method][factor][zone]
    std::vector<double> nre_db(static_cast<std::size_t>(n_dir) * n_meth * n_fac * n_zone, 0.0);
    auto slot = [&](int dir, int m, int f, int q) -> double& {
        return nre_db[((static_cast<std::size_t>(dir) * n_meth + m) * n_fac + f) * n_zone + q];
    };

    // Evaluation phase, one zone at a time: the speaker-to-grid field matrix
    // is direction-independent and is reused across all directions.
    for (int q = 0; q < n_zone; ++q) {
        const double sweet = sc.zones.orders[q] / k.k;
        const double r_max = factors.back() * sweet;
        BallGrid grid = ball_grid(sc.zones.centers[q], r_max, sc.grid_spacing);
        const std::size_t n_pts = grid.points.size();
        const int n_spk = sc.array.size();

        // Radius bin per point: smallest factor whose ball contains it.
        std::vector<int> bin(n_pts);
        for (std::size_t p = 0; p < n_pts; ++p) {
            double dist = (grid.points[p] - grid.center).norm();
            int bidx = n_fac - 1;
            while (bidx > 0 && dist <= factors[bidx - 1] * sweet * (1.0 + 1e-12)) --bidx;
            bin[p] = bidx;
        }

        Eigen::MatrixXcd G(n_pts, n_spk);
        detail::parallel_chunks(n_pts, [&](std::size_t b, std::size_t e) {
            for (std::size_t p = b; p < e; ++p)
                for (int l = 0; l < n_spk; ++l)
                    G(p, l) = green_free(k, sc.array.positions[l], grid.points[p]);
        });

        std::vector<std::complex<double>> p_des(n_pts);
        Eigen::VectorXcd p_rep(n_pts);
        for (int i = 0; i < n_dir; ++i) {
            if (!direction_ok[i]) continue;
            detail::parallel_chunks(n_pts, [&](std::size_t b, std::size_t e) {
                for (std::size_t p = b; p < e; ++p)
                    p_des[p] = green_free(k, primaries[i], grid.points[p]);
            });
            std::vector<double> des_bin(n_fac, 0.0);
            for (std::size_t p = 0; p < n_pts; ++p) des_bin[bin[p]] += std::norm(p_des[p]);
            for (int m = 0; m < n_meth; ++m) {
                p_rep.noalias() = G * d[i][m];
                std::vector<double> err_bin(n_fac, 0.0);
                for (std::size_t p = 0; p < n_pts; ++p)
                    err_bin[bin[p]] += std::norm(p_rep(p) - p_des[p]);
                double err = 0.0, des = 0.0;
                for (int f = 0; f < n_fac; ++f) {
                    err += err_bin[f];
                    des += des_bin[f];
                    double ratio = des > 0.0 ? err / des : 0.0;
                    slot(i, m, f, q) =
                        ratio > 0.0 ? std::max(10.0 * std::log10(ratio), kNreFloorDb)
                                    : kNreFloorDb;
                }
            }
        }
    }

    for (int i = 0; i < n_dir; ++i) {
        if (!direction_ok[i]) continue;
        auto [theta, phi] = sc.directions[i];
        for (int m = 0; m < n_meth; ++m)
            for (int f = 0; f < n_fac; ++f)
                for (int q = 0; q < n_zone; ++q)
                    report.rows.push_back({sc.methods[m], theta * 180.0 / kPi,
                                           phi * 180.0 / kPi, factors[f], q,
                                           slot(i, m, f, q)});
    }
    return report;
}

void write_sweep_csv(const SweepReport& report, std::ostream& os) {
    os << "method,theta_deg,phi_deg,radius_factor,zone_index,nre_db\n";
    for (const auto& row : report.rows)
        os << row.method << ',' << format_float(row.theta_deg) << ','
           << format_float(row.phi_deg) << ',' << format_float(row.radius_factor) << ','
           << row.zone_index << ',' << format_float(row.nre_db) << '\n';
}

}  // namespace mmfield
