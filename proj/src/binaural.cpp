#include "mmfield/binaural.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mmfield/special_functions.hpp"

namespace mmfield {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kNeFloorDb = -200.0;
}  // namespace

std::complex<double> rigid_sphere_pressure(Wavenumber k, const HeadModel& head, const Vec3& src,
                                           Ear ear, int extra_order) {
    const double a = head.radius;
    Vec3 rel = src - head.center;
    double r_s = rel.norm();
    if (r_s <= a)
        throw std::invalid_argument("rigid_sphere_pressure: source inside the head sphere");

    Vec3 ear_dir = head.ear_position(ear) - head.center;
    double cos_gamma =
        std::clamp(ear_dir.dot(rel) / (ear_dir.norm() * r_s), -1.0, 1.0);

    const double ka = k.k * a;
    int order = static_cast<int>(std::ceil(ka)) + extra_order;

    std::vector<std::complex<double>> h_rs, h_a;
    sf::sph_hankel2_all(order + 1, k.k * r_s, h_rs);
    sf::sph_hankel2_all(order + 1, ka, h_a);
    std::vector<double> leg;
    sf::legendre_p_all(order, cos_gamma, leg);

    // Neumann boundary condition on the sphere surface; the Wronskian of
    // j_n and h_n^{(2)} collapses the radial factor to -i / ((ka)^2 h_n').
    std::complex<double> acc = 0.0;
    for (int n = 0; n <= order; ++n) {
        std::complex<double> h_deriv =
            n == 0 ? -h_a[1] : h_a[n - 1] - (n + 1.0) / ka * h_a[n];
        acc += (2.0 * n + 1.0) * leg[n] * h_rs[n] / h_deriv;
    }
    return -k.k / (4.0 * kPi * ka * ka) * acc;
}

std::vector<double> log_spaced(double f_start, double f_stop, int count) {
    if (!(f_start > 0.0) || !(f_stop > f_start) || count < 2)
        throw std::invalid_argument("log_spaced: need 0 < f_start < f_stop and count >= 2");
    std::vector<double> f(count);
    double l0 = std::log10(f_start), l1 = std::log10(f_stop);
    for (int i = 0; i < count; ++i)
        f[i] = std::pow(10.0, l0 + (l1 - l0) * i / (count - 1));
    return f;
}

BinauralReport binaural_ne(const BinauralScenario& sc,
                           const std::vector<double>& frequencies_hz) {
    BinauralReport report;
    const ZoneSet zones_mm = ZoneSet::uniform({sc.head.center}, sc.order);
    const ZoneSet zones_bcmm = ZoneSet::uniform(
        {sc.head.center + Vec3{0.0, sc.zone_offset, 0.0},
         sc.head.center + Vec3{0.0, -sc.zone_offset, 0.0}},
        sc.order);

    const Ear ears[2] = {Ear::Left, Ear::Right};
    const char ear_tag[2] = {'L', 'R'};

    for (double f : frequencies_hz) {
        try {
            Wavenumber k = Wavenumber::from_frequency(f, sc.speed_of_sound);

            // Ear transfer functions through the head, shared by all methods.
            std::complex<double> p_des[2];
            std::vector<std::complex<double>> speaker_to_ear[2];
            for (int e = 0; e < 2; ++e) {
                p_des[e] = rigid_sphere_pressure(k, sc.head, sc.primary, ears[e]);
                speaker_to_ear[e].resize(sc.array.size());
                for (int l = 0; l < sc.array.size(); ++l)
                    speaker_to_ear[e][l] =
                        rigid_sphere_pressure(k, sc.head, sc.array.positions[l], ears[e]);
            }

            auto solve_for = [&](const std::string& method) -> Eigen::VectorXcd {
                const ZoneSet& zones = method == "MM" ? zones_mm : zones_bcmm;
                Eigen::MatrixXcd C = build_transfer_matrix(sc.array, zones, k);
                double lambda = compute_lambda(C, sc.lambda_factor);
                Eigen::VectorXcd b = build_primary_vector(sc.primary, zones, k);
                if (method == "BCMM_doa") {
                    ExpansionCoefficients field = interior_expansion_point_source(
                        k, sc.primary, sc.head.center, sc.doa_order);
                    DoAWeights w = doa_weights(field, sc.array, k, sc.doa_order);
                    return solve_doa(C, b, lambda, build_sigma(w, sc.sigma_floor));
                }
                if (method == "MM" || method == "BCMM_conv")
                    return solve_conventional(C, b, lambda);
                throw std::invalid_argument("binaural_ne: unknown method " + method);
            };

            for (const std::string& method : sc.methods) {
                Eigen::VectorXcd d = solve_for(method);
                for (int e = 0; e < 2; ++e) {
                    std::complex<double> p_rep = 0.0;
                    for (int l = 0; l < sc.array.size(); ++l)
                        p_rep += d(l) * speaker_to_ear[e][l];
                    double des = std::norm(p_des[e]);
                    if (!(des > 0.0))
                        throw std::runtime_error("binaural_ne: zero desired ear pressure");
                    double ratio = std::norm(p_rep - p_des[e]) / des;
                    double ne = ratio > 0.0 ? std::max(10.0 * std::log10(ratio), kNeFloorDb)
                                            : kNeFloorDb;
                    report.rows.push_back({method, ear_tag[e], f, ne});
                }
            }
        } catch (const std::exception& ex) {
            report.errors.push_back("frequency " + std::to_string(f) + " Hz: " + ex.what());
        }
    }
    return report;
}

void write_binaural_csv(const BinauralReport& report, std::ostream& os) {
    os << "method,ear,frequency_hz,ne_db\n";
    for (const auto& row : report.rows) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.16e", row.frequency_hz);
        os << row.method << ',' << row.ear << ',' << buf << ',';
        std::snprintf(buf, sizeof(buf), "%.16e", row.ne_db);
        os << buf << '\n';
    }
}

}  // namespace mmfield
