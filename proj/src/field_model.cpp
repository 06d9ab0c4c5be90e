#include "mmfield/field_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mmfield/special_functions.hpp"

namespace mmfield {

namespace {
constexpr double kPi = std::numbers::pi;
}

double Vec3::norm() const { return std::sqrt(x * x + y * y + z * z); }

Spherical to_spherical(const Vec3& v) {
    double r = v.norm();
    if (r == 0.0) return {0.0, 0.0, 0.0};
    double theta = std::acos(std::clamp(v.z / r, -1.0, 1.0));
    double phi = std::atan2(v.y, v.x);
    return {r, theta, phi};
}

Vec3 from_spherical(const Spherical& s) {
    double st = std::sin(s.theta);
    return {s.r * st * std::cos(s.phi), s.r * st * std::sin(s.phi),
            s.r * std::cos(s.theta)};
}

Wavenumber Wavenumber::from_frequency(double frequency_hz, double speed_of_sound) {
    if (!(frequency_hz > 0.0) || !(speed_of_sound > 0.0))
        throw std::invalid_argument("Wavenumber: frequency and speed of sound must be > 0");
    return {2.0 * kPi * frequency_hz / speed_of_sound};
}

std::complex<double> green_free(Wavenumber k, const Vec3& src, const Vec3& obs) {
    double d = (obs - src).norm();
    if (d <= 0.0)
        throw std::invalid_argument("green_free: source and observation point coincide");
    return std::polar(1.0 / (4.0 * kPi * d), -k.k * d);
}

ExpansionCoefficients interior_expansion_point_source(Wavenumber k, const Vec3& src,
                                                      const Vec3& origin, int order) {
    if (order < 0) throw std::invalid_argument("interior_expansion_point_source: order must be >= 0");
    Spherical rel = to_spherical(src - origin);
    if (rel.r <= 0.0)
        throw std::invalid_argument("interior_expansion_point_source: source at expansion origin");

    std::vector<std::complex<double>> hank;
    sf::sph_hankel2_all(order, k.k * rel.r, hank);
    std::vector<std::complex<double>> harm;
    sf::sph_harm_all(order, rel.theta, rel.phi, harm);

    ExpansionCoefficients out;
    out.origin = origin;
    out.order = order;
    out.values.resize(sf::coefficient_count(order));
    const std::complex<double> minus_jk(0.0, -k.k);
    for (int n = 0; n <= order; ++n) {
        for (int m = -n; m <= n; ++m) {
            std::size_t i = sf::linear_index(n, m);
            out.values[i] = minus_jk * hank[n] * std::conj(harm[i]);
        }
    }
    return out;
}

std::complex<double> synthesize_from_coefficients(const ExpansionCoefficients& coeffs,
                                                  Wavenumber k, const Vec3& obs) {
    Spherical rel = to_spherical(obs - coeffs.origin);
    std::vector<double> bess;
    sf::sph_bessel_j_all(coeffs.order, k.k * rel.r, bess);
    std::vector<std::complex<double>> harm;
    sf::sph_harm_all(coeffs.order, rel.theta, rel.phi, harm);
    std::complex<double> acc = 0.0;
    for (int n = 0; n <= coeffs.order; ++n) {
        std::complex<double> inner = 0.0;
        for (int m = -n; m <= n; ++m) {
            std::size_t i = sf::linear_index(n, m);
            inner += coeffs.values[i] * harm[i];
        }
        acc += bess[n] * inner;
    }
    return acc;
}

}  // namespace mmfield
