#pragma once

#include <complex>
#include <vector>

namespace mmfield {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const;
};

// theta is colatitude from +z in [0, pi], phi azimuth from +x.
struct Spherical {
    double r;
    double theta;
    double phi;
};

Spherical to_spherical(const Vec3& v);
Vec3 from_spherical(const Spherical& s);

struct Wavenumber {
    double k;  // rad/m, > 0
    static Wavenumber from_frequency(double frequency_hz, double speed_of_sound);
};

/// Interior spherical-harmonic coefficients up to `order` about `origin`,
/// stored at linear index n^2 + n + m.
struct ExpansionCoefficients {
    Vec3 origin;
    int order = 0;
    std::vector<std::complex<double>> values;
};

/// Free-field point-source field e^{-jkd}/(4 pi d), d = |obs - src|.
/// Time convention e^{+j omega t}; outgoing waves carry h_n^{(2)}.
std::complex<double> green_free(Wavenumber k, const Vec3& src, const Vec3& obs);

/// Re-centered interior expansion of a point source about `origin`, valid for
/// observation points with |obs - origin| < |src - origin|.
ExpansionCoefficients interior_expansion_point_source(Wavenumber k, const Vec3& src,
                                                      const Vec3& origin, int order);

/// Evaluates sum_{n,m} c_nm j_n(k r) Y_n^m at obs, r relative to the origin
/// of the expansion. Validity of obs is the caller's contract.
std::complex<double> synthesize_from_coefficients(const ExpansionCoefficients& coeffs,
                                                  Wavenumber k, const Vec3& obs);

}  // namespace mmfield
