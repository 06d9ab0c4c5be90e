#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace mmfield::sf {

// (n, m) with |m| <= n; linear index n^2 + n + m enumerates all modes up to
// a truncation order contiguously.
struct OrderDegree {
    int n;
    int m;
};

constexpr std::size_t linear_index(int n, int m) noexcept {
    return static_cast<std::size_t>(n) * (n + 1) + m;
}

constexpr std::size_t coefficient_count(int order) noexcept {
    return static_cast<std::size_t>(order + 1) * (order + 1);
}

OrderDegree from_linear(std::size_t index) noexcept;

/// Spherical Bessel function of the first kind j_n(x), x >= 0.
double sph_bessel_j(int n, double x);

/// Spherical Bessel function of the second kind y_n(x), x > 0.
double sph_neumann_y(int n, double x);

/// Spherical Hankel function of the second kind h_n^{(2)}(x) = j_n(x) - i y_n(x).
std::complex<double> sph_hankel2(int n, double x);

/// d/dx h_n^{(2)}(x).
std::complex<double> sph_hankel2_deriv(int n, double x);

/// Complex orthonormal spherical harmonic Y_n^m(theta, phi) with
/// Condon-Shortley phase; theta is colatitude from +z, phi azimuth from +x.
std::complex<double> sph_harm(int n, int m, double theta, double phi);

/// Legendre polynomial P_n(x).
double legendre_p(int n, double x);

// Batch evaluators; out is resized as needed.
void sph_bessel_j_all(int order, double x, std::vector<double>& out);
void sph_hankel2_all(int order, double x, std::vector<std::complex<double>>& out);
void legendre_p_all(int order, double x, std::vector<double>& out);

/// All Y_n^m for n <= order at (theta, phi), stored at linear_index(n, m).
void sph_harm_all(int order, double theta, double phi,
                  std::vector<std::complex<double>>& out);

}  // namespace mmfield::sf
