#include "mmfield/special_functions.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mmfield::sf {

namespace {

constexpr double kInvSqrt4Pi = 0.28209479177387814;  // 1/sqrt(4*pi)

double sph_j0(double x) {
    if (std::abs(x) < 1e-4) {
        double x2 = x * x;
        return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0);
    }
    return std::sin(x) / x;
}

double sph_j1(double x) {
    if (std::abs(x) < 1e-4) {
        double x2 = x * x;
        return x / 3.0 * (1.0 - x2 / 10.0);
    }
    return std::sin(x) / (x * x) - std::cos(x) / x;
}

// Miller's downward recurrence, normalized against j_0. Stable for x < n
// where upward recurrence loses all accuracy.
double sph_bessel_j_downward(int n, double x) {
    int start = n + 16 + static_cast<int>(std::sqrt(160.0 * n) + 1.5 * x);
    double jp = 0.0;
    double jc = 1e-30;
    double result = 0.0;
    double j0_rec = 0.0;
    for (int i = start; i >= 0; --i) {
        double jm = (2.0 * i + 3.0) / x * jc - jp;
        jp = jc;
        jc = jm;
        if (i == n) result = jc;
        if (std::abs(jc) > 1e250) {
            jc *= 1e-250;
            jp *= 1e-250;
            result *= 1e-250;
        }
    }
    j0_rec = jc;
    return result * (sph_j0(x) / j0_rec);
}

// Table of fully normalized associated Legendre values for m >= 0,
// norm chosen so that Y_n^m = table[idx] * exp(i m phi).
// Condon-Shortley phase is carried by the diagonal recurrence.
void normalized_legendre_table(int order, double cos_t, double sin_t,
                               std::vector<double>& table) {
    table.assign(coefficient_count(order), 0.0);
    auto at = [&](int n, int m) -> double& {
        return table[linear_index(n, m)];
    };
    at(0, 0) = kInvSqrt4Pi;
    for (int m = 1; m <= order; ++m) {
        at(m, m) = -std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * sin_t * at(m - 1, m - 1);
    }
    for (int m = 0; m < order; ++m) {
        at(m + 1, m) = std::sqrt(2.0 * m + 3.0) * cos_t * at(m, m);
    }
    for (int m = 0; m <= order; ++m) {
        for (int n = m + 2; n <= order; ++n) {
            double a = std::sqrt((4.0 * n * n - 1.0) / (static_cast<double>(n) * n - static_cast<double>(m) * m));
            double b = std::sqrt(((n - 1.0) * (n - 1.0) - static_cast<double>(m) * m) /
                                 (4.0 * (n - 1.0) * (n - 1.0) - 1.0));
            at(n, m) = a * (cos_t * at(n - 1, m) - b * at(n - 2, m));
        }
    }
}

}  // namespace

OrderDegree from_linear(std::size_t index) noexcept {
    int n = static_cast<int>(std::sqrt(static_cast<double>(index)));
    // Guard against rounding at perfect squares.
    while (static_cast<std::size_t>(n) * n > index) --n;
    while (static_cast<std::size_t>(n + 1) * (n + 1) <= index) ++n;
    int m = static_cast<int>(index) - n * n - n;
    return {n, m};
}

double sph_bessel_j(int n, double x) {
    if (n < 0) throw std::invalid_argument("sph_bessel_j: order must be >= 0");
    if (!(x >= 0.0) || !std::isfinite(x))
        throw std::invalid_argument("sph_bessel_j: argument must be finite and >= 0");
    if (x == 0.0) return n == 0 ? 1.0 : 0.0;
    if (n == 0) return sph_j0(x);
    if (n == 1) return sph_j1(x);
    if (x > n + 0.5) {
        // Upward recurrence is stable when x dominates the order.
        double jm = sph_j0(x);
        double jc = sph_j1(x);
        for (int i = 1; i < n; ++i) {
            double jp = (2.0 * i + 1.0) / x * jc - jm;
            jm = jc;
            jc = jp;
        }
        return jc;
    }
    return sph_bessel_j_downward(n, x);
}

double sph_neumann_y(int n, double x) {
    if (n < 0) throw std::invalid_argument("sph_neumann_y: order must be >= 0");
    if (!(x > 0.0)) throw std::invalid_argument("sph_neumann_y: argument must be > 0");
    double ym = -std::cos(x) / x;
    if (n == 0) return ym;
    double yc = -std::cos(x) / (x * x) - std::sin(x) / x;
    for (int i = 1; i < n; ++i) {
        double yp = (2.0 * i + 1.0) / x * yc - ym;
        ym = yc;
        yc = yp;
    }
    return yc;
}

std::complex<double> sph_hankel2(int n, double x) {
    if (n < 0) throw std::invalid_argument("sph_hankel2: order must be >= 0");
    if (!(x > 0.0)) throw std::invalid_argument("sph_hankel2: argument must be > 0");
    return {sph_bessel_j(n, x), -sph_neumann_y(n, x)};
}

std::complex<double> sph_hankel2_deriv(int n, double x) {
    if (n < 0) throw std::invalid_argument("sph_hankel2_deriv: order must be >= 0");
    if (!(x > 0.0)) throw std::invalid_argument("sph_hankel2_deriv: argument must be > 0");
    if (n == 0) return -sph_hankel2(1, x);
    return sph_hankel2(n - 1, x) - (n + 1.0) / x * sph_hankel2(n, x);
}

double legendre_p(int n, double x) {
    if (n < 0) throw std::invalid_argument("legendre_p: order must be >= 0");
    double pm = 1.0;
    if (n == 0) return pm;
    double pc = x;
    for (int i = 1; i < n; ++i) {
        double pp = ((2.0 * i + 1.0) * x * pc - i * pm) / (i + 1.0);
        pm = pc;
        pc = pp;
    }
    return pc;
}

void legendre_p_all(int order, double x, std::vector<double>& out) {
    out.resize(order + 1);
    out[0] = 1.0;
    if (order == 0) return;
    out[1] = x;
    for (int i = 1; i < order; ++i)
        out[i + 1] = ((2.0 * i + 1.0) * x * out[i] - i * out[i - 1]) / (i + 1.0);
}

void sph_bessel_j_all(int order, double x, std::vector<double>& out) {
    out.resize(order + 1);
    if (x == 0.0) {
        out[0] = 1.0;
        for (int i = 1; i <= order; ++i) out[i] = 0.0;
        return;
    }
    if (x > order + 0.5) {
        out[0] = sph_j0(x);
        if (order >= 1) out[1] = sph_j1(x);
        for (int i = 1; i < order; ++i)
            out[i + 1] = (2.0 * i + 1.0) / x * out[i] - out[i - 1];
        return;
    }
    for (int i = 0; i <= order; ++i) out[i] = sph_bessel_j(i, x);
}

void sph_hankel2_all(int order, double x, std::vector<std::complex<double>>& out) {
    if (!(x > 0.0)) throw std::invalid_argument("sph_hankel2_all: argument must be > 0");
    out.resize(order + 1);
    std::vector<double> j;
    sph_bessel_j_all(order, x, j);
    double ym = -std::cos(x) / x;
    out[0] = {j[0], -ym};
    if (order == 0) return;
    double yc = -std::cos(x) / (x * x) - std::sin(x) / x;
    out[1] = {j[1], -yc};
    for (int i = 1; i < order; ++i) {
        double yp = (2.0 * i + 1.0) / x * yc - ym;
        ym = yc;
        yc = yp;
        out[i + 1] = {j[i + 1], -yc};
    }
}

std::complex<double> sph_harm(int n, int m, double theta, double phi) {
    if (n < 0 || std::abs(m) > n)
        throw std::invalid_argument("sph_harm: require n >= 0 and |m| <= n");
    int ma = std::abs(m);
    std::vector<double> table;
    normalized_legendre_table(n, std::cos(theta), std::sin(theta), table);
    double p = table[linear_index(n, ma)];
    std::complex<double> y = p * std::polar(1.0, ma * phi);
    if (m < 0) {
        y = std::conj(y);
        if (ma & 1) y = -y;
    }
    return y;
}

void sph_harm_all(int order, double theta, double phi,
                  std::vector<std::complex<double>>& out) {
    std::vector<double> table;
    normalized_legendre_table(order, std::cos(theta), std::sin(theta), table);
    out.resize(coefficient_count(order));
    for (int n = 0; n <= order; ++n) {
        out[linear_index(n, 0)] = table[linear_index(n, 0)];
        for (int m = 1; m <= n; ++m) {
            std::complex<double> y = table[linear_index(n, m)] * std::polar(1.0, m * phi);
            out[linear_index(n, m)] = y;
            out[linear_index(n, -m)] = (m & 1) ? -std::conj(y) : std::conj(y);
        }
    }
}

}  // namespace mmfield::sf
