#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mmfield/mode_matching.hpp"
#include "mmfield/scenario.hpp"
#include "mmfield/special_functions.hpp"

using namespace mmfield;
using std::complex;
constexpr double kPi = std::numbers::pi;

namespace {

Eigen::MatrixXcd random_complex_matrix(int rows, int cols, std::mt19937& rng) {
    std::normal_distribution<double> nd(0.0, 1.0);
    Eigen::MatrixXcd m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = complex<double>(nd(rng), nd(rng));
    return m;
}

Eigen::VectorXcd random_complex_vector(int rows, std::mt19937& rng) {
    std::normal_distribution<double> nd(0.0, 1.0);
    Eigen::VectorXcd v(rows);
    for (int i = 0; i < rows; ++i) v(i) = complex<double>(nd(rng), nd(rng));
    return v;
}

// Independent SVD route for the weighted Tikhonov problem.
Eigen::VectorXcd svd_regularized_solve(const Eigen::MatrixXcd& C, const Eigen::VectorXcd& b,
                                       double lambda, const Eigen::VectorXd& sigma) {
    Eigen::VectorXd s_isqrt = sigma.cwiseSqrt().cwiseInverse();
    Eigen::MatrixXcd Ct = C * s_isqrt.asDiagonal();
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(Ct, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    Eigen::VectorXcd ub = svd.matrixU().adjoint() * b;
    Eigen::VectorXcd scaled(sv.size());
    for (int i = 0; i < sv.size(); ++i)
        scaled(i) = ub(i) * (sv(i) / (sv(i) * sv(i) + lambda));
    return s_isqrt.asDiagonal() * (svd.matrixV() * scaled);
}

double power_iteration_max_eig(const Eigen::MatrixXcd& C, std::mt19937& rng) {
    Eigen::VectorXcd v = random_complex_vector(static_cast<int>(C.cols()), rng);
    v.normalize();
    double eig = 0.0;
    for (int it = 0; it < 2000; ++it) {
        Eigen::VectorXcd w = C.adjoint() * (C * v);
        double next = w.norm();
        v = w / next;
        if (std::abs(next - eig) <= 1e-13 * next) {
            eig = next;
            break;
        }
        eig = next;
    }
    return eig;
}

double objective(const Eigen::MatrixXcd& C, const Eigen::VectorXcd& b,
                 const Eigen::VectorXcd& d, double lambda, const Eigen::VectorXd& sigma) {
    return (C * d - b).squaredNorm() + lambda * (sigma.cwiseSqrt().asDiagonal() * d).squaredNorm();
}

struct PaperSetup {
    ArrayGeometry array = fibonacci_sphere(121, 1.5);
    ZoneSet zones = ZoneSet::uniform({{0.5, 0, 0}, {-0.5, 0, 0}}, 6);
    Wavenumber k = Wavenumber::from_frequency(1000.0, 343.0);
};

}  // namespace

TEST_CASE("transfer matrix shape and columns") {
    PaperSetup ps;
    Eigen::MatrixXcd C = build_transfer_matrix(ps.array, ps.zones, ps.k);
    CHECK(C.rows() == 98);
    CHECK(C.cols() == 121);

    // Any column is the stacked interior expansion of that loudspeaker.
    int l = 37;
    for (int q = 0; q < 2; ++q) {
        auto c = interior_expansion_point_source(ps.k, ps.array.positions[l],
                                                 ps.zones.centers[q], 6);
        int off = ps.zones.row_offset(q);
        for (int i = 0; i < 49; ++i)
            CHECK(std::abs(C(off + i, l) - c.values[i]) == 0.0);
    }
}

TEST_CASE("single zone at origin reduces to global mode matching") {
    ArrayGeometry array = fibonacci_sphere(40, 1.5);
    ZoneSet one = ZoneSet::uniform({{0, 0, 0}}, 4);
    Wavenumber k{10.0};
    Eigen::MatrixXcd C = build_transfer_matrix(array, one, k);
    CHECK(C.rows() == 25);
    for (int l = 0; l < array.size(); ++l) {
        auto c = interior_expansion_point_source(k, array.positions[l], Vec3{}, 4);
        for (int i = 0; i < 25; ++i) CHECK(C(i, l) == c.values[i]);
    }
}

TEST_CASE("primary vector matches a coincident loudspeaker column") {
    PaperSetup ps;
    Eigen::MatrixXcd C = build_transfer_matrix(ps.array, ps.zones, ps.k);
    int l = 11;
    Eigen::VectorXcd b = build_primary_vector(ps.array.positions[l], ps.zones, ps.k);
    CHECK(b.size() == 98);
    CHECK((b - C.col(l)).norm() == 0.0);
    CHECK_THROWS_AS(build_primary_vector(ps.zones.centers[0], ps.zones, ps.k),
                    std::invalid_argument);
}

TEST_CASE("single-entry primary vector synthesizes green at the zone center") {
    Wavenumber k{15.0};
    ZoneSet one = ZoneSet::uniform({{0.3, 0.0, 0.0}}, 0);
    Vec3 primary{2.0, 1.0, 0.5};
    Eigen::VectorXcd b = build_primary_vector(primary, one, k);
    CHECK(b.size() == 1);
    ExpansionCoefficients c;
    c.origin = one.centers[0];
    c.order = 0;
    c.values = {b(0)};
    complex<double> at_center = synthesize_from_coefficients(c, k, one.centers[0]);
    complex<double> want = green_free(k, primary, one.centers[0]);
    CHECK(std::abs(at_center - want) <= 1e-12 * std::abs(want));
}

TEST_CASE("compute_lambda") {
    Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(5, 5);
    CHECK(compute_lambda(I) == doctest::Approx(1e-3));

    Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(2, 2);
    D(0, 0) = 2.0;
    D(1, 1) = 1.0;
    CHECK(compute_lambda(D) == doctest::Approx(4e-3));

    std::mt19937 rng(23);
    Eigen::MatrixXcd C = random_complex_matrix(98, 121, rng);
    double got = compute_lambda(C, 1e-3);
    double oracle = 1e-3 * power_iteration_max_eig(C, rng);
    CHECK(std::abs(got - oracle) <= 1e-9 * oracle);
}

TEST_CASE("solve_conventional scalar shrinkage and exact interpolation") {
    std::mt19937 rng(29);
    Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(6, 6);
    Eigen::VectorXcd b = random_complex_vector(6, rng);
    double lambda = 0.37;
    Eigen::VectorXcd d = solve_conventional(I, b, lambda);
    CHECK((d - b / (1.0 + lambda)).norm() < 1e-13);

    Eigen::MatrixXcd C = random_complex_matrix(8, 8, rng);
    Eigen::VectorXcd b2 = random_complex_vector(8, rng);
    Eigen::VectorXcd d2 = solve_conventional(C, b2, 0.0);
    CHECK((C * d2 - b2).norm() < 1e-10);

    Eigen::MatrixXcd singular = Eigen::MatrixXcd::Zero(4, 4);
    singular(0, 0) = 1.0;
    CHECK_THROWS_AS(solve_conventional(singular, random_complex_vector(4, rng), 0.0),
                    std::runtime_error);
}

TEST_CASE("solvers match the SVD oracle") {
    std::mt19937 rng(31);
    for (int trial = 0; trial < 3; ++trial) {
        Eigen::MatrixXcd C = random_complex_matrix(98, 121, rng);
        Eigen::VectorXcd b = random_complex_vector(98, rng);
        double lambda = compute_lambda(C, 1e-3);

        Eigen::VectorXcd d = solve_conventional(C, b, lambda);
        Eigen::VectorXcd oracle = svd_regularized_solve(C, b, lambda, Eigen::VectorXd::Ones(121));
        CHECK((d - oracle).norm() <= 1e-9 * oracle.norm());

        Eigen::VectorXd sigma(121);
        std::uniform_real_distribution<double> sd(1.0, 50.0);
        for (int i = 0; i < 121; ++i) sigma(i) = sd(rng);
        Eigen::VectorXcd dd = solve_doa(C, b, lambda, sigma);
        Eigen::VectorXcd doracle = svd_regularized_solve(C, b, lambda, sigma);
        CHECK((dd - doracle).norm() <= 1e-9 * doracle.norm());

        // Normal-equation residual.
        Eigen::VectorXcd res =
            (C.adjoint() * C) * dd + lambda * sigma.asDiagonal() * dd - C.adjoint() * b;
        CHECK(res.norm() <= 1e-9 * (C.adjoint() * b).norm());
    }
}

TEST_CASE("solve_doa reduction and penalty limit") {
    std::mt19937 rng(37);
    Eigen::MatrixXcd C = random_complex_matrix(20, 30, rng);
    Eigen::VectorXcd b = random_complex_vector(20, rng);
    double lambda = compute_lambda(C, 1e-3);

    Eigen::VectorXcd dc = solve_conventional(C, b, lambda);
    Eigen::VectorXcd dd = solve_doa(C, b, lambda, Eigen::VectorXd::Ones(30));
    CHECK((dd - dc).norm() <= 1e-12 * dc.norm());

    double prev = std::abs(dd(7));
    for (double s : {10.0, 100.0, 1000.0, 1e5}) {
        Eigen::VectorXd sigma = Eigen::VectorXd::Ones(30);
        sigma(7) = s;
        double cur = std::abs(solve_doa(C, b, lambda, sigma)(7));
        CHECK(cur < prev);
        prev = cur;
    }

    Eigen::VectorXd bad = Eigen::VectorXd::Ones(30);
    bad(3) = 0.0;
    CHECK_THROWS_AS(solve_doa(C, b, lambda, bad), std::invalid_argument);
}

TEST_CASE("solver optimality against random perturbations") {
    std::mt19937 rng(41);
    PaperSetup ps;
    Eigen::MatrixXcd C = build_transfer_matrix(ps.array, ps.zones, ps.k);
    double lambda = compute_lambda(C, 1e-3);
    Vec3 primary{2.0, 0.0, 0.0};
    Eigen::VectorXcd b = build_primary_vector(primary, ps.zones, ps.k);

    ExpansionCoefficients field = interior_expansion_point_source(ps.k, primary, Vec3{}, 6);
    DoAWeights w = doa_weights(field, ps.array, ps.k, 6);
    Eigen::VectorXd sigma = build_sigma(w, 1e-3);
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(121);

    Eigen::VectorXcd dc = solve_conventional(C, b, lambda);
    Eigen::VectorXcd dd = solve_doa(C, b, lambda, sigma);
    double fc = objective(C, b, dc, lambda, ones);
    double fd = objective(C, b, dd, lambda, sigma);
    for (int trial = 0; trial < 100; ++trial) {
        Eigen::VectorXcd delta = random_complex_vector(121, rng);
        delta *= 1e-4 / delta.norm();
        CHECK(fc <= objective(C, b, dc + delta, lambda, ones));
        CHECK(fd <= objective(C, b, dd + delta, lambda, sigma));
    }
}

TEST_CASE("doa weights isotropy and angular dependence") {
    ArrayGeometry array = fibonacci_sphere(64, 1.5);
    Wavenumber k{10.0};

    ExpansionCoefficients mono;
    mono.order = 0;
    mono.values = {complex<double>(0.4, -0.9)};
    DoAWeights w0 = doa_weights(mono, array, k, 0);
    for (int l = 0; l < array.size(); ++l)
        CHECK(w0.normalized(l) == doctest::Approx(1.0).epsilon(1e-12));

    // N = 0 slice of a full field: identical weight for every loudspeaker on
    // the sphere.
    ExpansionCoefficients field = interior_expansion_point_source(k, Vec3{2, 1, 0}, Vec3{}, 6);
    DoAWeights w1 = doa_weights(field, array, k, 0);
    for (int l = 1; l < array.size(); ++l)
        CHECK(std::abs(w1.mu(l) - w1.mu(0)) <= 1e-12 * std::abs(w1.mu(0)));

    ExpansionCoefficients zero;
    zero.order = 0;
    zero.values = {0.0};
    CHECK_THROWS_AS(doa_weights(zero, array, k, 0), std::invalid_argument);
}

TEST_CASE("doa weights peak toward the primary source") {
    ArrayGeometry array = fibonacci_sphere(121, 1.5);
    Wavenumber k = Wavenumber::from_frequency(1000.0, 343.0);
    // Aim the primary exactly at a loudspeaker.
    for (int target : {5, 60, 100}) {
        Vec3 dir = array.positions[target] * (1.0 / array.positions[target].norm());
        Vec3 primary = dir * 2.0;
        ExpansionCoefficients field = interior_expansion_point_source(k, primary, Vec3{}, 6);
        DoAWeights w = doa_weights(field, array, k, 6);
        int argmax = 0;
        w.normalized.maxCoeff(&argmax);
        CHECK(argmax == target);
    }
}

TEST_CASE("build_sigma") {
    DoAWeights w;
    w.normalized.resize(3);
    w.normalized << 1.0, 1.0, 1.0;
    Eigen::VectorXd s = build_sigma(w);
    CHECK((s - Eigen::VectorXd::Ones(3)).norm() == 0.0);

    w.normalized.resize(2);
    w.normalized << 1.0, 0.5;
    s = build_sigma(w);
    CHECK(s(0) == 1.0);
    CHECK(s(1) == 2.0);

    w.normalized << 1.0, 0.0;
    s = build_sigma(w, 1e-3);
    CHECK(s(0) == 1.0);
    CHECK(s(1) == 1000.0);

    CHECK_THROWS_AS(build_sigma(w, 0.0), std::invalid_argument);
}

TEST_CASE("doa regularization suppresses opposite-side loudspeakers") {
    PaperSetup ps;
    Eigen::MatrixXcd C = build_transfer_matrix(ps.array, ps.zones, ps.k);
    double lambda = compute_lambda(C, 1e-3);
    Vec3 primary{2.0, 0.0, 0.0};
    Eigen::VectorXcd b = build_primary_vector(primary, ps.zones, ps.k);
    Eigen::VectorXcd dc = solve_conventional(C, b, lambda);
    ExpansionCoefficients field = interior_expansion_point_source(ps.k, primary, Vec3{}, 6);
    DoAWeights w = doa_weights(field, ps.array, ps.k, 6);
    Eigen::VectorXcd dd = solve_doa(C, b, lambda, build_sigma(w, 1e-3));

    Vec3 anti{-1.0, 0.0, 0.0};
    double e_conv = 0.0, e_doa = 0.0;
    for (int l = 0; l < ps.array.size(); ++l) {
        Vec3 p = ps.array.positions[l];
        double cosang = p.dot(anti) / p.norm();
        if (cosang >= std::cos(30.0 * kPi / 180.0)) {
            e_conv += std::norm(dc(l));
            e_doa += std::norm(dd(l));
        }
    }
    CHECK(e_doa < e_conv);
}

TEST_CASE("loudspeaker coincident with zone center rejected") {
    ArrayGeometry array;
    array.positions = {{0.5, 0, 0}, {1.5, 0, 0}};
    ZoneSet zones = ZoneSet::uniform({{0.5, 0, 0}}, 2);
    CHECK_THROWS_AS(build_transfer_matrix(array, zones, Wavenumber{10.0}),
                    std::invalid_argument);
}
