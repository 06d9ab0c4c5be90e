#include "mmfield/mode_matching.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>

#include "mmfield/special_functions.hpp"

namespace mmfield {

ZoneSet ZoneSet::uniform(std::vector<Vec3> centers, int order) {
    ZoneSet z;
    z.orders.assign(centers.size(), order);
    z.centers = std::move(centers);
    return z;
}

int ZoneSet::total_rows() const {
    int rows = 0;
    for (int n : orders) rows += static_cast<int>(sf::coefficient_count(n));
    return rows;
}

int ZoneSet::row_offset(int zone) const {
    int off = 0;
    for (int q = 0; q < zone; ++q) off += static_cast<int>(sf::coefficient_count(orders[q]));
    return off;
}

Eigen::MatrixXcd build_transfer_matrix(const ArrayGeometry& array, const ZoneSet& zones,
                                       Wavenumber k) {
    if (array.size() < 1) throw std::invalid_argument("build_transfer_matrix: empty array");
    if (zones.zone_count() < 1) throw std::invalid_argument("build_transfer_matrix: empty zone set");

    Eigen::MatrixXcd C(zones.total_rows(), array.size());
    for (int q = 0; q < zones.zone_count(); ++q) {
        int order = zones.orders[q];
        int off = zones.row_offset(q);
        double ball = order / k.k;
        for (int l = 0; l < array.size(); ++l) {
            double dist = (array.positions[l] - zones.centers[q]).norm();
            if (dist <= 0.0)
                throw std::invalid_argument("build_transfer_matrix: loudspeaker coincides with zone center");
            if (dist <= ball)
                std::cerr << "warning: loudspeaker " << l << " inside expansion ball of zone "
                          << q << " (dist " << dist << " m <= " << ball << " m)\n";
            ExpansionCoefficients c =
                interior_expansion_point_source(k, array.positions[l], zones.centers[q], order);
            for (std::size_t i = 0; i < c.values.size(); ++i)
                C(off + static_cast<int>(i), l) = c.values[i];
        }
    }
    return C;
}

Eigen::VectorXcd build_primary_vector(const Vec3& primary, const ZoneSet& zones, Wavenumber k) {
    if (zones.zone_count() < 1) throw std::invalid_argument("build_primary_vector: empty zone set");
    Eigen::VectorXcd b(zones.total_rows());
    for (int q = 0; q < zones.zone_count(); ++q) {
        int off = zones.row_offset(q);
        ExpansionCoefficients c =
            interior_expansion_point_source(k, primary, zones.centers[q], zones.orders[q]);
        for (std::size_t i = 0; i < c.values.size(); ++i)
            b(off + static_cast<int>(i)) = c.values[i];
    }
    return b;
}

double compute_lambda(const Eigen::MatrixXcd& C, double factor) {
    if (C.size() == 0) throw std::invalid_argument("compute_lambda: empty matrix");
    if (!(factor > 0.0)) throw std::invalid_argument("compute_lambda: factor must be > 0");
    Eigen::MatrixXcd gram = C.adjoint() * C;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram, Eigen::EigenvaluesOnly);
    return factor * es.eigenvalues().maxCoeff();
}

namespace {

// Normal-equation solve of the Tikhonov problem with a diagonal penalty.
Eigen::VectorXcd solve_regularized(const Eigen::MatrixXcd& C, const Eigen::VectorXcd& b,
                                   double lambda, const Eigen::VectorXd& sigma) {
    Eigen::MatrixXcd A = C.adjoint() * C;
    A.diagonal() += (lambda * sigma).cast<std::complex<double>>();
    Eigen::LLT<Eigen::MatrixXcd> llt(A);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("solve: regularized normal matrix not positive definite");
    return llt.solve(C.adjoint() * b);
}

}  // namespace

Eigen::VectorXcd solve_conventional(const Eigen::MatrixXcd& C, const Eigen::VectorXcd& b,
                                    double lambda) {
    if (C.rows() != b.rows())
        throw std::invalid_argument("solve_conventional: C and b row counts differ");
    if (lambda < 0.0) throw std::invalid_argument("solve_conventional: lambda must be >= 0");
    if (lambda == 0.0) {
        Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(C);
        if (qr.rank() < C.cols())
            throw std::runtime_error("solve_conventional: rank-deficient system with lambda = 0");
        return qr.solve(b);
    }
    return solve_regularized(C, b, lambda, Eigen::VectorXd::Ones(C.cols()));
}

Eigen::VectorXcd solve_doa(const Eigen::MatrixXcd& C, const Eigen::VectorXcd& b, double lambda,
                           const Eigen::VectorXd& sigma) {
    if (C.rows() != b.rows())
        throw std::invalid_argument("solve_doa: C and b row counts differ");
    if (!(lambda > 0.0)) throw std::invalid_argument("solve_doa: lambda must be > 0");
    if (sigma.size() != C.cols())
        throw std::invalid_argument("solve_doa: sigma length must equal loudspeaker count");
    if ((sigma.array() <= 0.0).any())
        throw std::invalid_argument("solve_doa: sigma entries must be > 0");
    return solve_regularized(C, b, lambda, sigma);
}

DoAWeights doa_weights(const ExpansionCoefficients& global_field, const ArrayGeometry& array,
                       Wavenumber k, int order) {
    if (order < 0) throw std::invalid_argument("doa_weights: order must be >= 0");
    if (global_field.order < order)
        throw std::invalid_argument("doa_weights: field order below requested order");

    DoAWeights w;
    w.mu.resize(array.size());
    std::vector<std::complex<double>> hank, harm;
    const std::complex<double> junit(0.0, 1.0);
    for (int l = 0; l < array.size(); ++l) {
        Spherical pos = to_spherical(array.positions[l]);
        if (!(pos.r > 0.0)) throw std::invalid_argument("doa_weights: loudspeaker at origin");
        sf::sph_hankel2_all(order, k.k * pos.r, hank);
        sf::sph_harm_all(order, pos.theta, pos.phi, harm);
        std::complex<double> mu = 0.0;
        for (int n = 0; n <= order; ++n) {
            std::complex<double> denom = k.k * pos.r * pos.r * hank[n];
            for (int m = -n; m <= n; ++m) {
                std::size_t i = sf::linear_index(n, m);
                mu += junit * global_field.values[i] / denom * harm[i];
            }
        }
        w.mu(l) = mu;
    }
    double maxmag = w.mu.cwiseAbs().maxCoeff();
    if (!(maxmag > 0.0))
        throw std::invalid_argument("doa_weights: all weights zero, normalization undefined");
    w.normalized = w.mu.cwiseAbs() / maxmag;
    return w;
}

Eigen::VectorXd build_sigma(const DoAWeights& weights, double floor) {
    if (!(floor > 0.0) || floor > 1.0)
        throw std::invalid_argument("build_sigma: floor must be in (0, 1]");
    return weights.normalized.cwiseMax(floor).cwiseInverse();
}

}  // namespace mmfield
