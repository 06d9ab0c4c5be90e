#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "mmfield/field_model.hpp"

namespace mmfield {

struct ArrayGeometry {
    std::vector<Vec3> positions;
    std::string label;

    int size() const { return static_cast<int>(positions.size()); }
};

struct ZoneSet {
    std::vector<Vec3> centers;
    std::vector<int> orders;  // per-zone truncation order

    static ZoneSet uniform(std::vector<Vec3> centers, int order);
    int zone_count() const { return static_cast<int>(centers.size()); }
    int total_rows() const;
    int row_offset(int zone) const;
};

struct DrivingSignals {
    Eigen::VectorXcd d;
    double frequency_hz = 0.0;
    std::string method;
};

struct DoAWeights {
    Eigen::VectorXcd mu;          // mu(r_l, k) per loudspeaker
    Eigen::VectorXd normalized;   // |mu_l| / max_l' |mu_l'|, in (0, 1]
};

/// Stacked interior-expansion coefficients of every loudspeaker about every
/// zone center: row block q, column l. Shape [sum_q (N_q+1)^2] x L.
Eigen::MatrixXcd build_transfer_matrix(const ArrayGeometry& array, const ZoneSet& zones,
                                       Wavenumber k);

/// Stacked interior expansions of the primary point source about each zone
/// center, same row ordering as build_transfer_matrix.
Eigen::VectorXcd build_primary_vector(const Vec3& primary, const ZoneSet& zones,
                                      Wavenumber k);

/// factor * (largest eigenvalue of C^H C).
double compute_lambda(const Eigen::MatrixXcd& C, double factor = 1e-3);

/// Minimizer of ||C d - b||^2 + lambda ||d||^2.
Eigen::VectorXcd solve_conventional(const Eigen::MatrixXcd& C, const Eigen::VectorXcd& b,
                                    double lambda);

/// Minimizer of ||C d - b||^2 + lambda * sum_l sigma_l |d_l|^2.
Eigen::VectorXcd solve_doa(const Eigen::MatrixXcd& C, const Eigen::VectorXcd& b,
                           double lambda, const Eigen::VectorXd& sigma);

/// Single-layer-potential weights of the primary field at the loudspeaker
/// directions; global_field must be expanded about the global origin with
/// order >= `order`.
DoAWeights doa_weights(const ExpansionCoefficients& global_field, const ArrayGeometry& array,
                       Wavenumber k, int order);

/// Diagonal of the DoA penalty: sigma_l = 1 / max(normalized_l, floor).
Eigen::VectorXd build_sigma(const DoAWeights& weights, double floor = 1e-3);

}  // namespace mmfield
