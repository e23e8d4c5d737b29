#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "fairtrack/tensor.hpp"

namespace fairtrack {

using StateVector = Eigen::Matrix<double, 8, 1>;
using StateMatrix = Eigen::Matrix<double, 8, 8>;
using MeasurementVector = Eigen::Matrix<double, 4, 1>;
using MeasurementMatrix = Eigen::Matrix<double, 4, 4>;

/// Constant-velocity state over (cx, cy, aspect = w / h, h) and their
/// per-frame velocities.
struct KalmanState {
    StateVector mean = StateVector::Zero();
    StateMatrix covariance = StateMatrix::Identity();

    BBox box() const;
};

/// Noise is proportional to the current box height.
struct KalmanParams {
    double std_weight_position = 1.0 / 20.0;
    double std_weight_velocity = 1.0 / 160.0;
};

/// 0.95 quantile of the chi-square distribution with 4 degrees of freedom.
inline constexpr double kChi2Gate95Dof4 = 9.4877;

MeasurementVector to_measurement(const BBox& box);
BBox from_measurement(const MeasurementVector& z);

/// Throws ValidationError for a box with non-positive height.
KalmanState kf_init(const BBox& measurement, const KalmanParams& params = {});

KalmanState kf_predict(const KalmanState& s, const KalmanParams& params = {});

/// Joseph-form update. Throws ValidationError if the innovation covariance
/// is not positive definite.
KalmanState kf_update(const KalmanState& s, const BBox& measurement, const KalmanParams& params = {});

/// Innovation mean and covariance of the state in measurement space.
struct Projection {
    MeasurementVector mean;
    MeasurementMatrix covariance;
};
Projection kf_project(const KalmanState& s, const KalmanParams& params = {});

/// Squared Mahalanobis distance of each box under the projected innovation
/// covariance. With only_position the (cx, cy) block alone is used, which is
/// what the tracker gates on; otherwise all four components.
std::vector<double> gating_distance(const KalmanState& s, std::span<const BBox> boxes, const KalmanParams& params = {},
                                    bool only_position = true);

}  // namespace fairtrack
