#include "fairtrack/kalman.hpp"

#include <limits>

#include <Eigen/Cholesky>

#include "fairtrack/errors.hpp"

namespace fairtrack {

namespace {

StateMatrix motion_matrix() {
    StateMatrix f = StateMatrix::Identity();
    for (int i = 0; i < 4; ++i) f(i, 4 + i) = 1.0;
    return f;
}

Eigen::Matrix<double, 4, 8> observation_matrix() {
    Eigen::Matrix<double, 4, 8> h = Eigen::Matrix<double, 4, 8>::Zero();
    for (int i = 0; i < 4; ++i) h(i, i) = 1.0;
    return h;
}

MeasurementMatrix measurement_noise(double height, const KalmanParams& p) {
    MeasurementVector std;
    std << p.std_weight_position * height, p.std_weight_position * height, 1e-1, p.std_weight_position * height;
    return std.array().square().matrix().asDiagonal();
}

}  // namespace

BBox KalmanState::box() const {
    MeasurementVector z = mean.head<4>();
    return from_measurement(z);
}

MeasurementVector to_measurement(const BBox& box) {
    MeasurementVector z;
    z << box.center_x(), box.center_y(), box.width() / box.height(), box.height();
    return z;
}

BBox from_measurement(const MeasurementVector& z) {
    const double h = z(3);
    const double w = z(2) * h;
    return {z(0) - w / 2, z(1) - h / 2, z(0) + w / 2, z(1) + h / 2};
}

KalmanState kf_init(const BBox& measurement, const KalmanParams& params) {
    if (!(measurement.height() > 0.0) || !measurement.valid()) {
        throw ValidationError("kf_init: box height must be positive");
    }
    KalmanState s;
    s.mean.setZero();
    s.mean.head<4>() = to_measurement(measurement);
    const double h = measurement.height();
    const double pw = params.std_weight_position;
    const double vw = params.std_weight_velocity;
    StateVector std;
    std << 2 * pw * h, 2 * pw * h, 1e-2, 2 * pw * h, 10 * vw * h, 10 * vw * h, 1e-5, 10 * vw * h;
    s.covariance = std.array().square().matrix().asDiagonal();
    return s;
}

KalmanState kf_predict(const KalmanState& s, const KalmanParams& params) {
    static const StateMatrix f = motion_matrix();
    const double h = s.mean(3);
    const double pw = params.std_weight_position;
    const double vw = params.std_weight_velocity;
    StateVector std;
    std << pw * h, pw * h, 1e-2, pw * h, vw * h, vw * h, 1e-5, vw * h;
    const StateMatrix q = std.array().square().matrix().asDiagonal();

    KalmanState out;
    out.mean = f * s.mean;
    out.covariance = f * s.covariance * f.transpose() + q;
    out.covariance = 0.5 * (out.covariance + out.covariance.transpose());
    return out;
}

Projection kf_project(const KalmanState& s, const KalmanParams& params) {
    static const Eigen::Matrix<double, 4, 8> hm = observation_matrix();
    Projection p;
    p.mean = hm * s.mean;
    p.covariance = hm * s.covariance * hm.transpose() + measurement_noise(s.mean(3), params);
    return p;
}

KalmanState kf_update(const KalmanState& s, const BBox& measurement, const KalmanParams& params) {
    static const Eigen::Matrix<double, 4, 8> hm = observation_matrix();
    const Projection proj = kf_project(s, params);
    const Eigen::LLT<MeasurementMatrix> llt(proj.covariance);
    if (llt.info() != Eigen::Success) throw ValidationError("kf_update: innovation covariance is singular");

    // K = P H^T S^-1, solved as S K^T = H P.
    const Eigen::Matrix<double, 4, 8> hp = hm * s.covariance;
    const Eigen::Matrix<double, 8, 4> gain = llt.solve(hp).transpose();
    const MeasurementVector innovation = to_measurement(measurement) - proj.mean;

    const MeasurementMatrix r = measurement_noise(s.mean(3), params);
    const StateMatrix ikh = StateMatrix::Identity() - gain * hm;

    KalmanState out;
    out.mean = s.mean + gain * innovation;
    out.covariance = ikh * s.covariance * ikh.transpose() + gain * r * gain.transpose();
    out.covariance = 0.5 * (out.covariance + out.covariance.transpose());
    return out;
}

std::vector<double> gating_distance(const KalmanState& s, std::span<const BBox> boxes, const KalmanParams& params,
                                    bool only_position) {
    const Projection proj = kf_project(s, params);
    const int dim = only_position ? 2 : 4;
    const Eigen::MatrixXd cov = proj.covariance.topLeftCorner(dim, dim);
    const Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success) throw ValidationError("gating_distance: innovation covariance is singular");

    std::vector<double> out;
    out.reserve(boxes.size());
    for (const BBox& b : boxes) {
        if (!(b.height() > 0.0)) {
            out.push_back(std::numeric_limits<double>::infinity());
            continue;
        }
        const Eigen::VectorXd d = (to_measurement(b) - proj.mean).head(dim);
        out.push_back(llt.matrixL().solve(d).squaredNorm());
    }
    return out;
}

}  // namespace fairtrack
