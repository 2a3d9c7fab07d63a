#pragma once

#include <array>
#include <cmath>
#include <span>
#include <stdexcept>

namespace lzwave {

using StateVec = std::array<double, 2>;  // [range_m, velocity_mps]

struct Mat2 {
    double m00 = 0.0, m01 = 0.0, m10 = 0.0, m11 = 0.0;

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static Mat2 diagonal(double a, double b) { return {a, 0.0, 0.0, b}; }

    Mat2 operator+(const Mat2& o) const {
        return {m00 + o.m00, m01 + o.m01, m10 + o.m10, m11 + o.m11};
    }
    Mat2 operator-(const Mat2& o) const {
        return {m00 - o.m00, m01 - o.m01, m10 - o.m10, m11 - o.m11};
    }
    Mat2 operator*(const Mat2& o) const {
        return {m00 * o.m00 + m01 * o.m10, m00 * o.m01 + m01 * o.m11,
                m10 * o.m00 + m11 * o.m10, m10 * o.m01 + m11 * o.m11};
    }
    StateVec operator*(const StateVec& v) const {
        return {m00 * v[0] + m01 * v[1], m10 * v[0] + m11 * v[1]};
    }
    Mat2 transpose() const { return {m00, m10, m01, m11}; }
    double determinant() const { return m00 * m11 - m01 * m10; }

    Mat2 inverse() const {
        const double det = determinant();
        if (det == 0.0) throw std::invalid_argument("Mat2: singular matrix");
        return {m11 / det, -m01 / det, -m10 / det, m00 / det};
    }

    /// Symmetric positive definite test via leading minors.
    bool is_positive_definite(double tol = 1e-9) const {
        return m00 > tol && determinant() > tol * tol
            && std::abs(m01 - m10) <= 1e-9 * (1.0 + std::abs(m01));
    }

    Mat2 symmetrize() const {
        const double off = 0.5 * (m01 + m10);
        return {m00, off, off, m11};
    }
};

struct TrackEstimate {
    StateVec state{0.0, 0.0};
    Mat2 covariance = Mat2::identity();
};

/// Discretized white-acceleration process noise for the CV model.
inline Mat2 cv_process_noise(double intensity, double dt) {
    return {intensity * dt * dt * dt / 3.0, intensity * dt * dt / 2.0,
            intensity * dt * dt / 2.0, intensity * dt};
}

/// Constant-velocity prediction over one interval.
inline TrackEstimate kalman_predict(const TrackEstimate& est, double dt,
                                    const Mat2& process_noise) {
    const Mat2 f{1.0, dt, 0.0, 1.0};
    TrackEstimate out;
    out.state = f * est.state;
    out.covariance = (f * est.covariance * f.transpose() + process_noise).symmetrize();
    return out;
}

/// Linear update with H = identity on [range, velocity], Joseph-form
/// covariance. Callers skip this on missed detections and keep the
/// prediction.
inline TrackEstimate kalman_update(const TrackEstimate& est, const StateVec& measurement,
                                   const Mat2& meas_noise) {
    if (!meas_noise.is_positive_definite(0.0))
        throw std::invalid_argument("kalman_update: measurement noise must be positive definite");
    const Mat2 innovation_cov = est.covariance + meas_noise;
    const Mat2 gain = est.covariance * innovation_cov.inverse();
    const StateVec innovation{measurement[0] - est.state[0], measurement[1] - est.state[1]};

    TrackEstimate out;
    const StateVec corr = gain * innovation;
    out.state = {est.state[0] + corr[0], est.state[1] + corr[1]};
    const Mat2 i_minus_k = Mat2::identity() - gain;
    out.covariance = (i_minus_k * est.covariance * i_minus_k.transpose()
                      + gain * meas_noise * gain.transpose()).symmetrize();
    return out;
}

/// Root mean squared Euclidean distance between truth and estimate series.
inline double track_rmse(std::span<const StateVec> truth, std::span<const StateVec> estimate) {
    if (truth.size() != estimate.size() || truth.empty())
        throw std::invalid_argument("track_rmse: series must be nonempty and equal length");
    double sum = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const double dr = truth[i][0] - estimate[i][0];
        const double dv = truth[i][1] - estimate[i][1];
        sum += dr * dr + dv * dv;
    }
    return std::sqrt(sum / static_cast<double>(truth.size()));
}

}  // namespace lzwave
