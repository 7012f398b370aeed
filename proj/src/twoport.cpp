#include "mbpf/twoport.hpp"

#include <algorithm>
#include <cmath>

namespace mbpf {

void FrequencyGrid::validate() const {
    if (!std::isfinite(start_hz) || !std::isfinite(stop_hz)) {
        throw DomainError("frequency grid bounds must be finite");
    }
    if (!(start_hz > 0.0)) {
        throw DomainError("frequency grid start must be positive");
    }
    if (!(start_hz < stop_hz)) {
        throw DomainError("frequency grid start must be below stop");
    }
    if (points < 2) {
        throw DomainError("frequency grid needs at least 2 points");
    }
}

Eigen::ArrayXd FrequencyGrid::frequencies() const {
    validate();
    Eigen::ArrayXd f;
    if (spacing == Spacing::linear) {
        f = Eigen::ArrayXd::LinSpaced(points, start_hz, stop_hz);
    } else {
        f = Eigen::ArrayXd::LinSpaced(points, std::log(start_hz), std::log(stop_hz)).exp();
        f(0) = start_hz;
        f(points - 1) = stop_hz;
    }
    return f;
}

void SweepTable::append(const SParameterPoint& p) {
    if (!(p.frequency_hz > 0.0)) {
        throw DomainError("sweep point frequency must be positive");
    }
    if (p.z0_ohm != z0_ohm) {
        throw DomainError("sweep point reference impedance differs from the table");
    }
    if (!points.empty() && !(p.frequency_hz > points.back().frequency_hz)) {
        throw DomainError("sweep frequencies must be strictly increasing");
    }
    points.push_back(p);
}

std::vector<GroupDelayPoint> group_delay(const SweepTable& sweep) {
    const std::size_t n = sweep.points.size();
    if (n < 3) {
        throw InsufficientGridError("group delay needs at least 3 sweep points");
    }

    std::vector<double> phi(n);
    std::vector<double> omega(n);
    double prev = std::arg(sweep.points[0].s21);
    phi[0] = prev;
    omega[0] = kTwoPi * sweep.points[0].frequency_hz;
    for (std::size_t i = 1; i < n; ++i) {
        const double raw = std::arg(sweep.points[i].s21);
        double step = raw - prev;
        while (step > std::numbers::pi) step -= kTwoPi;
        while (step < -std::numbers::pi) step += kTwoPi;
        phi[i] = phi[i - 1] + step;
        prev = raw;
        omega[i] = kTwoPi * sweep.points[i].frequency_hz;
    }

    std::vector<GroupDelayPoint> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        double dphi, domega;
        if (i == 0) {
            dphi = phi[1] - phi[0];
            domega = omega[1] - omega[0];
        } else if (i == n - 1) {
            dphi = phi[n - 1] - phi[n - 2];
            domega = omega[n - 1] - omega[n - 2];
        } else {
            dphi = phi[i + 1] - phi[i - 1];
            domega = omega[i + 1] - omega[i - 1];
        }
        out[i] = {sweep.points[i].frequency_hz, -dphi / domega};
    }
    return out;
}

}  // namespace mbpf
