#pragma once

#include <Eigen/Core>

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "mbpf/errors.hpp"

namespace mbpf {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Transmission (chain) matrix of a two-port network,
///
///   [V1]   [a  b] [ V2]
///   [I1] = [c  d] [-I2]
///
/// with a, d dimensionless, b in ohms and c in siemens. Cascades multiply
/// left to right. Reciprocal networks have determinant a*d - b*c = 1.
template <typename Scalar = double>
struct TwoPort {
    using Complex = std::complex<Scalar>;
    using Matrix = Eigen::Matrix<Complex, 2, 2>;

    Matrix m = Matrix::Identity();

    TwoPort() = default;
    TwoPort(Complex a, Complex b, Complex c, Complex d) {
        m << a, b, c, d;
    }
    explicit TwoPort(Matrix matrix) : m(std::move(matrix)) {}

    Complex a() const { return m(0, 0); }
    Complex b() const { return m(0, 1); }
    Complex c() const { return m(1, 0); }
    Complex d() const { return m(1, 1); }

    Complex determinant() const { return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0); }

    bool all_finite() const { return m.allFinite(); }

    TwoPort& operator*=(const TwoPort& rhs) {
        m = (m * rhs.m).eval();
        return *this;
    }
    friend TwoPort operator*(const TwoPort& lhs, const TwoPort& rhs) {
        return TwoPort{Matrix(lhs.m * rhs.m)};
    }
};

using TwoPortd = TwoPort<double>;

/// Series impedance branch: [[1, z], [0, 1]].
template <typename Scalar = double>
TwoPort<Scalar> abcd_series(std::complex<Scalar> z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw InvalidElementError("series impedance is not finite");
    }
    return TwoPort<Scalar>{Scalar(1), z, Scalar(0), Scalar(1)};
}

/// Shunt admittance branch: [[1, 0], [y, 1]].
template <typename Scalar = double>
TwoPort<Scalar> abcd_shunt(std::complex<Scalar> y) {
    if (!std::isfinite(y.real()) || !std::isfinite(y.imag())) {
        throw InvalidElementError("shunt admittance is not finite");
    }
    return TwoPort<Scalar>{Scalar(1), Scalar(0), y, Scalar(1)};
}

/// Left-to-right product of a non-empty block list.
template <typename Scalar = double>
TwoPort<Scalar> cascade(std::span<const TwoPort<Scalar>> blocks) {
    if (blocks.empty()) {
        throw EmptyCascadeError{};
    }
    TwoPort<Scalar> out = blocks.front();
    for (std::size_t i = 1; i < blocks.size(); ++i) {
        out *= blocks[i];
    }
    return out;
}

template <typename Scalar = double>
TwoPort<Scalar> cascade(std::initializer_list<TwoPort<Scalar>> blocks) {
    return cascade(std::span<const TwoPort<Scalar>>(blocks.begin(), blocks.size()));
}

/// The four scattering parameters of a two-port at one frequency.
template <typename Scalar = double>
struct Scattering {
    using Complex = std::complex<Scalar>;
    Complex s11, s21, s12, s22;
};

/// ABCD -> S at a real reference impedance. `frequency_hz` is only used to
/// label the singular-conversion error when the denominator vanishes.
template <typename Scalar = double>
Scattering<Scalar> abcd_to_s(const TwoPort<Scalar>& m, Scalar z0,
                             Scalar frequency_hz = std::numeric_limits<Scalar>::quiet_NaN()) {
    if (!(z0 > Scalar(0))) {
        throw DomainError("reference impedance must be positive");
    }
    using Complex = std::complex<Scalar>;
    const Complex a = m.a(), b = m.b(), c = m.c(), d = m.d();
    const Complex den = a + b / z0 + c * z0 + d;
    if (std::abs(den) < Scalar(1e-30)) {
        throw SingularConversionError(static_cast<double>(frequency_hz));
    }
    Scattering<Scalar> s;
    s.s11 = (a + b / z0 - c * z0 - d) / den;
    s.s21 = Scalar(2) / den;
    s.s12 = Scalar(2) * (a * d - b * c) / den;
    s.s22 = (-a + b / z0 - c * z0 + d) / den;
    return s;
}

/// S-parameters of one network at one frequency and reference impedance.
struct SParameterPoint {
    double frequency_hz = 0.0;
    std::complex<double> s11, s21, s12, s22;
    double z0_ohm = 50.0;
};

/// Inverse of abcd_to_s. Requires a transmissive network (s21 != 0).
template <typename Scalar = double>
TwoPort<Scalar> s_to_abcd(const Scattering<Scalar>& s, Scalar z0) {
    using Complex = std::complex<Scalar>;
    if (std::abs(s.s21) == Scalar(0)) {
        throw NonTransmissiveError{};
    }
    const Complex den = Scalar(2) * s.s21;
    const Complex a = ((Scalar(1) + s.s11) * (Scalar(1) - s.s22) + s.s12 * s.s21) / den;
    const Complex b = z0 * ((Scalar(1) + s.s11) * (Scalar(1) + s.s22) - s.s12 * s.s21) / den;
    const Complex c = ((Scalar(1) - s.s11) * (Scalar(1) - s.s22) - s.s12 * s.s21) / (z0 * den);
    const Complex d = ((Scalar(1) - s.s11) * (Scalar(1) + s.s22) + s.s12 * s.s21) / den;
    return TwoPort<Scalar>{a, b, c, d};
}

inline TwoPortd s_to_abcd(const SParameterPoint& p) {
    Scattering<double> s{p.s11, p.s21, p.s12, p.s22};
    return s_to_abcd(s, p.z0_ohm);
}

/// Frequency sampling plan. Emitted frequencies are strictly increasing and
/// include both endpoints.
struct FrequencyGrid {
    enum class Spacing { linear, logarithmic };

    double start_hz = 0.0;
    double stop_hz = 0.0;
    int points = 0;
    Spacing spacing = Spacing::linear;

    void validate() const;
    Eigen::ArrayXd frequencies() const;
};

/// Ordered S-parameter samples sharing one reference impedance.
struct SweepTable {
    double z0_ohm = 50.0;
    std::vector<SParameterPoint> points;

    // Enforces strictly increasing frequency and a matching z0.
    void append(const SParameterPoint& p);

    bool empty() const { return points.empty(); }
    std::size_t size() const { return points.size(); }
    double front_hz() const { return points.front().frequency_hz; }
    double back_hz() const { return points.back().frequency_hz; }
};

struct GroupDelayPoint {
    double frequency_hz = 0.0;
    double delay_s = 0.0;
};

/// Group delay -d(phi)/d(omega) of s21 on the sweep grid. The phase is
/// unwrapped first (adjacent jumps above pi are folded by 2*pi); interior
/// points use central differences, the endpoints one-sided ones.
std::vector<GroupDelayPoint> group_delay(const SweepTable& sweep);

}  // namespace mbpf
