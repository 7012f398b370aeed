#pragma once

#include <cmath>
#include <complex>
#include <random>

#include "mbpf/circuit.hpp"
#include "mbpf/twoport.hpp"

namespace mbpf::test {

// Component values of the reference CSRR cell, as labeled in the shipped
// default configuration.
inline UnitCellParams reference_cell() {
    UnitCellParams p;
    p.c_l_farad = 0.3e-12;
    p.l_r_henry = 10.3e-9;
    p.c_farad = 2.1e-12;
    p.c_r_farad = 4.1e-12;
    p.l_l_henry = 0.7e-9;
    return p;
}

inline UnitCellParams swapped_cell() { return reference_cell().swapped(); }

inline double log_uniform(std::mt19937& rng, double lo, double hi) {
    std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
    return std::exp(u(rng));
}

inline UnitCellParams random_cell(std::mt19937& rng) {
    UnitCellParams p;
    p.c_l_farad = log_uniform(rng, 0.05e-12, 10e-12);
    p.l_r_henry = log_uniform(rng, 0.1e-9, 50e-9);
    p.c_farad = log_uniform(rng, 0.1e-12, 10e-12);
    p.c_r_farad = log_uniform(rng, 0.5e-12, 20e-12);
    p.l_l_henry = log_uniform(rng, 0.1e-9, 50e-9);
    p.include_series_inductor = (rng() & 1u) != 0;
    p.topology = (rng() & 1u) ? Topology::symmetric_t : Topology::l_section;
    return p;
}

// Piecewise-linear |s21| in dB over frequency, in MHz for readability.
// Returns the dB value of a trapezoid band-pass with 3 dB points at exactly
// 700 and 760 MHz:
//   floor -60 dB below 650, ramp to -6 at 680, ramp to 0 at 720, flat to 740,
//   ramp to -6 at 780, ramp to -25 at 820, floor -25 above.
inline double trapezoid_db(double f_hz) {
    const double f = f_hz / 1e6;
    if (f <= 650.0) return -60.0;
    if (f <= 680.0) return -60.0 + (f - 650.0) * (54.0 / 30.0);
    if (f <= 720.0) return -6.0 + (f - 680.0) * (6.0 / 40.0);
    if (f <= 740.0) return 0.0;
    if (f <= 780.0) return -(f - 740.0) * (6.0 / 40.0);
    if (f <= 820.0) return -6.0 - (f - 780.0) * (19.0 / 40.0);
    return -25.0;
}

// Synthetic band-pass sweep whose 3 dB edges sit at exactly 700/760 MHz under
// linear-in-dB interpolation. s21 carries a 5 ns linear phase; |s11| is
// -30 dB inside 700..760 MHz and -1 dB outside.
inline SweepTable synthetic_bandpass(int points = 2001, double start_hz = 0.5e9,
                                     double stop_hz = 1.0e9, double delay_s = 5e-9) {
    SweepTable t;
    t.z0_ohm = 50.0;
    FrequencyGrid grid{start_hz, stop_hz, points, FrequencyGrid::Spacing::linear};
    const Eigen::ArrayXd freqs = grid.frequencies();
    for (Eigen::Index i = 0; i < freqs.size(); ++i) {
        const double f = freqs(i);
        const double mag = std::pow(10.0, trapezoid_db(f) / 20.0);
        const double s11_db = (f >= 700e6 && f <= 760e6) ? -30.0 : -1.0;
        SParameterPoint p;
        p.frequency_hz = f;
        p.z0_ohm = 50.0;
        p.s21 = std::polar(mag, -kTwoPi * f * delay_s);
        p.s12 = p.s21;
        p.s11 = std::pow(10.0, s11_db / 20.0);
        p.s22 = p.s11;
        t.append(p);
    }
    return t;
}

}  // namespace mbpf::test
