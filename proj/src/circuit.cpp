#include "mbpf/circuit.hpp"

#include <cmath>
#include <limits>

namespace mbpf {

namespace {

void check_frequency(double f) {
    if (!std::isfinite(f) || !(f > 0.0)) {
        throw DomainError("frequency must be positive and finite");
    }
}

void check_positive(double v, const char* name) {
    if (!std::isfinite(v) || !(v > 0.0)) {
        throw DomainError(std::string(name) + " must be positive and finite");
    }
}

}  // namespace

void UnitCellParams::validate() const {
    check_positive(c_l_farad, "c_l_farad");
    check_positive(l_r_henry, "l_r_henry");
    check_positive(c_farad, "c_farad");
    check_positive(c_r_farad, "c_r_farad");
    check_positive(l_l_henry, "l_l_henry");
}

std::complex<double> series_impedance(const UnitCellParams& p, double frequency_hz) {
    check_frequency(frequency_hz);
    p.validate();
    const double w = kTwoPi * frequency_hz;
    double x = -1.0 / (w * p.c_l_farad);
    if (p.include_series_inductor) {
        x += w * p.l_r_henry;
    }
    return {0.0, x};
}

std::complex<double> shunt_admittance(const UnitCellParams& p, double frequency_hz) {
    check_frequency(frequency_hz);
    p.validate();
    const double w = kTwoPi * frequency_hz;

    // Tank resonance: the parallel tank open-circuits the branch.
    const double f_tank = 1.0 / (kTwoPi * std::sqrt(p.l_l_henry * p.c_r_farad));
    const double ulp = std::nextafter(f_tank, std::numeric_limits<double>::infinity()) - f_tank;
    if (std::abs(frequency_hz - f_tank) <= ulp) {
        return {0.0, 0.0};
    }

    const double u = 1.0 - w * w * p.l_l_henry * p.c_r_farad;
    const double v = 1.0 - w * w * p.l_l_henry * (p.c_farad + p.c_r_farad);
    return {0.0, w * p.c_farad * u / v};
}

Immittances immittances(const UnitCellParams& p, double frequency_hz) {
    return {frequency_hz, series_impedance(p, frequency_hz), shunt_admittance(p, frequency_hz)};
}

TwoPortd unit_cell_abcd(const UnitCellParams& p, double frequency_hz) {
    const auto z = series_impedance(p, frequency_hz);
    const auto y = shunt_admittance(p, frequency_hz);
    if (p.topology == Topology::symmetric_t) {
        return abcd_series(z * 0.5) * abcd_shunt(y) * abcd_series(z * 0.5);
    }
    return abcd_series(z) * abcd_shunt(y);
}

TwoPortd n_cell_abcd(const UnitCellParams& p, double frequency_hz, int n) {
    if (n < 1) {
        throw DomainError("cell count must be at least 1");
    }
    const TwoPortd cell = unit_cell_abcd(p, frequency_hz);
    TwoPortd out = cell;
    for (int i = 1; i < n; ++i) {
        out *= cell;
    }
    return out;
}

SweepResult sweep(const UnitCellParams& p, const FrequencyGrid& grid, int n_cells,
                  double z0_ohm) {
    p.validate();
    if (n_cells < 1) {
        throw DomainError("cell count must be at least 1");
    }
    if (!(z0_ohm > 0.0)) {
        throw DomainError("reference impedance must be positive");
    }

    const Eigen::ArrayXd freqs = grid.frequencies();
    SweepResult out;
    out.table.z0_ohm = z0_ohm;
    out.table.points.reserve(static_cast<std::size_t>(freqs.size()));

    for (Eigen::Index i = 0; i < freqs.size(); ++i) {
        const double f = freqs(i);
        TwoPortd m;
        try {
            m = n_cell_abcd(p, f, n_cells);
        } catch (const InvalidElementError&) {
            out.gaps.push_back({f, "singular immittance"});
            continue;
        }
        if (!m.all_finite()) {
            out.gaps.push_back({f, "singular immittance"});
            continue;
        }
        Scattering<double> s;
        try {
            s = abcd_to_s(m, z0_ohm, f);
        } catch (const SingularConversionError&) {
            out.gaps.push_back({f, "singular ABCD to S conversion"});
            continue;
        }
        SParameterPoint pt{f, s.s11, s.s21, s.s12, s.s22, z0_ohm};
        out.table.append(pt);
    }
    return out;
}

}  // namespace mbpf
