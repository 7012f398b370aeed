#pragma once

#include <complex>
#include <string>
#include <vector>

#include "mbpf/twoport.hpp"

namespace mbpf {

enum class Topology { symmetric_t, l_section };

/// Lumped values of one CSRR-loaded unit cell.
///
/// The series branch is the interdigital capacitor c_l in series with the
/// line inductance l_r; the shunt branch is the line capacitance c in series
/// with the resonator tank (c_r parallel to l_l). The cell is lossless by
/// construction: the model carries no resistors.
struct UnitCellParams {
    double c_l_farad = 0.0;   // series interdigital capacitor
    double l_r_henry = 0.0;   // series line inductance
    double c_farad = 0.0;     // shunt line capacitance
    double c_r_farad = 0.0;   // tank capacitance
    double l_l_henry = 0.0;   // tank inductance
    bool include_series_inductor = true;
    Topology topology = Topology::symmetric_t;

    void validate() const;

    /// Reinterpretation with the two inductor roles exchanged (line
    /// inductance <-> tank inductance). Extracted component tables are easy
    /// to mislabel between the two branches, so both readings are
    /// first-class; see the dispersion consistency report.
    UnitCellParams swapped() const {
        UnitCellParams p = *this;
        std::swap(p.l_r_henry, p.l_l_henry);
        return p;
    }
};

struct Immittances {
    double frequency_hz = 0.0;
    std::complex<double> z_series;
    std::complex<double> y_shunt;
};

/// Series branch impedance Z(f) = j*w*l_r + 1/(j*w*c_l), or the reduced form
/// 1/(j*w*c_l) when the inductor is excluded. Purely imaginary.
std::complex<double> series_impedance(const UnitCellParams& p, double frequency_hz);

/// Shunt branch admittance Y(f) of c in series with the (c_r || l_l) tank,
/// evaluated in the pole-free rational form
///   Y = j * w*c * (1 - w^2*l_l*c_r) / (1 - w^2*l_l*(c + c_r)).
/// Returns exactly 0 within one ULP of the tank resonance; diverges at the
/// shunt-branch series resonance (the transmission zero).
std::complex<double> shunt_admittance(const UnitCellParams& p, double frequency_hz);

Immittances immittances(const UnitCellParams& p, double frequency_hz);

/// Chain matrix of one cell: series(Z/2) * shunt(Y) * series(Z/2) for the
/// symmetric T, series(Z) * shunt(Y) for the L-section.
TwoPortd unit_cell_abcd(const UnitCellParams& p, double frequency_hz);

/// n-fold cascade of identical cells, n >= 1.
TwoPortd n_cell_abcd(const UnitCellParams& p, double frequency_hz, int n);

struct SweepGap {
    double frequency_hz = 0.0;
    std::string reason;
};

struct SweepResult {
    SweepTable table;
    std::vector<SweepGap> gaps;
};

/// Per-frequency S-parameters of the n-cell line. Frequencies where the
/// immittances or the conversion are singular are recorded as gaps, never as
/// fabricated values.
SweepResult sweep(const UnitCellParams& p, const FrequencyGrid& grid, int n_cells,
                  double z0_ohm);

}  // namespace mbpf
