#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "mbpf/circuit.hpp"

namespace mbpf {

enum class Regime { passband, stopband, edge };

/// One sample of the Bloch dispersion relation cos(beta*l) = 1 + Z*Y/2.
/// Only the product beta*l is observable here; the physical cell length
/// never enters any computed quantity.
struct DispersionPoint {
    double frequency_hz = 0.0;
    std::complex<double> g;        // 1 + Z*Y/2
    double beta_l_rad = 0.0;       // in [0, pi] when propagating
    double alpha_l_neper = 0.0;    // >= 0 when evanescent
    Regime regime = Regime::stopband;
};

struct BandEdges {
    enum class Method { numeric, closed_form };

    double f_cl_hz = 0.0;
    double f_cu_hz = 0.0;
    Method method = Method::numeric;
};

/// Side-by-side closed-form and numeric band edges and transmission zero,
/// with relative deviations and the sharp-lower-edge condition c <= 4*c_l.
struct ConsistencyReport {
    double closed_f_cl_hz = 0.0;
    double closed_f_cu_hz = 0.0;
    double closed_f_z_hz = 0.0;
    std::optional<double> numeric_f_cl_hz;
    std::optional<double> numeric_f_cu_hz;
    std::optional<double> numeric_f_z_hz;
    std::optional<double> deviation_f_cl;  // |closed - numeric| / numeric
    std::optional<double> deviation_f_cu;
    std::optional<double> deviation_f_z;
    bool sharp_lower_edge = false;         // c <= 4*c_l
    std::optional<double> reference_center_hz;
    std::optional<double> band_center_hz;  // numeric when found, else closed
    std::optional<double> center_ratio;    // band center / reference center
    std::vector<std::string> notes;
};

/// g = 1 + Z(f)*Y(f)/2. Throws SingularPointError where the immittances
/// diverge (the shunt-branch series resonance).
std::complex<double> bloch_g(const UnitCellParams& p, double frequency_hz);

/// Classifies a frequency as propagating, evanescent, or a band edge
/// (|1 - |Re g|| <= 1e-9), filling beta*l or alpha*l accordingly.
DispersionPoint classify(const UnitCellParams& p, double frequency_hz);

/// Scans the grid for pass/stop transitions of |Re g| and refines each one by
/// bisection to the given relative width, pairing them into bands. Returns an
/// empty list when the scan contains no transition. An edge left unpaired by
/// the scan bounds is dropped with a warning: that indicates an under-resolved
/// or truncated scan. The scan must be dense enough that Re g is monotone
/// between samples; 1000+ points are recommended.
std::vector<BandEdges> find_band_edges(const UnitCellParams& p, const FrequencyGrid& search,
                                       double rel_tol = 1e-9,
                                       std::vector<std::string>* warnings = nullptr);

/// Closed-form cutoffs of the reduced cell (series inductor ignored):
///   f_cu = 1/(2*pi*sqrt(c_r*l_l))
///   f_cl = 1/(2*pi*sqrt(l_l*(c_r + c_eff))),  c_eff = (1/c + 1/(4*c_l))^-1.
BandEdges closed_form_cutoffs(const UnitCellParams& p);

/// f_z = 1/(2*pi*sqrt(l_l*(c + c_r))) — the shunt branch series resonance.
double transmission_zero_closed(const UnitCellParams& p);

/// Locates the transmission zero by bisecting the shunt-branch reactance over
/// the search grid. Roots are accepted only where a single cell is actually
/// opaque (|s21| < 1e-4), which rejects the tank pole.
double transmission_zero_numeric(const UnitCellParams& p, const FrequencyGrid& search,
                                 double rel_tol = 1e-9);

/// Closed forms vs an automatic numeric scan, with an optional reference
/// center frequency to flag gross band misplacement.
ConsistencyReport consistency_report(const UnitCellParams& p,
                                     std::optional<double> reference_center_hz = std::nullopt);

/// classify() at every grid point; singular frequencies are skipped as gaps.
std::vector<DispersionPoint> dispersion_curve(const UnitCellParams& p,
                                              const FrequencyGrid& grid);

}  // namespace mbpf
