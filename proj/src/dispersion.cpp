#include "mbpf/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace mbpf {

namespace {

constexpr double kEdgeTol = 1e-9;

bool finite(const std::complex<double>& v) {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
}

// Re g with singular points mapped to +inf so a pole reads as deep stopband
// on both sides and never fakes an edge crossing.
double re_g_or_inf(const UnitCellParams& p, double f) {
    const auto im = immittances(p, f);
    if (!finite(im.z_series) || !finite(im.y_shunt)) {
        return std::numeric_limits<double>::infinity();
    }
    const std::complex<double> g = 1.0 + im.z_series * im.y_shunt * 0.5;
    return finite(g) ? g.real() : std::numeric_limits<double>::infinity();
}

// Shunt branch reactance Im(1/Y) in the rational form
//   x(w) = -(1 - w^2 L (C + C_R)) / (w C (1 - w^2 L C_R)),
// which crosses zero at the transmission zero and has a pole at the tank
// resonance.
double branch_reactance(const UnitCellParams& p, double f) {
    const double w = kTwoPi * f;
    const double u = 1.0 - w * w * p.l_l_henry * p.c_r_farad;
    const double v = 1.0 - w * w * p.l_l_henry * (p.c_farad + p.c_r_farad);
    return -v / (w * p.c_farad * u);
}

double bisect(const UnitCellParams& p, double (*h)(const UnitCellParams&, double), double lo,
              double hi, double rel_tol) {
    double h_lo = h(p, lo);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if ((hi - lo) <= rel_tol * mid) {
            break;
        }
        const double h_mid = h(p, mid);
        if (std::signbit(h_mid) == std::signbit(h_lo)) {
            lo = mid;
            h_lo = h_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double edge_indicator(const UnitCellParams& p, double f) {
    return std::abs(re_g_or_inf(p, f)) - 1.0;
}

}  // namespace

std::complex<double> bloch_g(const UnitCellParams& p, double frequency_hz) {
    const auto im = immittances(p, frequency_hz);
    if (!finite(im.z_series) || !finite(im.y_shunt)) {
        throw SingularPointError(frequency_hz);
    }
    const std::complex<double> g = 1.0 + im.z_series * im.y_shunt * 0.5;
    if (!finite(g)) {
        throw SingularPointError(frequency_hz);
    }
    return g;
}

DispersionPoint classify(const UnitCellParams& p, double frequency_hz) {
    DispersionPoint out;
    out.frequency_hz = frequency_hz;
    out.g = bloch_g(p, frequency_hz);
    const double re = out.g.real();
    if (std::abs(1.0 - std::abs(re)) <= kEdgeTol) {
        out.regime = Regime::edge;
        out.beta_l_rad = re > 0.0 ? 0.0 : std::numbers::pi;
        out.alpha_l_neper = 0.0;
    } else if (std::abs(re) < 1.0) {
        out.regime = Regime::passband;
        out.beta_l_rad = std::acos(re);
        out.alpha_l_neper = 0.0;
    } else {
        out.regime = Regime::stopband;
        out.beta_l_rad = re > 0.0 ? 0.0 : std::numbers::pi;
        out.alpha_l_neper = std::acosh(std::abs(re));
    }
    return out;
}

std::vector<BandEdges> find_band_edges(const UnitCellParams& p, const FrequencyGrid& search,
                                       double rel_tol, std::vector<std::string>* warnings) {
    p.validate();
    const Eigen::ArrayXd freqs = search.frequencies();
    const auto n = freqs.size();

    std::vector<bool> inside(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        inside[static_cast<std::size_t>(i)] = std::abs(re_g_or_inf(p, freqs(i))) <= 1.0;
    }

    struct Crossing {
        double frequency_hz;
        bool entering;  // stopband -> passband
    };
    std::vector<Crossing> crossings;
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        const auto a = static_cast<std::size_t>(i);
        if (inside[a] == inside[a + 1]) {
            continue;
        }
        const double f = bisect(p, edge_indicator, freqs(i), freqs(i + 1), rel_tol);
        crossings.push_back({f, inside[a + 1]});
    }

    std::vector<BandEdges> bands;
    std::size_t i = 0;
    while (i < crossings.size()) {
        if (!crossings[i].entering) {
            if (warnings) {
                warnings->push_back("dropping unpaired upper edge at " +
                                    std::to_string(crossings[i].frequency_hz) +
                                    " Hz (band starts below the scan)");
            }
            ++i;
            continue;
        }
        if (i + 1 >= crossings.size()) {
            if (warnings) {
                warnings->push_back("dropping unpaired lower edge at " +
                                    std::to_string(crossings[i].frequency_hz) +
                                    " Hz (band continues past the scan)");
            }
            break;
        }
        bands.push_back({crossings[i].frequency_hz, crossings[i + 1].frequency_hz,
                         BandEdges::Method::numeric});
        i += 2;
    }
    return bands;
}

BandEdges closed_form_cutoffs(const UnitCellParams& p) {
    p.validate();
    const double c_eff = 1.0 / (1.0 / p.c_farad + 1.0 / (4.0 * p.c_l_farad));
    BandEdges out;
    out.method = BandEdges::Method::closed_form;
    out.f_cu_hz = 1.0 / (kTwoPi * std::sqrt(p.c_r_farad * p.l_l_henry));
    out.f_cl_hz = 1.0 / (kTwoPi * std::sqrt(p.l_l_henry * (p.c_r_farad + c_eff)));
    return out;
}

double transmission_zero_closed(const UnitCellParams& p) {
    p.validate();
    return 1.0 / (kTwoPi * std::sqrt(p.l_l_henry * (p.c_farad + p.c_r_farad)));
}

double transmission_zero_numeric(const UnitCellParams& p, const FrequencyGrid& search,
                                 double rel_tol) {
    p.validate();
    const Eigen::ArrayXd freqs = search.frequencies();

    double prev = branch_reactance(p, freqs(0));
    for (Eigen::Index i = 1; i < freqs.size(); ++i) {
        const double cur = branch_reactance(p, freqs(i));
        if (std::isfinite(prev) && std::isfinite(cur) &&
            std::signbit(prev) != std::signbit(cur)) {
            const double root = bisect(p, branch_reactance, freqs(i - 1), freqs(i), rel_tol);
            // A true zero shorts the line; the tank pole does not.
            const auto s = abcd_to_s(unit_cell_abcd(p, root), 50.0, root);
            if (std::abs(s.s21) < 1e-4) {
                return root;
            }
        }
        prev = cur;
    }
    throw NotFoundError("no transmission zero bracketed by the search grid");
}

ConsistencyReport consistency_report(const UnitCellParams& p,
                                     std::optional<double> reference_center_hz) {
    p.validate();
    ConsistencyReport rep;
    const BandEdges closed = closed_form_cutoffs(p);
    rep.closed_f_cl_hz = closed.f_cl_hz;
    rep.closed_f_cu_hz = closed.f_cu_hz;
    rep.closed_f_z_hz = transmission_zero_closed(p);
    rep.sharp_lower_edge = p.c_farad <= 4.0 * p.c_l_farad;

    // Numeric transmission zero: bracket between well below f_z and the
    // midpoint toward the tank pole (which sits at the closed-form f_cu).
    try {
        FrequencyGrid zero_scan{0.4 * rep.closed_f_z_hz,
                                0.5 * (rep.closed_f_z_hz + rep.closed_f_cu_hz), 64,
                                FrequencyGrid::Spacing::linear};
        rep.numeric_f_z_hz = transmission_zero_numeric(p, zero_scan);
        rep.deviation_f_z = std::abs(rep.closed_f_z_hz - *rep.numeric_f_z_hz) / *rep.numeric_f_z_hz;
    } catch (const NotFoundError&) {
        rep.notes.push_back("numeric transmission zero not found in the automatic scan");
    }

    // Numeric band edges from a scan window derived from the closed forms.
    const double lo = 0.35 * std::min(closed.f_cl_hz, rep.closed_f_z_hz);
    const double hi = 2.5 * closed.f_cu_hz;
    FrequencyGrid band_scan{lo, hi, 6001, FrequencyGrid::Spacing::linear};
    const auto bands = find_band_edges(p, band_scan);
    if (!bands.empty()) {
        // Pick the band overlapping the closed-form prediction the most.
        const BandEdges* best = nullptr;
        double best_overlap = -1.0;
        for (const auto& b : bands) {
            const double overlap = std::max(
                0.0, std::min(b.f_cu_hz, closed.f_cu_hz) - std::max(b.f_cl_hz, closed.f_cl_hz));
            if (overlap > best_overlap) {
                best_overlap = overlap;
                best = &b;
            }
        }
        rep.numeric_f_cl_hz = best->f_cl_hz;
        rep.numeric_f_cu_hz = best->f_cu_hz;
        rep.deviation_f_cl = std::abs(closed.f_cl_hz - best->f_cl_hz) / best->f_cl_hz;
        rep.deviation_f_cu = std::abs(closed.f_cu_hz - best->f_cu_hz) / best->f_cu_hz;
        if (bands.size() > 1) {
            rep.notes.push_back("scan found " + std::to_string(bands.size()) +
                                " bands; reporting the one nearest the closed forms");
        }
    } else {
        rep.notes.push_back("no numeric band found in the automatic scan");
    }

    const double max_dev = std::max(rep.deviation_f_cl.value_or(0.0),
                                    rep.deviation_f_cu.value_or(0.0));
    if (max_dev > 0.05) {
        rep.notes.push_back(
            "closed-form cutoffs deviate from the numeric Bloch edges by more than 5%; "
            "the closed forms ignore the series branch inductance");
    }

    if (rep.numeric_f_cl_hz && rep.numeric_f_cu_hz) {
        rep.band_center_hz = 0.5 * (*rep.numeric_f_cl_hz + *rep.numeric_f_cu_hz);
    } else {
        rep.band_center_hz = 0.5 * (closed.f_cl_hz + closed.f_cu_hz);
    }
    if (reference_center_hz && *reference_center_hz > 0.0) {
        rep.reference_center_hz = reference_center_hz;
        rep.center_ratio = *rep.band_center_hz / *reference_center_hz;
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "band center %.4g Hz is %.2fx the reference center %.4g Hz",
                      *rep.band_center_hz, *rep.center_ratio, *reference_center_hz);
        rep.notes.push_back(buf);
    }
    return rep;
}

std::vector<DispersionPoint> dispersion_curve(const UnitCellParams& p,
                                              const FrequencyGrid& grid) {
    const Eigen::ArrayXd freqs = grid.frequencies();
    std::vector<DispersionPoint> out;
    out.reserve(static_cast<std::size_t>(freqs.size()));
    for (Eigen::Index i = 0; i < freqs.size(); ++i) {
        try {
            out.push_back(classify(p, freqs(i)));
        } catch (const SingularPointError&) {
            // gap: singular sample skipped, never fabricated
        }
    }
    return out;
}

}  // namespace mbpf
