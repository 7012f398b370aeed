#include "mbpf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mbpf {

namespace {

double db20(double magnitude) {
    return 20.0 * std::log10(std::max(magnitude, 1e-300));
}

std::vector<double> s21_db(const SweepTable& sweep) {
    std::vector<double> out(sweep.points.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = db20(std::abs(sweep.points[i].s21));
    }
    return out;
}

// Linear interpolation of a dB trace at frequency f (must be inside the grid).
double interp_db(const SweepTable& sweep, const std::vector<double>& db, double f) {
    const auto& pts = sweep.points;
    auto it = std::lower_bound(pts.begin(), pts.end(), f,
                               [](const SParameterPoint& p, double v) {
                                   return p.frequency_hz < v;
                               });
    if (it == pts.begin()) {
        return db.front();
    }
    if (it == pts.end()) {
        return db.back();
    }
    const std::size_t hi = static_cast<std::size_t>(it - pts.begin());
    const std::size_t lo = hi - 1;
    const double t = (f - pts[lo].frequency_hz) /
                     (pts[hi].frequency_hz - pts[lo].frequency_hz);
    return db[lo] + t * (db[hi] - db[lo]);
}

std::size_t nearest_index(const SweepTable& sweep, double f) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < sweep.points.size(); ++i) {
        const double d = std::abs(sweep.points[i].frequency_hz - f);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

// Walks outward from the peak to the first crossing of `level` and
// interpolates it linearly in dB.
std::optional<double> crossing_from_peak(const SweepTable& sweep, const std::vector<double>& db,
                                         std::size_t peak, double level, bool downward) {
    const auto& pts = sweep.points;
    if (downward) {
        for (std::size_t i = peak; i > 0; --i) {
            if (db[i] >= level && db[i - 1] < level) {
                const double t = (level - db[i - 1]) / (db[i] - db[i - 1]);
                return pts[i - 1].frequency_hz +
                       t * (pts[i].frequency_hz - pts[i - 1].frequency_hz);
            }
        }
    } else {
        for (std::size_t i = peak; i + 1 < db.size(); ++i) {
            if (db[i] >= level && db[i + 1] < level) {
                const double t = (level - db[i]) / (db[i + 1] - db[i]);
                return pts[i].frequency_hz +
                       t * (pts[i + 1].frequency_hz - pts[i].frequency_hz);
            }
        }
    }
    return std::nullopt;
}

}  // namespace

void SpecMask::validate() const {
    if (!(passband_start_hz > 0.0) || !(passband_start_hz < passband_stop_hz)) {
        throw DomainError("mask pass band must satisfy 0 < start < stop");
    }
    if (!(max_insertion_loss_db > 0.0) || !(min_return_loss_db > 0.0)) {
        throw DomainError("mask requirement levels must be positive");
    }
    for (const auto& sp : stopband_points) {
        if (!(sp.frequency_hz > 0.0) || !(sp.min_attenuation_db > 0.0)) {
            throw DomainError("mask stop-band points must be positive");
        }
    }
}

FilterMetrics compute_metrics(const SweepTable& sweep) {
    if (sweep.points.size() < 3) {
        throw InsufficientGridError("metrics need at least 3 sweep points");
    }
    const std::vector<double> db = s21_db(sweep);
    const std::size_t peak =
        static_cast<std::size_t>(std::max_element(db.begin(), db.end()) - db.begin());
    const double peak_db = db[peak];
    const double level = peak_db - 3.0;

    const auto f_cl = crossing_from_peak(sweep, db, peak, level, true);
    if (!f_cl) {
        throw BandNotBracketedError(BandNotBracketedError::Side::lower);
    }
    const auto f_cu = crossing_from_peak(sweep, db, peak, level, false);
    if (!f_cu) {
        throw BandNotBracketedError(BandNotBracketedError::Side::upper);
    }

    FilterMetrics m;
    m.f_cl_hz = *f_cl;
    m.f_cu_hz = *f_cu;
    m.f0_hz = 0.5 * (*f_cl + *f_cu);
    m.bw3db_hz = *f_cu - *f_cl;
    m.fbw_percent = 100.0 * m.bw3db_hz / m.f0_hz;
    m.il_db = -peak_db;

    const std::size_t i0 = nearest_index(sweep, m.f0_hz);
    m.rl_db_at_f0 = -db20(std::abs(sweep.points[i0].s11));

    const double f_att_lo = 0.8 * m.f_cl_hz;
    const double f_att_hi = 1.2 * m.f_cu_hz;
    if (f_att_lo < sweep.front_hz() || f_att_hi > sweep.back_hz()) {
        throw AnalysisError("attenuation reference frequency outside the sweep grid; widen it");
    }
    m.att_db_at_08fcl = -interp_db(sweep, db, f_att_lo);
    m.att_db_at_12fcu = -interp_db(sweep, db, f_att_hi);

    const auto delays = group_delay(sweep);
    m.group_delay_s_at_f0 = delays[i0].delay_s;
    return m;
}

MaskReport evaluate_mask(const SweepTable& sweep, const SpecMask& mask) {
    mask.validate();
    if (sweep.points.empty()) {
        throw CoverageError("empty sweep");
    }
    const double lo = sweep.front_hz();
    const double hi = sweep.back_hz();
    if (mask.passband_start_hz < lo || mask.passband_stop_hz > hi) {
        throw CoverageError("mask pass band extends outside the sweep range");
    }
    for (const auto& sp : mask.stopband_points) {
        if (sp.frequency_hz < lo || sp.frequency_hz > hi) {
            throw CoverageError("mask stop-band point outside the sweep range");
        }
    }

    const std::vector<double> db = s21_db(sweep);
    MaskReport rep;
    auto add = [&rep](const std::string& id, double f, double required, double achieved,
                      double shortfall) {
        if (shortfall > 0.0) {
            rep.violations.push_back({id, f, required, achieved, shortfall});
            rep.cost += shortfall * shortfall;
        }
    };

    // Insertion loss, referenced to the best in-band sample.
    double band_peak = -std::numeric_limits<double>::infinity();
    bool any_in_band = false;
    for (std::size_t i = 0; i < sweep.points.size(); ++i) {
        const double f = sweep.points[i].frequency_hz;
        if (f >= mask.passband_start_hz && f <= mask.passband_stop_hz) {
            band_peak = std::max(band_peak, db[i]);
            any_in_band = true;
        }
    }
    if (!any_in_band) {
        throw CoverageError("no sweep sample falls inside the mask pass band");
    }
    const double il = -band_peak;
    add("insertion_loss", mask.center_hz(), mask.max_insertion_loss_db, il,
        std::max(0.0, il - mask.max_insertion_loss_db));

    // Return loss at the sample nearest the mask band center.
    const std::size_t ic = nearest_index(sweep, mask.center_hz());
    const double rl = -db20(std::abs(sweep.points[ic].s11));
    add("return_loss", sweep.points[ic].frequency_hz, mask.min_return_loss_db, rl,
        std::max(0.0, mask.min_return_loss_db - rl));

    for (const auto& sp : mask.stopband_points) {
        const double att = -interp_db(sweep, db, sp.frequency_hz);
        add("stopband_attenuation", sp.frequency_hz, sp.min_attenuation_db, att,
            std::max(0.0, sp.min_attenuation_db - att));
    }
    return rep;
}

CompareReport compare_sweeps(const SweepTable& a, const SweepTable& b) {
    if (a.points.empty() || b.points.empty()) {
        throw CoverageError("cannot compare an empty sweep");
    }
    const double lo = std::max(a.front_hz(), b.front_hz());
    const double hi = std::min(a.back_hz(), b.back_hz());
    if (!(lo <= hi)) {
        throw NoOverlapError{};
    }

    // Linear resampling of b's complex values onto a frequency f in range.
    auto resample = [&b](double f) {
        const auto& pts = b.points;
        auto it = std::lower_bound(pts.begin(), pts.end(), f,
                                   [](const SParameterPoint& p, double v) {
                                       return p.frequency_hz < v;
                                   });
        if (it != pts.end() && it->frequency_hz == f) {
            return *it;  // shared grid point, no interpolation residue
        }
        if (it == pts.begin()) {
            return pts.front();
        }
        if (it == pts.end()) {
            return pts.back();
        }
        const auto& hi_p = *it;
        const auto& lo_p = *(it - 1);
        const double t = (f - lo_p.frequency_hz) / (hi_p.frequency_hz - lo_p.frequency_hz);
        SParameterPoint out = lo_p;
        out.frequency_hz = f;
        out.s11 = lo_p.s11 + t * (hi_p.s11 - lo_p.s11);
        out.s21 = lo_p.s21 + t * (hi_p.s21 - lo_p.s21);
        out.s12 = lo_p.s12 + t * (hi_p.s12 - lo_p.s12);
        out.s22 = lo_p.s22 + t * (hi_p.s22 - lo_p.s22);
        return out;
    };

    CompareReport rep;
    for (const auto& p : a.points) {
        if (p.frequency_hz < lo || p.frequency_hz > hi) {
            continue;
        }
        const SParameterPoint q = resample(p.frequency_hz);
        SweepDelta d;
        d.frequency_hz = p.frequency_hz;
        d.s21_db_delta = db20(std::abs(p.s21)) - db20(std::abs(q.s21));
        d.s11_db_delta = db20(std::abs(p.s11)) - db20(std::abs(q.s11));
        rep.max_abs_s21_db_delta = std::max(rep.max_abs_s21_db_delta, std::abs(d.s21_db_delta));
        rep.max_abs_s11_db_delta = std::max(rep.max_abs_s11_db_delta, std::abs(d.s11_db_delta));
        rep.points.push_back(d);
    }
    if (rep.points.empty()) {
        throw NoOverlapError{};
    }

    try {
        const FilterMetrics ma = compute_metrics(a);
        const FilterMetrics mb = compute_metrics(b);
        MetricsDelta delta;
        delta.f0_hz = mb.f0_hz - ma.f0_hz;
        delta.bw3db_hz = mb.bw3db_hz - ma.bw3db_hz;
        delta.il_db = mb.il_db - ma.il_db;
        delta.rl_db_at_f0 = mb.rl_db_at_f0 - ma.rl_db_at_f0;
        rep.metrics_delta = delta;
    } catch (const AnalysisError&) {
        // metric deltas are omitted when either band is not extractable
    }
    return rep;
}

}  // namespace mbpf
