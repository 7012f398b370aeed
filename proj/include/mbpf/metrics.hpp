#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mbpf/twoport.hpp"

namespace mbpf {

/// Figures of merit extracted from one sweep. The 3 dB reference is the
/// in-band |s21| peak, not 0 dB, so the same extraction works for lossless
/// simulations and lossy measured data. f0 is the arithmetic mean of the
/// 3 dB edges.
struct FilterMetrics {
    double f0_hz = 0.0;
    double bw3db_hz = 0.0;
    double fbw_percent = 0.0;
    double il_db = 0.0;           // pass-band insertion loss (peak referenced)
    double rl_db_at_f0 = 0.0;     // return loss at the sample nearest f0
    double f_cl_hz = 0.0;         // lower 3 dB edge
    double f_cu_hz = 0.0;         // upper 3 dB edge
    double att_db_at_08fcl = 0.0; // attenuation at 0.8 * f_cl
    double att_db_at_12fcu = 0.0; // attenuation at 1.2 * f_cu
    double group_delay_s_at_f0 = 0.0;
};

struct StopbandPoint {
    double frequency_hz = 0.0;
    double min_attenuation_db = 0.0;
};

/// Pass-band/stop-band requirements a response must satisfy.
struct SpecMask {
    double passband_start_hz = 0.0;
    double passband_stop_hz = 0.0;
    double max_insertion_loss_db = 0.0;
    double min_return_loss_db = 0.0;
    std::vector<StopbandPoint> stopband_points;

    void validate() const;
    double center_hz() const { return 0.5 * (passband_start_hz + passband_stop_hz); }
};

struct MaskViolation {
    std::string requirement;
    double frequency_hz = 0.0;
    double required_db = 0.0;
    double achieved_db = 0.0;
    double shortfall_db = 0.0;
};

struct MaskReport {
    std::vector<MaskViolation> violations;
    double cost = 0.0;  // sum of squared shortfalls; 0 iff no violations
};

struct SweepDelta {
    double frequency_hz = 0.0;
    double s21_db_delta = 0.0;  // a minus b, b resampled onto a's grid
    double s11_db_delta = 0.0;
};

struct MetricsDelta {
    double f0_hz = 0.0;
    double bw3db_hz = 0.0;
    double il_db = 0.0;
    double rl_db_at_f0 = 0.0;
};

struct CompareReport {
    std::vector<SweepDelta> points;
    double max_abs_s21_db_delta = 0.0;
    double max_abs_s11_db_delta = 0.0;
    std::optional<MetricsDelta> metrics_delta;  // b minus a, when both computable
};

/// Extracts FilterMetrics. Throws BandNotBracketedError (naming the missing
/// side) when a 3 dB crossing falls outside the grid, and AnalysisError when
/// an attenuation reference frequency does.
FilterMetrics compute_metrics(const SweepTable& sweep);

/// Checks a sweep against a mask. Insertion loss is peak-referenced over the
/// mask pass band, return loss is taken at the sample nearest the mask band
/// center, stop-band attenuations are interpolated in dB. Requirement
/// frequencies outside the sweep raise CoverageError.
MaskReport evaluate_mask(const SweepTable& sweep, const SpecMask& mask);

/// Per-frequency dB differences over the overlapping range plus metric-level
/// deltas. b is resampled onto a's grid by linear interpolation of the
/// real and imaginary parts.
CompareReport compare_sweeps(const SweepTable& a, const SweepTable& b);

}  // namespace mbpf
