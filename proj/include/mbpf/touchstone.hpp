#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mbpf/dispersion.hpp"
#include "mbpf/metrics.hpp"
#include "mbpf/twoport.hpp"

namespace mbpf {

enum class FrequencyUnit { hz, khz, mhz, ghz };
enum class NumberFormat { ri, ma, db };

/// Two-port Touchstone v1 options. Reading defaults to the format's implicit
/// option line (GHz, S, MA, 50 ohm); writing defaults to Hz/RI so frequencies
/// survive a round trip exactly.
struct TouchstoneOptions {
    FrequencyUnit unit = FrequencyUnit::ghz;
    NumberFormat format = NumberFormat::ma;
    double resistance_ohm = 50.0;
};

inline TouchstoneOptions touchstone_write_defaults() {
    return {FrequencyUnit::hz, NumberFormat::ri, 50.0};
}

struct ParsedTouchstone {
    SweepTable table;
    TouchstoneOptions options;
    std::vector<std::string> warnings;
};

/// Parses a two-port .s2p body: '!' comments, one case-insensitive option
/// line, and 9-number data rows in S11 S21 S12 S22 order. Angles are in
/// degrees, dB magnitudes are 20*log10. Non-monotonic frequencies are sorted
/// stably with a warning. Touchstone v2 keyword lines are rejected.
ParsedTouchstone parse_touchstone(std::string_view text);

/// Emits a .s2p body with one option line and at least 9 significant digits
/// per value. The sweep must be non-empty; the option line carries the
/// sweep's own reference impedance (opts.resistance_ohm is ignored).
std::string write_touchstone(const SweepTable& sweep,
                             const TouchstoneOptions& opts = touchstone_write_defaults());

/// CSV exports. Column orders are fixed and documented in the CLI help.
std::string write_csv(const SweepTable& sweep);
std::string write_csv(const std::vector<DispersionPoint>& curve);
std::string write_csv(const std::vector<GroupDelayPoint>& delays);
std::string write_csv(const FilterMetrics& metrics);

}  // namespace mbpf
