#pragma once

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>

#include "mbpf/dispersion.hpp"
#include "mbpf/metrics.hpp"
#include "mbpf/synthesis.hpp"

namespace mbpf {

/// One run of the tool: cell values, interpretation flags, sweep plan and the
/// optional mask/synthesis blocks. Loaded from schema-checked JSON; unknown
/// keys are rejected.
struct RunConfig {
    static constexpr int kSchemaVersion = 1;

    UnitCellParams unit_cell;
    bool swap_inductors = false;  // applied at load; `cell()` is post-swap
    FrequencyGrid grid;
    int stages = 1;
    double z0_ohm = 50.0;
    std::optional<double> reference_center_hz;
    std::optional<std::string> out_dir;  // the CLI --out flag overrides this
    std::optional<SpecMask> mask;
    std::optional<SynthesisConfig> synthesis;

    /// Unit cell with the swap flag applied.
    UnitCellParams cell() const { return swap_inductors ? unit_cell.swapped() : unit_cell; }
};

RunConfig parse_run_config(const nlohmann::json& j);
RunConfig load_run_config(const std::filesystem::path& path);

nlohmann::json to_json(const RunConfig& cfg);
nlohmann::json to_json(const UnitCellParams& p);
nlohmann::json to_json(const FilterMetrics& m);
nlohmann::json to_json(const MaskViolation& v);
nlohmann::json to_json(const ConsistencyReport& r);
nlohmann::json to_json(const SynthesisResult& r);
nlohmann::json to_json(const CompareReport& r);

/// Aligned figure-of-merit row (center frequency, bandwidth, fractional
/// bandwidth, losses, stop-band attenuations), with a header line.
std::string metrics_text_table(const FilterMetrics& m);

std::string consistency_text_report(const ConsistencyReport& r);

/// Writes via a temporary file in the same directory, then renames.
void atomic_write_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace mbpf
