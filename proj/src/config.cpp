#include "mbpf/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace mbpf {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError("config field \"" + path + "\": " + what);
}

void check_keys(const json& j, const std::string& path, std::set<std::string> allowed) {
    if (!j.is_object()) {
        fail(path, "expected an object");
    }
    for (const auto& [key, value] : j.items()) {
        if (!allowed.count(key)) {
            fail(path.empty() ? key : path + "." + key, "unknown key");
        }
    }
}

const json* find(const json& j, const std::string& key) {
    auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

double require_number(const json& j, const std::string& path, const std::string& key) {
    const json* v = find(j, key);
    if (!v) {
        fail(path + "." + key, "missing required value");
    }
    if (!v->is_number()) {
        fail(path + "." + key, "expected a number");
    }
    return v->get<double>();
}

double optional_number(const json& j, const std::string& path, const std::string& key,
                       double fallback) {
    const json* v = find(j, key);
    if (!v) {
        return fallback;
    }
    if (!v->is_number()) {
        fail(path + "." + key, "expected a number");
    }
    return v->get<double>();
}

int optional_int(const json& j, const std::string& path, const std::string& key, int fallback) {
    const json* v = find(j, key);
    if (!v) {
        return fallback;
    }
    if (!v->is_number_integer()) {
        fail(path + "." + key, "expected an integer");
    }
    return v->get<int>();
}

bool optional_bool(const json& j, const std::string& path, const std::string& key,
                   bool fallback) {
    const json* v = find(j, key);
    if (!v) {
        return fallback;
    }
    if (!v->is_boolean()) {
        fail(path + "." + key, "expected a boolean");
    }
    return v->get<bool>();
}

double positive(double v, const std::string& path) {
    if (!(v > 0.0)) {
        fail(path, "must be positive");
    }
    return v;
}

UnitCellParams parse_unit_cell(const json& j, const std::string& path) {
    check_keys(j, path,
               {"c_l_farad", "l_r_henry", "c_farad", "c_r_farad", "l_l_henry",
                "include_series_inductor", "topology"});
    UnitCellParams p;
    p.c_l_farad = positive(require_number(j, path, "c_l_farad"), path + ".c_l_farad");
    p.l_r_henry = positive(require_number(j, path, "l_r_henry"), path + ".l_r_henry");
    p.c_farad = positive(require_number(j, path, "c_farad"), path + ".c_farad");
    p.c_r_farad = positive(require_number(j, path, "c_r_farad"), path + ".c_r_farad");
    p.l_l_henry = positive(require_number(j, path, "l_l_henry"), path + ".l_l_henry");
    p.include_series_inductor = optional_bool(j, path, "include_series_inductor", true);
    if (const json* t = find(j, "topology")) {
        if (!t->is_string()) {
            fail(path + ".topology", "expected a string");
        }
        const std::string s = t->get<std::string>();
        if (s == "symmetric_t") {
            p.topology = Topology::symmetric_t;
        } else if (s == "l_section") {
            p.topology = Topology::l_section;
        } else {
            fail(path + ".topology", "must be \"symmetric_t\" or \"l_section\"");
        }
    }
    return p;
}

FrequencyGrid parse_grid(const json& j, const std::string& path) {
    check_keys(j, path, {"start_hz", "stop_hz", "points", "spacing"});
    FrequencyGrid g;
    g.start_hz = require_number(j, path, "start_hz");
    g.stop_hz = require_number(j, path, "stop_hz");
    g.points = optional_int(j, path, "points", 0);
    if (g.points == 0) {
        fail(path + ".points", "missing required value");
    }
    if (const json* s = find(j, "spacing")) {
        if (!s->is_string()) {
            fail(path + ".spacing", "expected a string");
        }
        const std::string v = s->get<std::string>();
        if (v == "linear") {
            g.spacing = FrequencyGrid::Spacing::linear;
        } else if (v == "logarithmic") {
            g.spacing = FrequencyGrid::Spacing::logarithmic;
        } else {
            fail(path + ".spacing", "must be \"linear\" or \"logarithmic\"");
        }
    }
    try {
        g.validate();
    } catch (const AnalysisError& e) {
        fail(path, e.what());
    }
    return g;
}

SpecMask parse_mask(const json& j, const std::string& path) {
    check_keys(j, path,
               {"passband_start_hz", "passband_stop_hz", "max_insertion_loss_db",
                "min_return_loss_db", "stopband_points"});
    SpecMask m;
    m.passband_start_hz = require_number(j, path, "passband_start_hz");
    m.passband_stop_hz = require_number(j, path, "passband_stop_hz");
    m.max_insertion_loss_db = require_number(j, path, "max_insertion_loss_db");
    m.min_return_loss_db = require_number(j, path, "min_return_loss_db");
    if (const json* pts = find(j, "stopband_points")) {
        if (!pts->is_array()) {
            fail(path + ".stopband_points", "expected an array");
        }
        int i = 0;
        for (const auto& pt : *pts) {
            const std::string p = path + ".stopband_points[" + std::to_string(i++) + "]";
            check_keys(pt, p, {"frequency_hz", "min_attenuation_db"});
            StopbandPoint sp;
            sp.frequency_hz = require_number(pt, p, "frequency_hz");
            sp.min_attenuation_db = require_number(pt, p, "min_attenuation_db");
            m.stopband_points.push_back(sp);
        }
    }
    try {
        m.validate();
    } catch (const AnalysisError& e) {
        fail(path, e.what());
    }
    return m;
}

ParameterBounds parse_bounds(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        fail(path, "expected [lower, upper]");
    }
    ParameterBounds b{j[0].get<double>(), j[1].get<double>()};
    if (!(b.lower > 0.0) || !(b.lower < b.upper)) {
        fail(path, "must satisfy 0 < lower < upper");
    }
    return b;
}

SynthesisConfig parse_synthesis(const json& j, const std::string& path, const RunConfig& top) {
    check_keys(j, path,
               {"bounds", "grid", "stages", "z0_ohm", "max_iterations", "simplex_tolerance",
                "restart_count", "seed", "f0_target_hz", "f0_tolerance_rel", "bw_target_hz",
                "bw_tolerance_rel", "placement_weight"});
    SynthesisConfig s;
    const json* bounds = find(j, "bounds");
    if (!bounds) {
        fail(path + ".bounds", "missing required value");
    }
    check_keys(*bounds, path + ".bounds",
               {"c_l_farad", "l_r_henry", "c_farad", "c_r_farad", "l_l_henry"});
    auto bound_of = [&](const char* key) {
        const json* b = find(*bounds, key);
        if (!b) {
            fail(path + ".bounds." + key, "missing required value");
        }
        return parse_bounds(*b, path + ".bounds." + key);
    };
    s.c_l_farad = bound_of("c_l_farad");
    s.l_r_henry = bound_of("l_r_henry");
    s.c_farad = bound_of("c_farad");
    s.c_r_farad = bound_of("c_r_farad");
    s.l_l_henry = bound_of("l_l_henry");

    s.sweep_grid = find(j, "grid") ? parse_grid(*find(j, "grid"), path + ".grid") : top.grid;
    s.stages = optional_int(j, path, "stages", top.stages);
    s.z0_ohm = positive(optional_number(j, path, "z0_ohm", top.z0_ohm), path + ".z0_ohm");
    s.topology = top.unit_cell.topology;
    s.include_series_inductor = top.unit_cell.include_series_inductor;
    s.max_iterations = optional_int(j, path, "max_iterations", s.max_iterations);
    s.simplex_tolerance =
        optional_number(j, path, "simplex_tolerance", s.simplex_tolerance);
    s.restart_count = optional_int(j, path, "restart_count", s.restart_count);
    if (const json* seed = find(j, "seed")) {
        if (!seed->is_number_unsigned() && !seed->is_number_integer()) {
            fail(path + ".seed", "expected an unsigned integer");
        }
        s.seed = seed->get<std::uint64_t>();
    }
    if (const json* t = find(j, "f0_target_hz")) {
        if (!t->is_number()) {
            fail(path + ".f0_target_hz", "expected a number");
        }
        s.f0_target_hz = positive(t->get<double>(), path + ".f0_target_hz");
    }
    s.f0_tolerance_rel = optional_number(j, path, "f0_tolerance_rel", s.f0_tolerance_rel);
    if (const json* t = find(j, "bw_target_hz")) {
        if (!t->is_number()) {
            fail(path + ".bw_target_hz", "expected a number");
        }
        s.bw_target_hz = positive(t->get<double>(), path + ".bw_target_hz");
    }
    s.bw_tolerance_rel = optional_number(j, path, "bw_tolerance_rel", s.bw_tolerance_rel);
    s.placement_weight = optional_number(j, path, "placement_weight", s.placement_weight);
    try {
        s.validate();
    } catch (const AnalysisError& e) {
        fail(path, e.what());
    }
    return s;
}

}  // namespace

RunConfig parse_run_config(const json& j) {
    check_keys(j, "",
               {"schema_version", "unit_cell", "swap_inductors", "grid", "stages", "z0_ohm",
                "reference_center_hz", "out_dir", "mask", "synthesis"});
    const json* version = find(j, "schema_version");
    if (!version || !version->is_number_integer()) {
        fail("schema_version", "missing required integer");
    }
    if (version->get<int>() != RunConfig::kSchemaVersion) {
        fail("schema_version",
             "unsupported version " + std::to_string(version->get<int>()) + " (expected " +
                 std::to_string(RunConfig::kSchemaVersion) + ")");
    }

    RunConfig cfg;
    const json* cell = find(j, "unit_cell");
    if (!cell) {
        fail("unit_cell", "missing required object");
    }
    cfg.unit_cell = parse_unit_cell(*cell, "unit_cell");
    cfg.swap_inductors = optional_bool(j, "", "swap_inductors", false);

    const json* grid = find(j, "grid");
    if (!grid) {
        fail("grid", "missing required object");
    }
    cfg.grid = parse_grid(*grid, "grid");

    cfg.stages = optional_int(j, "", "stages", 1);
    if (cfg.stages < 1) {
        fail("stages", "must be at least 1");
    }
    cfg.z0_ohm = positive(optional_number(j, "", "z0_ohm", 50.0), "z0_ohm");
    if (const json* ref = find(j, "reference_center_hz")) {
        if (!ref->is_number()) {
            fail("reference_center_hz", "expected a number");
        }
        cfg.reference_center_hz = positive(ref->get<double>(), "reference_center_hz");
    }
    if (const json* out = find(j, "out_dir")) {
        if (!out->is_string() || out->get<std::string>().empty()) {
            fail("out_dir", "expected a non-empty string");
        }
        cfg.out_dir = out->get<std::string>();
    }
    if (const json* mask = find(j, "mask")) {
        cfg.mask = parse_mask(*mask, "mask");
    }
    if (const json* synth = find(j, "synthesis")) {
        cfg.synthesis = parse_synthesis(*synth, "synthesis", cfg);
    }
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file " + path.string());
    }
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config file " + path.string() + " is not valid JSON: " + e.what());
    }
    return parse_run_config(j);
}

json to_json(const UnitCellParams& p) {
    return json{{"c_l_farad", p.c_l_farad},
                {"l_r_henry", p.l_r_henry},
                {"c_farad", p.c_farad},
                {"c_r_farad", p.c_r_farad},
                {"l_l_henry", p.l_l_henry},
                {"include_series_inductor", p.include_series_inductor},
                {"topology",
                 p.topology == Topology::symmetric_t ? "symmetric_t" : "l_section"}};
}

json to_json(const RunConfig& cfg) {
    json j{{"schema_version", RunConfig::kSchemaVersion},
           {"unit_cell", to_json(cfg.unit_cell)},
           {"swap_inductors", cfg.swap_inductors},
           {"grid",
            {{"start_hz", cfg.grid.start_hz},
             {"stop_hz", cfg.grid.stop_hz},
             {"points", cfg.grid.points},
             {"spacing",
              cfg.grid.spacing == FrequencyGrid::Spacing::linear ? "linear" : "logarithmic"}}},
           {"stages", cfg.stages},
           {"z0_ohm", cfg.z0_ohm}};
    if (cfg.reference_center_hz) {
        j["reference_center_hz"] = *cfg.reference_center_hz;
    }
    if (cfg.out_dir) {
        j["out_dir"] = *cfg.out_dir;
    }
    if (cfg.mask) {
        json pts = json::array();
        for (const auto& sp : cfg.mask->stopband_points) {
            pts.push_back({{"frequency_hz", sp.frequency_hz},
                           {"min_attenuation_db", sp.min_attenuation_db}});
        }
        j["mask"] = {{"passband_start_hz", cfg.mask->passband_start_hz},
                     {"passband_stop_hz", cfg.mask->passband_stop_hz},
                     {"max_insertion_loss_db", cfg.mask->max_insertion_loss_db},
                     {"min_return_loss_db", cfg.mask->min_return_loss_db},
                     {"stopband_points", pts}};
    }
    return j;
}

json to_json(const FilterMetrics& m) {
    return json{{"f0_hz", m.f0_hz},
                {"bw3db_hz", m.bw3db_hz},
                {"fbw_percent", m.fbw_percent},
                {"il_db", m.il_db},
                {"rl_db_at_f0", m.rl_db_at_f0},
                {"f_cl_hz", m.f_cl_hz},
                {"f_cu_hz", m.f_cu_hz},
                {"att_db_at_08fcl", m.att_db_at_08fcl},
                {"att_db_at_12fcu", m.att_db_at_12fcu},
                {"group_delay_s_at_f0", m.group_delay_s_at_f0}};
}

json to_json(const MaskViolation& v) {
    return json{{"requirement", v.requirement},
                {"frequency_hz", v.frequency_hz},
                {"required_db", v.required_db},
                {"achieved_db", v.achieved_db},
                {"shortfall_db", v.shortfall_db}};
}

json to_json(const ConsistencyReport& r) {
    json j{{"closed_form",
            {{"f_cl_hz", r.closed_f_cl_hz},
             {"f_cu_hz", r.closed_f_cu_hz},
             {"f_z_hz", r.closed_f_z_hz}}},
           {"sharp_lower_edge", r.sharp_lower_edge},
           {"notes", r.notes}};
    json numeric = json::object();
    if (r.numeric_f_cl_hz) numeric["f_cl_hz"] = *r.numeric_f_cl_hz;
    if (r.numeric_f_cu_hz) numeric["f_cu_hz"] = *r.numeric_f_cu_hz;
    if (r.numeric_f_z_hz) numeric["f_z_hz"] = *r.numeric_f_z_hz;
    j["numeric"] = numeric;
    json dev = json::object();
    if (r.deviation_f_cl) dev["f_cl"] = *r.deviation_f_cl;
    if (r.deviation_f_cu) dev["f_cu"] = *r.deviation_f_cu;
    if (r.deviation_f_z) dev["f_z"] = *r.deviation_f_z;
    j["relative_deviation"] = dev;
    if (r.band_center_hz) j["band_center_hz"] = *r.band_center_hz;
    if (r.reference_center_hz) j["reference_center_hz"] = *r.reference_center_hz;
    if (r.center_ratio) j["center_ratio"] = *r.center_ratio;
    return j;
}

json to_json(const SynthesisResult& r) {
    json violations = json::array();
    for (const auto& v : r.violations) {
        violations.push_back(to_json(v));
    }
    json j{{"params", to_json(r.params)},
           {"final_cost", r.final_cost},
           {"violations", violations},
           {"iterations", r.iterations},
           {"best_restart", r.best_restart},
           {"converged", r.converged}};
    if (r.metrics) {
        j["metrics"] = to_json(*r.metrics);
    }
    return j;
}

json to_json(const CompareReport& r) {
    json j{{"max_abs_s21_db_delta", r.max_abs_s21_db_delta},
           {"max_abs_s11_db_delta", r.max_abs_s11_db_delta},
           {"overlap_points", r.points.size()}};
    if (r.metrics_delta) {
        j["metrics_delta"] = {{"f0_hz", r.metrics_delta->f0_hz},
                              {"bw3db_hz", r.metrics_delta->bw3db_hz},
                              {"il_db", r.metrics_delta->il_db},
                              {"rl_db_at_f0", r.metrics_delta->rl_db_at_f0}};
    }
    return j;
}

std::string metrics_text_table(const FilterMetrics& m) {
    char buf[512];
    std::string out =
        "  f0 (GHz)  bw3dB (MHz)  fbw (%)  IL (dB)  RL@f0 (dB)  att@0.8fcl (dB)  "
        "att@1.2fcu (dB)  delay@f0 (ns)\n";
    std::snprintf(buf, sizeof(buf),
                  "  %8.4f  %11.2f  %7.2f  %7.3f  %10.2f  %15.2f  %15.2f  %13.4f\n",
                  m.f0_hz / 1e9, m.bw3db_hz / 1e6, m.fbw_percent, m.il_db, m.rl_db_at_f0,
                  m.att_db_at_08fcl, m.att_db_at_12fcu, m.group_delay_s_at_f0 * 1e9);
    out += buf;
    return out;
}

std::string consistency_text_report(const ConsistencyReport& r) {
    std::ostringstream os;
    auto line = [&os](const char* name, double closed, const std::optional<double>& numeric,
                      const std::optional<double>& dev) {
        char buf[160];
        if (numeric) {
            std::snprintf(buf, sizeof(buf), "  %-5s closed %.6g Hz   numeric %.6g Hz   delta %.3g%%\n",
                          name, closed, *numeric, 100.0 * dev.value_or(0.0));
        } else {
            std::snprintf(buf, sizeof(buf), "  %-5s closed %.6g Hz   numeric (not found)\n",
                          name, closed);
        }
        os << buf;
    };
    os << "band edges and transmission zero, closed form vs numeric Bloch scan:\n";
    line("f_cl", r.closed_f_cl_hz, r.numeric_f_cl_hz, r.deviation_f_cl);
    line("f_cu", r.closed_f_cu_hz, r.numeric_f_cu_hz, r.deviation_f_cu);
    line("f_z", r.closed_f_z_hz, r.numeric_f_z_hz, r.deviation_f_z);
    os << "sharp lower edge (c <= 4*c_l): " << (r.sharp_lower_edge ? "yes" : "no") << "\n";
    for (const auto& n : r.notes) {
        os << "note: " << n << "\n";
    }
    return os.str();
}

void atomic_write_file(const std::filesystem::path& path, const std::string& contents) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw DataError("cannot write " + tmp.string());
        }
        out << contents;
        if (!out.good()) {
            throw DataError("short write to " + tmp.string());
        }
    }
    fs::rename(tmp, path);
}

}  // namespace mbpf
