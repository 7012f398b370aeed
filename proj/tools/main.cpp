// mbpf — analysis and synthesis of CSRR-loaded metamaterial band-pass filter
// unit cells: S-parameter sweeps, Bloch dispersion, figure-of-merit
// extraction and mask-driven element synthesis.
#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "mbpf/config.hpp"
#include "mbpf/touchstone.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitAnalysis = 3;
constexpr int kExitData = 4;

struct CommonFlags {
    std::string config_path;
    std::string out_dir;  // empty means: config's out_dir, else "out"
    std::optional<int> points;
    std::optional<double> start_hz;
    std::optional<double> stop_hz;
    std::optional<int> stages;
    std::optional<double> z0_ohm;
    std::optional<std::string> topology;
    std::optional<std::uint64_t> seed;
    bool swap_inductors = false;
};

void add_common_flags(CLI::App* cmd, CommonFlags& f, bool needs_config) {
    auto* opt = cmd->add_option("--config", f.config_path, "JSON run configuration");
    if (needs_config) {
        opt->required();
    }
    cmd->add_option("--out", f.out_dir, "output directory (created if missing)");
    cmd->add_option("--points", f.points, "override grid point count");
    cmd->add_option("--start", f.start_hz, "override grid start frequency in Hz");
    cmd->add_option("--stop", f.stop_hz, "override grid stop frequency in Hz");
    cmd->add_option("--stages", f.stages, "override cascaded cell count");
    cmd->add_option("--z0", f.z0_ohm, "override reference impedance in ohms");
    cmd->add_option("--topology", f.topology, "unit cell topology: t | l");
    cmd->add_option("--seed", f.seed, "override the synthesis seed");
    cmd->add_flag("--swap-inductors", f.swap_inductors,
                  "exchange line and tank inductor roles");
}

fs::path output_dir(const CommonFlags& f, const mbpf::RunConfig& cfg) {
    if (!f.out_dir.empty()) {
        return f.out_dir;
    }
    return cfg.out_dir.value_or("out");
}

mbpf::RunConfig load_config(const CommonFlags& f) {
    mbpf::RunConfig cfg = mbpf::load_run_config(f.config_path);
    if (f.points) {
        cfg.grid.points = *f.points;
    }
    if (f.start_hz) {
        cfg.grid.start_hz = *f.start_hz;
    }
    if (f.stop_hz) {
        cfg.grid.stop_hz = *f.stop_hz;
    }
    if (f.stages) {
        cfg.stages = *f.stages;
    }
    if (f.z0_ohm) {
        cfg.z0_ohm = *f.z0_ohm;
    }
    if (f.swap_inductors) {
        cfg.swap_inductors = true;
    }
    if (f.topology) {
        if (*f.topology == "t") {
            cfg.unit_cell.topology = mbpf::Topology::symmetric_t;
        } else if (*f.topology == "l") {
            cfg.unit_cell.topology = mbpf::Topology::l_section;
        } else {
            throw mbpf::ConfigError("--topology must be t or l");
        }
    }
    if (f.seed && cfg.synthesis) {
        cfg.synthesis->seed = *f.seed;
    }
    try {
        cfg.grid.validate();
        if (cfg.stages < 1 || !(cfg.z0_ohm > 0.0)) {
            throw mbpf::ConfigError("stages must be >= 1 and z0 positive");
        }
    } catch (const mbpf::AnalysisError& e) {
        throw mbpf::ConfigError(e.what());
    }
    return cfg;
}

mbpf::SweepTable read_s2p(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw mbpf::DataError("cannot open " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    auto parsed = mbpf::parse_touchstone(buf.str());
    for (const auto& w : parsed.warnings) {
        std::cerr << "warning: " << path << ": " << w << "\n";
    }
    return std::move(parsed.table);
}

int cmd_simulate(const CommonFlags& flags) {
    const mbpf::RunConfig cfg = load_config(flags);
    const fs::path out = output_dir(flags, cfg);
    const mbpf::UnitCellParams cell = cfg.cell();
    const mbpf::SweepResult result = mbpf::sweep(cell, cfg.grid, cfg.stages, cfg.z0_ohm);
    for (const auto& gap : result.gaps) {
        std::cerr << "warning: gap at " << gap.frequency_hz << " Hz: " << gap.reason << "\n";
    }
    if (result.table.empty()) {
        throw mbpf::AnalysisError("sweep produced no valid points");
    }

    mbpf::atomic_write_file(out / "sweep.s2p", mbpf::write_touchstone(result.table));
    mbpf::atomic_write_file(out / "sweep.csv", mbpf::write_csv(result.table));
    if (result.table.size() >= 3) {
        mbpf::atomic_write_file(out / "group_delay.csv",
                                mbpf::write_csv(mbpf::group_delay(result.table)));
    }
    std::cout << "wrote " << (out / "sweep.s2p").string() << ", sweep.csv, group_delay.csv\n";

    mbpf::FilterMetrics metrics;
    try {
        metrics = mbpf::compute_metrics(result.table);
    } catch (const mbpf::BandNotBracketedError& e) {
        std::cerr << "error: " << e.what()
                  << "\nguidance: extend --start/--stop (or grid in the config) until both "
                     "3 dB crossings and the 0.8*f_cl / 1.2*f_cu references fall inside\n";
        return kExitAnalysis;
    }
    mbpf::atomic_write_file(out / "metrics.json", mbpf::to_json(metrics).dump(2) + "\n");
    mbpf::atomic_write_file(out / "metrics.txt", mbpf::metrics_text_table(metrics));
    std::cout << mbpf::metrics_text_table(metrics);

    if (cfg.mask) {
        const mbpf::MaskReport mask_report = mbpf::evaluate_mask(result.table, *cfg.mask);
        std::cout << "mask: " << mask_report.violations.size() << " violation(s), cost "
                  << mask_report.cost << "\n";
    }
    return kExitOk;
}

int cmd_dispersion(const CommonFlags& flags) {
    const mbpf::RunConfig cfg = load_config(flags);
    const fs::path out = output_dir(flags, cfg);
    const mbpf::UnitCellParams cell = cfg.cell();

    const auto curve = mbpf::dispersion_curve(cell, cfg.grid);
    mbpf::atomic_write_file(out / "dispersion.csv", mbpf::write_csv(curve));

    const mbpf::ConsistencyReport report =
        mbpf::consistency_report(cell, cfg.reference_center_hz);
    mbpf::atomic_write_file(out / "consistency.json", mbpf::to_json(report).dump(2) + "\n");
    const std::string text = mbpf::consistency_text_report(report);
    mbpf::atomic_write_file(out / "consistency.txt", text);
    std::cout << text;
    std::cout << "wrote " << (out / "dispersion.csv").string()
              << ", consistency.json, consistency.txt\n";
    return kExitOk;
}

int cmd_metrics(const std::string& input, const std::string& out_dir) {
    const mbpf::SweepTable table = read_s2p(input);
    const mbpf::FilterMetrics metrics = mbpf::compute_metrics(table);
    mbpf::atomic_write_file(fs::path(out_dir) / "metrics.json",
                            mbpf::to_json(metrics).dump(2) + "\n");
    std::cout << mbpf::metrics_text_table(metrics);
    return kExitOk;
}

int cmd_synth(const CommonFlags& flags) {
    const mbpf::RunConfig cfg = load_config(flags);
    if (!cfg.mask) {
        throw mbpf::ConfigError("synth needs a \"mask\" block in the config");
    }
    if (!cfg.synthesis) {
        throw mbpf::ConfigError("synth needs a \"synthesis\" block in the config");
    }

    const mbpf::SynthesisResult result = mbpf::synthesize(*cfg.mask, *cfg.synthesis);

    const fs::path out = output_dir(flags, cfg);
    mbpf::atomic_write_file(out / "synthesis.json", mbpf::to_json(result).dump(2) + "\n");

    mbpf::RunConfig optimized = cfg;
    optimized.unit_cell = result.params;
    optimized.swap_inductors = false;  // params are already in branch roles
    optimized.stages = cfg.synthesis->stages;
    optimized.z0_ohm = cfg.synthesis->z0_ohm;
    mbpf::atomic_write_file(out / "optimized_config.json",
                            mbpf::to_json(optimized).dump(2) + "\n");

    std::cout << "synthesis " << (result.converged ? "converged" : "did not converge")
              << ": cost " << result.final_cost << ", " << result.violations.size()
              << " violation(s), restart " << result.best_restart << ", "
              << result.iterations << " iterations\n";
    if (result.metrics) {
        std::cout << mbpf::metrics_text_table(*result.metrics);
    }
    if (!result.converged) {
        std::cerr << "warning: no mask-compliant design found; inspect synthesis.json and "
                     "widen the bounds or relax the mask\n";
    }
    std::cout << "wrote " << (out / "synthesis.json").string() << ", optimized_config.json\n";
    return kExitOk;
}

int cmd_compare(const std::string& path_a, const std::string& path_b,
                const std::string& out_dir) {
    const mbpf::SweepTable a = read_s2p(path_a);
    const mbpf::SweepTable b = read_s2p(path_b);
    const mbpf::CompareReport report = mbpf::compare_sweeps(a, b);

    std::string csv = "frequency_hz,s21_db_delta,s11_db_delta\n";
    char buf[160];
    for (const auto& p : report.points) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.12g,%.12g\n", p.frequency_hz, p.s21_db_delta,
                      p.s11_db_delta);
        csv += buf;
    }
    const fs::path out(out_dir);
    mbpf::atomic_write_file(out / "compare.csv", csv);
    mbpf::atomic_write_file(out / "compare.json", mbpf::to_json(report).dump(2) + "\n");

    std::cout << "overlap points: " << report.points.size()
              << "  max |d|s21||: " << report.max_abs_s21_db_delta
              << " dB  max |d|s11||: " << report.max_abs_s11_db_delta << " dB\n";
    if (report.metrics_delta) {
        std::cout << "metric deltas (b - a): f0 " << report.metrics_delta->f0_hz << " Hz, bw "
                  << report.metrics_delta->bw3db_hz << " Hz, il "
                  << report.metrics_delta->il_db << " dB, rl "
                  << report.metrics_delta->rl_db_at_f0 << " dB\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "mbpf: CSRR-loaded metamaterial band-pass filter circuit toolkit.\n"
        "Simulates the lumped unit cell as a two-port, computes Bloch dispersion\n"
        "and filter figures of merit, and synthesizes element values against a\n"
        "specification mask.\n\n"
        "File formats:\n"
        "  sweep.csv       frequency_hz,s11_re,s11_im,s21_re,s21_im,s12_re,s12_im,\n"
        "                  s22_re,s22_im,s11_db,s21_db\n"
        "  dispersion.csv  frequency_hz,re_g,beta_l_rad,alpha_l_neper,regime\n"
        "  group_delay.csv frequency_hz,group_delay_s\n"
        "Group delay and band-edge scans assume the grid is dense enough that the\n"
        "phase moves by less than pi between samples; increase --points if not.\n"
        "Exit codes: 0 ok, 2 config error, 3 analysis-domain error, 4 data error."};
    app.require_subcommand(1);

    CommonFlags sim_flags, disp_flags, synth_flags;
    std::string metrics_input, metrics_out = "out";
    std::string cmp_a, cmp_b, cmp_out = "out";

    auto* sim = app.add_subcommand("simulate",
                                   "sweep the cell and write sweep.s2p/.csv plus metrics");
    add_common_flags(sim, sim_flags, true);

    auto* disp = app.add_subcommand(
        "dispersion", "Bloch dispersion curve plus closed-form/numeric consistency report");
    add_common_flags(disp, disp_flags, true);

    auto* met = app.add_subcommand("metrics", "extract figures of merit from a .s2p file");
    met->add_option("input", metrics_input, "two-port Touchstone file")->required();
    met->add_option("--out", metrics_out, "output directory");

    auto* synth = app.add_subcommand("synth", "optimize element values against the mask");
    add_common_flags(synth, synth_flags, true);

    auto* cmp = app.add_subcommand("compare", "delta report between two .s2p sweeps");
    cmp->add_option("a", cmp_a, "reference sweep")->required();
    cmp->add_option("b", cmp_b, "comparison sweep (resampled onto a's grid)")->required();
    cmp->add_option("--out", cmp_out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            return app.exit(e);  // --help
        }
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (sim->parsed()) {
            return cmd_simulate(sim_flags);
        }
        if (disp->parsed()) {
            return cmd_dispersion(disp_flags);
        }
        if (met->parsed()) {
            return cmd_metrics(metrics_input, metrics_out);
        }
        if (synth->parsed()) {
            return cmd_synth(synth_flags);
        }
        if (cmp->parsed()) {
            return cmd_compare(cmp_a, cmp_b, cmp_out);
        }
    } catch (const mbpf::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const mbpf::DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const mbpf::AnalysisError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitAnalysis;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitOk;
}
