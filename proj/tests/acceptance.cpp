// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Run as:
//   acceptance <path-to-mbpf-binary> <path-to-configs-dir>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include <json.hpp>

#include "mbpf/config.hpp"
#include "mbpf/dispersion.hpp"
#include "mbpf/metrics.hpp"
#include "mbpf/synthesis.hpp"
#include "mbpf/touchstone.hpp"
#include "test_helpers.hpp"

namespace fs = std::filesystem;
using namespace mbpf;
using nlohmann::json;

namespace {

int g_failed = 0;

void report(int criterion, bool pass, const std::string& detail) {
    std::printf("criterion %d: %s — %s\n", criterion, pass ? "PASS" : "FAIL", detail.c_str());
    if (!pass) {
        ++g_failed;
    }
}

// 1. Network algebra property suite on 1000 random lossless unit cells:
//    reciprocity, unitarity and ABCD<->S round trips at every swept point,
//    in under 10 seconds.
void criterion_1() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937 rng(20260810);
    double worst_recip = 0.0;
    double worst_unit = 0.0;
    double worst_round = 0.0;
    long points = 0;

    FrequencyGrid grid{0.05e9, 5e9, 21, FrequencyGrid::Spacing::logarithmic};
    const Eigen::ArrayXd freqs = grid.frequencies();
    for (int cell = 0; cell < 1000; ++cell) {
        const UnitCellParams p = mbpf::test::random_cell(rng);
        for (Eigen::Index i = 0; i < freqs.size(); ++i) {
            const TwoPortd m = unit_cell_abcd(p, freqs(i));
            if (!m.all_finite()) {
                continue;
            }
            Scattering<double> s;
            try {
                s = abcd_to_s(m, 50.0, freqs(i));
            } catch (const SingularConversionError&) {
                continue;
            }
            ++points;
            worst_recip = std::max(worst_recip, std::abs(s.s21 - s.s12));
            worst_unit = std::max(
                worst_unit, std::abs(std::norm(s.s11) + std::norm(s.s21) - 1.0));
            const TwoPortd back = s_to_abcd(s, 50.0);
            const double scale = std::max(1.0, m.m.cwiseAbs().maxCoeff());
            worst_round =
                std::max(worst_round, (back.m - m.m).cwiseAbs().maxCoeff() / scale);
        }
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "%ld points: |s21-s12| max %.2e (<1e-12), unitarity max %.2e (<1e-9), "
                  "round trip max %.2e (<1e-10), %.2f s (<10 s)",
                  points, worst_recip, worst_unit, worst_round, seconds);
    report(1, points > 15000 && worst_recip < 1e-12 && worst_unit < 1e-9 &&
                  worst_round < 1e-10 && seconds < 10.0, buf);
}

// 2. Transmission zero: numeric bisection equals the closed form within 1e-6
//    relative under both component interpretations, and a single cell is
//    opaque (|s21| < 1e-4) exactly on the numeric root.
void criterion_2() {
    bool pass = true;
    std::string detail;
    for (const bool swapped : {false, true}) {
        const UnitCellParams p =
            swapped ? mbpf::test::swapped_cell() : mbpf::test::reference_cell();
        const double closed = transmission_zero_closed(p);
        const double f_t = 1.0 / (kTwoPi * std::sqrt(p.l_l_henry * p.c_r_farad));
        FrequencyGrid search{0.5 * closed, 0.5 * (closed + f_t), 64,
                             FrequencyGrid::Spacing::linear};
        const double numeric = transmission_zero_numeric(p, search);
        const double dev = std::abs(numeric - closed) / closed;
        const double s21 = std::abs(abcd_to_s(unit_cell_abcd(p, numeric), 50.0).s21);
        pass = pass && dev < 1e-6 && s21 < 1e-4;
        char buf[128];
        std::snprintf(buf, sizeof(buf), "%s: f_z %.4f MHz, dev %.1e, |s21| %.1e; ",
                      swapped ? "swapped" : "as-labeled", numeric / 1e6, dev, s21);
        detail += buf;
    }
    report(2, pass, detail + "(dev < 1e-6, |s21| < 1e-4)");
}

// 3. Band placement, swapped interpretation: numeric Bloch edges within 1% of
//    the reconstructed closed forms; the band center within 5% of the 730 MHz
//    reference and each edge within 2% of the 700/760 MHz reference band.
//    Measured insertion/return-loss curves are NOT reproducible from a
//    lossless element model, so band placement is the check here.
void criterion_3() {
    const UnitCellParams p = mbpf::test::swapped_cell();
    FrequencyGrid scan{0.3e9, 1.2e9, 4001, FrequencyGrid::Spacing::linear};
    const auto bands = find_band_edges(p, scan);
    if (bands.size() != 1) {
        report(3, false, "expected exactly one band in the 0.3-1.2 GHz scan");
        return;
    }
    const BandEdges closed = closed_form_cutoffs(p);
    const double dev_cl = std::abs(bands[0].f_cl_hz - closed.f_cl_hz) / closed.f_cl_hz;
    const double dev_cu = std::abs(bands[0].f_cu_hz - closed.f_cu_hz) / closed.f_cu_hz;
    const double center = 0.5 * (bands[0].f_cl_hz + bands[0].f_cu_hz);
    const double dev_center = std::abs(center - 730e6) / 730e6;
    const double dev_lo = std::abs(bands[0].f_cl_hz - 700e6) / 700e6;
    const double dev_hi = std::abs(bands[0].f_cu_hz - 760e6) / 760e6;

    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "edges %.1f/%.1f MHz (dev vs closed %.2e/%.2e < 1e-2), center %.1f MHz "
                  "(dev %.1f%% < 5%%), edge offsets %.2f%%/%.2f%% (< 2%%); lossless model: "
                  "band placement replaces loss-level checks",
                  bands[0].f_cl_hz / 1e6, bands[0].f_cu_hz / 1e6, dev_cl, dev_cu,
                  center / 1e6, 100.0 * dev_center, 100.0 * dev_lo, 100.0 * dev_hi);
    report(3, dev_cl < 0.01 && dev_cu < 0.01 && dev_center < 0.05 && dev_lo < 0.02 &&
                  dev_hi < 0.02, buf);
}

// 4. As-labeled interpretation: the pipeline reports a 2.73-2.97 GHz band and
//    the consistency report flags the >3x misplacement against 730 MHz.
void criterion_4() {
    const UnitCellParams p = mbpf::test::reference_cell();
    const BandEdges closed = closed_form_cutoffs(p);
    // independent arithmetic for the expected closed forms
    const double c_eff = 1.0 / (1.0 / p.c_farad + 1.0 / (4.0 * p.c_l_farad));
    const double f_cu = 1.0 / (kTwoPi * std::sqrt(p.c_r_farad * p.l_l_henry));
    const double f_cl = 1.0 / (kTwoPi * std::sqrt(p.l_l_henry * (p.c_r_farad + c_eff)));

    const ConsistencyReport rep = consistency_report(p, 730e6);
    const bool closed_ok = std::abs(closed.f_cl_hz - f_cl) < 1.0 &&
                           std::abs(closed.f_cu_hz - f_cu) < 1.0 &&
                           std::abs(f_cl - 2.7277e9) / 2.7277e9 < 1e-4 &&
                           std::abs(f_cu - 2.9708e9) / 2.9708e9 < 1e-4;
    const bool flagged = rep.center_ratio.has_value() && *rep.center_ratio > 3.0;

    char buf[192];
    std::snprintf(buf, sizeof(buf),
                  "closed band %.4f-%.4f GHz, center ratio vs 730 MHz %.2f (>3 flagged: %s)",
                  closed.f_cl_hz / 1e9, closed.f_cu_hz / 1e9, rep.center_ratio.value_or(0.0),
                  flagged ? "yes" : "no");
    report(4, closed_ok && flagged, buf);
}

// 5. Metrics fidelity: a sweep with 3 dB edges at exactly 700/760 MHz yields
//    f0 = 730 MHz, bw = 60 MHz, fbw = 8.2192% (8.2 after rounding).
void criterion_5() {
    const FilterMetrics m = compute_metrics(mbpf::test::synthetic_bandpass(2001));
    const double fbw_expected = 100.0 * 60.0 / 730.0;
    const bool pass = std::abs(m.f0_hz - 730e6) < 1e-3 && std::abs(m.bw3db_hz - 60e6) < 1e-3 &&
                      std::abs(m.fbw_percent - fbw_expected) < 1e-9 &&
                      std::round(m.f0_hz / 1e7) / 100.0 == 0.73 &&
                      std::round(m.bw3db_hz / 1e6) == 60.0 &&
                      std::round(m.fbw_percent * 10.0) / 10.0 == 8.2;
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "f0 %.6f MHz, bw %.6f MHz, fbw %.7f%% (rounds to 0.73 GHz / 60 / 8.2)",
                  m.f0_hz / 1e6, m.bw3db_hz / 1e6, m.fbw_percent);
    report(5, pass, buf);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// 6. Synthesis regression through the CLI: the shipped mask converges with
//    zero violations in under 60 s, deterministically for the fixed seed.
void criterion_6(const std::string& mbpf_bin, const fs::path& configs,
                 const fs::path& scratch) {
    const std::string cfg = (configs / "swapped.json").string();
    const fs::path out_a = scratch / "synth_a";
    const fs::path out_b = scratch / "synth_b";

    const auto t0 = std::chrono::steady_clock::now();
    const std::string cmd_a = mbpf_bin + " synth --config " + cfg + " --out " +
                              out_a.string() + " > " + (scratch / "synth.log").string() +
                              " 2>&1";
    const int status_a = std::system(cmd_a.c_str());
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const std::string cmd_b = mbpf_bin + " synth --config " + cfg + " --out " +
                              out_b.string() + " > /dev/null 2>&1";
    const int status_b = std::system(cmd_b.c_str());

    bool pass = status_a == 0 && status_b == 0 && seconds < 60.0;
    double f0 = 0.0, bw = 0.0;
    bool converged = false, deterministic = false;
    std::size_t violations = 99;
    if (pass) {
        const json s = json::parse(slurp(out_a / "synthesis.json"));
        converged = s["converged"].get<bool>();
        violations = s["violations"].size();
        f0 = s["metrics"]["f0_hz"].get<double>();
        bw = s["metrics"]["bw3db_hz"].get<double>();
        deterministic = slurp(out_a / "synthesis.json") == slurp(out_b / "synthesis.json");
        pass = converged && violations == 0 && deterministic &&
               std::abs(f0 - 730e6) / 730e6 <= 0.01 && std::abs(bw - 60e6) / 60e6 <= 0.10;
    }
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "converged %s, %zu violation(s), f0 %.2f MHz (within 1%%), bw %.2f MHz "
                  "(within 10%%), %.1f s (<60), deterministic %s",
                  converged ? "yes" : "no", violations, f0 / 1e6, bw / 1e6, seconds,
                  deterministic ? "yes" : "no");
    report(6, pass, buf);
}

// 7. Touchstone round trip across RI/MA/DB within 1e-6 on a 401-point sweep;
//    malformed fixtures produce the specified errors with line numbers.
void criterion_7() {
    FrequencyGrid grid{0.3e9, 1.2e9, 401, FrequencyGrid::Spacing::linear};
    const SweepTable t = sweep(mbpf::test::swapped_cell(), grid, 1, 50.0).table;

    double worst = 0.0;
    for (const NumberFormat fmt : {NumberFormat::ri, NumberFormat::ma, NumberFormat::db}) {
        const auto parsed = parse_touchstone(
            write_touchstone(t, TouchstoneOptions{FrequencyUnit::hz, fmt, 50.0}));
        for (std::size_t i = 0; i < t.size(); ++i) {
            const auto& a = t.points[i];
            const auto& b = parsed.table.points[i];
            const double scale = std::max({std::abs(a.s11), std::abs(a.s21), 1e-9});
            worst = std::max(worst, std::abs(a.s11 - b.s11) / scale);
            worst = std::max(worst, std::abs(a.s21 - b.s21) / scale);
        }
    }

    bool errors_ok = false;
    try {
        parse_touchstone("# HZ S RI R 50\nok-looking line\n");
    } catch (const ParseError& e) {
        errors_ok = e.line() == 2;
    }
    bool unsupported_ok = false;
    try {
        parse_touchstone("# HZ Z RI R 50\n");
    } catch (const UnsupportedFormatError&) {
        unsupported_ok = true;
    }
    bool field_count_ok = false;
    try {
        parse_touchstone("# HZ S RI R 50\n1e9 1 2 3\n");
    } catch (const ParseError& e) {
        field_count_ok =
            e.line() == 2 && std::string(e.what()).find("9 numeric fields") != std::string::npos;
    }

    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "round-trip max rel err %.2e (<1e-6); malformed fixtures raise typed "
                  "errors with line numbers: %s",
                  worst, (errors_ok && unsupported_ok && field_count_ok) ? "yes" : "no");
    report(7, worst < 1e-6 && errors_ok && unsupported_ok && field_count_ok, buf);
}

// 8. Group delay: an ideal delay line reads back within 0.1%, and the finite
//    difference converges at second order (error ratio ~4 per halving).
void criterion_8() {
    const double T = 1e-9;
    SweepTable line;
    FrequencyGrid grid{0.5e9, 1.0e9, 201, FrequencyGrid::Spacing::linear};
    const auto freqs = grid.frequencies();
    for (Eigen::Index i = 0; i < freqs.size(); ++i) {
        SParameterPoint p;
        p.frequency_hz = freqs(i);
        p.s21 = std::polar(1.0, -kTwoPi * freqs(i) * T);
        p.s12 = p.s21;
        line.append(p);
    }
    double worst = 0.0;
    const auto delays = group_delay(line);
    for (std::size_t i = 1; i + 1 < delays.size(); ++i) {
        worst = std::max(worst, std::abs(delays[i].delay_s - T) / T);
    }

    // second-order convergence on a smooth series-inductor phase
    const double L = 50e-9, z0 = 50.0, k = L / (2.0 * z0);
    auto delay_at_mid = [&](int points) {
        SweepTable t;
        FrequencyGrid g{0.8e9, 1.2e9, points, FrequencyGrid::Spacing::linear};
        const auto f = g.frequencies();
        for (Eigen::Index i = 0; i < f.size(); ++i) {
            const auto s = abcd_to_s(abcd_series(std::complex<double>{0.0, kTwoPi * f(i) * L}),
                                     z0);
            SParameterPoint p;
            p.frequency_hz = f(i);
            p.s21 = s.s21;
            p.s12 = s.s12;
            t.append(p);
        }
        return group_delay(t)[(points - 1) / 2].delay_s;
    };
    const double w = kTwoPi * 1e9;
    const double tau_true = k / (1.0 + (k * w) * (k * w));
    const double err_h = std::abs(delay_at_mid(101) - tau_true);
    const double err_h2 = std::abs(delay_at_mid(201) - tau_true);
    const double ratio = err_h / err_h2;

    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "delay-line max rel err %.2e (<1e-3); halving error ratio %.2f (in [3,5])",
                  worst, ratio);
    report(8, worst < 1e-3 && ratio > 3.0 && ratio < 5.0, buf);
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 3) {
        std::cerr << "usage: acceptance <mbpf-binary> <configs-dir>\n";
        return 2;
    }
    const fs::path scratch = fs::temp_directory_path() / "mbpf_acceptance";
    fs::remove_all(scratch);
    fs::create_directories(scratch);

    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6(argv[1], argv[2], scratch);
    criterion_7();
    criterion_8();

    if (g_failed == 0) {
        std::printf("acceptance: all 8 criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criterion(s) failed\n", g_failed);
    return 1;
}
