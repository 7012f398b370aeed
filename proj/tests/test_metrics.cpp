#include <doctest.h>

#include <cmath>

#include "mbpf/circuit.hpp"
#include "mbpf/metrics.hpp"
#include "mbpf/touchstone.hpp"
#include "test_helpers.hpp"

using namespace mbpf;
using mbpf::test::swapped_cell;
using mbpf::test::synthetic_bandpass;

namespace {

SpecMask wpt_reference_mask() {
    SpecMask m;
    m.passband_start_hz = 700e6;
    m.passband_stop_hz = 760e6;
    m.max_insertion_loss_db = 0.4;
    m.min_return_loss_db = 26.0;
    m.stopband_points = {{560e6, 52.0}, {912e6, 20.0}};
    return m;
}

}  // namespace

TEST_CASE("metrics of the synthetic band-pass hit the 700/760 MHz edges exactly") {
    const SweepTable t = synthetic_bandpass();
    const FilterMetrics m = compute_metrics(t);

    CHECK(std::abs(m.f_cl_hz - 700e6) < 1e-3);
    CHECK(std::abs(m.f_cu_hz - 760e6) < 1e-3);
    CHECK(std::abs(m.f0_hz - 730e6) < 1e-3);
    CHECK(std::abs(m.bw3db_hz - 60e6) < 1e-3);
    CHECK(m.fbw_percent == doctest::Approx(100.0 * 60.0 / 730.0).epsilon(1e-9));
    CHECK(m.fbw_percent == doctest::Approx(100.0 * m.bw3db_hz / m.f0_hz).epsilon(1e-12));
    CHECK(m.il_db == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(m.rl_db_at_f0 == doctest::Approx(30.0).epsilon(1e-9));
    CHECK(m.att_db_at_08fcl == doctest::Approx(60.0).epsilon(1e-9));   // 560 MHz floor
    CHECK(m.att_db_at_12fcu == doctest::Approx(25.0).epsilon(1e-9));   // 912 MHz floor
    CHECK(m.group_delay_s_at_f0 == doctest::Approx(5e-9).epsilon(1e-3));

    // rounded presentation values
    CHECK(std::round(m.f0_hz / 1e7) / 100.0 == 0.73);
    CHECK(std::round(m.bw3db_hz / 1e6) == 60.0);
    CHECK(std::round(m.fbw_percent * 10.0) / 10.0 == 8.2);
}

TEST_CASE("an all-pass sweep has no band to bracket") {
    SweepTable t;
    for (int i = 0; i < 101; ++i) {
        SParameterPoint p;
        p.frequency_hz = 0.5e9 + i * 1e6;
        p.s21 = 1.0;
        p.s12 = 1.0;
        p.s11 = 0.0;
        p.s22 = 0.0;
        t.append(p);
    }
    CHECK_THROWS_AS(compute_metrics(t), BandNotBracketedError);
    try {
        compute_metrics(t);
    } catch (const BandNotBracketedError& e) {
        CHECK(e.side() == BandNotBracketedError::Side::lower);
    }
}

TEST_CASE("a rising edge without an upper crossing names the upper side") {
    SweepTable t;
    for (int i = 0; i < 101; ++i) {
        SParameterPoint p;
        p.frequency_hz = 0.5e9 + i * 1e6;
        const double db = -20.0 + 0.2 * i;  // peaks at the last sample
        p.s21 = std::pow(10.0, db / 20.0);
        p.s12 = p.s21;
        p.s11 = 0.0;
        p.s22 = 0.0;
        t.append(p);
    }
    try {
        compute_metrics(t);
        FAIL("expected BandNotBracketedError");
    } catch (const BandNotBracketedError& e) {
        CHECK(e.side() == BandNotBracketedError::Side::upper);
    }
}

TEST_CASE("swapped-reading sweep centers within 5% of 730 MHz") {
    FrequencyGrid grid{0.3e9, 1.2e9, 2001, FrequencyGrid::Spacing::linear};
    const SweepResult r = sweep(swapped_cell(), grid, 1, 50.0);
    const FilterMetrics m = compute_metrics(r.table);
    CHECK(std::abs(m.f0_hz - 730e6) / 730e6 < 0.05);
    // frozen from the independent full-pipeline oracle
    CHECK(m.f0_hz == doctest::Approx(711.887e6).epsilon(2e-5));
}

TEST_CASE("metrics are stable under grid refinement") {
    // the single-cell matched window is narrow, so resolve its peak first
    FrequencyGrid g1{0.3e9, 1.2e9, 4001, FrequencyGrid::Spacing::linear};
    FrequencyGrid g2{0.3e9, 1.2e9, 8001, FrequencyGrid::Spacing::linear};
    const FilterMetrics m1 = compute_metrics(sweep(swapped_cell(), g1, 1, 50.0).table);
    const FilterMetrics m2 = compute_metrics(sweep(swapped_cell(), g2, 1, 50.0).table);
    CHECK(std::abs(m1.f0_hz - m2.f0_hz) / m2.f0_hz < 1e-3);
    CHECK(std::abs(m1.bw3db_hz - m2.bw3db_hz) / m2.bw3db_hz < 1e-3);
}

TEST_CASE("attenuation references outside the sweep raise an analysis error") {
    // 0.8 * f_cl = 560 MHz sits outside a sweep starting at 600 MHz
    const SweepTable t = synthetic_bandpass(1001, 0.6e9, 1.0e9);
    CHECK_THROWS_AS(compute_metrics(t), AnalysisError);
}

TEST_CASE("mask evaluation: compliant sweep is free of violations") {
    const SweepTable t = synthetic_bandpass();
    SpecMask mask;
    mask.passband_start_hz = 710e6;
    mask.passband_stop_hz = 750e6;
    mask.max_insertion_loss_db = 0.4;
    mask.min_return_loss_db = 26.0;
    mask.stopband_points = {{560e6, 50.0}, {912e6, 20.0}};
    const MaskReport rep = evaluate_mask(t, mask);
    CHECK(rep.violations.empty());
    CHECK(rep.cost == 0.0);
}

TEST_CASE("mask evaluation: a 3 dB shortfall costs 9") {
    const SweepTable t = synthetic_bandpass();
    SpecMask mask;
    mask.passband_start_hz = 710e6;
    mask.passband_stop_hz = 750e6;
    mask.max_insertion_loss_db = 0.4;
    mask.min_return_loss_db = 26.0;
    // on the lower ramp the attenuation is 49 dB at 656.1111... MHz
    const double f49 = 650e6 + (11.0 / 1.8) * 1e6;
    mask.stopband_points = {{f49, 52.0}};
    const MaskReport rep = evaluate_mask(t, mask);
    REQUIRE(rep.violations.size() == 1);
    CHECK(rep.violations[0].requirement == "stopband_attenuation");
    CHECK(rep.violations[0].achieved_db == doctest::Approx(49.0).epsilon(1e-9));
    CHECK(rep.violations[0].shortfall_db == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(rep.cost == doctest::Approx(9.0).epsilon(1e-9));
}

TEST_CASE("mask evaluation on the lossless swapped sweep") {
    FrequencyGrid grid{0.3e9, 1.2e9, 2001, FrequencyGrid::Spacing::linear};
    const SweepResult r = sweep(swapped_cell(), grid, 1, 50.0);
    const MaskReport rep = evaluate_mask(r.table, wpt_reference_mask());
    // lossless: the insertion-loss requirement is met by construction
    for (const auto& v : rep.violations) {
        CHECK(v.requirement != "insertion_loss");
        CHECK(v.shortfall_db > 0.0);
        CHECK(v.shortfall_db == doctest::Approx(v.required_db - v.achieved_db).epsilon(1e-12));
    }
    CHECK(rep.cost > 0.0);  // stop-band demands are not met by the bare cell
}

TEST_CASE("mask points outside the sweep range raise a coverage error") {
    const SweepTable t = synthetic_bandpass();
    SpecMask mask = wpt_reference_mask();
    mask.stopband_points.push_back({2e9, 10.0});
    CHECK_THROWS_AS(evaluate_mask(t, mask), CoverageError);
}

TEST_CASE("mask cost is monotone in the achieved values") {
    SpecMask mask;
    mask.passband_start_hz = 710e6;
    mask.passband_stop_hz = 750e6;
    mask.max_insertion_loss_db = 0.4;
    mask.min_return_loss_db = 26.0;
    mask.stopband_points = {{900e6, 30.0}};

    auto with_floor = [](double high_floor_db) {
        SweepTable t;
        FrequencyGrid grid{0.5e9, 1.0e9, 1001, FrequencyGrid::Spacing::linear};
        const auto freqs = grid.frequencies();
        for (Eigen::Index i = 0; i < freqs.size(); ++i) {
            const double f = freqs(i);
            double db = mbpf::test::trapezoid_db(f);
            if (f > 820e6) {
                db = high_floor_db;
            }
            SParameterPoint p;
            p.frequency_hz = f;
            p.s21 = std::pow(10.0, db / 20.0);
            p.s12 = p.s21;
            p.s11 = std::pow(10.0, ((f >= 700e6 && f <= 760e6) ? -30.0 : -1.0) / 20.0);
            p.s22 = p.s11;
            t.append(p);
        }
        return t;
    };

    const double cost_better = evaluate_mask(with_floor(-25.0), mask).cost;
    const double cost_worse = evaluate_mask(with_floor(-20.0), mask).cost;
    CHECK(cost_better > 0.0);
    CHECK(cost_worse >= cost_better);
}

TEST_CASE("comparing a sweep with itself gives all-zero deltas") {
    const SweepTable t = synthetic_bandpass();
    const CompareReport rep = compare_sweeps(t, t);
    CHECK(rep.points.size() == t.size());
    CHECK(rep.max_abs_s21_db_delta == 0.0);
    CHECK(rep.max_abs_s11_db_delta == 0.0);
    REQUIRE(rep.metrics_delta.has_value());
    CHECK(rep.metrics_delta->f0_hz == 0.0);
    CHECK(rep.metrics_delta->bw3db_hz == 0.0);
}

TEST_CASE("a 10 MHz shift shows up as a 10 MHz f0 delta") {
    const SweepTable a = synthetic_bandpass();
    SweepTable b;
    for (const auto& p : a.points) {
        SParameterPoint q = p;
        q.frequency_hz += 10e6;
        b.append(q);
    }
    const CompareReport rep = compare_sweeps(a, b);
    REQUIRE(rep.metrics_delta.has_value());
    CHECK(rep.metrics_delta->f0_hz == doctest::Approx(10e6).epsilon(1e-9));
}

TEST_CASE("disjoint sweeps cannot be compared") {
    SweepTable a, b;
    for (int i = 0; i < 4; ++i) {
        SParameterPoint p;
        p.frequency_hz = 1e9 + i * 1e6;
        p.s21 = 1.0;
        a.append(p);
        p.frequency_hz = 2e9 + i * 1e6;
        b.append(p);
    }
    CHECK_THROWS_AS(compare_sweeps(a, b), NoOverlapError);
}

TEST_CASE("metrics survive a Touchstone round trip") {
    FrequencyGrid grid{0.3e9, 1.2e9, 2001, FrequencyGrid::Spacing::linear};
    const SweepTable t = sweep(swapped_cell(), grid, 1, 50.0).table;
    const FilterMetrics direct = compute_metrics(t);

    const auto parsed = parse_touchstone(write_touchstone(t));
    const FilterMetrics via_file = compute_metrics(parsed.table);
    CHECK(via_file.f0_hz == doctest::Approx(direct.f0_hz).epsilon(1e-6));
    CHECK(via_file.bw3db_hz == doctest::Approx(direct.bw3db_hz).epsilon(1e-6));
    CHECK(via_file.rl_db_at_f0 == doctest::Approx(direct.rl_db_at_f0).epsilon(1e-6));
    CHECK(std::abs(via_file.il_db - direct.il_db) < 1e-6);

    const CompareReport rep = compare_sweeps(t, parsed.table);
    CHECK(rep.max_abs_s21_db_delta < 1e-3);
    REQUIRE(rep.metrics_delta.has_value());
    CHECK(std::abs(rep.metrics_delta->f0_hz) / direct.f0_hz < 1e-3);
}

TEST_CASE("mask validation") {
    SpecMask m = wpt_reference_mask();
    m.passband_stop_hz = m.passband_start_hz;
    CHECK_THROWS_AS(m.validate(), DomainError);
    m = wpt_reference_mask();
    m.min_return_loss_db = -1.0;
    CHECK_THROWS_AS(m.validate(), DomainError);
}
