#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <optional>

#include "mbpf/circuit.hpp"
#include "mbpf/metrics.hpp"

namespace mbpf {

struct ParameterBounds {
    double lower = 0.0;
    double upper = 0.0;
};

/// Search box and optimizer settings for mask-driven synthesis. Element
/// values are searched in log space, so bounds must be strictly positive.
/// The optional f0/bandwidth targets shape the cost with squared relative
/// shortfalls beyond their tolerances, weighted by placement_weight.
struct SynthesisConfig {
    ParameterBounds c_l_farad;
    ParameterBounds l_r_henry;
    ParameterBounds c_farad;
    ParameterBounds c_r_farad;
    ParameterBounds l_l_henry;

    FrequencyGrid sweep_grid;
    int stages = 2;
    double z0_ohm = 50.0;
    Topology topology = Topology::symmetric_t;
    bool include_series_inductor = true;

    int max_iterations = 800;
    double simplex_tolerance = 1e-10;
    int restart_count = 8;
    std::uint64_t seed = 1;

    std::optional<double> f0_target_hz;
    double f0_tolerance_rel = 0.01;
    std::optional<double> bw_target_hz;
    double bw_tolerance_rel = 0.10;
    double placement_weight = 100.0;

    void validate() const;
};

struct SynthesisResult {
    UnitCellParams params;
    double final_cost = 0.0;
    std::optional<FilterMetrics> metrics;
    std::vector<MaskViolation> violations;
    int iterations = 0;    // of the winning restart
    int best_restart = 0;
    bool converged = false;
};

/// Mask cost of one parameter set: evaluate_mask shortfall cost, plus the
/// placement terms, plus a flat 1e6 penalty when no pass band is bracketed.
double cost(const UnitCellParams& p, const SpecMask& mask, const SynthesisConfig& cfg);

struct NelderMeadResult {
    Eigen::VectorXd x_best;
    double f_best = 0.0;
    int iterations = 0;
    bool tolerance_met = false;
};

/// Downhill simplex with reflection 1, expansion 2, contraction 0.5 and
/// shrink 0.5. Proposals are clamped into [lower, upper]. Terminates when the
/// simplex diameter (max infinity-norm distance to the best vertex) falls
/// below `tolerance`, when f_best <= f_target, or at max_iterations.
/// Deterministic for a given x0.
NelderMeadResult nelder_mead(
    const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& x0,
    const Eigen::VectorXd& lower, const Eigen::VectorXd& upper, int max_iterations,
    double tolerance,
    double f_target = -std::numeric_limits<double>::infinity());

/// Best-of-restarts Nelder-Mead over the log-space box. Restart k draws its
/// start point from an MMIX linear congruential generator seeded with
/// cfg.seed + k * 0x9E3779B97F4A7C15; the winner is the lowest (cost, restart
/// index) pair, so the result does not depend on evaluation order.
SynthesisResult synthesize(const SpecMask& mask, const SynthesisConfig& cfg);

}  // namespace mbpf
