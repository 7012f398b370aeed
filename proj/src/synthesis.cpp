#include "mbpf/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace mbpf {

namespace {

// Knuth's MMIX multiplier/increment; state advances modulo 2^64.
class Lcg {
public:
    explicit Lcg(std::uint64_t seed) : state_(seed) {}

    double uniform() {
        state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
        return static_cast<double>(state_ >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

constexpr std::uint64_t kRestartStride = 0x9E3779B97F4A7C15ULL;

void check_bounds(const ParameterBounds& b, const char* name) {
    if (!(b.lower > 0.0) || !(b.lower < b.upper) || !std::isfinite(b.upper)) {
        throw DomainError(std::string("synthesis bounds for ") + name +
                          " must satisfy 0 < lower < upper");
    }
}

UnitCellParams params_from_log(const Eigen::VectorXd& x, const SynthesisConfig& cfg) {
    UnitCellParams p;
    p.c_l_farad = std::exp(x(0));
    p.l_r_henry = std::exp(x(1));
    p.c_farad = std::exp(x(2));
    p.c_r_farad = std::exp(x(3));
    p.l_l_henry = std::exp(x(4));
    p.include_series_inductor = cfg.include_series_inductor;
    p.topology = cfg.topology;
    return p;
}

double placement_shortfall(double achieved, double target, double tolerance) {
    return std::max(0.0, std::abs(achieved - target) / target - tolerance);
}

}  // namespace

void SynthesisConfig::validate() const {
    check_bounds(c_l_farad, "c_l_farad");
    check_bounds(l_r_henry, "l_r_henry");
    check_bounds(c_farad, "c_farad");
    check_bounds(c_r_farad, "c_r_farad");
    check_bounds(l_l_henry, "l_l_henry");
    sweep_grid.validate();
    if (stages < 1) {
        throw DomainError("synthesis stage count must be at least 1");
    }
    if (!(z0_ohm > 0.0)) {
        throw DomainError("reference impedance must be positive");
    }
    if (max_iterations < 1 || restart_count < 1) {
        throw DomainError("iteration and restart counts must be at least 1");
    }
    if (!(simplex_tolerance > 0.0)) {
        throw DomainError("simplex tolerance must be positive");
    }
}

double cost(const UnitCellParams& p, const SpecMask& mask, const SynthesisConfig& cfg) {
    const SweepResult sr = sweep(p, cfg.sweep_grid, cfg.stages, cfg.z0_ohm);
    double c = evaluate_mask(sr.table, mask).cost;

    std::optional<FilterMetrics> m;
    try {
        m = compute_metrics(sr.table);
    } catch (const AnalysisError&) {
        c += 1e6;  // keeps degenerate regions ranked without hiding them
    }
    if (m) {
        if (cfg.f0_target_hz) {
            const double s = placement_shortfall(m->f0_hz, *cfg.f0_target_hz,
                                                 cfg.f0_tolerance_rel);
            c += cfg.placement_weight * s * s;
        }
        if (cfg.bw_target_hz) {
            const double s = placement_shortfall(m->bw3db_hz, *cfg.bw_target_hz,
                                                 cfg.bw_tolerance_rel);
            c += cfg.placement_weight * s * s;
        }
    }
    return c;
}

NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                             const Eigen::VectorXd& x0, const Eigen::VectorXd& lower,
                             const Eigen::VectorXd& upper, int max_iterations,
                             double tolerance, double f_target) {
    const Eigen::Index n = x0.size();
    if (n < 1) {
        throw DomainError("nelder_mead needs at least one dimension");
    }

    auto clamp = [&](Eigen::VectorXd x) {
        return x.cwiseMax(lower).cwiseMin(upper).eval();
    };

    std::vector<Eigen::VectorXd> xs;
    xs.reserve(static_cast<std::size_t>(n) + 1);
    xs.push_back(clamp(x0));
    for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::VectorXd x = xs[0];
        const double step = 0.05 * (upper(i) - lower(i));
        x(i) = (x(i) + step <= upper(i)) ? x(i) + step : x(i) - step;
        xs.push_back(clamp(x));
    }
    std::vector<double> fx(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        fx[i] = f(xs[i]);
    }

    std::vector<std::size_t> order(xs.size());
    auto sort_simplex = [&] {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&fx](std::size_t a, std::size_t b) { return fx[a] < fx[b]; });
        std::vector<Eigen::VectorXd> xs2(xs.size());
        std::vector<double> fx2(fx.size());
        for (std::size_t k = 0; k < order.size(); ++k) {
            xs2[k] = xs[order[k]];
            fx2[k] = fx[order[k]];
        }
        xs.swap(xs2);
        fx.swap(fx2);
    };

    NelderMeadResult result;
    int it = 0;
    for (; it < max_iterations; ++it) {
        sort_simplex();
        if (fx[0] <= f_target) {
            break;
        }
        double diameter = 0.0;
        for (std::size_t i = 1; i < xs.size(); ++i) {
            diameter = std::max(diameter, (xs[i] - xs[0]).cwiseAbs().maxCoeff());
        }
        if (diameter < tolerance) {
            result.tolerance_met = true;
            break;
        }

        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
        for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
            centroid += xs[i];
        }
        centroid /= static_cast<double>(n);

        const std::size_t worst = xs.size() - 1;
        const Eigen::VectorXd xr = clamp(centroid + (centroid - xs[worst]));
        const double fr = f(xr);
        if (fr < fx[0]) {
            const Eigen::VectorXd xe = clamp(centroid + 2.0 * (xr - centroid));
            const double fe = f(xe);
            if (fe < fr) {
                xs[worst] = xe;
                fx[worst] = fe;
            } else {
                xs[worst] = xr;
                fx[worst] = fr;
            }
        } else if (fr < fx[worst - 1]) {
            xs[worst] = xr;
            fx[worst] = fr;
        } else {
            const bool outside = fr < fx[worst];
            const Eigen::VectorXd xc =
                clamp(centroid + 0.5 * ((outside ? xr : xs[worst]) - centroid));
            const double fc = f(xc);
            if (outside ? (fc <= fr) : (fc < fx[worst])) {
                xs[worst] = xc;
                fx[worst] = fc;
            } else {
                for (std::size_t i = 1; i < xs.size(); ++i) {
                    xs[i] = clamp(xs[0] + 0.5 * (xs[i] - xs[0]));
                    fx[i] = f(xs[i]);
                }
            }
        }
    }
    sort_simplex();
    result.x_best = xs[0];
    result.f_best = fx[0];
    result.iterations = it;
    return result;
}

SynthesisResult synthesize(const SpecMask& mask, const SynthesisConfig& cfg) {
    cfg.validate();
    mask.validate();

    Eigen::VectorXd lower(5), upper(5);
    const ParameterBounds* bounds[5] = {&cfg.c_l_farad, &cfg.l_r_henry, &cfg.c_farad,
                                        &cfg.c_r_farad, &cfg.l_l_henry};
    for (int i = 0; i < 5; ++i) {
        lower(i) = std::log(bounds[i]->lower);
        upper(i) = std::log(bounds[i]->upper);
    }

    auto objective = [&](const Eigen::VectorXd& x) {
        return cost(params_from_log(x, cfg), mask, cfg);
    };

    std::optional<NelderMeadResult> best;
    int best_restart = 0;
    for (int k = 0; k < cfg.restart_count; ++k) {
        Lcg rng(cfg.seed + static_cast<std::uint64_t>(k) * kRestartStride);
        Eigen::VectorXd x0(5);
        for (int i = 0; i < 5; ++i) {
            x0(i) = lower(i) + rng.uniform() * (upper(i) - lower(i));
        }
        NelderMeadResult r = nelder_mead(objective, x0, lower, upper, cfg.max_iterations,
                                         cfg.simplex_tolerance, 0.0);
        if (!best || r.f_best < best->f_best) {
            best = std::move(r);
            best_restart = k;
        }
        if (best->f_best == 0.0) {
            break;  // no later restart can win the (cost, index) ordering
        }
    }

    SynthesisResult result;
    result.params = params_from_log(best->x_best, cfg);
    result.final_cost = best->f_best;
    result.iterations = best->iterations;
    result.best_restart = best_restart;

    const SweepResult sr = sweep(result.params, cfg.sweep_grid, cfg.stages, cfg.z0_ohm);
    result.violations = evaluate_mask(sr.table, mask).violations;
    try {
        result.metrics = compute_metrics(sr.table);
    } catch (const AnalysisError&) {
        // no extractable pass band at the optimum
    }
    result.converged = result.violations.empty() &&
                       (result.final_cost == 0.0 || best->tolerance_met);
    return result;
}

}  // namespace mbpf
