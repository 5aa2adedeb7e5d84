#ifndef NOMA_ALOHA_OPTIMIZER_HPP
#define NOMA_ALOHA_OPTIMIZER_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "analytic.hpp"
#include "types.hpp"

namespace noma_aloha {

struct AscentConfig {
    double epsilon = 1e-5;        // minimum accepted improvement
    int max_outer_iterations = 100;
    double grid_step = 1e-3;      // coarse step of each 1-D scan
    int refine_rounds = 2;        // each round shrinks the bracket 10x
    double initial_tau1 = 0.0;

    void validate() const
    {
        if (!(epsilon > 0.0))
            throw ConfigError("epsilon must be > 0");
        if (max_outer_iterations < 1)
            throw ConfigError("max_outer_iterations must be >= 1");
        if (!(grid_step > 0.0 && grid_step < 1.0))
            throw ConfigError("grid_step must be in (0, 1)");
        if (refine_rounds < 0)
            throw ConfigError("refine_rounds must be >= 0");
        if (!(initial_tau1 >= 0.0 && initial_tau1 <= 1.0))
            throw ConfigError("initial_tau1 must be in [0, 1]");
    }
};

struct TraceRecord {
    int iteration = 0;
    double tau1 = 0.0;
    double tau2 = 0.0;
    double throughput = 0.0;
};

struct OptimizationResult {
    double tau1_star = 0.0;
    double tau2_star = 0.0;
    double th_star = 0.0;
    int outer_iterations = 0;
    bool converged = false;
    std::vector<TraceRecord> trace;
};

struct LineMaximum {
    double x = 0.0;
    double value = 0.0;
};

/// Derivative-free maximization of `f` over [lo, hi]: a uniform scan at
/// `step` (the right end point is always included), then `refine_rounds`
/// rescans of the bracket around the incumbent at a 10x finer step. Only
/// strict improvements replace the incumbent, so ties keep the smallest x.
template <class F>
LineMaximum maximize_on_interval(F&& f, double lo, double hi, double step, int refine_rounds)
{
    LineMaximum best{lo, f(lo)};
    if (!(hi > lo))
        return best;

    auto scan = [&](double a, double b, double h) {
        const auto n = static_cast<long>(std::floor((b - a) / h + 1e-9));
        for (long k = 0; k <= n; ++k) {
            const double x = std::min(a + static_cast<double>(k) * h, b);
            const double v = f(x);
            if (v > best.value)
                best = {x, v};
        }
        if (a + static_cast<double>(n) * h < b) {
            const double v = f(b);
            if (v > best.value)
                best = {b, v};
        }
    };

    scan(lo, hi, step);
    for (int r = 0; r < refine_rounds; ++r) {
        const double a = std::max(lo, best.x - step);
        const double b = std::min(hi, best.x + step);
        step /= 10.0;
        scan(a, b, step);
    }
    return best;
}

/// Best tau2 in [0, 1 - tau1] for a fixed tau1.
inline LineMaximum maximize_over_tau2(const Scenario& s, double tau1, const AscentConfig& cfg = {})
{
    cfg.validate();
    const double hi = std::max(0.0, 1.0 - tau1);
    return maximize_on_interval(
        [&](double x) { return average_throughput(s, {tau1, std::min(x, hi)}); }, 0.0, hi, cfg.grid_step,
        cfg.refine_rounds);
}

/// Best tau1 in [0, 1 - tau2] for a fixed tau2.
inline LineMaximum maximize_over_tau1(const Scenario& s, double tau2, const AscentConfig& cfg = {})
{
    cfg.validate();
    const double hi = std::max(0.0, 1.0 - tau2);
    return maximize_on_interval(
        [&](double x) { return average_throughput(s, {std::min(x, hi), tau2}); }, 0.0, hi, cfg.grid_step,
        cfg.refine_rounds);
}

/// Alternating maximization of the average throughput, starting from
/// tau1 = initial_tau1 and updating tau2 first.
///
/// Each coordinate is searched over [0, 1]; when a trial value would push
/// tau1 + tau2 above one, the other coordinate is lowered to 1 - trial so the
/// search can move along the tau1 + tau2 = 1 edge instead of stalling on it.
/// An update is accepted only if it improves the throughput by more than
/// epsilon. The search stops (converged) once a tau2 update and a tau1 update
/// in a row are both rejected.
inline OptimizationResult coordinate_ascent(const Scenario& s, const AscentConfig& cfg = {})
{
    cfg.validate();

    OptimizationResult res;
    double tau1 = cfg.initial_tau1;
    double tau2 = 0.0;
    double th = average_throughput(s, {tau1, tau2});
    res.trace.push_back({0, tau1, tau2, th});

    int rejected_in_a_row = 0;
    for (int it = 1; it <= cfg.max_outer_iterations; ++it) {
        res.outer_iterations = it;

        const LineMaximum up2 = maximize_on_interval(
            [&](double x) { return average_throughput(s, {std::min(tau1, 1.0 - x), x}); }, 0.0, 1.0,
            cfg.grid_step, cfg.refine_rounds);
        if (up2.value - th > cfg.epsilon) {
            tau2 = up2.x;
            tau1 = std::min(tau1, 1.0 - up2.x);
            th = up2.value;
            rejected_in_a_row = 0;
            res.trace.push_back({it, tau1, tau2, th});
        } else if (++rejected_in_a_row >= 2) {
            res.converged = true;
            break;
        }

        const LineMaximum up1 = maximize_on_interval(
            [&](double x) { return average_throughput(s, {x, std::min(tau2, 1.0 - x)}); }, 0.0, 1.0,
            cfg.grid_step, cfg.refine_rounds);
        if (up1.value - th > cfg.epsilon) {
            tau1 = up1.x;
            tau2 = std::min(tau2, 1.0 - up1.x);
            th = up1.value;
            rejected_in_a_row = 0;
            res.trace.push_back({it, tau1, tau2, th});
        } else if (++rejected_in_a_row >= 2) {
            res.converged = true;
            break;
        }
    }

    res.tau1_star = tau1;
    res.tau2_star = tau2;
    res.th_star = th;
    return res;
}

/// Exhaustive search over the simplex grid {(i*step, j*step) : i + j <= 1/step}.
/// Rows are visited in increasing tau1, then tau2, and only strict
/// improvements are kept, so ties resolve to the lexicographically smallest point.
inline OptimizationResult grid_search_oracle(const Scenario& s, double step)
{
    if (!(step > 0.0 && step <= 0.1))
        throw ConfigError("grid step must be in (0, 0.1]");

    const auto n = static_cast<int>(std::floor(1.0 / step + 1e-9));
    OptimizationResult res;
    res.th_star = -1.0;
    for (int i = 0; i <= n; ++i) {
        const double tau1 = i * step;
        for (int j = 0; j <= n - i; ++j) {
            const double tau2 = std::min(j * step, 1.0 - tau1);
            const double th = average_throughput(s, {tau1, tau2});
            if (th > res.th_star) {
                res.tau1_star = tau1;
                res.tau2_star = tau2;
                res.th_star = th;
            }
        }
    }
    res.converged = true;
    res.trace.push_back({0, res.tau1_star, res.tau2_star, res.th_star});
    return res;
}

} // namespace noma_aloha

#endif
