#pragma once

#include <string>
#include <vector>

#include "vatsim/engine.hpp"

namespace vatsim {

struct SolveOptions {
    /// Width of the final bisection bracket, in outside-rate units.
    double rate_tolerance = 1e-12;
    /// The cashback loop stops once successive outside rates differ by less.
    double fixed_point_tolerance = 1e-8;
    int max_iterations = 100;
    double initial_upper = 5.0;
    /// Upper bracket doubling stops here; beyond it the target is unreachable.
    double max_upper = 5.0 * 1048576.0;
};

struct TraceEntry {
    int iteration = 0;
    double reference_outside = 0.0;
    /// Cashback evaluated at this iteration's rate.
    double cashback_total = 0.0;
    /// Net burden at this rate with that cashback.
    double net_burden = 0.0;
};

struct SolveResult {
    Rate reference = Rate::outside(0.0);
    Rate reference_inside = Rate::inside(0.0);
    int iterations = 0;
    double residual = 0.0;
    double cashback_total = 0.0;
    std::vector<TraceEntry> trace;
};

/// The cashback fixed point did not settle within the iteration budget.
class NonConvergence : public SolverError {
public:
    NonConvergence(const std::string& what, std::vector<TraceEntry> trace)
        : SolverError(what), trace_(std::move(trace)) {}

    const std::vector<TraceEntry>& trace() const noexcept { return trace_; }

private:
    std::vector<TraceEntry> trace_;
};

/// Outside reference rate at which (gross revenue - fixed_cashback) /
/// denominator equals `target`, by bisection with upper-bracket doubling.
/// Throws SolverError when the target lies outside the achievable range.
Rate solve_given_cashback(const BaseSummary& bases, const Schedule& s, double fixed_cashback, double target,
                          const SolveOptions& opts = {});
Rate solve_given_cashback(const Population& p, const Schedule& s, double fixed_cashback, double target,
                          const SolveOptions& opts = {});

/// Revenue-neutral reference rate with cashback feedback: start from the
/// cashback-free rate, then alternate between evaluating cashback at the
/// current rate and re-solving for the rate given that cashback.
SolveResult solve_with_cashback(const Population& p, const Schedule& s, double target, const SolveOptions& opts = {});

/// Net burden at an outside reference rate with cashback evaluated at that
/// same rate.
double net_burden_at(const BaseSummary& bases, const Schedule& s, Rate reference);

struct RateImpactRow {
    enum class Kind { Baseline, Removal, WithCashback };
    Kind kind = Kind::Removal;
    std::string selector;
    std::string label;
    double reference_outside = 0.0;
    /// Change against the cashback-free baseline, percentage points.
    double delta_pp = 0.0;
};

/// Marginal effect of removing each favoured treatment on the cashback-free
/// reference rate, followed by the effect of cashback on the intact schedule.
std::vector<RateImpactRow> marginal_rate_impact(const Population& p, const Schedule& s,
                                                const std::vector<std::string>& removals, double target,
                                                const SolveOptions& opts = {});

}  // namespace vatsim
