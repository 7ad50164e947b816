#include "vatsim/solver.hpp"

#include <cmath>

#include <fmt/format.h>

namespace vatsim {

namespace {

double burden_given(const BaseSummary& b, const Schedule& s, double fixed_cashback, double t) {
    return (gross_revenue(b, s, Rate::outside(t)) - fixed_cashback) / b.denominator;
}

}  // namespace

Rate solve_given_cashback(const BaseSummary& bases, const Schedule& s, double fixed_cashback, double target,
                          const SolveOptions& opts) {
    if (!(target >= 0.0 && target < 1.0))
        throw SolverError(fmt::format("target burden must lie in [0, 1), got {}", target));

    auto excess = [&](double t) { return burden_given(bases, s, fixed_cashback, t) - target; };

    double lo = 0.0;
    const double at_zero = excess(lo);
    if (at_zero == 0.0)
        return Rate::outside(0.0);
    if (at_zero > 0.0)
        throw SolverError(fmt::format("target burden {:.6f} is unreachable: the burden at a zero reference rate is "
                                      "already {:.6f}",
                                      target, at_zero + target));

    double hi = opts.initial_upper;
    double at_hi = excess(hi);
    while (at_hi < 0.0) {
        if (hi >= opts.max_upper)
            throw SolverError(fmt::format("target burden {:.6f} is unreachable: achievable burden range is "
                                          "[{:.6f}, {:.6f}) for reference rates in [0, {:g}]",
                                          target, at_zero + target, at_hi + target, hi));
        lo = hi;
        hi *= 2.0;
        at_hi = excess(hi);
    }

    for (int i = 0; i < 400 && hi - lo > opts.rate_tolerance; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;
        const double f = excess(mid);
        if (f == 0.0)
            return Rate::outside(mid);
        (f < 0.0 ? lo : hi) = mid;
    }
    return Rate::outside(0.5 * (lo + hi));
}

Rate solve_given_cashback(const Population& p, const Schedule& s, double fixed_cashback, double target,
                          const SolveOptions& opts) {
    return solve_given_cashback(summarize_bases(p, s), s, fixed_cashback, target, opts);
}

double net_burden_at(const BaseSummary& bases, const Schedule& s, Rate reference) {
    return (gross_revenue(bases, s, reference) - cashback_total(bases, s, reference)) / bases.denominator;
}

SolveResult solve_with_cashback(const Population& p, const Schedule& s, double target, const SolveOptions& opts) {
    if (opts.max_iterations < 1)
        throw ConfigError("solver needs at least one fixed-point iteration");
    const BaseSummary bases = summarize_bases(p, s);

    SolveResult result;
    auto record = [&](int iteration, Rate t) {
        const double cashback = cashback_total(bases, s, t);
        const double burden = (gross_revenue(bases, s, t) - cashback) / bases.denominator;
        result.trace.push_back({iteration, t.value(), cashback, burden});
    };

    Rate previous = solve_given_cashback(bases, s, 0.0, target, opts);
    record(0, previous);

    for (int k = 1; k <= opts.max_iterations; ++k) {
        const double cashback = result.trace.back().cashback_total;
        const Rate current = solve_given_cashback(bases, s, cashback, target, opts);
        record(k, current);
        if (std::fabs(current.value() - previous.value()) < opts.fixed_point_tolerance) {
            result.reference = current;
            result.reference_inside = to_inside(current);
            result.iterations = k;
            result.cashback_total = result.trace.back().cashback_total;
            result.residual = std::fabs(result.trace.back().net_burden - target);
            return result;
        }
        previous = current;
    }
    const std::size_t n = result.trace.size();
    const double last_change = std::fabs(result.trace[n - 1].reference_outside - result.trace[n - 2].reference_outside);
    std::string message = fmt::format("cashback fixed point did not converge within {} iterations (last change {:.3g})",
                                      opts.max_iterations, last_change);
    throw NonConvergence(message, std::move(result.trace));
}

std::vector<RateImpactRow> marginal_rate_impact(const Population& p, const Schedule& s,
                                                const std::vector<std::string>& removals, double target,
                                                const SolveOptions& opts) {
    std::vector<RateImpactRow> rows;
    const double base = solve_given_cashback(p, s, 0.0, target, opts).value();
    rows.push_back({RateImpactRow::Kind::Baseline, {}, "Reference rate without cashback", base, 0.0});

    for (const auto& selector : removals) {
        const Schedule counterfactual = with_removal(s, selector);
        const double rate = solve_given_cashback(p, counterfactual, 0.0, target, opts).value();
        rows.push_back({RateImpactRow::Kind::Removal, selector, "Without " + selector_label(s, selector), rate,
                        (rate - base) * 100.0});
    }

    const double with_cashback = solve_with_cashback(p, s, target, opts).reference.value();
    rows.push_back({RateImpactRow::Kind::WithCashback, {}, "Reference rate with cashback", with_cashback,
                    (with_cashback - base) * 100.0});
    return rows;
}

}  // namespace vatsim
