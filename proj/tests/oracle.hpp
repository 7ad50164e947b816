// Test-only reference model. Re-derives every quantity from the schedule
// data with its own arithmetic so the library's code paths (rates module,
// engine, base summaries, solver) can be checked against it.
#pragma once

#include <cmath>
#include <variant>
#include <vector>

#include "vatsim/microdata.hpp"
#include "vatsim/schedule.hpp"

namespace oracle {

inline double inside_of(const vatsim::Rate& r) {
    return r.is_inside() ? r.value() : r.value() / (1.0 + r.value());
}

// Share of the consumer price that is tax when one unit of net price is
// marked up by `markup` (outside) rate: tax / price = markup / (1 + markup).
inline double price_share(double markup) { return 1.0 - 1.0 / (1.0 + markup); }

inline double category_rate(const vatsim::Category& c, double t_out) {
    using namespace vatsim::treatment;
    const auto& t = c.treatment;
    if (std::holds_alternative<ZeroRate>(t) || std::holds_alternative<Untaxed>(t))
        return 0.0;
    if (std::holds_alternative<ReferenceRate>(t))
        return price_share(t_out);
    if (const auto* r = std::get_if<ReducedFraction>(&t))
        return price_share(r->fraction * t_out);
    if (const auto* r = std::get_if<RentRegime>(&t))
        return price_share(r->fraction * t_out);
    if (const auto* r = std::get_if<SpecificRegime>(&t))
        return inside_of(r->effective);
    const auto& sel = std::get<Selective>(t);
    const double excise_out =
        sel.excise.is_inside() ? sel.excise.value() / (1.0 - sel.excise.value()) : sel.excise.value();
    // price chain: net price 1 -> excise -> VAT on the excise-inclusive price
    const double consumer_price = 1.0 * (1.0 + excise_out) * (1.0 + sel.vat_fraction * t_out);
    return (consumer_price - 1.0) / consumer_price;
}

inline double category_tax(const vatsim::Category& c, double expenditure, double t_out) {
    double base = expenditure;
    if (const auto* r = std::get_if<vatsim::treatment::RentRegime>(&c.treatment))
        base = expenditure > r->reducer ? expenditure - r->reducer : 0.0;
    return base * category_rate(c, t_out);
}

struct HouseholdFigures {
    double gross = 0.0;
    double cashback = 0.0;
};

inline HouseholdFigures household(const vatsim::Household& h, const vatsim::Schedule& s, double t_out) {
    HouseholdFigures f;
    const bool eligible = !(h.income_per_capita > s.eligibility_threshold);
    for (std::size_t c = 0; c < s.categories.size(); ++c) {
        const double tax = category_tax(s.categories[c], h.expenditures[c], t_out);
        f.gross += tax;
        if (!eligible)
            continue;
        switch (s.categories[c].cashback) {
        case vatsim::CashbackClass::UtilityEnhanced:
            f.cashback += s.utility_refund_share * tax;
            break;
        case vatsim::CashbackClass::Standard:
            f.cashback += s.standard_refund_share * tax;
            break;
        case vatsim::CashbackClass::Excluded:
            break;
        }
    }
    return f;
}

struct Totals {
    double gross = 0.0;
    double cashback = 0.0;
    double denominator = 0.0;
};

inline Totals totals(const vatsim::Population& p, const vatsim::Schedule& s, double t_out) {
    Totals t;
    for (const auto& h : p.households()) {
        const auto f = household(h, s, t_out);
        t.gross += h.weight * f.gross;
        t.cashback += h.weight * f.cashback;
        for (std::size_t c = 0; c < s.categories.size(); ++c)
            if (s.categories[c].in_denominator)
                t.denominator += h.weight * h.expenditures[c];
    }
    return t;
}

/// Burden with cashback evaluated at the same rate.
inline double simultaneous_burden(const vatsim::Population& p, const vatsim::Schedule& s, double t_out) {
    const auto t = totals(p, s, t_out);
    return (t.gross - t.cashback) / t.denominator;
}

/// Plain bisection on g(t) = simultaneous_burden(t) - target over [0, hi].
inline double simultaneous_bisection(const vatsim::Population& p, const vatsim::Schedule& s, double target,
                                     double hi = 5.0) {
    double lo = 0.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (simultaneous_burden(p, s, mid) < target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

/// Dense grid search: grid point whose cashback-free burden is closest to
/// the target.
inline double grid_search(const vatsim::Population& p, const vatsim::Schedule& s, double fixed_cashback,
                          double target, double lo, double hi, double step) {
    double best_t = lo;
    double best_gap = INFINITY;
    const auto steps = static_cast<long>(std::floor((hi - lo) / step));
    for (long k = 0; k <= steps; ++k) {
        const double t = lo + static_cast<double>(k) * step;
        const auto tot = totals(p, s, t);
        const double gap = std::fabs((tot.gross - fixed_cashback) / tot.denominator - target);
        if (gap < best_gap) {
            best_gap = gap;
            best_t = t;
        }
    }
    return best_t;
}

}  // namespace oracle
