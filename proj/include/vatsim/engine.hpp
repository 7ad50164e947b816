#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "vatsim/microdata.hpp"
#include "vatsim/schedule.hpp"

namespace vatsim {

/// Monthly tax position of one household under one policy.
struct HouseholdIncidence {
    std::int64_t household_id = 0;
    double gross_tax = 0.0;
    double cashback = 0.0;
    double transfer = 0.0;
    std::vector<double> per_category_tax;

    double net_tax() const noexcept { return gross_tax - cashback - transfer; }
};

/// Weight-expanded totals over a population.
struct AggregateIncidence {
    double total_gross = 0.0;
    double total_cashback = 0.0;
    double total_transfer = 0.0;
    double total_net = 0.0;
    /// Weighted monetary consumption over the in-denominator categories.
    double denominator_expenditure = 0.0;

    double net_burden() const noexcept { return total_net / denominator_expenditure; }
};

struct EvalOptions {
    unsigned threads = 1;
    bool cashback = true;
};

/// Base the category's inside rate applies to: the expenditure itself, or
/// for the rent regime what is left after the reducer (floored at zero).
double taxable_base(const Category& c, double expenditure);

/// Gross tax only; cashback and transfer are left at zero.
HouseholdIncidence household_tax(const Household& h, const Schedule& s, Rate reference);

/// Refund owed to the household: zero above the eligibility threshold,
/// otherwise each category's tax times its class's refund share.
double household_cashback(const Household& h, const HouseholdIncidence& inc, const Schedule& s);

/// Pre-reform tax: expenditure times the category's baseline effective rate.
HouseholdIncidence baseline_tax(const Household& h, const Schedule& s);

/// Gross tax plus (optionally) cashback for every household, in population
/// order. Work may be spread over threads; the result does not depend on it.
std::vector<HouseholdIncidence> evaluate(const Population& p, const Schedule& s, Rate reference,
                                         const EvalOptions& opts = {});

std::vector<HouseholdIncidence> evaluate_baseline(const Population& p, const Schedule& s,
                                                  const EvalOptions& opts = {});

/// Weighted totals, reduced in ascending household id with compensated
/// summation. `incidences` is aligned with the population.
AggregateIncidence aggregate(const Population& p, std::span<const HouseholdIncidence> incidences,
                             const Schedule& s);

/// Weighted monetary consumption over in-denominator categories.
double denominator_expenditure(const Population& p, const Schedule& s);

/// Σ weight × residents.
double weighted_persons(const Population& p);

/// Per-person lump sum that distributes `extra_revenue` over the weighted
/// population. Each household receives amount × residents.
double universal_transfer_amount(double extra_revenue, const Population& p);

/// Sets each household's transfer to amount × residents.
void apply_transfer(std::vector<HouseholdIncidence>& incidences, const Population& p, double per_person);

/// Weighted taxable bases per category, pre-reduced so that revenue at any
/// reference rate is a short dot product. Gross tax is linear in the base
/// with a rate that depends only on the reference rate, so
/// Σ_h w_h Σ_c base_hc·rate_c(t) = Σ_c rate_c(t)·Σ_h w_h base_hc.
struct BaseSummary {
    std::vector<double> taxable;           // all households
    std::vector<double> taxable_eligible;  // cashback-eligible households only
    double denominator = 0.0;
};

BaseSummary summarize_bases(const Population& p, const Schedule& s);

/// Weighted gross revenue at an outside reference rate.
double gross_revenue(const BaseSummary& b, const Schedule& s, Rate reference);

/// Weighted cashback at an outside reference rate.
double cashback_total(const BaseSummary& b, const Schedule& s, Rate reference);

}  // namespace vatsim
