#include "vatsim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

#include "vatsim/summation.hpp"

namespace vatsim {

namespace {

bool eligible(const Household& h, const Schedule& s) {
    return h.income_per_capita <= s.eligibility_threshold;
}

template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
    const std::size_t workers = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(n, 1));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    const std::size_t chunk = (n + workers - 1) / workers;
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        if (begin >= end)
            break;
        pool.emplace_back([&fn, begin, end] {
            for (std::size_t i = begin; i < end; ++i)
                fn(i);
        });
    }
}

std::vector<double> inside_rates(const Schedule& s, Rate reference) {
    std::vector<double> rates(s.categories.size());
    for (std::size_t c = 0; c < rates.size(); ++c)
        rates[c] = effective_inside_rate(s.categories[c], reference).value();
    return rates;
}

HouseholdIncidence tax_with_rates(const Household& h, const Schedule& s, const std::vector<double>& rates) {
    HouseholdIncidence inc;
    inc.household_id = h.id;
    inc.per_category_tax.resize(s.categories.size());
    CompensatedSum gross;
    for (std::size_t c = 0; c < s.categories.size(); ++c) {
        const double tax = taxable_base(s.categories[c], h.expenditures[c]) * rates[c];
        inc.per_category_tax[c] = tax;
        gross += tax;
    }
    inc.gross_tax = gross.value();
    return inc;
}

}  // namespace

double taxable_base(const Category& c, double expenditure) {
    if (const auto* rent = std::get_if<treatment::RentRegime>(&c.treatment))
        return std::max(0.0, expenditure - rent->reducer);
    return expenditure;
}

HouseholdIncidence household_tax(const Household& h, const Schedule& s, Rate reference) {
    return tax_with_rates(h, s, inside_rates(s, reference));
}

double household_cashback(const Household& h, const HouseholdIncidence& inc, const Schedule& s) {
    if (!eligible(h, s))
        return 0.0;
    CompensatedSum refund;
    for (std::size_t c = 0; c < s.categories.size(); ++c)
        refund += s.refund_share(s.categories[c].cashback) * inc.per_category_tax[c];
    return refund.value();
}

HouseholdIncidence baseline_tax(const Household& h, const Schedule& s) {
    HouseholdIncidence inc;
    inc.household_id = h.id;
    inc.per_category_tax.resize(s.categories.size());
    CompensatedSum gross;
    for (std::size_t c = 0; c < s.categories.size(); ++c) {
        const double tax = h.expenditures[c] * to_inside(s.categories[c].baseline_effective).value();
        inc.per_category_tax[c] = tax;
        gross += tax;
    }
    inc.gross_tax = gross.value();
    return inc;
}

std::vector<HouseholdIncidence> evaluate(const Population& p, const Schedule& s, Rate reference,
                                         const EvalOptions& opts) {
    p.check_compatible(s);
    const auto rates = inside_rates(s, reference);
    std::vector<HouseholdIncidence> out(p.size());
    parallel_for(p.size(), opts.threads, [&](std::size_t i) {
        out[i] = tax_with_rates(p[i], s, rates);
        if (opts.cashback)
            out[i].cashback = household_cashback(p[i], out[i], s);
    });
    return out;
}

std::vector<HouseholdIncidence> evaluate_baseline(const Population& p, const Schedule& s, const EvalOptions& opts) {
    p.check_compatible(s);
    std::vector<HouseholdIncidence> out(p.size());
    parallel_for(p.size(), opts.threads, [&](std::size_t i) { out[i] = baseline_tax(p[i], s); });
    return out;
}

AggregateIncidence aggregate(const Population& p, std::span<const HouseholdIncidence> incidences,
                             const Schedule& s) {
    if (incidences.size() != p.size())
        throw Error("aggregate: expected one incidence per household (" + std::to_string(p.size()) + "), got " +
                    std::to_string(incidences.size()));
    CompensatedSum gross, cashback, transfer, net;
    for (std::size_t i : p.id_order()) {
        const double w = p[i].weight;
        const auto& inc = incidences[i];
        gross += w * inc.gross_tax;
        cashback += w * inc.cashback;
        transfer += w * inc.transfer;
        net += w * inc.net_tax();
    }
    AggregateIncidence agg;
    agg.total_gross = gross.value();
    agg.total_cashback = cashback.value();
    agg.total_transfer = transfer.value();
    agg.total_net = net.value();
    agg.denominator_expenditure = denominator_expenditure(p, s);
    return agg;
}

double denominator_expenditure(const Population& p, const Schedule& s) {
    CompensatedSum total;
    for (std::size_t i : p.id_order()) {
        const auto& h = p[i];
        CompensatedSum own;
        for (std::size_t c = 0; c < s.categories.size(); ++c)
            if (s.categories[c].in_denominator)
                own += h.expenditures[c];
        total += h.weight * own.value();
    }
    const double value = total.value();
    if (!(value > 0.0))
        throw DataError("weighted consumption over in-denominator categories is zero; the burden is undefined");
    return value;
}

double weighted_persons(const Population& p) {
    CompensatedSum persons;
    for (std::size_t i : p.id_order())
        persons += p[i].weight * p[i].residents;
    return persons.value();
}

double universal_transfer_amount(double extra_revenue, const Population& p) {
    if (!(extra_revenue >= 0.0) || !std::isfinite(extra_revenue))
        throw Error("universal transfer: extra revenue must be finite and non-negative");
    const double persons = weighted_persons(p);
    if (!(persons > 0.0))
        throw DataError("universal transfer: population has no weighted persons");
    return extra_revenue / persons;
}

void apply_transfer(std::vector<HouseholdIncidence>& incidences, const Population& p, double per_person) {
    for (std::size_t i = 0; i < incidences.size(); ++i)
        incidences[i].transfer = per_person * p[i].residents;
}

BaseSummary summarize_bases(const Population& p, const Schedule& s) {
    p.check_compatible(s);
    const std::size_t ncat = s.categories.size();
    std::vector<CompensatedSum> all(ncat), elig(ncat);
    for (std::size_t i : p.id_order()) {
        const auto& h = p[i];
        const bool is_eligible = eligible(h, s);
        for (std::size_t c = 0; c < ncat; ++c) {
            const double base = h.weight * taxable_base(s.categories[c], h.expenditures[c]);
            all[c] += base;
            if (is_eligible)
                elig[c] += base;
        }
    }
    BaseSummary b;
    b.taxable.resize(ncat);
    b.taxable_eligible.resize(ncat);
    for (std::size_t c = 0; c < ncat; ++c) {
        b.taxable[c] = all[c].value();
        b.taxable_eligible[c] = elig[c].value();
    }
    b.denominator = denominator_expenditure(p, s);
    return b;
}

double gross_revenue(const BaseSummary& b, const Schedule& s, Rate reference) {
    CompensatedSum total;
    for (std::size_t c = 0; c < s.categories.size(); ++c)
        total += b.taxable[c] * effective_inside_rate(s.categories[c], reference).value();
    return total.value();
}

double cashback_total(const BaseSummary& b, const Schedule& s, Rate reference) {
    CompensatedSum total;
    for (std::size_t c = 0; c < s.categories.size(); ++c) {
        const double share = s.refund_share(s.categories[c].cashback);
        if (share > 0.0)
            total += share * b.taxable_eligible[c] * effective_inside_rate(s.categories[c], reference).value();
    }
    return total.value();
}

}  // namespace vatsim
