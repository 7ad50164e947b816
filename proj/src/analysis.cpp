#include "vatsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vatsim/summation.hpp"

namespace vatsim {

QuintileAssignment assign_quintiles(const Population& p) {
    const std::size_t n = p.size();
    std::vector<double> key(n);
    for (std::size_t i = 0; i < n; ++i)
        key[i] = p[i].per_capita_total();

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (key[a] != key[b])
            return key[a] < key[b];
        return p[a].id < p[b].id;
    });

    CompensatedSum total_sum;
    for (std::size_t i : order)
        total_sum += p[i].weight;
    const double total = total_sum.value();

    QuintileAssignment q;
    q.quintile.assign(n, 0);
    std::array<CompensatedSum, kQuintiles> in_quintile;
    std::size_t next_boundary = 0;
    CompensatedSum cumulative;
    for (std::size_t i : order) {
        const double w = p[i].weight;
        const double before = cumulative.value();
        cumulative += w;
        const double after = cumulative.value();

        const double midpoint = (before + 0.5 * w) / total;
        const int idx = std::min(kQuintiles - 1, static_cast<int>(std::floor(midpoint * kQuintiles)));
        q.quintile[i] = idx + 1;
        in_quintile[static_cast<std::size_t>(idx)] += w;

        // lower weighted quantile: first value whose cumulative weight reaches the mark
        while (next_boundary < q.boundaries.size() &&
               after / total >= static_cast<double>(next_boundary + 1) / kQuintiles) {
            q.boundaries[next_boundary] = key[i];
            ++next_boundary;
        }
    }
    for (; next_boundary < q.boundaries.size(); ++next_boundary)
        q.boundaries[next_boundary] = key[order.back()];
    for (int k = 0; k < kQuintiles; ++k)
        q.weight_share[static_cast<std::size_t>(k)] = in_quintile[static_cast<std::size_t>(k)].value() / total;
    return q;
}

BudgetShareTable budget_share_table(const Population& p, const Schedule& s, const QuintileAssignment& q) {
    p.check_compatible(s);
    BudgetShareTable table;
    table.groups = s.treatment_groups();
    const std::size_t ngroups = table.groups.size();

    std::vector<std::size_t> group_of(s.categories.size(), ngroups);  // ngroups = not tabulated
    for (std::size_t c = 0; c < s.categories.size(); ++c) {
        if (std::holds_alternative<treatment::Untaxed>(s.categories[c].treatment))
            continue;
        group_of[c] = static_cast<std::size_t>(
            std::find(table.groups.begin(), table.groups.end(), s.categories[c].group) - table.groups.begin());
    }

    // share sums per quintile, quintile weights, and aggregate spending per group
    std::vector<std::array<CompensatedSum, kQuintiles>> share_sum(ngroups);
    std::array<CompensatedSum, kQuintiles> weight_sum;
    std::vector<CompensatedSum> spend(ngroups);
    CompensatedSum spend_total;

    std::vector<double> group_spend(ngroups);
    for (std::size_t i : p.id_order()) {
        const auto& h = p[i];
        std::fill(group_spend.begin(), group_spend.end(), 0.0);
        double total = 0.0;
        for (std::size_t c = 0; c < s.categories.size(); ++c) {
            if (group_of[c] == ngroups)
                continue;
            group_spend[group_of[c]] += h.expenditures[c];
            total += h.expenditures[c];
        }
        if (!(total > 0.0))
            continue;
        const auto k = static_cast<std::size_t>(q.quintile[i] - 1);
        weight_sum[k] += h.weight;
        for (std::size_t g = 0; g < ngroups; ++g) {
            share_sum[g][k] += h.weight * group_spend[g] / total;
            spend[g] += h.weight * group_spend[g];
        }
        spend_total += h.weight * total;
    }

    table.shares.resize(ngroups);
    for (std::size_t g = 0; g < ngroups; ++g) {
        for (std::size_t k = 0; k < kQuintiles; ++k) {
            const double w = weight_sum[k].value();
            table.shares[g][k] = w > 0.0 ? 100.0 * share_sum[g][k].value() / w : 0.0;
        }
        const double all = spend_total.value();
        table.shares[g][kQuintiles] = all > 0.0 ? 100.0 * spend[g].value() / all : 0.0;
    }
    return table;
}

std::string_view scenario_name(ScenarioKind k) {
    switch (k) {
    case ScenarioKind::Baseline:
        return "baseline";
    case ScenarioKind::UniformVAT:
        return "uniform_vat";
    case ScenarioKind::PLP68:
        return "plp68";
    case ScenarioKind::PLP68TransferSwap:
        return "plp68_transfer_swap";
    }
    return "baseline";
}

ScenarioKind parse_scenario(std::string_view name) {
    for (auto k : {ScenarioKind::Baseline, ScenarioKind::UniformVAT, ScenarioKind::PLP68,
                   ScenarioKind::PLP68TransferSwap})
        if (scenario_name(k) == name)
            return k;
    throw ConfigError("unknown scenario \"" + std::string(name) +
                      "\" (expected baseline, uniform_vat, plp68 or plp68_transfer_swap)");
}

Schedule uniform_vat_schedule(const Schedule& s) {
    Schedule u = s;
    u.name = s.name + "+uniform_vat";
    for (auto& c : u.categories) {
        if (c.in_denominator)
            c.treatment = treatment::ReferenceRate{};
        else
            c.treatment = treatment::Untaxed{};
    }
    u.utility_refund_share = 0.0;
    u.standard_refund_share = 0.0;
    u.removal_groups.clear();
    return u;
}

ScenarioRunner::ScenarioRunner(const Population& p, const Schedule& s, ScenarioOptions opts)
    : population_(p), schedule_(s), opts_(std::move(opts)), quintiles_(assign_quintiles(p)) {
    baseline_ = summarize(ScenarioKind::Baseline, evaluate_baseline(p, s, {opts_.threads, false}));
}

ScenarioResult ScenarioRunner::run(ScenarioKind kind) const {
    const double target = baseline_burden();
    switch (kind) {
    case ScenarioKind::Baseline:
        return baseline_;
    case ScenarioKind::UniformVAT: {
        const Schedule uniform = uniform_vat_schedule(schedule_);
        const Rate rate = solve_given_cashback(population_, uniform, 0.0, target, opts_.solve);
        auto result = summarize(kind, evaluate(population_, uniform, rate, {opts_.threads, false}));
        result.reference_outside = rate.value();
        return result;
    }
    case ScenarioKind::PLP68: {
        const SolveResult solved = solve_with_cashback(population_, schedule_, target, opts_.solve);
        auto result = summarize(kind, evaluate(population_, schedule_, solved.reference, {opts_.threads, true}));
        result.reference_outside = solved.reference.value();
        return result;
    }
    case ScenarioKind::PLP68TransferSwap: {
        // The reform's rate is held fixed; the revenue from taxing the food
        // basket at that rate funds an equal per-person transfer.
        const SolveResult solved = solve_with_cashback(population_, schedule_, target, opts_.solve);
        const auto reform = evaluate(population_, schedule_, solved.reference, {opts_.threads, true});
        const Schedule swapped = with_removal(schedule_, opts_.food_basket_selector);
        auto incidences = evaluate(population_, swapped, solved.reference, {opts_.threads, true});

        CompensatedSum extra;
        for (std::size_t i : population_.id_order())
            extra += population_[i].weight * (incidences[i].net_tax() - reform[i].net_tax());
        const double per_person = universal_transfer_amount(std::max(0.0, extra.value()), population_);
        apply_transfer(incidences, population_, per_person);

        auto result = summarize(kind, std::move(incidences));
        result.reference_outside = solved.reference.value();
        result.per_person_transfer = per_person;
        return result;
    }
    }
    throw ConfigError("unhandled scenario");
}

ScenarioResult ScenarioRunner::summarize(ScenarioKind kind, std::vector<HouseholdIncidence> incidences) const {
    const Population& p = population_;
    ScenarioResult r;
    r.kind = kind;
    r.aggregate = aggregate(p, incidences, schedule_);
    r.net_tax.resize(p.size());
    for (std::size_t i = 0; i < p.size(); ++i)
        r.net_tax[i] = incidences[i].net_tax();

    std::array<CompensatedSum, kQuintiles> weight, tax, monetary, total;
    for (std::size_t i : p.id_order()) {
        const auto& h = p[i];
        const auto k = static_cast<std::size_t>(quintiles_.quintile[i] - 1);
        const double m = h.monetary_total();
        weight[k] += h.weight;
        tax[k] += h.weight * r.net_tax[i];
        monetary[k] += h.weight * m;
        total[k] += h.weight * (m + h.nonmonetary_total);
    }
    for (std::size_t k = 0; k < kQuintiles; ++k) {
        auto& row = r.quintiles[k];
        const double w = weight[k].value();
        if (!(w > 0.0))
            continue;
        row.mean_tax = tax[k].value() / w;
        row.mean_monetary = monetary[k].value() / w;
        row.mean_total = total[k].value() / w;
    }

    if (kind != ScenarioKind::Baseline) {
        CompensatedSum delta;
        for (std::size_t i : p.id_order())
            delta += p[i].weight * (r.net_tax[i] - baseline_.net_tax[i]);
        r.neutrality_gap = delta.value() / baseline_.aggregate.total_net;
        for (std::size_t k = 0; k < kQuintiles; ++k) {
            auto& row = r.quintiles[k];
            row.delta_tax = row.mean_tax - baseline_.quintiles[k].mean_tax;
            row.delta_over_expenditure = row.mean_monetary > 0.0 ? row.delta_tax / row.mean_monetary : 0.0;
        }
    }
    return r;
}

}  // namespace vatsim
