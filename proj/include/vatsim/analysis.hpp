#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "vatsim/engine.hpp"
#include "vatsim/solver.hpp"

namespace vatsim {

inline constexpr int kQuintiles = 5;

/// Households ranked by per-capita total consumption (monetary plus
/// non-monetary) and cut into fifths of cumulative household weight.
struct QuintileAssignment {
    /// Quintile (1..5) of each household, aligned with the population.
    std::vector<int> quintile;
    /// Weighted 20/40/60/80% quantiles of per-capita total consumption.
    std::array<double, 4> boundaries{};
    /// Fraction of total household weight falling in each quintile.
    std::array<double, kQuintiles> weight_share{};
};

/// Ties in the ranking variable are broken by household id. A household
/// belongs to the quintile containing the midpoint of its cumulative weight
/// interval, so each quintile's weight share is within one maximal household
/// weight of 20%.
QuintileAssignment assign_quintiles(const Population& p);

/// Mean budget share of each treatment group, in percent. Columns 0..4 are
/// quintiles (weighted mean of household shares), column 5 is the share of
/// the group in aggregate weighted spending.
struct BudgetShareTable {
    std::vector<std::string> groups;
    std::vector<std::array<double, kQuintiles + 1>> shares;
};

/// Untaxed categories sit outside the VAT base and are left out.
BudgetShareTable budget_share_table(const Population& p, const Schedule& s, const QuintileAssignment& q);

enum class ScenarioKind { Baseline, UniformVAT, PLP68, PLP68TransferSwap };

std::string_view scenario_name(ScenarioKind k);
ScenarioKind parse_scenario(std::string_view name);

struct ScenarioOptions {
    /// Selector of the categories the transfer-swap scenario re-taxes.
    std::string food_basket_selector = "cesta_basica";
    SolveOptions solve;
    unsigned threads = 1;
};

struct QuintileRow {
    double mean_tax = 0.0;              // net of cashback and transfer, per household
    double mean_monetary = 0.0;         // monetary consumption
    double mean_total = 0.0;            // monetary plus non-monetary consumption
    double delta_tax = 0.0;             // mean_tax minus the baseline's
    double delta_over_expenditure = 0.0;  // delta_tax / mean_monetary
};

struct ScenarioResult {
    ScenarioKind kind = ScenarioKind::Baseline;
    /// Solved outside reference rate; zero for the baseline.
    double reference_outside = 0.0;
    double per_person_transfer = 0.0;
    AggregateIncidence aggregate;
    std::array<QuintileRow, kQuintiles> quintiles{};
    /// Σ weight × (net tax − baseline net tax), relative to baseline revenue.
    double neutrality_gap = 0.0;
    /// Net tax per household, aligned with the population.
    std::vector<double> net_tax;
};

/// Shared inputs of every scenario: quintiles and the pre-reform incidence.
/// All reforms are solved to reproduce the measured pre-reform burden.
class ScenarioRunner {
public:
    ScenarioRunner(const Population& p, const Schedule& s, ScenarioOptions opts = {});

    const QuintileAssignment& quintiles() const noexcept { return quintiles_; }
    double baseline_burden() const noexcept { return baseline_.aggregate.net_burden(); }
    const ScenarioResult& baseline() const noexcept { return baseline_; }

    ScenarioResult run(ScenarioKind kind) const;

private:
    ScenarioResult summarize(ScenarioKind kind, std::vector<HouseholdIncidence> incidences) const;

    const Population& population_;
    const Schedule& schedule_;
    ScenarioOptions opts_;
    QuintileAssignment quintiles_;
    ScenarioResult baseline_;
};

/// Every in-denominator category at the plain reference rate, the rest
/// untaxed, and no cashback.
Schedule uniform_vat_schedule(const Schedule& s);

}  // namespace vatsim
