#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "vatsim/analysis.hpp"

namespace vatsim {

/// One table rendered both as CSV and as aligned plain text.
struct RenderedTable {
    std::string csv;
    std::string text;
};

/// Percentages with one decimal; a Total row closes the table.
RenderedTable render_budget_shares(const BudgetShareTable& table);

/// Outside reference rates in percent and changes in percentage points.
RenderedTable render_rate_impacts(const std::vector<RateImpactRow>& rows);

/// Per-quintile R$/month amounts as integers, tax changes over spending with
/// three decimals. Throws Error when `results` is empty.
RenderedTable render_scenarios(const std::vector<ScenarioResult>& results);

/// Writes `<dir>/<stem>.csv` and `<dir>/<stem>.txt`.
void write_table(const std::filesystem::path& dir, const std::string& stem, const RenderedTable& table);

/// Fixed-point formatting that never prints a negative zero.
std::string fixed(double value, int decimals);

}  // namespace vatsim
