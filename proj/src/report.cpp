#include "vatsim/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <fmt/format.h>

namespace vatsim {

namespace {

using Grid = std::vector<std::vector<std::string>>;

std::string to_csv(const Grid& grid) {
    std::string out;
    for (const auto& row : grid) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c)
                out += ',';
            out += row[c];
        }
        out += '\n';
    }
    return out;
}

// First column left-aligned, the rest right-aligned.
std::string to_text(const std::string& title, const Grid& grid) {
    std::vector<std::size_t> width;
    for (const auto& row : grid) {
        if (width.size() < row.size())
            width.resize(row.size(), 0);
        for (std::size_t c = 0; c < row.size(); ++c)
            width[c] = std::max(width[c], row[c].size());
    }
    std::string out = title + "\n\n";
    for (const auto& row : grid) {
        std::string line;
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c == 0)
                line += fmt::format("{:<{}}", row[c], width[c]);
            else
                line += fmt::format("  {:>{}}", row[c], width[c]);
        }
        while (!line.empty() && line.back() == ' ')
            line.pop_back();
        out += line + '\n';
    }
    return out;
}

std::vector<std::string> quintile_header(const std::string& first, bool with_total) {
    std::vector<std::string> h{first};
    for (int k = 1; k <= kQuintiles; ++k)
        h.push_back(fmt::format("Q{}", k));
    if (with_total)
        h.push_back("Total");
    return h;
}

}  // namespace

std::string fixed(double value, int decimals) {
    std::string s = fmt::format("{:.{}f}", value, decimals);
    if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos)
        s.erase(0, 1);
    return s;
}

RenderedTable render_budget_shares(const BudgetShareTable& table) {
    Grid grid;
    grid.push_back(quintile_header("group", true));
    std::array<double, kQuintiles + 1> closure{};
    for (std::size_t g = 0; g < table.groups.size(); ++g) {
        std::vector<std::string> row{table.groups[g]};
        for (std::size_t k = 0; k < kQuintiles + 1; ++k) {
            row.push_back(fixed(table.shares[g][k], 1));
            closure[k] += table.shares[g][k];
        }
        grid.push_back(std::move(row));
    }
    std::vector<std::string> total{"Total"};
    for (double c : closure)
        total.push_back(fixed(c, 1));
    grid.push_back(std::move(total));
    return {to_csv(grid), to_text("Budget shares by treatment group and quintile of per-capita consumption (%)", grid)};
}

RenderedTable render_rate_impacts(const std::vector<RateImpactRow>& rows) {
    if (rows.empty())
        throw Error("render_rate_impacts: no rows");
    Grid grid;
    grid.push_back({"row", "reference_rate_pct", "delta_pp"});
    for (const auto& r : rows) {
        const std::string delta = r.kind == RateImpactRow::Kind::Baseline ? "" : fixed(r.delta_pp, 1);
        grid.push_back({r.label, fixed(100.0 * r.reference_outside, 1), delta});
    }
    return {to_csv(grid), to_text("Reference rate (outside, %) under removal of favoured treatments", grid)};
}

RenderedTable render_scenarios(const std::vector<ScenarioResult>& results) {
    if (results.empty())
        throw Error("render_scenarios: empty scenario list");
    Grid grid;
    auto header = quintile_header("measure", false);
    header.insert(header.begin(), "scenario");
    grid.push_back(header);

    auto add = [&](const ScenarioResult& r, const std::string& measure, auto field, int decimals) {
        std::vector<std::string> row{std::string(scenario_name(r.kind)), measure};
        for (const auto& q : r.quintiles)
            row.push_back(fixed(field(q), decimals));
        grid.push_back(std::move(row));
    };

    for (const auto& r : results) {
        add(r, "tax_brl_month", [](const QuintileRow& q) { return q.mean_tax; }, 0);
        if (r.kind == ScenarioKind::Baseline) {
            add(r, "monetary_expenditure_brl_month", [](const QuintileRow& q) { return q.mean_monetary; }, 0);
            add(r, "total_expenditure_brl_month", [](const QuintileRow& q) { return q.mean_total; }, 0);
        } else {
            add(r, "delta_tax_brl_month", [](const QuintileRow& q) { return q.delta_tax; }, 0);
            add(r, "delta_over_expenditure", [](const QuintileRow& q) { return q.delta_over_expenditure; }, 3);
        }
    }
    return {to_csv(grid), to_text("Mean tax per household by quintile of per-capita consumption", grid)};
}

void write_table(const std::filesystem::path& dir, const std::string& stem, const RenderedTable& table) {
    for (const auto& [ext, body] : {std::pair{".csv", &table.csv}, std::pair{".txt", &table.text}}) {
        const auto path = dir / (stem + ext);
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out)
            throw Error("cannot write " + path.string());
        out << *body;
        if (!out)
            throw Error("failed writing " + path.string());
    }
}

}  // namespace vatsim
