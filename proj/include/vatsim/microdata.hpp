#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "vatsim/schedule.hpp"

namespace vatsim {

/// One survey household. Currency values are per month.
struct Household {
    std::int64_t id = 0;
    double weight = 1.0;  // survey expansion factor
    int residents = 1;
    double income_per_capita = 0.0;
    double nonmonetary_total = 0.0;
    /// Monetary expenditure per category, aligned with Population::category_ids().
    std::vector<double> expenditures;

    double monetary_total() const;
    /// Monetary plus non-monetary consumption per resident; the ranking variable.
    double per_capita_total() const;

    bool operator==(const Household&) const = default;
};

struct Provenance {
    enum class Kind { File, Synthetic, InMemory };
    Kind kind = Kind::InMemory;
    std::string path;
    std::uint64_t seed = 0;
};

/// An immutable, validated set of households sharing one category layout.
class Population {
public:
    /// Validates every household; throws DataError on the first violation.
    Population(std::vector<std::string> category_ids, std::vector<Household> households,
               Provenance provenance = {});

    const std::vector<std::string>& category_ids() const noexcept { return category_ids_; }
    const std::vector<Household>& households() const noexcept { return households_; }
    const Provenance& provenance() const noexcept { return provenance_; }
    std::size_t size() const noexcept { return households_.size(); }
    const Household& operator[](std::size_t i) const { return households_[i]; }

    /// Household indices in ascending id order; the canonical reduction order.
    const std::vector<std::size_t>& id_order() const noexcept { return id_order_; }

    /// Throws DataError unless the category layout equals the schedule's.
    void check_compatible(const Schedule& s) const;

private:
    std::vector<std::string> category_ids_;
    std::vector<Household> households_;
    Provenance provenance_;
    std::vector<std::size_t> id_order_;
};

/// Reads a households CSV: header `id,weight,residents,income_pc,
/// nonmonetary_total` followed by one column per schedule category (any
/// order). Columns are re-aligned to the schedule's category order.
Population parse_population(std::istream& in, const Schedule& s, std::string_view source = "<stream>");
Population load_population(const std::filesystem::path& path, const Schedule& s);

/// Writes the CSV layout parse_population reads. Output is byte-stable.
void write_population(std::ostream& out, const Population& p);

/// Seeded synthetic population whose category shares follow the schedule's
/// Engel parameters. A pure function of (seed, n, schedule fingerprint).
Population generate_synthetic(std::uint64_t seed, std::size_t n, const Schedule& s);

}  // namespace vatsim
