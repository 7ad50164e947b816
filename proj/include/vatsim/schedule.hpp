#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "vatsim/rates.hpp"

namespace vatsim {

namespace treatment {

struct ZeroRate {
    bool operator==(const ZeroRate&) const = default;
};
struct ReferenceRate {
    bool operator==(const ReferenceRate&) const = default;
};

/// A fixed fraction of the legal reference rate (e.g. 40% or 70%).
struct ReducedFraction {
    double fraction = 1.0;

    bool operator==(const ReducedFraction&) const = default;
};

/// Sector-specific effective rate, independent of the reference rate.
struct SpecificRegime {
    Rate effective;

    bool operator==(const SpecificRegime&) const = default;
};

/// Excise levied before the VAT and included in its base.
struct Selective {
    Rate excise;
    double vat_fraction = 1.0;

    bool operator==(const Selective&) const = default;
};

/// Reduced-fraction rate applied to the base left after a fixed monthly
/// deduction (the social reducer).
struct RentRegime {
    double fraction = 1.0;
    double reducer = 0.0;

    bool operator==(const RentRegime&) const = default;
};

struct Untaxed {
    bool operator==(const Untaxed&) const = default;
};

}  // namespace treatment

using TaxTreatment = std::variant<treatment::ZeroRate, treatment::ReferenceRate, treatment::ReducedFraction,
                                  treatment::SpecificRegime, treatment::Selective, treatment::RentRegime,
                                  treatment::Untaxed>;

/// Config token for the treatment kind ("zero_rate", "reduced_fraction", ...).
std::string_view kind_name(const TaxTreatment& t);

/// Whether the treatment's effective rate moves with the reference rate.
bool depends_on_reference(const TaxTreatment& t);

enum class CashbackClass { UtilityEnhanced, Standard, Excluded };

std::string_view to_string(CashbackClass c);

/// Parameters the synthetic population generator uses to draw this
/// category's budget share. Illustrative, not survey estimates.
struct EngelParams {
    double share = 0.0;          // budget weight at the reference expenditure level
    double slope = 0.0;          // elasticity of the weight in log per-capita expenditure
    double participation = 1.0;  // probability a household reports the category at all

    bool operator==(const EngelParams&) const = default;
};

struct Category {
    std::string id;
    std::string label;
    std::string group;  // treatment group used for tables and removal selectors
    TaxTreatment treatment;
    CashbackClass cashback = CashbackClass::Standard;
    bool in_denominator = true;
    Rate baseline_effective = Rate::inside(0.0);
    std::optional<EngelParams> engel;

    bool operator==(const Category&) const = default;
};

/// A named set of categories that can be removed together (one row of the
/// marginal-impact table).
struct RemovalGroup {
    std::string id;
    std::string label;
    std::vector<std::string> categories;

    bool operator==(const RemovalGroup&) const = default;
};

struct Schedule {
    std::string name;
    std::vector<Category> categories;
    double utility_refund_share = 0.466;
    double standard_refund_share = 0.20;
    double eligibility_threshold = 0.0;
    double target_net_burden = 0.201;
    std::vector<RemovalGroup> removal_groups;

    std::optional<std::size_t> find(std::string_view category_id) const;

    /// Group names in order of first appearance, skipping untaxed categories.
    std::vector<std::string> treatment_groups() const;

    /// Refund share that applies to a category's tax for eligible households.
    double refund_share(CashbackClass c) const;

    bool operator==(const Schedule&) const = default;
};

/// Checks every schedule invariant; throws ConfigError naming the offender.
void validate(const Schedule& s);

/// Parses and validates a schedule from JSON text. `source` names the input
/// in error messages.
Schedule parse_schedule(std::string_view json_text, std::string_view source = "<string>");

Schedule load_schedule(const std::filesystem::path& path);

/// Canonical JSON serialization; parse_schedule(serialize_schedule(s)) == s.
std::string serialize_schedule(const Schedule& s);

/// Stable 64-bit fingerprint of the canonical serialization.
std::uint64_t fingerprint(const Schedule& s);

/// Inside rate a category's expenditure is taxed at, given the outside
/// reference rate. For the rent regime this is the rate part only; the base
/// reduction is applied by the engine.
Rate effective_inside_rate(const Category& c, Rate reference);

/// Category indices a removal selector resolves to. Selectors match, in
/// order: a removal group id, a treatment group name, a category id, or a
/// treatment kind token. Throws ConfigError listing valid selectors.
std::vector<std::size_t> resolve_selector(const Schedule& s, std::string_view selector);

/// Human-readable label for a selector (removal group label or the selector).
std::string selector_label(const Schedule& s, std::string_view selector);

/// Copy of `s` in which the selected categories are taxed at the plain
/// reference rate. Ids, cashback classes and denominator flags are kept.
Schedule with_removal(const Schedule& s, std::string_view selector);

/// Every selector with_removal accepts.
std::vector<std::string> valid_selectors(const Schedule& s);

}  // namespace vatsim
