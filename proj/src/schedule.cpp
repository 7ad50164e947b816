#include "vatsim/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace vatsim {

using nlohmann::json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr std::string_view kReservedColumns[] = {"id", "weight", "residents", "income_pc", "nonmonetary_total"};

bool is_token(std::string_view s) {
    if (s.empty())
        return false;
    return std::all_of(s.begin(), s.end(), [](char ch) {
        return (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9') || ch == '_' ||
               ch == '-' || ch == '.';
    });
}

// Reads JSON objects while tracking which keys were consumed, so that any
// key left over is reported as unknown.
class ObjectReader {
public:
    ObjectReader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
        if (!j_.is_object())
            throw ConfigError(where_ + ": expected a JSON object");
    }

    bool has(const std::string& key) const { return j_.contains(key); }

    const json& required(const std::string& key) {
        if (!j_.contains(key))
            throw ConfigError(where_ + ": missing required key \"" + key + "\"");
        seen_.insert(key);
        return j_.at(key);
    }

    const json* optional(const std::string& key) {
        if (!j_.contains(key))
            return nullptr;
        seen_.insert(key);
        return &j_.at(key);
    }

    double number(const std::string& key) { return as_number(required(key), key); }

    double number_or(const std::string& key, double fallback) {
        const json* v = optional(key);
        return v ? as_number(*v, key) : fallback;
    }

    std::string string(const std::string& key) {
        const json& v = required(key);
        if (!v.is_string())
            throw ConfigError(where_ + ": \"" + key + "\" must be a string");
        return v.get<std::string>();
    }

    std::string string_or(const std::string& key, std::string fallback) {
        const json* v = optional(key);
        if (!v)
            return fallback;
        if (!v->is_string())
            throw ConfigError(where_ + ": \"" + key + "\" must be a string");
        return v->get<std::string>();
    }

    bool boolean_or(const std::string& key, bool fallback) {
        const json* v = optional(key);
        if (!v)
            return fallback;
        if (!v->is_boolean())
            throw ConfigError(where_ + ": \"" + key + "\" must be true or false");
        return v->get<bool>();
    }

    void finish() const {
        for (const auto& [key, value] : j_.items()) {
            (void)value;
            if (!seen_.count(key))
                throw ConfigError(where_ + ": unknown key \"" + key + "\"");
        }
    }

    const std::string& where() const { return where_; }

private:
    double as_number(const json& v, const std::string& key) const {
        if (!v.is_number())
            throw ConfigError(where_ + ": \"" + key + "\" must be a number");
        const double x = v.get<double>();
        if (!std::isfinite(x))
            throw ConfigError(where_ + ": \"" + key + "\" must be finite");
        return x;
    }

    const json& j_;
    std::string where_;
    std::set<std::string> seen_;
};

Rate parse_rate(const json& j, const std::string& where) {
    ObjectReader r(j, where);
    const double value = r.number("value");
    const std::string basis = r.string("basis");
    r.finish();
    try {
        return parse_basis(basis.c_str()) == RateBasis::Inside ? Rate::inside(value) : Rate::outside(value);
    } catch (const DomainError& e) {
        throw ConfigError(where + ": " + e.what());
    } catch (const ConfigError& e) {
        throw ConfigError(where + ": " + e.what());
    }
}

json rate_json(const Rate& r) {
    return json{{"value", r.value()}, {"basis", to_string(r.basis())}};
}

TaxTreatment parse_treatment(const json& j, const std::string& where) {
    ObjectReader r(j, where);
    const std::string kind = r.string("kind");
    TaxTreatment t;
    if (kind == "zero_rate") {
        t = treatment::ZeroRate{};
    } else if (kind == "reference_rate") {
        t = treatment::ReferenceRate{};
    } else if (kind == "reduced_fraction") {
        t = treatment::ReducedFraction{r.number("fraction")};
    } else if (kind == "specific_regime") {
        t = treatment::SpecificRegime{parse_rate(r.required("effective"), where + ".effective")};
    } else if (kind == "selective") {
        const Rate excise = parse_rate(r.required("excise_rate"), where + ".excise_rate");
        t = treatment::Selective{excise, r.number_or("vat_fraction", 1.0)};
    } else if (kind == "rent_regime") {
        const double fraction = r.number("fraction");
        t = treatment::RentRegime{fraction, r.number("reducer")};
    } else if (kind == "untaxed") {
        t = treatment::Untaxed{};
    } else {
        throw ConfigError(where + ": unknown treatment kind \"" + kind +
                          "\" (expected zero_rate, reference_rate, reduced_fraction, specific_regime, selective, "
                          "rent_regime or untaxed)");
    }
    r.finish();
    return t;
}

json treatment_json(const TaxTreatment& t) {
    json j{{"kind", std::string(kind_name(t))}};
    std::visit(overloaded{
                   [](const treatment::ZeroRate&) {},
                   [](const treatment::ReferenceRate&) {},
                   [](const treatment::Untaxed&) {},
                   [&](const treatment::ReducedFraction& x) { j["fraction"] = x.fraction; },
                   [&](const treatment::SpecificRegime& x) { j["effective"] = rate_json(x.effective); },
                   [&](const treatment::Selective& x) {
                       j["excise_rate"] = rate_json(x.excise);
                       j["vat_fraction"] = x.vat_fraction;
                   },
                   [&](const treatment::RentRegime& x) {
                       j["fraction"] = x.fraction;
                       j["reducer"] = x.reducer;
                   },
               },
               t);
    return j;
}

CashbackClass parse_cashback_class(const std::string& s, const std::string& where) {
    if (s == "utility_enhanced")
        return CashbackClass::UtilityEnhanced;
    if (s == "standard")
        return CashbackClass::Standard;
    if (s == "excluded")
        return CashbackClass::Excluded;
    throw ConfigError(where + ": cashback_class must be utility_enhanced, standard or excluded, got \"" + s + "\"");
}

Category parse_category(const json& j, std::size_t index) {
    const std::string fallback = "categories[" + std::to_string(index) + "]";
    std::string where = fallback;
    if (j.is_object() && j.contains("id") && j.at("id").is_string())
        where = "category \"" + j.at("id").get<std::string>() + "\"";
    ObjectReader r(j, where);
    Category c;
    c.id = r.string("id");
    c.label = r.string_or("label", c.id);
    c.treatment = parse_treatment(r.required("treatment"), where + ".treatment");
    c.group = r.string_or("group", std::string(kind_name(c.treatment)));
    c.cashback = parse_cashback_class(r.string("cashback_class"), where);
    c.in_denominator = r.boolean_or("in_denominator", true);
    if (const json* b = r.optional("baseline_effective"))
        c.baseline_effective = parse_rate(*b, where + ".baseline_effective");
    if (const json* e = r.optional("synthetic")) {
        ObjectReader er(*e, where + ".synthetic");
        EngelParams p;
        p.share = er.number("share");
        p.slope = er.number_or("slope", 0.0);
        p.participation = er.number_or("participation", 1.0);
        er.finish();
        c.engel = p;
    }
    r.finish();
    return c;
}

std::string line_col(std::string_view text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

void check_unit_interval(double x, bool open_low, bool open_high, const std::string& what) {
    const bool low_ok = open_low ? x > 0.0 : x >= 0.0;
    const bool high_ok = open_high ? x < 1.0 : x <= 1.0;
    if (!(low_ok && high_ok)) {
        std::ostringstream os;
        os << what << " must lie in " << (open_low ? '(' : '[') << "0, 1" << (open_high ? ')' : ']') << ", got "
           << x;
        throw ConfigError(os.str());
    }
}

}  // namespace

std::string_view kind_name(const TaxTreatment& t) {
    return std::visit(overloaded{
                          [](const treatment::ZeroRate&) { return std::string_view("zero_rate"); },
                          [](const treatment::ReferenceRate&) { return std::string_view("reference_rate"); },
                          [](const treatment::ReducedFraction&) { return std::string_view("reduced_fraction"); },
                          [](const treatment::SpecificRegime&) { return std::string_view("specific_regime"); },
                          [](const treatment::Selective&) { return std::string_view("selective"); },
                          [](const treatment::RentRegime&) { return std::string_view("rent_regime"); },
                          [](const treatment::Untaxed&) { return std::string_view("untaxed"); },
                      },
                      t);
}

bool depends_on_reference(const TaxTreatment& t) {
    return std::holds_alternative<treatment::ReferenceRate>(t) ||
           std::holds_alternative<treatment::ReducedFraction>(t) || std::holds_alternative<treatment::Selective>(t) ||
           std::holds_alternative<treatment::RentRegime>(t);
}

std::string_view to_string(CashbackClass c) {
    switch (c) {
    case CashbackClass::UtilityEnhanced:
        return "utility_enhanced";
    case CashbackClass::Standard:
        return "standard";
    case CashbackClass::Excluded:
        return "excluded";
    }
    return "excluded";
}

std::optional<std::size_t> Schedule::find(std::string_view category_id) const {
    for (std::size_t i = 0; i < categories.size(); ++i)
        if (categories[i].id == category_id)
            return i;
    return std::nullopt;
}

std::vector<std::string> Schedule::treatment_groups() const {
    std::vector<std::string> groups;
    for (const auto& c : categories) {
        if (std::holds_alternative<treatment::Untaxed>(c.treatment))
            continue;
        if (std::find(groups.begin(), groups.end(), c.group) == groups.end())
            groups.push_back(c.group);
    }
    return groups;
}

double Schedule::refund_share(CashbackClass c) const {
    switch (c) {
    case CashbackClass::UtilityEnhanced:
        return utility_refund_share;
    case CashbackClass::Standard:
        return standard_refund_share;
    case CashbackClass::Excluded:
        return 0.0;
    }
    return 0.0;
}

void validate(const Schedule& s) {
    if (s.categories.empty())
        throw ConfigError("schedule has no categories");

    std::set<std::string, std::less<>> ids;
    bool identifies_reference = false;
    for (const auto& c : s.categories) {
        const std::string where = "category \"" + c.id + "\"";
        if (!is_token(c.id))
            throw ConfigError(where + ": id must be a non-empty token of [A-Za-z0-9_.-]");
        for (auto reserved : kReservedColumns)
            if (c.id == reserved)
                throw ConfigError(where + ": id collides with the reserved household column \"" +
                                  std::string(reserved) + "\"");
        if (!ids.insert(c.id).second)
            throw ConfigError(where + ": duplicate category id");
        if (c.group.empty())
            throw ConfigError(where + ": group must not be empty");

        std::visit(overloaded{
                       [](const treatment::ZeroRate&) {},
                       [&](const treatment::ReferenceRate&) { identifies_reference = true; },
                       [](const treatment::Untaxed&) {},
                       [](const treatment::SpecificRegime&) {},
                       [&](const treatment::ReducedFraction& x) {
                           check_unit_interval(x.fraction, true, true, where + ": reduced fraction");
                           identifies_reference = true;
                       },
                       [&](const treatment::Selective& x) {
                           check_unit_interval(x.vat_fraction, true, false, where + ": vat_fraction");
                           if (c.cashback != CashbackClass::Excluded)
                               throw ConfigError(where +
                                                 ": categories under the selective excise must use cashback class "
                                                 "\"excluded\" (excise goods are excluded from cashback)");
                       },
                       [&](const treatment::RentRegime& x) {
                           check_unit_interval(x.fraction, true, false, where + ": rent fraction");
                           if (!(x.reducer >= 0.0) || !std::isfinite(x.reducer))
                               throw ConfigError(where + ": rent reducer must be finite and non-negative");
                       },
                   },
                   c.treatment);

        if (c.engel) {
            if (!(c.engel->share >= 0.0))
                throw ConfigError(where + ": synthetic share must be non-negative");
            check_unit_interval(c.engel->participation, false, false, where + ": synthetic participation");
        }
    }
    if (!identifies_reference)
        throw ConfigError("schedule has no reference_rate or reduced_fraction category; the reference rate would be "
                          "unidentified");

    check_unit_interval(s.utility_refund_share, false, false, "cashback.utility_refund_share");
    check_unit_interval(s.standard_refund_share, false, false, "cashback.standard_refund_share");
    if (!(s.eligibility_threshold >= 0.0) || !std::isfinite(s.eligibility_threshold))
        throw ConfigError("eligibility_threshold must be finite and non-negative");
    check_unit_interval(s.target_net_burden, true, true, "target_net_burden");

    std::set<std::string> group_ids;
    for (const auto& g : s.removal_groups) {
        const std::string where = "removal group \"" + g.id + "\"";
        if (!is_token(g.id))
            throw ConfigError(where + ": id must be a non-empty token");
        if (!group_ids.insert(g.id).second)
            throw ConfigError(where + ": duplicate removal group id");
        if (g.categories.empty())
            throw ConfigError(where + ": lists no categories");
        for (const auto& member : g.categories)
            if (!ids.count(member))
                throw ConfigError(where + ": unknown category \"" + member + "\"");
    }
}

Schedule parse_schedule(std::string_view json_text, std::string_view source) {
    json root;
    try {
        root = json::parse(json_text.begin(), json_text.end());
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string(source) + ": parse error at " + line_col(json_text, e.byte) + ": " + e.what());
    }

    try {
        ObjectReader r(root, "schedule");
        Schedule s;
        s.name = r.string_or("name", "");
        const json& cats = r.required("categories");
        if (!cats.is_array())
            throw ConfigError("schedule: \"categories\" must be an array");
        for (std::size_t i = 0; i < cats.size(); ++i)
            s.categories.push_back(parse_category(cats[i], i));

        if (const json* cb = r.optional("cashback")) {
            ObjectReader cr(*cb, "cashback");
            s.utility_refund_share = cr.number_or("utility_refund_share", s.utility_refund_share);
            s.standard_refund_share = cr.number_or("standard_refund_share", s.standard_refund_share);
            cr.finish();
        }
        s.eligibility_threshold = r.number("eligibility_threshold");
        s.target_net_burden = r.number_or("target_net_burden", s.target_net_burden);

        if (const json* groups = r.optional("removal_groups")) {
            if (!groups->is_array())
                throw ConfigError("schedule: \"removal_groups\" must be an array");
            for (std::size_t i = 0; i < groups->size(); ++i) {
                ObjectReader gr((*groups)[i], "removal_groups[" + std::to_string(i) + "]");
                RemovalGroup g;
                g.id = gr.string("id");
                g.label = gr.string_or("label", g.id);
                const json& members = gr.required("categories");
                if (!members.is_array())
                    throw ConfigError(gr.where() + ": \"categories\" must be an array of ids");
                for (const auto& m : members) {
                    if (!m.is_string())
                        throw ConfigError(gr.where() + ": category ids must be strings");
                    g.categories.push_back(m.get<std::string>());
                }
                gr.finish();
                s.removal_groups.push_back(std::move(g));
            }
        }
        r.finish();
        validate(s);
        return s;
    } catch (const ConfigError& e) {
        throw ConfigError(std::string(source) + ": " + e.what());
    }
}

Schedule load_schedule(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot open schedule file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_schedule(buf.str(), path.string());
}

std::string serialize_schedule(const Schedule& s) {
    json root = json::object();
    root["name"] = s.name;
    json cats = json::array();
    for (const auto& c : s.categories) {
        json jc{{"id", c.id},
                {"label", c.label},
                {"group", c.group},
                {"treatment", treatment_json(c.treatment)},
                {"cashback_class", std::string(to_string(c.cashback))},
                {"in_denominator", c.in_denominator},
                {"baseline_effective", rate_json(c.baseline_effective)}};
        if (c.engel)
            jc["synthetic"] = {
                {"share", c.engel->share}, {"slope", c.engel->slope}, {"participation", c.engel->participation}};
        cats.push_back(std::move(jc));
    }
    root["categories"] = std::move(cats);
    root["cashback"] = {{"utility_refund_share", s.utility_refund_share},
                        {"standard_refund_share", s.standard_refund_share}};
    root["eligibility_threshold"] = s.eligibility_threshold;
    root["target_net_burden"] = s.target_net_burden;
    if (!s.removal_groups.empty()) {
        json groups = json::array();
        for (const auto& g : s.removal_groups)
            groups.push_back({{"id", g.id}, {"label", g.label}, {"categories", g.categories}});
        root["removal_groups"] = std::move(groups);
    }
    return root.dump(2) + "\n";
}

std::uint64_t fingerprint(const Schedule& s) {
    // FNV-1a
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : serialize_schedule(s)) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

Rate effective_inside_rate(const Category& c, Rate reference) {
    const Rate ref = to_outside(reference);
    return std::visit(overloaded{
                          [](const treatment::ZeroRate&) { return Rate::inside(0.0); },
                          [](const treatment::Untaxed&) { return Rate::inside(0.0); },
                          [&](const treatment::ReferenceRate&) { return to_inside(ref); },
                          [&](const treatment::ReducedFraction& x) { return to_inside(apply_fraction(x.fraction, ref)); },
                          [](const treatment::SpecificRegime& x) { return to_inside(x.effective); },
                          [&](const treatment::Selective& x) {
                              return to_inside(compose_selective(to_outside(x.excise),
                                                                 Rate::outside(x.vat_fraction * ref.value())));
                          },
                          [&](const treatment::RentRegime& x) { return to_inside(apply_fraction(x.fraction, ref)); },
                      },
                      c.treatment);
}

std::vector<std::string> valid_selectors(const Schedule& s) {
    std::vector<std::string> out;
    auto add = [&](const std::string& v) {
        if (std::find(out.begin(), out.end(), v) == out.end())
            out.push_back(v);
    };
    for (const auto& g : s.removal_groups)
        add(g.id);
    for (const auto& c : s.categories)
        add(c.group);
    for (const auto& c : s.categories)
        add(c.id);
    for (const auto& c : s.categories)
        add(std::string(kind_name(c.treatment)));
    return out;
}

std::vector<std::size_t> resolve_selector(const Schedule& s, std::string_view selector) {
    if (selector.empty())
        throw ConfigError("empty removal selector");

    std::vector<std::size_t> hits;
    for (const auto& g : s.removal_groups) {
        if (g.id != selector)
            continue;
        for (const auto& member : g.categories)
            hits.push_back(*s.find(member));
        return hits;
    }
    for (std::size_t i = 0; i < s.categories.size(); ++i)
        if (s.categories[i].group == selector)
            hits.push_back(i);
    if (!hits.empty())
        return hits;
    if (auto idx = s.find(selector))
        return {*idx};
    for (std::size_t i = 0; i < s.categories.size(); ++i)
        if (kind_name(s.categories[i].treatment) == selector)
            hits.push_back(i);
    if (!hits.empty())
        return hits;

    std::string msg = "unknown removal selector \"" + std::string(selector) + "\"; valid selectors:";
    for (const auto& v : valid_selectors(s))
        msg += " " + v;
    throw ConfigError(msg);
}

std::string selector_label(const Schedule& s, std::string_view selector) {
    for (const auto& g : s.removal_groups)
        if (g.id == selector)
            return g.label;
    return std::string(selector);
}

Schedule with_removal(const Schedule& s, std::string_view selector) {
    Schedule out = s;
    for (std::size_t i : resolve_selector(s, selector))
        out.categories[i].treatment = treatment::ReferenceRate{};
    return out;
}

}  // namespace vatsim
