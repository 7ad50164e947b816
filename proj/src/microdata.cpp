#include "vatsim/microdata.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include <fmt/format.h>

namespace vatsim {

namespace {

constexpr std::string_view kFixedColumns[] = {"id", "weight", "residents", "income_pc", "nonmonetary_total"};

std::vector<std::string_view> split_row(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        cells.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    return cells;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

template <class T>
T parse_cell(std::string_view cell, std::string_view source, std::size_t line, std::string_view column) {
    cell = trim(cell);
    T value{};
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    if (!cell.empty() && *first == '+')
        ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (cell.empty() || ec != std::errc() || ptr != last)
        throw DataError(fmt::format("{}: line {}, column \"{}\": not a number: \"{}\"", source, line, column, cell));
    if constexpr (std::is_floating_point_v<T>) {
        if (!std::isfinite(value))
            throw DataError(fmt::format("{}: line {}, column \"{}\": value must be finite", source, line, column));
    }
    return value;
}

// splitmix64 finalizer; derives independent per-household seeds.
std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Distribution transforms are written out rather than taken from <random>
// because the standard distributions are implementation-defined and the
// generator must be reproducible across standard libraries.
class Draws {
public:
    explicit Draws(std::uint64_t seed) : engine_(seed) {}

    double uniform() {
        // 53 random bits in (0, 1)
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    double normal() {
        const double u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::mt19937_64 engine_;
};

double cents(double x) { return std::round(x * 100.0) / 100.0; }

}  // namespace

double Household::monetary_total() const {
    double total = 0.0;
    for (double e : expenditures)
        total += e;
    return total;
}

double Household::per_capita_total() const {
    return (monetary_total() + nonmonetary_total) / static_cast<double>(residents);
}

Population::Population(std::vector<std::string> category_ids, std::vector<Household> households,
                       Provenance provenance)
    : category_ids_(std::move(category_ids)), households_(std::move(households)),
      provenance_(std::move(provenance)) {
    if (households_.empty())
        throw DataError("population is empty");
    std::unordered_set<std::int64_t> seen;
    for (const auto& h : households_) {
        const std::string where = fmt::format("household {}", h.id);
        if (!seen.insert(h.id).second)
            throw DataError(where + ": duplicate household id");
        if (!(h.weight > 0.0) || !std::isfinite(h.weight))
            throw DataError(where + ": weight must be positive and finite");
        if (h.residents < 1)
            throw DataError(where + ": residents must be at least 1");
        if (!std::isfinite(h.income_per_capita))
            throw DataError(where + ": income_pc must be finite");
        if (!(h.nonmonetary_total >= 0.0) || !std::isfinite(h.nonmonetary_total))
            throw DataError(where + ": nonmonetary_total must be non-negative");
        if (h.expenditures.size() != category_ids_.size())
            throw DataError(where + ": expenditure vector does not match the category layout");
        for (std::size_t c = 0; c < h.expenditures.size(); ++c)
            if (!(h.expenditures[c] >= 0.0) || !std::isfinite(h.expenditures[c]))
                throw DataError(where + ": expenditure on \"" + category_ids_[c] + "\" must be non-negative");
    }
    id_order_.resize(households_.size());
    for (std::size_t i = 0; i < id_order_.size(); ++i)
        id_order_[i] = i;
    std::sort(id_order_.begin(), id_order_.end(),
              [&](std::size_t a, std::size_t b) { return households_[a].id < households_[b].id; });
}

void Population::check_compatible(const Schedule& s) const {
    std::set<std::string> have(category_ids_.begin(), category_ids_.end());
    for (const auto& c : s.categories)
        if (!have.count(c.id))
            throw DataError("population has no expenditure column for schedule category \"" + c.id + "\"");
    for (const auto& id : category_ids_)
        if (!s.find(id))
            throw DataError("population column \"" + id + "\" is not a category of the schedule");
    for (std::size_t i = 0; i < category_ids_.size(); ++i)
        if (category_ids_[i] != s.categories[i].id)
            throw DataError("population category order differs from the schedule; reload it against this schedule");
}

Population parse_population(std::istream& in, const Schedule& s, std::string_view source) {
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line))
        throw DataError(fmt::format("{}: empty file, expected a header row", source));
    ++line_no;
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0)
        line.erase(0, 3);

    const auto header = split_row(line);
    std::vector<std::string> names;
    for (auto cell : header)
        names.emplace_back(trim(cell));

    for (std::size_t i = 0; i < std::size(kFixedColumns); ++i)
        if (i >= names.size() || names[i] != kFixedColumns[i])
            throw DataError(fmt::format("{}: line 1: column {} must be \"{}\"", source, i + 1, kFixedColumns[i]));

    // CSV column -> schedule category index
    std::vector<std::size_t> target(names.size(), 0);
    std::vector<bool> present(s.categories.size(), false);
    for (std::size_t col = std::size(kFixedColumns); col < names.size(); ++col) {
        const auto idx = s.find(names[col]);
        if (!idx)
            throw DataError(fmt::format("{}: line 1: column \"{}\" is not a category of the schedule", source,
                                        names[col]));
        if (present[*idx])
            throw DataError(fmt::format("{}: line 1: duplicate column \"{}\"", source, names[col]));
        present[*idx] = true;
        target[col] = *idx;
    }
    for (std::size_t c = 0; c < s.categories.size(); ++c)
        if (!present[c])
            throw DataError(fmt::format("{}: line 1: missing column for schedule category \"{}\"", source,
                                        s.categories[c].id));

    std::vector<Household> households;
    std::unordered_map<std::int64_t, std::size_t> first_seen;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty())
            continue;
        const auto cells = split_row(line);
        if (cells.size() != names.size())
            throw DataError(fmt::format("{}: line {}: expected {} cells, found {}", source, line_no, names.size(),
                                        cells.size()));
        Household h;
        h.id = parse_cell<std::int64_t>(cells[0], source, line_no, names[0]);
        h.weight = parse_cell<double>(cells[1], source, line_no, names[1]);
        h.residents = parse_cell<int>(cells[2], source, line_no, names[2]);
        h.income_per_capita = parse_cell<double>(cells[3], source, line_no, names[3]);
        h.nonmonetary_total = parse_cell<double>(cells[4], source, line_no, names[4]);
        h.expenditures.assign(s.categories.size(), 0.0);
        for (std::size_t col = std::size(kFixedColumns); col < cells.size(); ++col) {
            const double v = parse_cell<double>(cells[col], source, line_no, names[col]);
            if (v < 0.0)
                throw DataError(fmt::format("{}: line {}, column \"{}\": expenditure must be non-negative", source,
                                            line_no, names[col]));
            h.expenditures[target[col]] = v;
        }
        if (!(h.weight > 0.0))
            throw DataError(fmt::format("{}: line {}: weight must be positive", source, line_no));
        if (h.residents < 1)
            throw DataError(fmt::format("{}: line {}: residents must be at least 1", source, line_no));
        if (h.nonmonetary_total < 0.0)
            throw DataError(fmt::format("{}: line {}: nonmonetary_total must be non-negative", source, line_no));
        if (auto [it, fresh] = first_seen.emplace(h.id, line_no); !fresh)
            throw DataError(fmt::format("{}: line {}: duplicate household id {} (first on line {})", source, line_no,
                                        h.id, it->second));
        households.push_back(std::move(h));
    }
    if (households.empty())
        throw DataError(fmt::format("{}: no household rows", source));

    std::vector<std::string> ids;
    for (const auto& c : s.categories)
        ids.push_back(c.id);
    return Population(std::move(ids), std::move(households),
                      Provenance{Provenance::Kind::File, std::string(source), 0});
}

Population load_population(const std::filesystem::path& path, const Schedule& s) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError("cannot open households file " + path.string());
    return parse_population(in, s, path.string());
}

void write_population(std::ostream& out, const Population& p) {
    std::string buf = "id,weight,residents,income_pc,nonmonetary_total";
    for (const auto& id : p.category_ids())
        buf += "," + id;
    buf += "\n";
    out << buf;
    for (const auto& h : p.households()) {
        buf.clear();
        fmt::format_to(std::back_inserter(buf), "{},{},{},{},{}", h.id, h.weight, h.residents, h.income_per_capita,
                       h.nonmonetary_total);
        for (double e : h.expenditures)
            fmt::format_to(std::back_inserter(buf), ",{}", e);
        buf += "\n";
        out << buf;
    }
}

Population generate_synthetic(std::uint64_t seed, std::size_t n, const Schedule& s) {
    if (n == 0)
        throw DataError("synthetic population size must be at least 1");

    // Illustrative population shape: per-capita consumption is log-normal
    // around R$900/month; poorer households are larger and consume more in
    // kind; income tracks consumption with idiosyncratic noise.
    constexpr double kMedianPerCapita = 900.0;
    constexpr double kLogSpread = 0.85;
    constexpr double kShareNoise = 0.25;
    constexpr double kMeanWeight = 7000.0;

    const std::size_t ncat = s.categories.size();
    std::vector<EngelParams> engel(ncat);
    for (std::size_t c = 0; c < ncat; ++c)
        engel[c] = s.categories[c].engel.value_or(EngelParams{1.0 / static_cast<double>(ncat), 0.0, 1.0});

    const std::uint64_t stream = mix(seed ^ mix(fingerprint(s)));
    std::vector<Household> households;
    households.reserve(n);
    std::vector<double> raw(ncat);
    for (std::size_t i = 0; i < n; ++i) {
        Draws d(mix(stream + i));
        Household h;
        h.id = static_cast<std::int64_t>(i) + 1;

        const double z = d.normal();
        const double per_capita = kMedianPerCapita * std::exp(kLogSpread * z);
        const double residents = std::round(3.0 - 0.7 * z + d.normal());
        h.residents = static_cast<int>(std::clamp(residents, 1.0, 10.0));
        const double nonmonetary_share = std::clamp(0.16 - 0.04 * z + 0.04 * d.normal(), 0.01, 0.5);
        h.income_per_capita = cents(per_capita * std::exp(0.05 + 0.35 * d.normal()));
        h.weight = cents(kMeanWeight * std::exp(0.4 * d.normal()));

        const double consumption = per_capita * h.residents;
        const double monetary = consumption * (1.0 - nonmonetary_share);
        h.nonmonetary_total = cents(consumption - monetary);

        const double x = std::log(per_capita / kMedianPerCapita);
        double total = 0.0;
        for (std::size_t c = 0; c < ncat; ++c) {
            const double noise = d.normal();
            const bool takes_part = d.uniform() < engel[c].participation;
            raw[c] = takes_part ? engel[c].share * std::exp(engel[c].slope * x + kShareNoise * noise) : 0.0;
            total += raw[c];
        }
        h.expenditures.assign(ncat, 0.0);
        if (total > 0.0) {
            for (std::size_t c = 0; c < ncat; ++c)
                h.expenditures[c] = cents(monetary * raw[c] / total);
        } else {
            const auto largest = std::max_element(engel.begin(), engel.end(),
                                                  [](const auto& a, const auto& b) { return a.share < b.share; });
            h.expenditures[static_cast<std::size_t>(largest - engel.begin())] = cents(monetary);
        }
        households.push_back(std::move(h));
    }

    std::vector<std::string> ids;
    for (const auto& c : s.categories)
        ids.push_back(c.id);
    return Population(std::move(ids), std::move(households), Provenance{Provenance::Kind::Synthetic, {}, seed});
}

}  // namespace vatsim
