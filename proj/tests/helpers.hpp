#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "vatsim/microdata.hpp"
#include "vatsim/schedule.hpp"

#ifndef VATSIM_DATA_DIR
#error "VATSIM_DATA_DIR must be defined by the build"
#endif

namespace testing {

inline std::filesystem::path data_path(const std::string& name) { return std::filesystem::path(VATSIM_DATA_DIR) / name; }
inline std::filesystem::path fixture_path(const std::string& name) {
    return std::filesystem::path(VATSIM_FIXTURE_DIR) / name;
}

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
    static std::mt19937_64 rng(std::random_device{}());
    auto dir = std::filesystem::temp_directory_path() / ("vatsim_" + name + "_" + std::to_string(rng() % 1000000000));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline vatsim::Category category(std::string id, vatsim::TaxTreatment t,
                                 vatsim::CashbackClass cb = vatsim::CashbackClass::Standard) {
    vatsim::Category c;
    c.id = id;
    c.label = id;
    c.group = id;
    c.treatment = t;
    c.cashback = cb;
    return c;
}

inline vatsim::Schedule schedule(std::vector<vatsim::Category> cats, double threshold = 477.0) {
    vatsim::Schedule s;
    s.name = "test";
    s.categories = std::move(cats);
    s.eligibility_threshold = threshold;
    vatsim::validate(s);
    return s;
}

inline vatsim::Household household(std::int64_t id, double weight, int residents, double income_pc,
                                   std::vector<double> spend, double nonmonetary = 0.0) {
    vatsim::Household h;
    h.id = id;
    h.weight = weight;
    h.residents = residents;
    h.income_per_capita = income_pc;
    h.nonmonetary_total = nonmonetary;
    h.expenditures = std::move(spend);
    return h;
}

inline vatsim::Population population(const vatsim::Schedule& s, std::vector<vatsim::Household> hs) {
    std::vector<std::string> ids;
    for (const auto& c : s.categories)
        ids.push_back(c.id);
    return vatsim::Population(std::move(ids), std::move(hs));
}

}  // namespace testing
