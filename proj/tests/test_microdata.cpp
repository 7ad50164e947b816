#include <sstream>

#include "doctest.h"
#include "helpers.hpp"

using namespace vatsim;

namespace {

Schedule small_schedule() {
    return testing::schedule({testing::category("cesta_basica", treatment::ZeroRate{}),
                              testing::category("geral", treatment::ReferenceRate{}),
                              testing::category("aluguel", treatment::RentRegime{0.4, 400.0})});
}

std::string load_error(const std::string& csv, const Schedule& s) {
    std::istringstream in(csv);
    try {
        parse_population(in, s, "h.csv");
    } catch (const DataError& e) {
        return e.what();
    }
    return "";
}

const char* kThreeRows =
    "id,weight,residents,income_pc,nonmonetary_total,cesta_basica,geral,aluguel\n"
    "1,100.5,3,250,40,300,500,0\n"
    "2,80,2,900,0,120,800.25,650\n"
    "3,60,1,3000,10,50,2000,1200\n";

}  // namespace

TEST_CASE("three-row CSV loads") {
    std::istringstream in(kThreeRows);
    const Population p = parse_population(in, small_schedule(), "h.csv");
    REQUIRE(p.size() == 3);
    CHECK(p[0].weight == 100.5);
    CHECK(p[1].expenditures[1] == 800.25);
    CHECK(p[2].expenditures[2] == 1200);
    CHECK(p[0].monetary_total() == 800);
    CHECK(p[0].per_capita_total() == doctest::Approx(840.0 / 3.0));
    CHECK(p.provenance().kind == Provenance::Kind::File);
}

TEST_CASE("category columns may come in any order") {
    std::istringstream in("id,weight,residents,income_pc,nonmonetary_total,aluguel,cesta_basica,geral\n"
                          "7,1,1,100,0,900,10,20\n");
    const Population p = parse_population(in, small_schedule());
    CHECK(p.category_ids() == std::vector<std::string>{"cesta_basica", "geral", "aluguel"});
    CHECK(p[0].expenditures == std::vector<double>{10, 20, 900});
}

TEST_CASE("CSV ingestion errors cite the line and column") {
    const Schedule s = small_schedule();
    SUBCASE("missing category column") {
        const auto msg = load_error("id,weight,residents,income_pc,nonmonetary_total,geral,aluguel\n1,1,1,1,0,1,1\n", s);
        CHECK(msg.find("missing column") != std::string::npos);
        CHECK(msg.find("cesta_basica") != std::string::npos);
    }
    SUBCASE("unknown category column") {
        const auto msg = load_error(
            "id,weight,residents,income_pc,nonmonetary_total,cesta_basica,geral,aluguel,lazer\n1,1,1,1,0,1,1,1,1\n", s);
        CHECK(msg.find("\"lazer\" is not a category") != std::string::npos);
    }
    SUBCASE("zero weight") {
        std::string csv = kThreeRows;
        csv.replace(csv.find("80,2"), 4, "0,2");
        const auto msg = load_error(csv, s);
        CHECK(msg.find("line 3") != std::string::npos);
        CHECK(msg.find("weight") != std::string::npos);
    }
    SUBCASE("negative expenditure") {
        std::string csv = kThreeRows;
        csv.replace(csv.find(",650"), 4, ",-65");
        const auto msg = load_error(csv, s);
        CHECK(msg.find("line 3, column \"aluguel\"") != std::string::npos);
    }
    SUBCASE("non-numeric cell") {
        std::string csv = kThreeRows;
        csv.replace(csv.find("500"), 3, "5x0");
        CHECK(load_error(csv, s).find("line 2, column \"geral\": not a number") != std::string::npos);
    }
    SUBCASE("duplicate household id") {
        std::string csv = kThreeRows;
        csv += "2,1,1,1,0,1,1,1\n";
        CHECK(load_error(csv, s).find("duplicate household id 2") != std::string::npos);
    }
    SUBCASE("ragged row") {
        CHECK(load_error("id,weight,residents,income_pc,nonmonetary_total,cesta_basica,geral,aluguel\n1,1,1\n", s)
                  .find("expected 8 cells") != std::string::npos);
    }
    SUBCASE("residents below one") {
        std::string csv = kThreeRows;
        csv.replace(csv.find("60,1"), 4, "60,0");
        CHECK(load_error(csv, s).find("residents") != std::string::npos);
    }
}

TEST_CASE("population layout must match the schedule") {
    const Schedule s = small_schedule();
    std::istringstream in(kThreeRows);
    const Population p = parse_population(in, s);
    CHECK_NOTHROW(p.check_compatible(s));
    const Schedule other = testing::schedule({testing::category("geral", treatment::ReferenceRate{})});
    CHECK_THROWS_AS(p.check_compatible(other), DataError);
}

TEST_CASE("property: write then load reproduces the population") {
    const Schedule s = load_schedule(testing::data_path("plp68.json"));
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const Population p = generate_synthetic(seed, 300, s);
        std::stringstream buf;
        write_population(buf, p);
        const Population back = parse_population(buf, s);
        REQUIRE(back.size() == p.size());
        for (std::size_t i = 0; i < p.size(); ++i) {
            CHECK(back[i].id == p[i].id);
            CHECK(back[i].residents == p[i].residents);
            CHECK(std::fabs(back[i].weight - p[i].weight) <= 1e-9);
            CHECK(std::fabs(back[i].income_per_capita - p[i].income_per_capita) <= 1e-9);
            CHECK(std::fabs(back[i].nonmonetary_total - p[i].nonmonetary_total) <= 1e-9);
            for (std::size_t c = 0; c < s.categories.size(); ++c)
                CHECK(std::fabs(back[i].expenditures[c] - p[i].expenditures[c]) <= 1e-9);
        }
    }
}

TEST_CASE("synthetic generation is deterministic and valid") {
    const Schedule s = load_schedule(testing::data_path("plp68.json"));
    const Population a = generate_synthetic(42, 10000, s);
    const Population b = generate_synthetic(42, 10000, s);
    std::ostringstream ca, cb;
    write_population(ca, a);
    write_population(cb, b);
    CHECK(ca.str() == cb.str());

    std::ostringstream cc;
    write_population(cc, generate_synthetic(43, 10000, s));
    CHECK(cc.str() != ca.str());

    double eligible_weight = 0.0, total_weight = 0.0;
    for (const auto& h : a.households()) {
        CHECK(h.weight > 0.0);
        CHECK(h.residents >= 1);
        CHECK(h.nonmonetary_total >= 0.0);
        CHECK(h.monetary_total() > 0.0);
        total_weight += h.weight;
        if (h.income_per_capita <= s.eligibility_threshold)
            eligible_weight += h.weight;
    }
    const double eligible_share = eligible_weight / total_weight;
    CHECK(eligible_share > 0.10);
    CHECK(eligible_share < 0.50);

    CHECK_THROWS_AS(generate_synthetic(42, 0, s), DataError);
    CHECK(a.provenance().kind == Provenance::Kind::Synthetic);
    CHECK(a.provenance().seed == 42);
}

TEST_CASE("synthetic generation depends on the schedule fingerprint") {
    Schedule s = load_schedule(testing::data_path("plp68.json"));
    const Population a = generate_synthetic(5, 20, s);
    s.categories[0].label = "renamed";
    const Population b = generate_synthetic(5, 20, s);
    CHECK_FALSE(a.households() == b.households());
}
