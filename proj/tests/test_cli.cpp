#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "helpers.hpp"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code = 0;
    std::string out;
    std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = vatsim::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string schedule_arg() { return testing::data_path("plp68.json").string(); }

}  // namespace

TEST_CASE("parse_synthetic") {
    const auto s = vatsim::cli::parse_synthetic("42:10000");
    CHECK(s.seed == 42);
    CHECK(s.size == 10000);
    CHECK_THROWS_AS(vatsim::cli::parse_synthetic("42"), vatsim::ConfigError);
    CHECK_THROWS_AS(vatsim::cli::parse_synthetic("a:1"), vatsim::ConfigError);
    CHECK_THROWS_AS(vatsim::cli::parse_synthetic("1:"), vatsim::ConfigError);
    CHECK_THROWS_AS(vatsim::cli::parse_synthetic("1:0"), vatsim::ConfigError);
    CHECK_THROWS_AS(vatsim::cli::parse_synthetic("-1:5"), vatsim::ConfigError);
}

TEST_CASE("solve prints the rate and writes the trace") {
    const auto dir = testing::scratch_dir("cli_solve");
    const auto r = run_cli({"solve", "--schedule", schedule_arg(), "--synthetic", "42:2000", "--trace", "--out",
                            dir.string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("reference rate (outside):") != std::string::npos);
    CHECK(r.out.find("reference rate (inside):") != std::string::npos);
    const std::string trace = testing::slurp(dir / "solve_trace.csv");
    CHECK(trace.rfind("iter,t_ref_outside,cashback_total,net_burden\n0,", 0) == 0);
    fs::remove_all(dir);
}

TEST_CASE("exit codes") {
    SUBCASE("missing schedule file is an input error") {
        const auto r = run_cli({"solve", "--schedule", "/nonexistent.json", "--synthetic", "1:10"});
        CHECK(r.code == vatsim::cli::kInputError);
        CHECK(r.err.find("/nonexistent.json") != std::string::npos);
    }
    SUBCASE("no population source") {
        const auto r = run_cli({"solve", "--schedule", schedule_arg()});
        CHECK(r.code == vatsim::cli::kInputError);
        CHECK(r.err.find("--synthetic") != std::string::npos);
    }
    SUBCASE("unknown flag") {
        CHECK(run_cli({"solve", "--schedule", schedule_arg(), "--bogus"}).code == vatsim::cli::kInputError);
    }
    SUBCASE("no subcommand") {
        CHECK(run_cli({}).code == vatsim::cli::kInputError);
    }
    SUBCASE("unreachable target is a solver failure") {
        const auto r = run_cli({"solve", "--schedule", schedule_arg(), "--synthetic", "1:50", "--target-burden",
                                "0.99"});
        CHECK(r.code == vatsim::cli::kNonConvergence);
        CHECK(r.err.find("unreachable") != std::string::npos);
    }
    SUBCASE("empty removal selector") {
        const auto dir = testing::scratch_dir("cli_empty_sel");
        const auto r = run_cli({"tables", "--schedule", schedule_arg(), "--synthetic", "1:50", "--remove", "",
                                "--out", dir.string()});
        CHECK(r.code == vatsim::cli::kInputError);
        CHECK(r.err.find("empty removal selector") != std::string::npos);
        fs::remove_all(dir);
    }
    SUBCASE("unknown scenario") {
        const auto dir = testing::scratch_dir("cli_bad_scenario");
        const auto r = run_cli({"tables", "--schedule", schedule_arg(), "--synthetic", "1:50", "--scenario",
                                "flat", "--out", dir.string()});
        CHECK(r.code == vatsim::cli::kInputError);
        fs::remove_all(dir);
    }
}

TEST_CASE("tables writes the three tables and a manifest") {
    const auto dir = testing::scratch_dir("cli_tables");
    const auto r = run_cli({"tables", "--schedule", schedule_arg(), "--synthetic", "7:1500", "--out", dir.string(),
                            "--threads", "3"});
    REQUIRE(r.code == 0);
    for (const char* stem : {"table1_budget_shares", "table2_rate_impacts", "table3_scenarios"}) {
        CHECK(fs::exists(dir / (std::string(stem) + ".csv")));
        CHECK(fs::exists(dir / (std::string(stem) + ".txt")));
    }
    const auto manifest = nlohmann::json::parse(testing::slurp(dir / "manifest.json"));
    CHECK(manifest["population"] == "synthetic:7:1500");
    CHECK(manifest["scenarios"].size() == 4);
    CHECK(manifest["removals"].size() == 6);
    CHECK(testing::slurp(dir / "table1_budget_shares.csv").rfind("group,Q1,Q2,Q3,Q4,Q5,Total\n", 0) == 0);
    fs::remove_all(dir);
}

TEST_CASE("generate then solve from the written file") {
    const auto dir = testing::scratch_dir("cli_generate");
    const auto csv = (dir / "h.csv").string();
    REQUIRE(run_cli({"generate", "--schedule", schedule_arg(), "--synthetic", "3:200", "--out", csv}).code == 0);
    const auto from_file = run_cli({"solve", "--schedule", schedule_arg(), "--households", csv});
    const auto from_seed = run_cli({"solve", "--schedule", schedule_arg(), "--synthetic", "3:200"});
    CHECK(from_file.code == 0);
    CHECK(from_file.out == from_seed.out);

    const auto to_stdout = run_cli({"generate", "--schedule", schedule_arg(), "--synthetic", "3:200"});
    CHECK(to_stdout.out == testing::slurp(csv));
    fs::remove_all(dir);
}

TEST_CASE("validate reports each check") {
    const auto r = run_cli({"validate", "--schedule", schedule_arg(), "--synthetic", "42:3000"});
    CHECK(r.code == 0);
    CHECK(r.out.find("FAIL") == std::string::npos);
    CHECK(r.out.find("PASS revenue-neutral solve") != std::string::npos);

    const auto dir = testing::scratch_dir("cli_validate");
    const auto bad = dir / "bad.json";
    std::ofstream(bad) << R"({"categories": [], "eligibility_threshold": 1})";
    const auto rb = run_cli({"validate", "--schedule", bad.string()});
    CHECK(rb.code == vatsim::cli::kInputError);
    CHECK(rb.out.find("FAIL schedule") != std::string::npos);
    fs::remove_all(dir);
}
