#include "cli.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "vatsim/analysis.hpp"
#include "vatsim/report.hpp"
#include "vatsim/solver.hpp"

namespace vatsim::cli {

namespace {

constexpr const char* kVersion = "0.1.0";

namespace fs = std::filesystem;

std::uint64_t fnv1a(std::string_view data, std::uint64_t h = 0xcbf29ce484222325ULL) {
    for (unsigned char ch : data) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex(std::uint64_t v) { return fmt::format("{:016x}", v); }

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Population load_population_source(const RunConfig& cfg, const Schedule& s) {
    if (cfg.households_path && cfg.synthetic)
        throw ConfigError("give exactly one population source: --households or --synthetic, not both");
    if (cfg.households_path)
        return load_population(*cfg.households_path, s);
    if (cfg.synthetic)
        return generate_synthetic(cfg.synthetic->seed, cfg.synthetic->size, s);
    throw ConfigError("no population source: pass --households FILE or --synthetic SEED:N");
}

double target_of(const RunConfig& cfg, const Schedule& s) {
    const double target = cfg.target_burden.value_or(s.target_net_burden);
    if (!(target > 0.0 && target < 1.0))
        throw ConfigError(fmt::format("--target-burden must lie in (0, 1), got {}", target));
    return target;
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir))
        throw ConfigError("cannot create output directory " + dir.string());
}

std::vector<std::string> default_removals(const Schedule& s) {
    std::vector<std::string> out;
    if (!s.removal_groups.empty()) {
        for (const auto& g : s.removal_groups)
            out.push_back(g.id);
        return out;
    }
    for (const auto& group : s.treatment_groups()) {
        bool all_reference = true;
        for (const auto& c : s.categories)
            if (c.group == group && !std::holds_alternative<treatment::ReferenceRate>(c.treatment))
                all_reference = false;
        if (!all_reference)
            out.push_back(group);
    }
    return out;
}

std::string population_description(const RunConfig& cfg) {
    if (cfg.synthetic)
        return fmt::format("synthetic:{}:{}", cfg.synthetic->seed, cfg.synthetic->size);
    return "file:" + hex(fnv1a(read_file(*cfg.households_path)));
}

int cmd_solve(const RunConfig& cfg, std::ostream& out) {
    const Schedule s = load_schedule(cfg.schedule_path);
    const Population p = load_population_source(cfg, s);
    const double target = target_of(cfg, s);

    auto write_trace = [&](const std::vector<TraceEntry>& trace) {
        if (!cfg.trace)
            return;
        ensure_dir(cfg.out);
        const fs::path path = fs::path(cfg.out) / "solve_trace.csv";
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        f << "iter,t_ref_outside,cashback_total,net_burden\n";
        for (const auto& e : trace)
            f << fmt::format("{},{},{},{}\n", e.iteration, e.reference_outside, e.cashback_total, e.net_burden);
        out << "trace written to " << path.string() << "\n";
    };

    try {
        const SolveResult r = solve_with_cashback(p, s, target);
        out << fmt::format("target net burden:        {:.4f}\n", target);
        out << fmt::format("reference rate (outside): {:.4f}\n", r.reference.value());
        out << fmt::format("reference rate (inside):  {:.4f}\n", r.reference_inside.value());
        out << fmt::format("iterations:               {}\n", r.iterations);
        out << fmt::format("residual:                 {:.3e}\n", r.residual);
        out << fmt::format("cashback (R$/month):      {:.0f}\n", r.cashback_total);
        write_trace(r.trace);
    } catch (const NonConvergence& e) {
        write_trace(e.trace());
        throw;
    }
    return kOk;
}

int cmd_tables(const RunConfig& cfg, std::ostream& out) {
    const Schedule s = load_schedule(cfg.schedule_path);
    const Population p = load_population_source(cfg, s);
    const double target = target_of(cfg, s);
    const std::vector<std::string> removals = cfg.removals.empty() ? default_removals(s) : cfg.removals;

    std::vector<ScenarioKind> kinds{ScenarioKind::Baseline};
    if (cfg.scenarios.empty()) {
        kinds.insert(kinds.end(), {ScenarioKind::UniformVAT, ScenarioKind::PLP68, ScenarioKind::PLP68TransferSwap});
    } else {
        for (const auto& name : cfg.scenarios) {
            const ScenarioKind k = parse_scenario(name);
            if (std::find(kinds.begin(), kinds.end(), k) == kinds.end())
                kinds.push_back(k);
        }
    }
    ensure_dir(cfg.out);
    const fs::path dir(cfg.out);

    ScenarioOptions opts;
    opts.threads = cfg.threads;
    const ScenarioRunner runner(p, s, opts);

    const BudgetShareTable shares = budget_share_table(p, s, runner.quintiles());
    write_table(dir, "table1_budget_shares", render_budget_shares(shares));
    out << fmt::format("table1_budget_shares: {} treatment groups x {} quintiles\n", shares.groups.size(),
                       kQuintiles);

    const auto impacts = marginal_rate_impact(p, s, removals, target);
    write_table(dir, "table2_rate_impacts", render_rate_impacts(impacts));
    out << fmt::format("table2_rate_impacts: reference rate {:.1f}% without cashback, {:.1f}% with cashback, {} "
                       "removals\n",
                       100.0 * impacts.front().reference_outside, 100.0 * impacts.back().reference_outside,
                       removals.size());

    std::vector<ScenarioResult> results;
    for (auto k : kinds)
        results.push_back(runner.run(k));
    write_table(dir, "table3_scenarios", render_scenarios(results));
    double worst_gap = 0.0;
    for (const auto& r : results)
        worst_gap = std::max(worst_gap, std::fabs(r.neutrality_gap));
    out << fmt::format("table3_scenarios: {} scenarios, baseline burden {:.4f}, max neutrality gap {:.1e}\n",
                       results.size(), runner.baseline_burden(), worst_gap);

    nlohmann::ordered_json manifest;
    manifest["tool"] = "vatsim";
    manifest["version"] = kVersion;
    manifest["schedule_fingerprint"] = hex(fingerprint(s));
    manifest["population"] = population_description(cfg);
    manifest["target_net_burden"] = target;
    manifest["removals"] = removals;
    std::vector<std::string> names;
    for (auto k : kinds)
        names.emplace_back(scenario_name(k));
    manifest["scenarios"] = names;
    manifest["config_hash"] = hex(fnv1a(manifest.dump()));
    manifest["files"] = {"table1_budget_shares.csv", "table1_budget_shares.txt", "table2_rate_impacts.csv",
                         "table2_rate_impacts.txt", "table3_scenarios.csv", "table3_scenarios.txt"};
    std::ofstream(dir / "manifest.json", std::ios::binary | std::ios::trunc) << manifest.dump(2) << "\n";
    return kOk;
}

int cmd_validate(const RunConfig& cfg, std::ostream& out) {
    int failures = 0;
    auto report = [&](const std::string& name, bool ok, const std::string& detail = {}) {
        out << (ok ? "PASS " : "FAIL ") << name;
        if (!detail.empty())
            out << ": " << detail;
        out << "\n";
        if (!ok)
            ++failures;
        return ok;
    };
    auto check = [&](const std::string& name, auto&& fn) {
        try {
            return report(name, true, fn());
        } catch (const std::exception& e) {
            return report(name, false, e.what());
        }
    };

    std::optional<Schedule> s;
    check("schedule", [&] {
        s = load_schedule(cfg.schedule_path);
        return fmt::format("{} categories, {} treatment groups", s->categories.size(), s->treatment_groups().size());
    });
    if (!s)
        return kInputError;

    check("reference rate identified for target", [&] {
        // any positive weighted base identifies the rate; probe with a unit household
        std::vector<Household> one(1);
        one[0].expenditures.assign(s->categories.size(), 1.0);
        std::vector<std::string> ids;
        for (const auto& c : s->categories)
            ids.push_back(c.id);
        const Population probe(ids, one);
        const double t = solve_given_cashback(probe, *s, 0.0, std::min(target_of(cfg, *s), 0.5)).value();
        return fmt::format("unit basket solves to {:.4f}", t);
    });

    if (!cfg.households_path && !cfg.synthetic)
        return failures ? kInputError : kOk;

    std::optional<Population> p;
    check("population", [&] {
        p = load_population_source(cfg, *s);
        return fmt::format("{} households", p->size());
    });
    if (!p)
        return kInputError;

    const QuintileAssignment q = assign_quintiles(*p);
    check("quintile balance", [&] {
        double total = 0.0, largest = 0.0;
        for (const auto& h : p->households()) {
            total += h.weight;
            largest = std::max(largest, h.weight);
        }
        for (int k = 0; k < kQuintiles; ++k) {
            const double share = q.weight_share[static_cast<std::size_t>(k)];
            if (std::fabs(share - 0.2) > largest / total + 1e-12)
                throw Error(fmt::format("quintile {} holds {:.4f} of the weight", k + 1, share));
        }
        return std::string();
    });
    check("budget share closure", [&] {
        const auto table = budget_share_table(*p, *s, q);
        for (std::size_t k = 0; k <= kQuintiles; ++k) {
            double sum = 0.0;
            for (const auto& row : table.shares)
                sum += row[k];
            if (std::fabs(sum - 100.0) > 0.01)
                throw Error(fmt::format("column {} sums to {:.4f}", k + 1, sum));
        }
        return std::string();
    });
    check("revenue-neutral solve", [&] {
        const double target = target_of(cfg, *s);
        const SolveResult r = solve_with_cashback(*p, *s, target);
        if (r.residual > 1e-7)
            throw Error(fmt::format("residual {:.3e}", r.residual));
        return fmt::format("reference rate {:.4f} outside after {} iterations", r.reference.value(), r.iterations);
    });
    return failures ? kInputError : kOk;
}

int cmd_generate(const RunConfig& cfg, std::ostream& out) {
    if (!cfg.synthetic)
        throw ConfigError("generate needs --synthetic SEED:N");
    if (cfg.households_path)
        throw ConfigError("generate does not read --households");
    const Schedule s = load_schedule(cfg.schedule_path);
    const Population p = generate_synthetic(cfg.synthetic->seed, cfg.synthetic->size, s);
    if (cfg.out.empty()) {
        write_population(out, p);
        return kOk;
    }
    const fs::path path(cfg.out);
    if (path.has_parent_path())
        ensure_dir(path.parent_path());
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f)
        throw ConfigError("cannot write " + path.string());
    write_population(f, p);
    return kOk;
}

}  // namespace

SyntheticSource parse_synthetic(const std::string& spec) {
    const auto colon = spec.find(':');
    auto bad = [&] { return ConfigError("--synthetic expects SEED:N with non-negative integers, got \"" + spec + "\""); };
    if (colon == std::string::npos)
        throw bad();
    SyntheticSource src;
    const char* begin = spec.data();
    const char* mid = begin + colon;
    const char* end = begin + spec.size();
    auto r1 = std::from_chars(begin, mid, src.seed);
    auto r2 = std::from_chars(mid + 1, end, src.size);
    if (r1.ec != std::errc() || r1.ptr != mid || r2.ec != std::errc() || r2.ptr != end || colon == 0)
        throw bad();
    if (src.size == 0)
        throw ConfigError("--synthetic population size must be at least 1");
    return src;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Consumption-tax microsimulation: revenue-neutral reference rate and incidence tables", "vatsim"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    RunConfig cfg;
    std::string synthetic;

    auto add_common = [&](CLI::App* sub, bool population, const std::string& out_help) {
        sub->add_option("--schedule", cfg.schedule_path, "Policy schedule (JSON)")->required();
        if (population) {
            sub->add_option("--households", cfg.households_path, "Household microdata CSV");
            sub->add_option("--synthetic", synthetic, "Synthetic population SEED:N");
        }
        sub->add_option("--out", cfg.out, out_help);
    };

    auto* solve = app.add_subcommand("solve", "Solve the revenue-neutral reference rate with cashback");
    add_common(solve, true, "Directory for the trace file (default: out)");
    solve->add_option("--target-burden", cfg.target_burden, "Net burden target (share of monetary consumption)");
    solve->add_flag("--trace", cfg.trace, "Write the fixed-point trace to <out>/solve_trace.csv");

    auto* tables = app.add_subcommand("tables", "Write budget-share, rate-impact and scenario tables");
    add_common(tables, true, "Output directory (default: out)");
    tables->add_option("--target-burden", cfg.target_burden, "Net burden target for the rate-impact table");
    tables->add_option("--remove", cfg.removals, "Removal selector for the rate-impact table (repeatable)");
    tables->add_option("--scenario", cfg.scenarios,
                       "Scenario: baseline, uniform_vat, plp68, plp68_transfer_swap (repeatable)");
    tables->add_option("--threads", cfg.threads, "Worker threads for household evaluation")
        ->check(CLI::Range(1u, 256u));

    auto* validate_cmd = app.add_subcommand("validate", "Check schedule and population invariants");
    add_common(validate_cmd, true, "Unused");
    validate_cmd->add_option("--target-burden", cfg.target_burden, "Net burden target");

    auto* generate = app.add_subcommand("generate", "Emit a synthetic households CSV");
    generate->add_option("--schedule", cfg.schedule_path, "Policy schedule (JSON)")->required();
    generate->add_option("--synthetic", synthetic, "SEED:N")->required();
    generate->add_option("--out", cfg.out, "Output CSV (default: stdout)");

    std::vector<std::string> argv_store{"vatsim"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_store)
        argv.push_back(a.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kInputError;
    }

    try {
        if (!synthetic.empty())
            cfg.synthetic = parse_synthetic(synthetic);
        if (cfg.out.empty() && !*generate)
            cfg.out = "out";
        if (*solve)
            return cmd_solve(cfg, out);
        if (*tables)
            return cmd_tables(cfg, out);
        if (*validate_cmd)
            return cmd_validate(cfg, out);
        if (*generate)
            return cmd_generate(cfg, out);
    } catch (const SolverError& e) {
        err << "error: " << e.what() << "\n";
        return kNonConvergence;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    }
    return kInputError;
}

}  // namespace vatsim::cli
