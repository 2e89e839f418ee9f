#include "smoothcast/errors.hpp"
#include "smoothcast/harness.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <cmath>
#include <random>
#include <sstream>

using namespace smoothcast;

namespace
{
    std::string csv(const SweepResult& result)
    {
        std::ostringstream out;
        write_sweep_csv(out, result);
        return out.str();
    }

    ExperimentConfig line_config(std::uint32_t n, std::uint32_t k, std::uint32_t ell, std::uint32_t trials)
    {
        ExperimentConfig cfg;
        cfg.topology.name = "line";
        cfg.dist.name = "line-worst";
        cfg.n = n;
        cfg.k = k;
        cfg.ell = ell;
        cfg.trials = trials;
        cfg.seed = MasterSeed{1};
        return cfg;
    }
}

TEST_CASE("exponent fits on exact power laws")
{
    const std::vector<std::pair<double, double>> line{{1, 1}, {10, 10}, {100, 100}};
    CHECK(fit_exponent(line).slope == doctest::Approx(1.0).epsilon(1e-12));
    const std::vector<std::pair<double, double>> two{{1, 2}, {100, 20}};
    CHECK(fit_exponent(two).slope == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(fit_exponent(two).intercept == doctest::Approx(std::log(2.0)).epsilon(1e-12));

    for (const double slope : {2.0 / 3.0, 0.5, 1.0, 1.7, -0.3})
    {
        std::vector<std::pair<double, double>> points;
        for (const double n : {256.0, 1024.0, 4096.0, 16384.0})
        {
            points.emplace_back(n, 3.5 * std::pow(n, slope));
        }
        const auto fit = fit_exponent(points);
        CHECK(std::abs(fit.slope - slope) <= 1e-9 * std::abs(slope));
        CHECK(std::exp(fit.intercept) == doctest::Approx(3.5).epsilon(1e-9));
    }

    const std::vector<std::pair<double, double>> one{{4, 4}};
    CHECK_THROWS_AS((void)fit_exponent(one), UsageError);
    const std::vector<std::pair<double, double>> zero{{4, 0}, {8, 1}};
    CHECK_THROWS_AS((void)fit_exponent(zero), UsageError);
    const std::vector<std::pair<double, double>> same{{4, 1}, {4, 2}};
    CHECK_THROWS_AS((void)fit_exponent(same), UsageError);
}

TEST_CASE("named topologies and distributions")
{
    CHECK(make_schedule({"grid"}, 16, MasterSeed{1}).snapshot(1)->edge_count() == 24);
    CHECK_THROWS_AS((void)make_schedule({"grid"}, 15, MasterSeed{1}), UsageError);
    CHECK(make_schedule({"complete"}, 5, MasterSeed{1}).snapshot(1)->edge_count() == 10);
    CHECK(make_schedule({"random", 7}, 20, MasterSeed{1}).snapshot(1)->edge_count() == 26);
    CHECK(make_schedule({"dynamic-star"}, 5, MasterSeed{1}).horizon() == Round{5});
    CHECK_THROWS_AS((void)make_schedule({"file"}, 5, MasterSeed{1}), UsageError);
    CHECK(make_assignment({"star-worst"}, 5, 3, MasterSeed{1}) == star_worstcase(5, 3));
    CHECK(make_assignment({"p-mixed", 0.25}, 50, 3, MasterSeed{1}) == p_mixed(50, 3, 0.25, MasterSeed{1}));

    try
    {
        check_topology_name("ring");
        FAIL("expected a usage error");
    }
    catch (const UsageError& e)
    {
        const std::string what = e.what();
        for (const auto& name : topology_names())
        {
            CHECK(what.find(name) != std::string::npos);
        }
    }
    CHECK_THROWS_AS(check_distribution_name("uniform"), UsageError);
}

TEST_CASE("config validation")
{
    auto cfg = line_config(64, 4, 1, 1);
    CHECK_NOTHROW(validate(cfg));
    cfg.trials = 0;
    CHECK_THROWS_AS(validate(cfg), UsageError);
    cfg.trials = 1;
    cfg.phases = PhaseParameters{0.01, 0.5}; // below ln(64)/64
    CHECK_THROWS_AS(validate(cfg), UsageError);
    cfg.phases = PhaseParameters{0.25, 0.0};
    CHECK_THROWS_AS(validate(cfg), UsageError);
    cfg.phases = PhaseParameters{0.25, 1.0 / 16};
    CHECK_NOTHROW(validate(cfg));
    cfg.phase_token = 5;
    CHECK_THROWS_AS(validate(cfg), UsageError);
}

TEST_CASE("phase parameter presets")
{
    const auto c = inverse_k_phase_parameters(8);
    CHECK(c.delta == doctest::Approx(0.125));
    CHECK(c.gamma == doctest::Approx(1.0 / 64));
    const auto o = optimized_phase_parameters(1024, 8);
    CHECK(o.delta == doctest::Approx(std::cbrt(std::log(1024.0) / 8192.0)));
    CHECK(o.gamma == doctest::Approx(2.0 * std::pow(std::log(1024.0) / 1024.0, 2.0 / 3.0)));
    CHECK_THROWS_AS((void)optimized_phase_parameters(1024, 0), UsageError);
}

TEST_CASE("a one-point sweep equals a direct run")
{
    SweepGrid grid;
    grid.base = line_config(32, 4, 2, 1);
    grid.base.seed = MasterSeed{42};
    grid.ns = {32};
    grid.ks = {4};
    grid.ells = {2};
    const auto result = run_sweep(grid);
    REQUIRE(result.rows.size() == 1);
    const auto direct = run(static_line(32), line_worstcase(32, 4), 2, MasterSeed{42}, default_max_rounds(32, 4));
    CHECK(result.rows[0].completion == direct.completion);
    CHECK(result.rows[0].smoothed_deliveries == direct.smoothed_deliveries);
    CHECK(result.rows[0].seed.value == 42);
    REQUIRE(result.aggregates.size() == 1);
    CHECK(result.aggregates[0].mean == static_cast<double>(*direct.completion));
}

TEST_CASE("sweep rows, seeds and CSV bytes are deterministic")
{
    SweepGrid grid;
    grid.base = line_config(0, 0, 0, 5);
    grid.base.topology.name = "random";
    grid.base.topology.extra_edges = 3;
    grid.base.dist.name = "p-mixed";
    grid.base.dist.p = 0.3;
    grid.ns = {16, 32};
    grid.ks = {2, 3};
    grid.ells = {0, 1};
    const auto a = run_sweep(grid, 1);
    const auto b = run_sweep(grid, 4);
    CHECK(a.rows.size() == 5 * 8);
    CHECK(a.aggregates.size() == 8);
    const std::string text = csv(a);
    CHECK(text == csv(b));
    CHECK(text == csv(run_sweep(grid, 2)));
    CHECK(text.rfind("trial,seed,n,k,ell,topology,dist,completion,smoothed_deliveries,wall_ms\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 41);
    for (std::size_t i = 0; i < a.rows.size(); ++i)
    {
        CHECK(a.rows[i].trial == i % 5);
        CHECK(a.rows[i].seed.value == 1 + i % 5);
        CHECK(a.rows[i].wall_ms == 0.0);
    }
    CHECK(a.rows[0].n == 16);
    CHECK(a.rows.back().n == 32);
}

TEST_CASE("sweep matches the line oracle")
{
    SweepGrid grid;
    grid.base = line_config(64, 8, 0, 200);
    grid.ns = {64};
    grid.ks = {8};
    grid.ells = {0};
    const auto result = run_sweep(grid, 2);
    REQUIRE(result.aggregates.size() == 1);
    CHECK(result.aggregates[0].completed == 200);
    CHECK(result.aggregates[0].mean >= 0.75 * 504);
    CHECK(result.aggregates[0].mean <= 1.25 * 504);
}

TEST_CASE("aggregates ignore trial order and incomplete trials")
{
    std::vector<TrialRow> rows(7);
    const Round values[] = {5, 9, 1, 7, 3, 11, 2};
    for (std::size_t i = 0; i < rows.size(); ++i)
    {
        rows[i].trial = static_cast<std::uint32_t>(i);
        rows[i].completion = values[i];
    }
    rows[6].completion.reset();
    const auto a = aggregate(rows);
    CHECK(a.trials == 7);
    CHECK(a.completed == 6);
    CHECK(a.mean == doctest::Approx(6.0));
    CHECK(a.median == doctest::Approx(6.0));
    CHECK(a.stddev == doctest::Approx(std::sqrt(70.0 / 5.0)));

    std::mt19937 shuffle_rng(3);
    for (int i = 0; i < 10; ++i)
    {
        std::shuffle(rows.begin(), rows.end(), shuffle_rng);
        const auto b = aggregate(rows);
        CHECK(b.mean == a.mean);
        CHECK(b.median == a.median);
        CHECK(b.stddev == a.stddev);
    }
}

TEST_CASE("phase metrics")
{
    const auto line = static_line(64);
    SUBCASE("no smoothing, no seeding")
    {
        const auto trace = run(line, line_worstcase(64, 4), 0, MasterSeed{1}, 100000);
        const auto report = phase_metrics(trace, 1, inverse_k_phase_parameters(4));
        CHECK(report.seeding_rounds.empty());
        CHECK_FALSE(report.first_seeding_after_spread.has_value());
        CHECK(report.token_completion == trace.completion);
        CHECK(report.sink_rounds == trace.completion);
        CHECK(std::isinf(report.seed_bound));
    }
    SUBCASE("already spread")
    {
        const auto trace = run(line, p_mixed(64, 4, 0.5, MasterSeed{1}), 1, MasterSeed{1}, 100000);
        const double fraction = static_cast<double>(trace.initial_counts[1]) / 64.0;
        const auto report = phase_metrics(trace, 2, PhaseParameters{fraction, 0.1});
        CHECK(report.spread == Round{0});
    }
    SUBCASE("phase ordering")
    {
        for (std::uint64_t seed = 0; seed < 30; ++seed)
        {
            const auto trace = run(line, line_worstcase(64, 4), 2, MasterSeed{seed}, 100000);
            const auto report = phase_metrics(trace, 1, inverse_k_phase_parameters(4));
            CHECK(std::is_sorted(report.seeding_rounds.begin(), report.seeding_rounds.end()));
            if (report.spread && report.first_seeding_after_spread && report.token_completion)
            {
                CHECK(*report.spread <= *report.first_seeding_after_spread);
                CHECK(*report.first_seeding_after_spread <= *report.token_completion);
            }
        }
    }
    CHECK_THROWS_AS((void)phase_metrics(run(line, line_worstcase(64, 4), 0, MasterSeed{1}, 10), 1, {0.0, 0.5}),
                    UsageError);
}

TEST_CASE("worst-case token gets seeded on a long smoothed line")
{
    constexpr std::uint32_t n = 1024;
    constexpr std::uint32_t k = 8;
    const auto line = static_line(n);
    int seeded = 0;
    for (std::uint64_t i = 0; i < 100; ++i)
    {
        const auto trace = run(line, line_worstcase(n, k), 1, trial_seed(MasterSeed{5}, i), default_max_rounds(n, k));
        REQUIRE(trace.completion.has_value());
        const auto report = phase_metrics(trace, 1, inverse_k_phase_parameters(k));
        seeded += !report.seeding_rounds.empty() && report.seeding_rounds.front() <= *trace.completion ? 1 : 0;
    }
    CHECK(seeded >= 90);
}

TEST_CASE("sweep CSV with phase columns")
{
    SweepGrid grid;
    grid.base = line_config(64, 4, 1, 3);
    grid.phase_defaults = PhaseDefaults::InverseK;
    grid.ns = {64};
    grid.ks = {4};
    grid.ells = {1};
    const auto result = run_sweep(grid);
    for (const auto& row : result.rows)
    {
        REQUIRE(row.phases.has_value());
        CHECK(row.phases->params.delta == doctest::Approx(0.25));
    }
    const std::string text = csv(result);
    CHECK(text.rfind("trial,seed,n,k,ell,topology,dist,completion,smoothed_deliveries,wall_ms,spread,first_seed,sink\n",
                     0) == 0);
}

namespace
{
    // Rotating star without smoothing: the centre of round i < n learns token 1
    // iff one of the h current holders broadcasts it, each independently with
    // probability 1/k. With no miss the run ends at n - 1; after a miss only the
    // round-n centre (node 0) can still finish by n, with probability 1/k.
    double late_probability(std::uint32_t n, std::uint32_t k)
    {
        double no_miss = 1.0;
        for (std::uint32_t h = 1; h < n; ++h)
        {
            no_miss *= 1.0 - std::pow(1.0 - 1.0 / k, h);
        }
        return (1.0 - no_miss) * (1.0 - 1.0 / k);
    }
}

TEST_CASE("star probe without smoothing")
{
    for (const std::uint32_t k : {2U, 4U})
    {
        constexpr std::uint32_t trials = 2000;
        const auto probe = lower_bound_probe(16, k, 0, trials, MasterSeed{1}, 2);
        std::size_t late = 0;
        for (const auto& c : probe.completions)
        {
            REQUIRE(c.has_value());
            CHECK(*c >= 15);
            late += *c > 16 ? 1 : 0;
        }
        const double expected = late_probability(16, k);
        const double frac = static_cast<double>(late) / trials;
        CHECK(std::abs(frac - expected) <= 4 * std::sqrt(expected * (1 - expected) / trials));
        CHECK(probe.within_horizon_fraction == doctest::Approx(1.0 - frac));
    }
    // Late completion is the majority only once k is large enough.
    CHECK(late_probability(16, 2) < 0.5);
    CHECK(late_probability(16, 4) > 0.5);
}

TEST_CASE("star probe with heavy smoothing finishes in O(k log n)")
{
    const auto probe = lower_bound_probe(64, 4, 64, 200, MasterSeed{3});
    const double limit = 10.0 * 4 * std::log(64.0);
    std::size_t fast = 0;
    for (const auto& c : probe.completions)
    {
        fast += c && static_cast<double>(*c) <= limit ? 1 : 0;
    }
    CHECK(fast >= 190);
}

TEST_CASE("star probe: more smoothing never slows the mean")
{
    double previous = std::numeric_limits<double>::infinity();
    for (const std::uint32_t ell : {1U, 8U, 64U})
    {
        const auto probe = lower_bound_probe(1024, 8, ell, 10, MasterSeed{7});
        CHECK(probe.mean <= previous);
        previous = probe.mean;
    }
}

TEST_CASE("probe JSON")
{
    const auto probe = lower_bound_probe(8, 2, 1, 3, MasterSeed{1});
    std::ostringstream out;
    write_probe_json(out, probe);
    const auto j = nlohmann::json::parse(out.str());
    CHECK(j["n"] == 8);
    CHECK(j["completions"].size() == 3);
}
