#include "smoothcast/engine.hpp"
#include "smoothcast/errors.hpp"
#include "smoothcast/tokens.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace smoothcast;

TEST_CASE("single source puts every token at one node")
{
    const auto a = single_source(2, 1, 0);
    CHECK(a.holders(1) == std::vector<NodeId>{0});
    const auto b = single_source(9, 5, 4);
    for (TokenId t = 1; t <= 5; ++t)
    {
        CHECK(b.holders(t) == std::vector<NodeId>{4});
    }
    CHECK_THROWS_AS((void)single_source(3, 1, 3), UsageError);
}

TEST_CASE("single source on two nodes completes in round 1")
{
    const auto trace = run(static_line(2), single_source(2, 1, 0), 0, MasterSeed{0}, 10);
    CHECK(trace.completion == Round{1});
}

TEST_CASE("worst-case starts hold token 1 at node 0 only")
{
    const auto line = line_worstcase(3, 2);
    CHECK(line.holders(1) == std::vector<NodeId>{0});
    CHECK(line.holders(2) == std::vector<NodeId>{0, 1, 2});

    const auto star = star_worstcase(4, 3);
    CHECK(star.holders(1) == std::vector<NodeId>{0});
    CHECK(star.holders(2) == std::vector<NodeId>{0, 1, 2, 3});
    CHECK(star.holders(3) == std::vector<NodeId>{0, 1, 2, 3});
    CHECK(star == line_worstcase(4, 3));

    CHECK_THROWS_AS((void)line_worstcase(5, 1), UsageError);
    CHECK_THROWS_AS((void)star_worstcase(5, 1), UsageError);
}

TEST_CASE("line worst case completes when token 1 reaches the far end")
{
    for (std::uint64_t seed = 0; seed < 20; ++seed)
    {
        const std::uint32_t n = 12;
        const auto trace = run(static_line(n), line_worstcase(n, 3), 0, MasterSeed{seed}, 10000);
        REQUIRE(trace.completion.has_value());
        CHECK(trace.initial_counts[0] == 1);
        Round arrival = 0;
        for (const auto& rec : trace.rounds)
        {
            for (const auto& acq : rec.acquired)
            {
                CHECK(acq.token == 1);
                if (acq.node == n - 1)
                {
                    arrival = rec.round;
                }
            }
        }
        CHECK(arrival == *trace.completion);
    }
}

TEST_CASE("token 1 spreads by at most 1 + ell per round unless the centre sends it")
{
    const std::uint32_t n = 40;
    for (const std::uint32_t ell : {0U, 1U, 3U})
    {
        const auto schedule = cyclic_dynamic_star(n);
        const auto trace = run(schedule, star_worstcase(n, 4), ell, MasterSeed{ell + 5}, 5000, TraceLevel::Full);
        for (const auto& rec : trace.rounds)
        {
            const NodeId center = schedule.star_center(rec.round);
            bool center_sent_token1 = false;
            for (const auto& b : rec.broadcasts)
            {
                center_sent_token1 = center_sent_token1 || (b.node == center && b.token == 1);
            }
            if (!center_sent_token1)
            {
                std::size_t gained = 0;
                for (const auto& acq : rec.acquired)
                {
                    gained += acq.token == 1 ? 1 : 0;
                }
                CHECK(gained <= 1 + ell);
            }
        }
    }
}

TEST_CASE("p-mixed edge cases")
{
    const auto full = p_mixed(10, 4, 1.0, MasterSeed{1});
    for (TokenId t = 1; t <= 4; ++t)
    {
        CHECK(full.holders(t).size() == 10);
    }
    // Tiny p forces the repair step.
    for (std::uint64_t seed = 0; seed < 50; ++seed)
    {
        const auto sparse = p_mixed(5, 6, 1e-6, MasterSeed{seed});
        for (TokenId t = 1; t <= 6; ++t)
        {
            CHECK(sparse.holders(t).size() >= 1);
        }
    }
    CHECK_THROWS_AS((void)p_mixed(5, 2, 0.0, MasterSeed{1}), UsageError);
    CHECK_THROWS_AS((void)p_mixed(5, 2, -0.5, MasterSeed{1}), UsageError);
    CHECK_THROWS_AS((void)p_mixed(5, 2, 1.5, MasterSeed{1}), UsageError);
}

TEST_CASE("p-mixed holder counts follow the binomial")
{
    // Binomial(1024, 0.5): sd = 16, so +-50 is more than 3 sd.
    std::size_t inside = 0;
    std::size_t total = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed)
    {
        const auto a = p_mixed(1024, 8, 0.5, MasterSeed{seed});
        for (TokenId t = 1; t <= 8; ++t)
        {
            const auto count = static_cast<double>(a.holders(t).size());
            inside += std::abs(count - 512.0) <= 50.0 ? 1 : 0;
            ++total;
        }
    }
    CHECK(static_cast<double>(inside) / total >= 0.99);
}

TEST_CASE("p-mixed marginal inclusion frequency converges to p")
{
    constexpr double p = 0.3;
    constexpr int kSeeds = 4000;
    int hits = 0;
    for (int seed = 0; seed < kSeeds; ++seed)
    {
        const auto a = p_mixed(20, 3, p, MasterSeed{static_cast<std::uint64_t>(seed)});
        const auto& h = a.holders(2);
        hits += std::binary_search(h.begin(), h.end(), NodeId{7}) ? 1 : 0;
    }
    const double sigma = std::sqrt(p * (1 - p) / kSeeds);
    CHECK(std::abs(static_cast<double>(hits) / kSeeds - p) <= 3 * sigma);
}

TEST_CASE("assignment JSON round trip and validation")
{
    const auto a = p_mixed(30, 5, 0.4, MasterSeed{3});
    std::stringstream buffer;
    write_assignment_json(buffer, a);
    CHECK(buffer.str().rfind("{\"n\":30,\"k\":5,\"holders\":{\"1\":[", 0) == 0);
    CHECK(read_assignment_json(buffer) == a);

    std::istringstream empty_token(R"({"n":3,"k":2,"holders":{"1":[0]}})");
    CHECK_THROWS_AS((void)read_assignment_json(empty_token), ValidationError);
    std::istringstream bad_node(R"({"n":3,"k":1,"holders":{"1":[3]}})");
    CHECK_THROWS_AS((void)read_assignment_json(bad_node), ValidationError);
    std::istringstream bad_token(R"({"n":3,"k":1,"holders":{"2":[0]}})");
    CHECK_THROWS_AS((void)read_assignment_json(bad_token), ValidationError);
    std::istringstream not_json("{n:");
    CHECK_THROWS_AS((void)read_assignment_json(not_json), ValidationError);
}
