#pragma once

#include "smoothcast/engine.hpp"
#include "smoothcast/topology.hpp"

#include <iosfwd>
#include <vector>

namespace smoothcast
{
    struct PathEntry
    {
        NodeId node = 0;
        Round round = 0;

        friend bool operator==(const PathEntry&, const PathEntry&) = default;
    };

    // Node/round sequence built backwards from (u, rp). If entry i's node knows t
    // at the start of its round, u knows t by the end of round rp - 1.
    struct PredecessorPath
    {
        NodeId target = 0;
        TokenId token = 0;
        Round from = 0; // r
        Round to = 0;   // r'
        std::vector<PathEntry> entries; // rounds strictly increasing
        // Loop iterations that found S already equal to V; together with the
        // path length this is the count the length bound is proved against.
        std::uint64_t saturated_iterations = 0;

        friend bool operator==(const PredecessorPath&, const PredecessorPath&) = default;
    };

    // Nodes outside S adjacent to S. in_set[v] marks membership; throws
    // UsageError if S is empty.
    [[nodiscard]] std::vector<NodeId> predecessor_cut(const Graph& g, const std::vector<bool>& in_set);
    [[nodiscard]] std::vector<NodeId> predecessor_cut(const Graph& g, std::span<const NodeId> set);

    struct PathOptions
    {
        // Build over realized (smoothed) rounds instead of the adversarial
        // schedule. Exploratory only.
        bool over_smoothed = false;
        std::uint32_t ell = 0;
    };

    // Path-Construction(u, t, r, r'): walk i = r' .. r+1, join the lowest-id node
    // v of the cut c(S, i-1) whose primary token in round i-1 is t.
    [[nodiscard]] PredecessorPath construct_path(const DynamicSchedule& schedule, const BitAssignment& bits,
                                                 NodeId u, TokenId t, Round r, Round rp, PathOptions options = {});

    // Rounds strictly increasing inside [r, r'-1], nodes pairwise distinct and
    // different from the target.
    [[nodiscard]] bool is_structurally_valid(const PredecessorPath& path);

    enum class ReplayOutcome
    {
        Delivered,
        NotDelivered,
        Vacuous, // no entry held the token at the start of its round
    };

    [[nodiscard]] std::string_view to_string(ReplayOutcome outcome) noexcept;

    // Runs the engine from `start` with bits.seed and smoothing ell, then reports
    // whether path.target knows path.token by the end of round path.to.
    [[nodiscard]] ReplayOutcome verify_replay(const DynamicSchedule& schedule, const BitAssignment& bits,
                                              const TokenAssignment& start, const PredecessorPath& path,
                                              std::uint32_t ell = 0);

    // {"u":..,"t":..,"r":..,"rp":..,"entries":[[node,round],...]}
    void write_path_json(std::ostream& out, const PredecessorPath& path);
}
