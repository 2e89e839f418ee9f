#include "smoothcast/predecessor.hpp"

#include "smoothcast/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <ostream>

namespace smoothcast
{
    std::vector<NodeId> predecessor_cut(const Graph& g, const std::vector<bool>& in_set)
    {
        if (in_set.size() != g.node_count())
        {
            throw UsageError("membership vector does not match the graph");
        }
        std::vector<NodeId> members;
        for (NodeId v = 0; v < g.node_count(); ++v)
        {
            if (in_set[v])
            {
                members.push_back(v);
            }
        }
        return predecessor_cut(g, members);
    }

    std::vector<NodeId> predecessor_cut(const Graph& g, std::span<const NodeId> set)
    {
        if (set.empty())
        {
            throw UsageError("predecessor cut of an empty set");
        }
        std::vector<bool> in_set(g.node_count(), false);
        for (const NodeId v : set)
        {
            if (v >= g.node_count())
            {
                throw UsageError("node id out of range in cut set");
            }
            in_set[v] = true;
        }
        std::vector<bool> seen(g.node_count(), false);
        std::vector<NodeId> cut;
        for (const NodeId s : set)
        {
            for (const NodeId v : g.neighbors(s))
            {
                if (!in_set[v] && !seen[v])
                {
                    seen[v] = true;
                    cut.push_back(v);
                }
            }
        }
        std::sort(cut.begin(), cut.end());
        return cut;
    }

    PredecessorPath construct_path(const DynamicSchedule& schedule, const BitAssignment& bits, NodeId u, TokenId t,
                                   Round r, Round rp, PathOptions options)
    {
        const std::uint32_t n = schedule.node_count();
        if (r < 1 || r >= rp)
        {
            throw UsageError("path construction needs 1 <= r < r'");
        }
        if (u >= n)
        {
            throw UsageError("target node out of range");
        }
        if (t < 1 || t > bits.k)
        {
            throw UsageError("token id out of range");
        }
        if (bits.n != n)
        {
            throw UsageError("bit assignment and schedule disagree on n");
        }

        PredecessorPath path{u, t, r, rp, {}, 0};
        std::vector<NodeId> members{u};
        std::vector<bool> in_set(n, false);
        in_set[u] = true;

        for (Round i = rp; i > r; --i)
        {
            const Round round = i - 1;
            if (members.size() == n)
            {
                ++path.saturated_iterations;
                continue;
            }
            GraphPtr graph = schedule.snapshot(round);
            if (options.over_smoothed)
            {
                graph = std::make_shared<const Graph>(smooth(graph, round, options.ell, bits.seed).realized());
            }
            const auto cut = predecessor_cut(*graph, members);
            // Ascending ids: the first match is the lowest-id tie-break.
            for (const NodeId v : cut)
            {
                if (primary_token(bits, v, round) == t)
                {
                    in_set[v] = true;
                    members.push_back(v);
                    path.entries.push_back({v, round});
                    break;
                }
            }
        }
        std::reverse(path.entries.begin(), path.entries.end());
        return path;
    }

    bool is_structurally_valid(const PredecessorPath& path)
    {
        std::vector<NodeId> nodes;
        Round last = 0;
        for (const PathEntry& e : path.entries)
        {
            if (e.round < path.from || e.round + 1 > path.to || (last != 0 && e.round <= last))
            {
                return false;
            }
            if (e.node == path.target)
            {
                return false;
            }
            last = e.round;
            nodes.push_back(e.node);
        }
        std::sort(nodes.begin(), nodes.end());
        return std::adjacent_find(nodes.begin(), nodes.end()) == nodes.end();
    }

    std::string_view to_string(ReplayOutcome outcome) noexcept
    {
        switch (outcome)
        {
        case ReplayOutcome::Delivered: return "delivered";
        case ReplayOutcome::NotDelivered: return "not-delivered";
        case ReplayOutcome::Vacuous: return "vacuous";
        }
        return "unknown";
    }

    ReplayOutcome verify_replay(const DynamicSchedule& schedule, const BitAssignment& bits,
                                const TokenAssignment& start, const PredecessorPath& path, std::uint32_t ell)
    {
        if (start.token_count() != bits.k || start.node_count() != bits.n)
        {
            throw UsageError("token assignment does not match the bit assignment");
        }
        Execution exec(schedule, start, ell, bits.seed);
        Round last = path.to;
        if (const auto h = schedule.horizon())
        {
            last = std::min(last, *h);
        }

        bool precondition = false;
        auto next_entry = path.entries.begin();
        for (Round round = 1; round <= last; ++round)
        {
            for (; next_entry != path.entries.end() && next_entry->round == round; ++next_entry)
            {
                precondition = precondition || exec.knows(next_entry->node, path.token);
            }
            exec.step();
        }
        if (!precondition)
        {
            return ReplayOutcome::Vacuous;
        }
        return exec.knows(path.target, path.token) ? ReplayOutcome::Delivered : ReplayOutcome::NotDelivered;
    }

    void write_path_json(std::ostream& out, const PredecessorPath& path)
    {
        nlohmann::ordered_json doc;
        doc["u"] = path.target;
        doc["t"] = path.token;
        doc["r"] = path.from;
        doc["rp"] = path.to;
        auto entries = nlohmann::ordered_json::array();
        for (const PathEntry& e : path.entries)
        {
            entries.push_back({e.node, e.round});
        }
        doc["entries"] = std::move(entries);
        out << doc.dump() << '\n';
    }
}
