#include "smoothcast/topology.hpp"

#include "smoothcast/errors.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <set>

namespace smoothcast
{
    std::string_view to_string(ScheduleKind kind) noexcept
    {
        switch (kind)
        {
        case ScheduleKind::Static: return "static";
        case ScheduleKind::DynamicStar: return "dynamic-star";
        case ScheduleKind::CyclicDynamicStar: return "cyclic-dynamic-star";
        case ScheduleKind::ExplicitSequence: return "explicit-sequence";
        }
        return "unknown";
    }

    namespace
    {
        void require_nodes(std::uint32_t n, std::uint32_t minimum, const char* what)
        {
            if (n < minimum)
            {
                throw UsageError(std::string(what) + " needs n >= " + std::to_string(minimum));
            }
        }
    }

    DynamicSchedule DynamicSchedule::make_static(Graph g, std::string label)
    {
        if (g.node_count() == 0)
        {
            throw UsageError("schedule needs at least one node");
        }
        if (!is_connected(g))
        {
            throw ValidationError("static graph is not connected");
        }
        DynamicSchedule s;
        s.n_ = g.node_count();
        s.kind_ = ScheduleKind::Static;
        s.label_ = std::move(label);
        s.graphs_.push_back(std::make_shared<const Graph>(std::move(g)));
        return s;
    }

    DynamicSchedule DynamicSchedule::dynamic_star(std::uint32_t n)
    {
        require_nodes(n, 2, "dynamic star");
        DynamicSchedule s;
        s.n_ = n;
        s.kind_ = ScheduleKind::DynamicStar;
        s.label_ = "dynamic-star";
        return s;
    }

    DynamicSchedule DynamicSchedule::cyclic_dynamic_star(std::uint32_t n)
    {
        require_nodes(n, 2, "cyclic dynamic star");
        DynamicSchedule s;
        s.n_ = n;
        s.kind_ = ScheduleKind::CyclicDynamicStar;
        s.label_ = "cyclic-star";
        return s;
    }

    DynamicSchedule DynamicSchedule::explicit_sequence(std::vector<Graph> graphs)
    {
        if (graphs.empty())
        {
            throw UsageError("explicit sequence needs at least one graph");
        }
        DynamicSchedule s;
        s.n_ = graphs.front().node_count();
        s.kind_ = ScheduleKind::ExplicitSequence;
        s.label_ = "explicit";
        for (std::size_t i = 0; i < graphs.size(); ++i)
        {
            if (graphs[i].node_count() != s.n_)
            {
                throw ValidationError("explicit sequence mixes node counts");
            }
            if (!is_connected(graphs[i]))
            {
                throw ValidationError("explicit sequence graph for round " + std::to_string(i + 1) +
                                      " is not connected");
            }
            s.graphs_.push_back(std::make_shared<const Graph>(std::move(graphs[i])));
        }
        return s;
    }

    std::optional<Round> DynamicSchedule::horizon() const noexcept
    {
        switch (kind_)
        {
        case ScheduleKind::DynamicStar: return Round{n_};
        case ScheduleKind::ExplicitSequence: return Round{graphs_.size()};
        default: return std::nullopt;
        }
    }

    GraphPtr DynamicSchedule::snapshot(Round r) const
    {
        if (r == 0)
        {
            throw UsageError("rounds are numbered from 1");
        }
        if (const auto h = horizon(); h && r > *h)
        {
            throw HorizonError("round " + std::to_string(r) + " is past the " + std::string(to_string(kind_)) +
                               " horizon " + std::to_string(*h));
        }
        switch (kind_)
        {
        case ScheduleKind::Static: return graphs_.front();
        case ScheduleKind::ExplicitSequence: return graphs_[r - 1];
        case ScheduleKind::DynamicStar:
        case ScheduleKind::CyclicDynamicStar: return std::make_shared<const Graph>(Graph::star(n_, star_center(r)));
        }
        return nullptr;
    }

    Graph line_graph(std::uint32_t n)
    {
        require_nodes(n, 1, "line");
        std::vector<Edge> edges;
        edges.reserve(n);
        for (NodeId u = 0; u + 1 < n; ++u)
        {
            edges.push_back({u, u + 1});
        }
        return Graph::from_edges(n, edges);
    }

    Graph star_graph(std::uint32_t n, NodeId center)
    {
        require_nodes(n, 1, "star");
        return Graph::star(n, center);
    }

    Graph complete_graph(std::uint32_t n)
    {
        require_nodes(n, 1, "complete graph");
        std::vector<Edge> edges;
        edges.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
        for (NodeId a = 0; a < n; ++a)
        {
            for (NodeId b = a + 1; b < n; ++b)
            {
                edges.push_back({a, b});
            }
        }
        return Graph::from_edges(n, edges);
    }

    Graph grid_graph(std::uint32_t rows, std::uint32_t cols)
    {
        if (rows == 0 || cols == 0)
        {
            throw UsageError("grid needs positive dimensions");
        }
        std::vector<Edge> edges;
        const auto id = [cols](std::uint32_t row, std::uint32_t col) { return row * cols + col; };
        for (std::uint32_t row = 0; row < rows; ++row)
        {
            for (std::uint32_t col = 0; col < cols; ++col)
            {
                if (col + 1 < cols)
                {
                    edges.push_back({id(row, col), id(row, col + 1)});
                }
                if (row + 1 < rows)
                {
                    edges.push_back({id(row, col), id(row + 1, col)});
                }
            }
        }
        return Graph::from_edges(rows * cols, edges);
    }

    Graph random_connected_graph(std::uint32_t n, std::uint64_t extra_edges, MasterSeed seed)
    {
        require_nodes(n, 1, "random connected graph");
        KeyedStream stream(seed, StreamDomain::Topology, n, extra_edges);
        std::vector<Edge> edges;
        if (n == 2)
        {
            edges.push_back({0, 1});
        }
        else if (n > 2)
        {
            // Decode a uniform Pruefer sequence.
            std::vector<NodeId> code(n - 2);
            std::vector<std::uint32_t> degree(n, 1);
            for (auto& c : code)
            {
                c = static_cast<NodeId>(stream.below(n));
                ++degree[c];
            }
            std::priority_queue<NodeId, std::vector<NodeId>, std::greater<>> leaves;
            for (NodeId v = 0; v < n; ++v)
            {
                if (degree[v] == 1)
                {
                    leaves.push(v);
                }
            }
            for (const NodeId c : code)
            {
                const NodeId leaf = leaves.top();
                leaves.pop();
                edges.push_back(make_edge(leaf, c));
                if (--degree[c] == 1)
                {
                    leaves.push(c);
                }
            }
            const NodeId a = leaves.top();
            leaves.pop();
            edges.push_back(make_edge(a, leaves.top()));
        }

        const std::uint64_t all_pairs = static_cast<std::uint64_t>(n) * (n - 1) / 2;
        const std::uint64_t target = std::min<std::uint64_t>(all_pairs, edges.size() + extra_edges);
        std::set<Edge> present(edges.begin(), edges.end());
        while (present.size() < target)
        {
            const auto a = static_cast<NodeId>(stream.below(n));
            auto b = static_cast<NodeId>(stream.below(n - 1));
            if (b >= a)
            {
                ++b;
            }
            const Edge e = make_edge(a, b);
            if (present.insert(e).second)
            {
                edges.push_back(e);
            }
        }
        return Graph::from_edges(n, edges);
    }

    DynamicSchedule static_line(std::uint32_t n)
    {
        return DynamicSchedule::make_static(line_graph(n), "line");
    }

    DynamicSchedule static_from_edges(std::uint32_t n, std::span<const Edge> edges)
    {
        return DynamicSchedule::make_static(Graph::from_edges(n, edges), "edges");
    }

    DynamicSchedule random_connected(std::uint32_t n, std::uint64_t extra_edges, MasterSeed seed)
    {
        return DynamicSchedule::make_static(random_connected_graph(n, extra_edges, seed), "random");
    }
}
