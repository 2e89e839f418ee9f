#include "smoothcast/graph.hpp"

#include "smoothcast/errors.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

namespace smoothcast
{
    Edge make_edge(NodeId a, NodeId b)
    {
        if (a == b)
        {
            throw ValidationError("self-loop on node " + std::to_string(a));
        }
        return a < b ? Edge{a, b} : Edge{b, a};
    }

    Graph Graph::from_edges(std::uint32_t n, std::span<const Edge> edges)
    {
        Graph g;
        g.n_ = n;
        g.edges_.reserve(edges.size());
        for (const Edge& e : edges)
        {
            if (e.a >= n || e.b >= n)
            {
                throw ValidationError("edge {" + std::to_string(e.a) + "," + std::to_string(e.b) +
                                      "} out of range for n=" + std::to_string(n));
            }
            g.edges_.push_back(make_edge(e.a, e.b));
        }
        std::sort(g.edges_.begin(), g.edges_.end());
        if (const auto dup = std::adjacent_find(g.edges_.begin(), g.edges_.end()); dup != g.edges_.end())
        {
            throw ValidationError("duplicate edge {" + std::to_string(dup->a) + "," + std::to_string(dup->b) + "}");
        }

        std::vector<std::uint32_t> degree(n, 0);
        for (const Edge& e : g.edges_)
        {
            ++degree[e.a];
            ++degree[e.b];
        }
        g.offsets_.assign(n + 1, 0);
        for (std::uint32_t u = 0; u < n; ++u)
        {
            g.offsets_[u + 1] = g.offsets_[u] + degree[u];
        }
        g.adjacency_.resize(g.offsets_[n]);
        std::vector<std::uint32_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
        // Edges sorted by (a, b) fill every list in ascending order: a node x first
        // sees edges {a, x} with a < x, then edges {x, b} with b > x.
        for (const Edge& e : g.edges_)
        {
            g.adjacency_[fill[e.a]++] = e.b;
            g.adjacency_[fill[e.b]++] = e.a;
        }
        return g;
    }

    Graph Graph::star(std::uint32_t n, NodeId center)
    {
        if (n >= 2 && center >= n)
        {
            throw ValidationError("star centre out of range");
        }
        Graph g;
        g.n_ = n;
        if (n < 2)
        {
            g.offsets_.assign(n + 1, 0);
            return g;
        }
        g.edges_.reserve(n - 1);
        g.adjacency_.reserve(2 * (n - 1));
        g.offsets_.assign(n + 1, 0);
        for (NodeId v = 0; v < n; ++v)
        {
            if (v != center)
            {
                g.edges_.push_back(v < center ? Edge{v, center} : Edge{center, v});
            }
        }
        for (NodeId u = 0; u < n; ++u)
        {
            if (u == center)
            {
                for (NodeId v = 0; v < n; ++v)
                {
                    if (v != center)
                    {
                        g.adjacency_.push_back(v);
                    }
                }
            }
            else
            {
                g.adjacency_.push_back(center);
            }
            g.offsets_[u + 1] = static_cast<std::uint32_t>(g.adjacency_.size());
        }
        return g;
    }

    bool Graph::has_edge(NodeId a, NodeId b) const noexcept
    {
        if (a >= n_ || b >= n_)
        {
            return false;
        }
        const auto na = neighbors(a);
        const auto nb = neighbors(b);
        return na.size() <= nb.size() ? std::binary_search(na.begin(), na.end(), b)
                                      : std::binary_search(nb.begin(), nb.end(), a);
    }

    std::vector<std::uint32_t> bfs_distances(const Graph& g, NodeId source, const std::vector<bool>& within)
    {
        std::vector<std::uint32_t> dist(g.node_count(), kUnreached);
        std::vector<NodeId> queue;
        queue.reserve(g.node_count());
        dist[source] = 0;
        queue.push_back(source);
        for (std::size_t head = 0; head < queue.size(); ++head)
        {
            const NodeId u = queue[head];
            for (const NodeId v : g.neighbors(u))
            {
                if (dist[v] != kUnreached || (!within.empty() && !within[v]))
                {
                    continue;
                }
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
        return dist;
    }

    bool is_connected(const Graph& g)
    {
        if (g.node_count() <= 1)
        {
            return true;
        }
        const auto dist = bfs_distances(g, 0);
        return std::none_of(dist.begin(), dist.end(), [](std::uint32_t d) { return d == kUnreached; });
    }

    Graph read_edge_list(std::istream& in)
    {
        long long n = -1;
        long long m = -1;
        if (!(in >> n >> m) || n < 0 || m < 0 || n > std::numeric_limits<std::uint32_t>::max())
        {
            throw ValidationError("edge list: expected header `n m`");
        }
        std::vector<Edge> edges;
        edges.reserve(static_cast<std::size_t>(m));
        for (long long i = 0; i < m; ++i)
        {
            long long a = -1;
            long long b = -1;
            if (!(in >> a >> b) || a < 0 || b < 0 || a >= n || b >= n)
            {
                throw ValidationError("edge list: bad edge line " + std::to_string(i + 2));
            }
            edges.push_back(make_edge(static_cast<NodeId>(a), static_cast<NodeId>(b)));
        }
        return Graph::from_edges(static_cast<std::uint32_t>(n), edges);
    }

    Graph read_edge_list_file(const std::string& path)
    {
        std::ifstream in(path);
        if (!in)
        {
            throw UsageError("cannot open graph file " + path);
        }
        return read_edge_list(in);
    }

    void write_edge_list(std::ostream& out, const Graph& g)
    {
        out << g.node_count() << ' ' << g.edge_count() << '\n';
        for (const Edge& e : g.edges())
        {
            out << e.a << ' ' << e.b << '\n';
        }
    }

    void write_dot(std::ostream& out, const Graph& g, const std::vector<std::uint32_t>& groups)
    {
        static constexpr const char* kPalette[] = {"#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00",
                                                   "#ffff33", "#a65628", "#f781bf", "#999999"};
        constexpr std::size_t kColors = sizeof(kPalette) / sizeof(kPalette[0]);
        out << "graph G {\n";
        for (NodeId u = 0; u < g.node_count(); ++u)
        {
            out << "  " << u;
            if (!groups.empty())
            {
                out << " [group=" << groups[u] << ", style=filled, fillcolor=\"" << kPalette[groups[u] % kColors]
                    << "\"]";
            }
            out << ";\n";
        }
        for (const Edge& e : g.edges())
        {
            out << "  " << e.a << " -- " << e.b << ";\n";
        }
        out << "}\n";
    }
}
