#pragma once

#include "smoothcast/randomness.hpp"

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace smoothcast
{
    using Edge = NodePair;

    inline constexpr std::uint32_t kUnreached = std::numeric_limits<std::uint32_t>::max();

    // Undirected simple graph over nodes 0..n-1 with CSR adjacency (neighbors ascending).
    class Graph
    {
    public:
        Graph() = default;

        // Throws ValidationError on self-loops, out-of-range endpoints or duplicate edges.
        static Graph from_edges(std::uint32_t n, std::span<const Edge> edges);
        // Star on n nodes; built directly in O(n).
        static Graph star(std::uint32_t n, NodeId center);

        [[nodiscard]] std::uint32_t node_count() const noexcept { return n_; }
        [[nodiscard]] std::size_t edge_count() const noexcept { return edges_.size(); }
        // Sorted, each with a < b.
        [[nodiscard]] const std::vector<Edge>& edges() const noexcept { return edges_; }

        [[nodiscard]] std::span<const NodeId> neighbors(NodeId u) const noexcept
        {
            return {adjacency_.data() + offsets_[u], adjacency_.data() + offsets_[u + 1]};
        }
        [[nodiscard]] bool has_edge(NodeId a, NodeId b) const noexcept;

        friend bool operator==(const Graph& x, const Graph& y) noexcept
        {
            return x.n_ == y.n_ && x.edges_ == y.edges_;
        }

    private:
        std::uint32_t n_ = 0;
        std::vector<Edge> edges_;
        std::vector<std::uint32_t> offsets_{0};
        std::vector<NodeId> adjacency_;
    };

    [[nodiscard]] Edge make_edge(NodeId a, NodeId b);

    // Hop distances from source; kUnreached where no path exists. When `within`
    // is non-empty the search is restricted to nodes with within[v] == true.
    [[nodiscard]] std::vector<std::uint32_t> bfs_distances(const Graph& g, NodeId source,
                                                           const std::vector<bool>& within = {});

    [[nodiscard]] bool is_connected(const Graph& g);

    // Edge-list text: first line `n m`, then m lines `a b` (0-based).
    [[nodiscard]] Graph read_edge_list(std::istream& in);
    [[nodiscard]] Graph read_edge_list_file(const std::string& path);
    void write_edge_list(std::ostream& out, const Graph& g);

    // Graphviz DOT. `colors` (optional) assigns a group index per node.
    void write_dot(std::ostream& out, const Graph& g, const std::vector<std::uint32_t>& groups = {});
}
