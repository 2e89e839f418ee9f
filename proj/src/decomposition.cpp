#include "smoothcast/decomposition.hpp"

#include "smoothcast/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <ostream>

namespace smoothcast
{
    namespace
    {
        // Largest eccentricity inside `members`, or kUnreached if the induced
        // subgraph is disconnected.
        std::uint32_t induced_diameter(const Graph& g, const std::vector<NodeId>& members, std::vector<bool>& mask)
        {
            for (const NodeId v : members)
            {
                mask[v] = true;
            }
            std::uint32_t diameter = 0;
            for (const NodeId v : members)
            {
                const auto dist = bfs_distances(g, v, mask);
                for (const NodeId w : members)
                {
                    diameter = std::max(diameter, dist[w]);
                }
                if (diameter == kUnreached)
                {
                    break;
                }
            }
            for (const NodeId v : members)
            {
                mask[v] = false;
            }
            return diameter;
        }
    }

    Decomposition decompose(const Graph& g)
    {
        const std::uint32_t n = g.node_count();
        if (n == 0)
        {
            throw ValidationError("cannot decompose an empty graph");
        }
        if (!is_connected(g))
        {
            throw ValidationError("decomposition needs a connected graph");
        }

        Decomposition d;
        d.n = n;
        d.threshold = ceil_sqrt(n);

        // Stage 1: bounded BFS over free nodes from the lowest free id.
        constexpr std::uint32_t kNone = kUnreached;
        std::vector<std::uint32_t> prelim_of(n, kNone);
        for (NodeId root = 0; root < n; ++root)
        {
            if (prelim_of[root] != kNone)
            {
                continue;
            }
            const auto index = static_cast<std::uint32_t>(d.preliminary.size());
            std::vector<NodeId> reached{root};
            prelim_of[root] = index;
            bool red = reached.size() >= d.threshold;
            for (std::size_t head = 0; head < reached.size() && !red; ++head)
            {
                for (const NodeId v : g.neighbors(reached[head]))
                {
                    if (prelim_of[v] != kNone)
                    {
                        continue;
                    }
                    prelim_of[v] = index;
                    reached.push_back(v);
                    if (reached.size() >= d.threshold)
                    {
                        red = true;
                        break;
                    }
                }
            }
            d.preliminary.push_back(std::move(reached));
            d.colors.push_back(red ? PreliminaryColor::Red : PreliminaryColor::Blue);
        }

        // Stage 2: each red piece seeds a final component; every blue piece joins
        // the final component of its lowest-index red neighbour.
        d.preliminary_target.assign(d.preliminary.size(), kNone);
        for (std::uint32_t i = 0; i < d.preliminary.size(); ++i)
        {
            if (d.colors[i] == PreliminaryColor::Red)
            {
                d.preliminary_target[i] = static_cast<std::uint32_t>(d.components.size());
                d.components.push_back(d.preliminary[i]);
            }
        }
        for (std::uint32_t i = 0; i < d.preliminary.size(); ++i)
        {
            if (d.colors[i] != PreliminaryColor::Blue)
            {
                continue;
            }
            std::uint32_t best = kNone;
            for (const NodeId v : d.preliminary[i])
            {
                for (const NodeId w : g.neighbors(v))
                {
                    const std::uint32_t j = prelim_of[w];
                    if (j != i && d.colors[j] == PreliminaryColor::Red)
                    {
                        best = std::min(best, j);
                    }
                }
            }
            if (best == kNone)
            {
                // Impossible for a connected graph: a blue piece's free neighbours
                // would have been reached by its own search.
                throw std::logic_error("blue preliminary component without a red neighbour");
            }
            const std::uint32_t target = d.preliminary_target[best];
            d.preliminary_target[i] = target;
            auto& comp = d.components[target];
            comp.insert(comp.end(), d.preliminary[i].begin(), d.preliminary[i].end());
        }

        d.component_of.assign(n, kNone);
        std::vector<bool> mask(n, false);
        for (std::uint32_t c = 0; c < d.components.size(); ++c)
        {
            auto& comp = d.components[c];
            std::sort(comp.begin(), comp.end());
            for (const NodeId v : comp)
            {
                d.component_of[v] = c;
            }
            d.certificates.push_back(
                {static_cast<std::uint32_t>(comp.size()), induced_diameter(g, comp, mask)});
        }
        return d;
    }

    CertificateReport validate(const Graph& g, const std::vector<std::vector<NodeId>>& components)
    {
        const std::uint32_t n = g.node_count();
        const std::uint32_t threshold = ceil_sqrt(n);
        CertificateReport report;

        std::vector<std::uint32_t> seen(n, 0);
        bool in_range = true;
        for (const auto& comp : components)
        {
            for (const NodeId v : comp)
            {
                if (v >= n)
                {
                    in_range = false;
                    continue;
                }
                ++seen[v];
            }
        }
        report.partition = in_range && std::all_of(seen.begin(), seen.end(), [](std::uint32_t c) { return c == 1; });

        report.min_size = components.empty() ? 0 : kUnreached;
        for (const auto& comp : components)
        {
            report.min_size = std::min(report.min_size, static_cast<std::uint32_t>(comp.size()));
        }
        report.size = !components.empty() && report.min_size >= threshold;

        report.connected = in_range && !components.empty();
        std::vector<bool> mask(n, false);
        for (const auto& comp : components)
        {
            if (!in_range || comp.empty())
            {
                report.connected = false;
                report.max_diameter = kUnreached;
                break;
            }
            const std::uint32_t diameter = induced_diameter(g, comp, mask);
            if (diameter == kUnreached)
            {
                report.connected = false;
            }
            report.max_diameter = std::max(report.max_diameter, diameter);
        }
        report.diameter = report.connected && report.max_diameter <= 6 * threshold;
        return report;
    }

    void write_decomposition_json(std::ostream& out, const Decomposition& d)
    {
        nlohmann::ordered_json doc;
        doc["components"] = d.components;
        out << doc.dump() << '\n';
    }
}
