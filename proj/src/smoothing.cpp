#include "smoothcast/smoothing.hpp"

#include <algorithm>

namespace smoothcast
{
    Graph SmoothedRound::realized() const
    {
        std::vector<Edge> all(base->edges());
        all.insert(all.end(), added.begin(), added.end());
        return Graph::from_edges(base->node_count(), all);
    }

    void added_edges(const Graph& base, Round r, std::uint32_t ell, MasterSeed seed, std::vector<Edge>& out)
    {
        out.clear();
        if (ell == 0 || base.node_count() < 2)
        {
            return;
        }
        for (const Edge& e : smoothing_stream(seed, r, ell, base.node_count()))
        {
            if (!base.has_edge(e.a, e.b))
            {
                out.push_back(e);
            }
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
    }

    SmoothedRound smooth(GraphPtr base, Round r, std::uint32_t ell, MasterSeed seed)
    {
        SmoothedRound round{std::move(base), {}};
        added_edges(*round.base, r, ell, seed, round.added);
        return round;
    }
}
