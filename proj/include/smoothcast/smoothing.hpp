#pragma once

#include "smoothcast/topology.hpp"

#include <vector>

namespace smoothcast
{
    // One round of additive smoothing: sampled pairs not already in the base
    // graph, deduplicated, living only for this round.
    struct SmoothedRound
    {
        GraphPtr base;
        std::vector<Edge> added; // sorted, disjoint from base->edges()

        // base plus added, materialized on demand.
        [[nodiscard]] Graph realized() const;
    };

    [[nodiscard]] SmoothedRound smooth(GraphPtr base, Round r, std::uint32_t ell, MasterSeed seed);

    // Same as smooth() but only the added edges; the engine's hot path.
    void added_edges(const Graph& base, Round r, std::uint32_t ell, MasterSeed seed, std::vector<Edge>& out);
}
