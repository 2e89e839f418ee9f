#pragma once

#include "smoothcast/graph.hpp"
#include "smoothcast/randomness.hpp"

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace smoothcast
{
    enum class ScheduleKind
    {
        Static,
        DynamicStar,
        CyclicDynamicStar,
        ExplicitSequence,
    };

    [[nodiscard]] std::string_view to_string(ScheduleKind kind) noexcept;

    using GraphPtr = std::shared_ptr<const Graph>;

    // The adversary's dynamic graph G_1, G_2, ... Immutable; snapshot() is a pure
    // function of (schedule, round) and every snapshot is connected.
    class DynamicSchedule
    {
    public:
        [[nodiscard]] static DynamicSchedule make_static(Graph g, std::string label = "static");
        [[nodiscard]] static DynamicSchedule dynamic_star(std::uint32_t n);
        [[nodiscard]] static DynamicSchedule cyclic_dynamic_star(std::uint32_t n);
        // Round r uses graphs[r-1]; horizon is graphs.size().
        [[nodiscard]] static DynamicSchedule explicit_sequence(std::vector<Graph> graphs);

        [[nodiscard]] std::uint32_t node_count() const noexcept { return n_; }
        [[nodiscard]] ScheduleKind kind() const noexcept { return kind_; }
        [[nodiscard]] const std::string& label() const noexcept { return label_; }
        // Last defined round, if finite.
        [[nodiscard]] std::optional<Round> horizon() const noexcept;

        // Throws UsageError for r == 0, HorizonError past a finite horizon.
        [[nodiscard]] GraphPtr snapshot(Round r) const;

        // Star centre in round r for the star kinds: node r mod n.
        [[nodiscard]] NodeId star_center(Round r) const noexcept { return static_cast<NodeId>(r % n_); }

    private:
        DynamicSchedule() = default;

        std::uint32_t n_ = 0;
        ScheduleKind kind_ = ScheduleKind::Static;
        std::string label_;
        std::vector<GraphPtr> graphs_;
    };

    [[nodiscard]] Graph line_graph(std::uint32_t n);
    [[nodiscard]] Graph star_graph(std::uint32_t n, NodeId center);
    [[nodiscard]] Graph complete_graph(std::uint32_t n);
    [[nodiscard]] Graph grid_graph(std::uint32_t rows, std::uint32_t cols);
    // Uniform random labelled spanning tree (Pruefer decoding) plus m distinct
    // uniform extra edges, capped at the number of free pairs.
    [[nodiscard]] Graph random_connected_graph(std::uint32_t n, std::uint64_t extra_edges, MasterSeed seed);

    [[nodiscard]] DynamicSchedule static_line(std::uint32_t n);
    // Throws ValidationError if the edge list is disconnected or malformed.
    [[nodiscard]] DynamicSchedule static_from_edges(std::uint32_t n, std::span<const Edge> edges);
    [[nodiscard]] DynamicSchedule random_connected(std::uint32_t n, std::uint64_t extra_edges, MasterSeed seed);

    [[nodiscard]] inline DynamicSchedule dynamic_star(std::uint32_t n) { return DynamicSchedule::dynamic_star(n); }
    [[nodiscard]] inline DynamicSchedule cyclic_dynamic_star(std::uint32_t n)
    {
        return DynamicSchedule::cyclic_dynamic_star(n);
    }
}
