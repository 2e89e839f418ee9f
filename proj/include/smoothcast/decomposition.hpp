#pragma once

#include "smoothcast/graph.hpp"

#include <iosfwd>
#include <vector>

namespace smoothcast
{
    enum class PreliminaryColor
    {
        Red,  // search met the size threshold
        Blue, // search ran out of free nodes
    };

    struct ComponentCertificate
    {
        std::uint32_t size = 0;
        std::uint32_t diameter = 0; // of the induced subgraph
    };

    // Partition of a connected static graph into connected pieces of at least
    // ceil(sqrt(n)) nodes and induced diameter at most 6 * ceil(sqrt(n)).
    struct Decomposition
    {
        std::uint32_t n = 0;
        std::uint32_t threshold = 0; // ceil(sqrt(n))
        std::vector<std::vector<NodeId>> components; // each ascending
        std::vector<ComponentCertificate> certificates;
        std::vector<std::uint32_t> component_of; // node -> index into components

        // Construction record: the preliminary pieces, their colours and, for
        // each, the final component it ended in.
        std::vector<std::vector<NodeId>> preliminary;
        std::vector<PreliminaryColor> colors;
        std::vector<std::uint32_t> preliminary_target;
    };

    [[nodiscard]] constexpr std::uint32_t ceil_sqrt(std::uint32_t n) noexcept
    {
        std::uint64_t root = 0;
        while (root * root < n)
        {
            ++root;
        }
        return static_cast<std::uint32_t>(root);
    }

    // Throws ValidationError if g is disconnected or empty.
    [[nodiscard]] Decomposition decompose(const Graph& g);

    struct CertificateReport
    {
        bool partition = false;
        bool size = false;
        bool connected = false;
        bool diameter = false;
        std::uint32_t min_size = 0;
        std::uint32_t max_diameter = 0;

        [[nodiscard]] bool all() const noexcept { return partition && size && connected && diameter; }
    };

    // Recomputes every certificate from scratch (BFS from every member).
    [[nodiscard]] CertificateReport validate(const Graph& g, const std::vector<std::vector<NodeId>>& components);
    [[nodiscard]] inline CertificateReport validate(const Graph& g, const Decomposition& d)
    {
        return validate(g, d.components);
    }

    // {"components":[[ids],...]}
    void write_decomposition_json(std::ostream& out, const Decomposition& d);
}
