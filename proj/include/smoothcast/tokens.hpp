#pragma once

#include "smoothcast/randomness.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace smoothcast
{
    // Initial token placement. holders(t) lists, ascending, the nodes that know
    // token t at the start of round 1. Every token has at least one holder.
    class TokenAssignment
    {
    public:
        // Validates ranges, sorts and deduplicates holder lists.
        TokenAssignment(std::uint32_t n, std::uint32_t k, std::vector<std::vector<NodeId>> holders);

        [[nodiscard]] std::uint32_t node_count() const noexcept { return n_; }
        [[nodiscard]] std::uint32_t token_count() const noexcept { return k_; }
        [[nodiscard]] const std::vector<NodeId>& holders(TokenId t) const { return holders_.at(t - 1); }

        friend bool operator==(const TokenAssignment&, const TokenAssignment&) = default;

    private:
        std::uint32_t n_;
        std::uint32_t k_;
        std::vector<std::vector<NodeId>> holders_;
    };

    [[nodiscard]] TokenAssignment single_source(std::uint32_t n, std::uint32_t k, NodeId src);
    // Node 0 knows 1..k, everyone else knows 2..k.
    [[nodiscard]] TokenAssignment line_worstcase(std::uint32_t n, std::uint32_t k);
    [[nodiscard]] TokenAssignment star_worstcase(std::uint32_t n, std::uint32_t k);
    // Each (node, token) independently with probability p; any token left
    // without holders is given to one uniformly random node.
    [[nodiscard]] TokenAssignment p_mixed(std::uint32_t n, std::uint32_t k, double p, MasterSeed seed);

    // {"n":..,"k":..,"holders":{"1":[..],...}}
    void write_assignment_json(std::ostream& out, const TokenAssignment& a);
    [[nodiscard]] TokenAssignment read_assignment_json(std::istream& in);
}
