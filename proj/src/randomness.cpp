#include "smoothcast/randomness.hpp"

#include "smoothcast/errors.hpp"

#include <numeric>
#include <string>

namespace smoothcast
{
    std::uint64_t KeyedStream::below(std::uint64_t bound) noexcept
    {
        // Lemire's multiply-shift with rejection of the biased low band.
        std::uint64_t x = next();
        auto m = static_cast<unsigned __int128>(x) * bound;
        auto low = static_cast<std::uint64_t>(m);
        if (low < bound)
        {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold)
            {
                x = next();
                m = static_cast<unsigned __int128>(x) * bound;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    void check_node_round(const BitAssignment& ba, NodeId u, Round r)
    {
        if (ba.k == 0)
        {
            throw UsageError("bit assignment needs k >= 1");
        }
        if (r == 0)
        {
            throw UsageError("rounds are numbered from 1");
        }
        if (u >= ba.n)
        {
            throw UsageError("node id " + std::to_string(u) + " out of range for n=" + std::to_string(ba.n));
        }
    }

    TokenPermutation permutation(const BitAssignment& ba, NodeId u, Round r)
    {
        check_node_round(ba, u, r);
        TokenPermutation perm;
        perm.order.resize(ba.k);
        std::iota(perm.order.begin(), perm.order.end(), TokenId{1});
        KeyedStream stream(ba.seed, StreamDomain::Broadcast, u, r);
        for (std::uint32_t i = 0; i + 1 < ba.k; ++i)
        {
            const auto j = i + static_cast<std::uint32_t>(stream.below(ba.k - i));
            std::swap(perm.order[i], perm.order[j]);
        }
        return perm;
    }

    TokenId primary_token(const BitAssignment& ba, NodeId u, Round r)
    {
        check_node_round(ba, u, r);
        if (ba.k == 1)
        {
            return 1;
        }
        KeyedStream stream(ba.seed, StreamDomain::Broadcast, u, r);
        return static_cast<TokenId>(stream.below(ba.k)) + 1;
    }

    void PermutationCursor::reset(const BitAssignment& ba, NodeId u, Round r)
    {
        stream_ = KeyedStream(ba.seed, StreamDomain::Broadcast, u, r);
        k_ = ba.k;
        pos_ = 0;
        displaced_.clear();
    }

    TokenId PermutationCursor::value_at(std::uint32_t index) const noexcept
    {
        for (const auto& [where, value] : displaced_)
        {
            if (where == index)
            {
                return value;
            }
        }
        return index + 1;
    }

    TokenId PermutationCursor::next()
    {
        // The last slot of Fisher-Yates takes no draw.
        const std::uint32_t j = pos_ + 1 < k_ ? pos_ + static_cast<std::uint32_t>(stream_.below(k_ - pos_)) : pos_;
        const TokenId chosen = value_at(j);
        if (j != pos_)
        {
            const TokenId displaced = value_at(pos_);
            bool updated = false;
            for (auto& [where, value] : displaced_)
            {
                if (where == j)
                {
                    value = displaced;
                    updated = true;
                    break;
                }
            }
            if (!updated)
            {
                displaced_.emplace_back(j, displaced);
            }
        }
        ++pos_;
        return chosen;
    }

    std::vector<NodePair> smoothing_stream(MasterSeed seed, Round r, std::uint32_t ell, std::uint32_t n)
    {
        if (n < 2)
        {
            throw UsageError("smoothing needs n >= 2");
        }
        std::vector<NodePair> pairs;
        pairs.reserve(ell);
        KeyedStream stream(seed, StreamDomain::Smoothing, r, 0);
        for (std::uint32_t i = 0; i < ell; ++i)
        {
            // Uniform ordered pair of distinct nodes, then forget the order.
            const auto a = static_cast<NodeId>(stream.below(n));
            auto b = static_cast<NodeId>(stream.below(n - 1));
            if (b >= a)
            {
                ++b;
            }
            pairs.push_back(a < b ? NodePair{a, b} : NodePair{b, a});
        }
        return pairs;
    }
}
