#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace smoothcast
{
    using NodeId = std::uint32_t;
    using TokenId = std::uint32_t; // 1..k
    using Round = std::uint64_t;   // 1-based

    struct MasterSeed
    {
        std::uint64_t value = 0;

        friend bool operator==(MasterSeed, MasterSeed) = default;
    };

    // Derived per-trial seed: master + trial index.
    [[nodiscard]] constexpr MasterSeed trial_seed(MasterSeed master, std::uint64_t trial) noexcept
    {
        return MasterSeed{master.value + trial};
    }

    // Stream domains. Streams in different domains never share a key.
    enum class StreamDomain : std::uint64_t
    {
        Broadcast = 0x6272'6f61'6463'6173ULL,
        Smoothing = 0x736d'6f6f'7468'696eULL,
        Topology = 0x746f'706f'6c6f'6779ULL,
        Tokens = 0x746f'6b65'6e73'0000ULL,
    };

    [[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t x) noexcept
    {
        x ^= x >> 30;
        x *= 0xbf58476d1ce4e5b9ULL;
        x ^= x >> 27;
        x *= 0x94d049bb133111ebULL;
        x ^= x >> 31;
        return x;
    }

    // Key for the stream (seed, domain, a, b). Each component is folded through
    // the finalizer so that nearby tuples produce unrelated keys.
    [[nodiscard]] constexpr std::uint64_t derive_key(MasterSeed seed, StreamDomain domain, std::uint64_t a,
                                                     std::uint64_t b) noexcept
    {
        std::uint64_t h = mix64(seed.value ^ 0x9e3779b97f4a7c15ULL);
        h = mix64(h ^ static_cast<std::uint64_t>(domain));
        h = mix64(h + 0x9e3779b97f4a7c15ULL * (a + 1));
        h = mix64(h + 0xd1b54a32d192ed03ULL * (b + 1));
        return h;
    }

    // Counter-based generator: a SplitMix64 sequence started at a derived key.
    // Pure function of the key, so any (node, round) stream can be regenerated
    // without touching any other stream.
    class KeyedStream
    {
    public:
        explicit constexpr KeyedStream(std::uint64_t key) noexcept : state_(key) {}
        KeyedStream(MasterSeed seed, StreamDomain domain, std::uint64_t a, std::uint64_t b) noexcept
            : state_(derive_key(seed, domain, a, b))
        {
        }

        constexpr std::uint64_t next() noexcept
        {
            state_ += 0x9e3779b97f4a7c15ULL;
            return mix64(state_);
        }

        // Unbiased draw from [0, bound). bound must be > 0.
        std::uint64_t below(std::uint64_t bound) noexcept;

        // Uniform double in [0, 1).
        double unit() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    private:
        std::uint64_t state_;
    };

    struct TokenPermutation
    {
        std::vector<TokenId> order;
    };

    // The pre-committed broadcast randomness: node u in round r permutes 1..k
    // with the (seed, u, r) stream.
    struct BitAssignment
    {
        MasterSeed seed;
        std::uint32_t n = 0;
        std::uint32_t k = 0;
    };

    void check_node_round(const BitAssignment& ba, NodeId u, Round r);

    [[nodiscard]] TokenPermutation permutation(const BitAssignment& ba, NodeId u, Round r);

    // order[0] of permutation(ba, u, r); draws a single value from the stream.
    [[nodiscard]] TokenId primary_token(const BitAssignment& ba, NodeId u, Round r);

    // Lazily materialized forward Fisher-Yates over 1..k. Entry i is fixed after
    // the i-th draw, so prefixes agree exactly with permutation(). Only displaced
    // positions are stored; reset() reuses the buffer.
    class PermutationCursor
    {
    public:
        PermutationCursor() = default;
        PermutationCursor(const BitAssignment& ba, NodeId u, Round r) { reset(ba, u, r); }

        void reset(const BitAssignment& ba, NodeId u, Round r);

        [[nodiscard]] bool done() const noexcept { return pos_ >= k_; }
        // Next token of the permutation. Requires !done().
        TokenId next();

    private:
        [[nodiscard]] TokenId value_at(std::uint32_t index) const noexcept;

        KeyedStream stream_{0};
        std::uint32_t k_ = 0;
        std::uint32_t pos_ = 0;
        std::vector<std::pair<std::uint32_t, TokenId>> displaced_;
    };

    struct NodePair
    {
        NodeId a = 0;
        NodeId b = 0; // a < b

        friend auto operator<=>(const NodePair&, const NodePair&) = default;
    };

    // ell independent uniform draws, with replacement, from the n(n-1)/2 unordered pairs.
    [[nodiscard]] std::vector<NodePair> smoothing_stream(MasterSeed seed, Round r, std::uint32_t ell, std::uint32_t n);
}
