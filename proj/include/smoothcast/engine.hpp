#pragma once

#include "smoothcast/smoothing.hpp"
#include "smoothcast/tokens.hpp"
#include "smoothcast/topology.hpp"

#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

namespace smoothcast
{
    enum class Provenance : std::uint8_t
    {
        Adversarial,
        Smoothed,
    };

    struct Broadcast
    {
        NodeId node = 0;
        TokenId token = 0;

        friend bool operator==(const Broadcast&, const Broadcast&) = default;
    };

    // Node learned token at the end of the round. Provenance is Smoothed only
    // when no adversarial edge delivered the same token to the same node.
    struct Acquisition
    {
        NodeId node = 0;
        TokenId token = 0;
        Provenance via = Provenance::Adversarial;

        friend bool operator==(const Acquisition&, const Acquisition&) = default;
    };

    struct RoundRecord
    {
        Round round = 0;
        std::vector<Edge> added;
        std::vector<Broadcast> broadcasts; // only at TraceLevel::Full
        std::vector<Acquisition> acquired; // sorted by (node, token)

        friend bool operator==(const RoundRecord&, const RoundRecord&) = default;
    };

    enum class TraceLevel
    {
        Summary, // completion and counters only
        Events,  // plus added edges and acquisitions per round
        Full,    // plus every broadcast
    };

    enum class RunStatus
    {
        Completed,
        MaxRoundsExhausted,
        HorizonExhausted,
    };

    [[nodiscard]] std::string_view to_string(RunStatus status) noexcept;

    struct ExecutionTrace
    {
        std::uint32_t n = 0;
        std::uint32_t k = 0;
        std::uint32_t ell = 0;
        MasterSeed seed;
        TraceLevel level = TraceLevel::Events;

        std::vector<std::uint32_t> initial_counts; // n_t(1), index t-1
        std::vector<RoundRecord> rounds;           // empty at TraceLevel::Summary

        RunStatus status = RunStatus::MaxRoundsExhausted;
        // Last round after which every node knows every token; 0 if the start is
        // already complete.
        std::optional<Round> completion;
        Round rounds_executed = 0;
        std::uint64_t smoothed_deliveries = 0;

        friend bool operator==(const ExecutionTrace&, const ExecutionTrace&) = default;
    };

    // T_u(r) for all nodes as a dense bit matrix.
    class TokenKnowledge
    {
    public:
        TokenKnowledge(std::uint32_t n, std::uint32_t k);

        [[nodiscard]] bool test(NodeId u, TokenId t) const noexcept
        {
            const std::uint32_t bit = t - 1;
            return (bits_[static_cast<std::size_t>(u) * words_ + bit / 64] >> (bit % 64)) & 1U;
        }
        // Returns true if the bit was newly set.
        bool set(NodeId u, TokenId t) noexcept
        {
            const std::uint32_t bit = t - 1;
            auto& word = bits_[static_cast<std::size_t>(u) * words_ + bit / 64];
            const std::uint64_t mask = std::uint64_t{1} << (bit % 64);
            const bool fresh = (word & mask) == 0;
            word |= mask;
            return fresh;
        }
        void clear(NodeId u, TokenId t) noexcept
        {
            const std::uint32_t bit = t - 1;
            bits_[static_cast<std::size_t>(u) * words_ + bit / 64] &= ~(std::uint64_t{1} << (bit % 64));
        }

    private:
        std::uint32_t words_;
        std::vector<std::uint64_t> bits_;
    };

    // A single random-broadcast execution advanced one synchronous round at a time.
    // The schedule must outlive the execution.
    class Execution
    {
    public:
        Execution(const DynamicSchedule& schedule, const TokenAssignment& start, std::uint32_t ell, MasterSeed seed);

        [[nodiscard]] std::uint32_t node_count() const noexcept { return n_; }
        [[nodiscard]] std::uint32_t token_count() const noexcept { return k_; }
        [[nodiscard]] const BitAssignment& bits() const noexcept { return bits_; }
        // Round executed by the next step(); starts at 1.
        [[nodiscard]] Round next_round() const noexcept { return next_round_; }
        [[nodiscard]] bool knows(NodeId u, TokenId t) const noexcept { return known_.test(u, t); }
        [[nodiscard]] std::uint32_t known_count(NodeId u) const noexcept { return per_node_[u]; }
        [[nodiscard]] std::uint32_t holder_count(TokenId t) const noexcept { return per_token_[t - 1]; }
        [[nodiscard]] bool complete() const noexcept { return total_ == static_cast<std::uint64_t>(n_) * k_; }

        // Runs round next_round(). Throws HorizonError if the schedule ends.
        // The returned record is valid until the next call.
        const RoundRecord& step(bool record_broadcasts = false);

    private:
        const DynamicSchedule* schedule_;
        std::uint32_t n_;
        std::uint32_t k_;
        std::uint32_t ell_;
        BitAssignment bits_;
        Round next_round_ = 1;

        TokenKnowledge known_;
        TokenKnowledge pending_;
        std::vector<std::uint32_t> per_node_;
        std::vector<std::uint32_t> per_token_;
        std::uint64_t total_ = 0;

        std::vector<TokenId> choice_; // 0 = silent
        PermutationCursor cursor_;
        RoundRecord record_;
    };

    [[nodiscard]] constexpr Round default_max_rounds(std::uint32_t n, std::uint32_t k) noexcept
    {
        return Round{64} * k * n;
    }

    // Steps until completion, max_rounds or the schedule horizon.
    [[nodiscard]] ExecutionTrace run(const DynamicSchedule& schedule, const TokenAssignment& start, std::uint32_t ell,
                                     MasterSeed seed, Round max_rounds, TraceLevel level = TraceLevel::Events);

    // counts[t-1][r-1] = n_t(r) for r = 1 .. rounds_executed + 1.
    // Requires a trace recorded at TraceLevel::Events or Full.
    [[nodiscard]] std::vector<std::vector<std::uint32_t>> token_counts(const ExecutionTrace& trace);

    // Rounds until at least ceil(delta * n) nodes know t: the first r >= 0 with
    // n_t(r + 1) >= ceil(delta * n). Same convention as completion, so delta = 1
    // yields the token's own completion round.
    [[nodiscard]] std::optional<Round> spread_time(const ExecutionTrace& trace, TokenId t, double delta);

    // JSONL: one object per recorded round, then the summary line.
    void write_trace_jsonl(std::ostream& out, const ExecutionTrace& trace);
    void write_summary_json(std::ostream& out, const ExecutionTrace& trace);
}
