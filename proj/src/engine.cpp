#include "smoothcast/engine.hpp"

#include "smoothcast/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <ostream>

namespace smoothcast
{
    std::string_view to_string(RunStatus status) noexcept
    {
        switch (status)
        {
        case RunStatus::Completed: return "completed";
        case RunStatus::MaxRoundsExhausted: return "max-rounds";
        case RunStatus::HorizonExhausted: return "horizon";
        }
        return "unknown";
    }

    TokenKnowledge::TokenKnowledge(std::uint32_t n, std::uint32_t k)
        : words_((k + 63) / 64), bits_(static_cast<std::size_t>(n) * words_, 0)
    {
    }

    Execution::Execution(const DynamicSchedule& schedule, const TokenAssignment& start, std::uint32_t ell,
                         MasterSeed seed)
        : schedule_(&schedule),
          n_(schedule.node_count()),
          k_(start.token_count()),
          ell_(ell),
          bits_{seed, schedule.node_count(), start.token_count()},
          known_(n_, k_),
          pending_(n_, k_),
          per_node_(n_, 0),
          per_token_(k_, 0),
          choice_(n_, 0)
    {
        if (start.node_count() != n_)
        {
            throw UsageError("token assignment is for n=" + std::to_string(start.node_count()) +
                             " but the schedule has n=" + std::to_string(n_));
        }
        for (TokenId t = 1; t <= k_; ++t)
        {
            for (const NodeId u : start.holders(t))
            {
                known_.set(u, t);
                ++per_node_[u];
                ++per_token_[t - 1];
                ++total_;
            }
        }
    }

    const RoundRecord& Execution::step(bool record_broadcasts)
    {
        const Round r = next_round_;
        const GraphPtr graph = schedule_->snapshot(r);

        record_.round = r;
        record_.broadcasts.clear();
        record_.acquired.clear();
        added_edges(*graph, r, ell_, bits_.seed, record_.added);

        // Broadcast choices from start-of-round knowledge: the first token of the
        // (u, r) permutation that u holds.
        for (NodeId u = 0; u < n_; ++u)
        {
            TokenId chosen = 0;
            if (per_node_[u] > 0)
            {
                cursor_.reset(bits_, u, r);
                while (!cursor_.done())
                {
                    const TokenId t = cursor_.next();
                    if (known_.test(u, t))
                    {
                        chosen = t;
                        break;
                    }
                }
                if (record_broadcasts)
                {
                    record_.broadcasts.push_back({u, chosen});
                }
            }
            choice_[u] = chosen;
        }

        // Adversarial edges first so that they take provenance over added ones.
        const auto deliver = [this](NodeId to, TokenId t, Provenance via) {
            if (t != 0 && !known_.test(to, t) && pending_.set(to, t))
            {
                record_.acquired.push_back({to, t, via});
            }
        };
        for (NodeId u = 0; u < n_; ++u)
        {
            if (const TokenId t = choice_[u]; t != 0)
            {
                for (const NodeId v : graph->neighbors(u))
                {
                    deliver(v, t, Provenance::Adversarial);
                }
            }
        }
        for (const Edge& e : record_.added)
        {
            deliver(e.b, choice_[e.a], Provenance::Smoothed);
            deliver(e.a, choice_[e.b], Provenance::Smoothed);
        }

        for (const Acquisition& acq : record_.acquired)
        {
            pending_.clear(acq.node, acq.token);
            known_.set(acq.node, acq.token);
            ++per_node_[acq.node];
            ++per_token_[acq.token - 1];
            ++total_;
        }
        std::sort(record_.acquired.begin(), record_.acquired.end(), [](const Acquisition& x, const Acquisition& y) {
            return x.node != y.node ? x.node < y.node : x.token < y.token;
        });
        ++next_round_;
        return record_;
    }

    ExecutionTrace run(const DynamicSchedule& schedule, const TokenAssignment& start, std::uint32_t ell,
                       MasterSeed seed, Round max_rounds, TraceLevel level)
    {
        if (max_rounds < 1)
        {
            throw UsageError("max_rounds must be >= 1");
        }
        Execution exec(schedule, start, ell, seed);

        ExecutionTrace trace;
        trace.n = exec.node_count();
        trace.k = exec.token_count();
        trace.ell = ell;
        trace.seed = seed;
        trace.level = level;
        trace.initial_counts.resize(trace.k);
        for (TokenId t = 1; t <= trace.k; ++t)
        {
            trace.initial_counts[t - 1] = exec.holder_count(t);
        }

        if (exec.complete())
        {
            trace.status = RunStatus::Completed;
            trace.completion = 0;
            return trace;
        }
        trace.status = RunStatus::MaxRoundsExhausted;
        while (trace.rounds_executed < max_rounds)
        {
            if (const auto h = schedule.horizon(); h && exec.next_round() > *h)
            {
                trace.status = RunStatus::HorizonExhausted;
                break;
            }
            const RoundRecord& rec = exec.step(level == TraceLevel::Full);
            ++trace.rounds_executed;
            for (const Acquisition& acq : rec.acquired)
            {
                trace.smoothed_deliveries += acq.via == Provenance::Smoothed ? 1 : 0;
            }
            if (level != TraceLevel::Summary)
            {
                trace.rounds.push_back(rec);
            }
            if (exec.complete())
            {
                trace.status = RunStatus::Completed;
                trace.completion = rec.round;
                break;
            }
        }
        return trace;
    }

    std::vector<std::vector<std::uint32_t>> token_counts(const ExecutionTrace& trace)
    {
        if (trace.level == TraceLevel::Summary && trace.rounds_executed > 0)
        {
            throw UsageError("token counts need a trace recorded with events");
        }
        std::vector<std::vector<std::uint32_t>> counts(trace.k);
        for (std::uint32_t i = 0; i < trace.k; ++i)
        {
            counts[i].reserve(trace.rounds.size() + 1);
            counts[i].push_back(trace.initial_counts[i]);
        }
        std::vector<std::uint32_t> current(trace.initial_counts);
        for (const RoundRecord& rec : trace.rounds)
        {
            for (const Acquisition& acq : rec.acquired)
            {
                ++current[acq.token - 1];
            }
            for (std::uint32_t i = 0; i < trace.k; ++i)
            {
                counts[i].push_back(current[i]);
            }
        }
        return counts;
    }

    std::optional<Round> spread_time(const ExecutionTrace& trace, TokenId t, double delta)
    {
        if (!(delta > 0.0) || delta > 1.0)
        {
            throw UsageError("spread fraction must satisfy 0 < delta <= 1");
        }
        if (t < 1 || t > trace.k)
        {
            throw UsageError("token id out of range");
        }
        if (trace.level == TraceLevel::Summary && trace.rounds_executed > 0)
        {
            throw UsageError("spread time needs a trace recorded with events");
        }
        // Guard against 0.1 * 10 style rounding pushing the ceiling up by one.
        const auto needed = std::max<std::uint32_t>(1, static_cast<std::uint32_t>(std::ceil(delta * trace.n - 1e-9)));
        std::uint32_t count = trace.initial_counts[t - 1];
        if (count >= needed)
        {
            return Round{0};
        }
        for (const RoundRecord& rec : trace.rounds)
        {
            for (const Acquisition& acq : rec.acquired)
            {
                count += acq.token == t ? 1 : 0;
            }
            if (count >= needed)
            {
                return rec.round;
            }
        }
        return std::nullopt;
    }

    void write_summary_json(std::ostream& out, const ExecutionTrace& trace)
    {
        nlohmann::ordered_json line;
        line["completion"] = trace.completion ? static_cast<long long>(*trace.completion) : -1LL;
        line["n"] = trace.n;
        line["k"] = trace.k;
        line["ell"] = trace.ell;
        line["seed"] = trace.seed.value;
        line["status"] = to_string(trace.status);
        line["rounds"] = trace.rounds_executed;
        line["smoothed_deliveries"] = trace.smoothed_deliveries;
        out << line.dump() << '\n';
    }

    void write_trace_jsonl(std::ostream& out, const ExecutionTrace& trace)
    {
        for (const RoundRecord& rec : trace.rounds)
        {
            out << "{\"round\":" << rec.round << ",\"added\":[";
            for (std::size_t i = 0; i < rec.added.size(); ++i)
            {
                out << (i ? "," : "") << '[' << rec.added[i].a << ',' << rec.added[i].b << ']';
            }
            out << "],\"broadcasts\":[";
            for (std::size_t i = 0; i < rec.broadcasts.size(); ++i)
            {
                out << (i ? "," : "") << '[' << rec.broadcasts[i].node << ',' << rec.broadcasts[i].token << ']';
            }
            out << "],\"acquired\":[";
            for (std::size_t i = 0; i < rec.acquired.size(); ++i)
            {
                const Acquisition& acq = rec.acquired[i];
                out << (i ? "," : "") << '[' << acq.node << ',' << acq.token << ','
                    << (acq.via == Provenance::Smoothed ? "\"smooth\"" : "\"adv\"") << ']';
            }
            out << "]}\n";
        }
        write_summary_json(out, trace);
    }
}
