#include "smoothcast/tokens.hpp"

#include "smoothcast/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>

namespace smoothcast
{
    TokenAssignment::TokenAssignment(std::uint32_t n, std::uint32_t k, std::vector<std::vector<NodeId>> holders)
        : n_(n), k_(k), holders_(std::move(holders))
    {
        if (n == 0 || k == 0)
        {
            throw UsageError("token assignment needs n >= 1 and k >= 1");
        }
        if (holders_.size() != k)
        {
            throw ValidationError("token assignment lists " + std::to_string(holders_.size()) +
                                  " holder sets for k=" + std::to_string(k));
        }
        for (std::size_t i = 0; i < holders_.size(); ++i)
        {
            auto& set = holders_[i];
            std::sort(set.begin(), set.end());
            set.erase(std::unique(set.begin(), set.end()), set.end());
            if (set.empty())
            {
                throw ValidationError("token " + std::to_string(i + 1) + " has no holder");
            }
            if (set.back() >= n)
            {
                throw ValidationError("token " + std::to_string(i + 1) + " held by out-of-range node " +
                                      std::to_string(set.back()));
            }
        }
    }

    namespace
    {
        std::vector<NodeId> all_nodes(std::uint32_t n)
        {
            std::vector<NodeId> nodes(n);
            std::iota(nodes.begin(), nodes.end(), NodeId{0});
            return nodes;
        }

        TokenAssignment missing_first_token(std::uint32_t n, std::uint32_t k, const char* name)
        {
            if (k < 2)
            {
                throw UsageError(std::string(name) + " needs k >= 2");
            }
            if (n == 0)
            {
                throw UsageError(std::string(name) + " needs n >= 1");
            }
            std::vector<std::vector<NodeId>> holders(k, all_nodes(n));
            holders[0] = {0};
            return TokenAssignment(n, k, std::move(holders));
        }
    }

    TokenAssignment single_source(std::uint32_t n, std::uint32_t k, NodeId src)
    {
        if (src >= n)
        {
            throw UsageError("source node out of range");
        }
        return TokenAssignment(n, k, std::vector<std::vector<NodeId>>(k, std::vector<NodeId>{src}));
    }

    TokenAssignment line_worstcase(std::uint32_t n, std::uint32_t k)
    {
        return missing_first_token(n, k, "line worst case");
    }

    TokenAssignment star_worstcase(std::uint32_t n, std::uint32_t k)
    {
        return missing_first_token(n, k, "star worst case");
    }

    TokenAssignment p_mixed(std::uint32_t n, std::uint32_t k, double p, MasterSeed seed)
    {
        if (!(p > 0.0) || p > 1.0)
        {
            throw UsageError("p-mixed needs 0 < p <= 1");
        }
        if (n == 0 || k == 0)
        {
            throw UsageError("p-mixed needs n >= 1 and k >= 1");
        }
        KeyedStream stream(seed, StreamDomain::Tokens, n, k);
        std::vector<std::vector<NodeId>> holders(k);
        for (auto& set : holders)
        {
            for (NodeId u = 0; u < n; ++u)
            {
                if (p >= 1.0 || stream.unit() < p)
                {
                    set.push_back(u);
                }
            }
        }
        for (auto& set : holders)
        {
            if (set.empty())
            {
                set.push_back(static_cast<NodeId>(stream.below(n)));
            }
        }
        return TokenAssignment(n, k, std::move(holders));
    }

    void write_assignment_json(std::ostream& out, const TokenAssignment& a)
    {
        nlohmann::ordered_json holders = nlohmann::ordered_json::object();
        for (TokenId t = 1; t <= a.token_count(); ++t)
        {
            holders[std::to_string(t)] = a.holders(t);
        }
        nlohmann::ordered_json doc;
        doc["n"] = a.node_count();
        doc["k"] = a.token_count();
        doc["holders"] = std::move(holders);
        out << doc.dump() << '\n';
    }

    TokenAssignment read_assignment_json(std::istream& in)
    {
        nlohmann::json doc;
        try
        {
            in >> doc;
            const auto n = doc.at("n").get<std::uint32_t>();
            const auto k = doc.at("k").get<std::uint32_t>();
            std::vector<std::vector<NodeId>> holders(k);
            for (const auto& [key, nodes] : doc.at("holders").items())
            {
                const unsigned long t = std::stoul(key);
                if (t < 1 || t > k)
                {
                    throw ValidationError("token id " + key + " outside 1..k");
                }
                holders[t - 1] = nodes.get<std::vector<NodeId>>();
            }
            return TokenAssignment(n, k, std::move(holders));
        }
        catch (const nlohmann::json::exception& e)
        {
            throw ValidationError(std::string("token assignment JSON: ") + e.what());
        }
        catch (const std::logic_error& e)
        {
            if (dynamic_cast<const UsageError*>(&e))
            {
                throw;
            }
            throw ValidationError(std::string("token assignment JSON: ") + e.what());
        }
    }
}
