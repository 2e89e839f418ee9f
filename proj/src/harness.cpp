#include "smoothcast/harness.hpp"

#include "smoothcast/decomposition.hpp"
#include "smoothcast/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <ostream>
#include <thread>

namespace smoothcast
{
    namespace
    {
        std::string joined(const std::vector<std::string>& names)
        {
            std::string out;
            for (const auto& name : names)
            {
                out += (out.empty() ? "" : ", ") + name;
            }
            return out;
        }

        double median_of(std::vector<double> values)
        {
            if (values.empty())
            {
                return 0.0;
            }
            std::sort(values.begin(), values.end());
            const std::size_t mid = values.size() / 2;
            return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
        }

        // Runs task(i) for i in [0, count) on up to `jobs` threads. The first
        // exception is rethrown after all workers stop.
        template <typename Task>
        void parallel_for(std::size_t count, unsigned jobs, Task task)
        {
            jobs = std::max(1U, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
            if (jobs == 1)
            {
                for (std::size_t i = 0; i < count; ++i)
                {
                    task(i);
                }
                return;
            }
            std::atomic<std::size_t> next{0};
            std::exception_ptr failure;
            std::mutex failure_mutex;
            std::vector<std::thread> workers;
            workers.reserve(jobs);
            for (unsigned w = 0; w < jobs; ++w)
            {
                workers.emplace_back([&] {
                    for (std::size_t i = next++; i < count; i = next++)
                    {
                        try
                        {
                            task(i);
                        }
                        catch (...)
                        {
                            const std::lock_guard lock(failure_mutex);
                            if (!failure)
                            {
                                failure = std::current_exception();
                            }
                            next = count;
                        }
                    }
                });
            }
            for (auto& worker : workers)
            {
                worker.join();
            }
            if (failure)
            {
                std::rethrow_exception(failure);
            }
        }
    }

    const std::vector<std::string>& topology_names()
    {
        static const std::vector<std::string> names{"line",   "star",         "complete",    "grid",
                                                    "random", "dynamic-star", "cyclic-star", "file"};
        return names;
    }

    const std::vector<std::string>& distribution_names()
    {
        static const std::vector<std::string> names{"single-source", "line-worst", "star-worst", "p-mixed"};
        return names;
    }

    void check_topology_name(const std::string& name)
    {
        const auto& names = topology_names();
        if (std::find(names.begin(), names.end(), name) == names.end())
        {
            throw UsageError("unknown topology '" + name + "' (valid: " + joined(names) + ")");
        }
    }

    void check_distribution_name(const std::string& name)
    {
        const auto& names = distribution_names();
        if (std::find(names.begin(), names.end(), name) == names.end())
        {
            throw UsageError("unknown distribution '" + name + "' (valid: " + joined(names) + ")");
        }
    }

    DynamicSchedule make_schedule(const TopologySpec& spec, std::uint32_t n, MasterSeed seed)
    {
        check_topology_name(spec.name);
        if (spec.name == "line")
        {
            return static_line(n);
        }
        if (spec.name == "star")
        {
            return DynamicSchedule::make_static(star_graph(n, 0), "star");
        }
        if (spec.name == "complete")
        {
            return DynamicSchedule::make_static(complete_graph(n), "complete");
        }
        if (spec.name == "grid")
        {
            const std::uint32_t side = ceil_sqrt(n);
            if (side * side != n)
            {
                throw UsageError("grid topology needs a square n");
            }
            return DynamicSchedule::make_static(grid_graph(side, side), "grid");
        }
        if (spec.name == "random")
        {
            return random_connected(n, spec.extra_edges, seed);
        }
        if (spec.name == "dynamic-star")
        {
            return dynamic_star(n);
        }
        if (spec.name == "cyclic-star")
        {
            return cyclic_dynamic_star(n);
        }
        // file
        if (spec.graph_file.empty())
        {
            throw UsageError("topology 'file' needs a graph file");
        }
        Graph g = read_edge_list_file(spec.graph_file);
        if (g.node_count() != n)
        {
            throw UsageError("graph file has n=" + std::to_string(g.node_count()) + " but n=" + std::to_string(n) +
                             " was requested");
        }
        return DynamicSchedule::make_static(std::move(g), "file");
    }

    TokenAssignment make_assignment(const DistributionSpec& spec, std::uint32_t n, std::uint32_t k, MasterSeed seed)
    {
        check_distribution_name(spec.name);
        if (spec.name == "single-source")
        {
            return single_source(n, k, spec.source);
        }
        if (spec.name == "line-worst")
        {
            return line_worstcase(n, k);
        }
        if (spec.name == "star-worst")
        {
            return star_worstcase(n, k);
        }
        return p_mixed(n, k, spec.p, seed);
    }

    PhaseParameters inverse_k_phase_parameters(std::uint32_t k)
    {
        const double kk = static_cast<double>(k);
        return {1.0 / kk, 1.0 / (kk * kk)};
    }

    PhaseParameters optimized_phase_parameters(std::uint32_t n, std::uint32_t ell)
    {
        if (ell == 0)
        {
            throw UsageError("optimized phase parameters need ell >= 1");
        }
        const double ln_n = std::log(static_cast<double>(n));
        const double nn = static_cast<double>(n);
        const double l = static_cast<double>(ell);
        return {std::cbrt(ln_n / (nn * l)), std::cbrt(l) * std::pow(ln_n / nn, 2.0 / 3.0)};
    }

    PhaseReport phase_metrics(const ExecutionTrace& trace, TokenId t, PhaseParameters params,
                              PhaseConstants constants)
    {
        if (!(params.delta > 0.0) || params.delta > 1.0 || !(params.gamma > 0.0) || params.gamma > 1.0)
        {
            throw UsageError("phase parameters need 0 < delta, gamma <= 1");
        }
        PhaseReport report;
        report.token = t;
        report.params = params;
        report.spread = spread_time(trace, t, params.delta);
        report.token_completion = spread_time(trace, t, 1.0);

        for (const RoundRecord& rec : trace.rounds)
        {
            for (const Acquisition& acq : rec.acquired)
            {
                if (acq.token == t && acq.via == Provenance::Smoothed)
                {
                    report.seeding_rounds.push_back(rec.round);
                    if (!report.first_seeding_after_spread && report.spread && rec.round >= *report.spread)
                    {
                        report.first_seeding_after_spread = rec.round;
                    }
                }
            }
        }
        if (report.token_completion)
        {
            const Round last = report.seeding_rounds.empty() ? 0 : report.seeding_rounds.back();
            report.sink_rounds = *report.token_completion - last;
        }

        const double n = trace.n;
        const double k = trace.k;
        report.spread_bound = constants.c1 * k * params.delta * n;
        report.seed_bound = trace.ell == 0 ? std::numeric_limits<double>::infinity()
                                           : (params.gamma / params.delta) * k * n / trace.ell;
        report.sink_bound = std::ceil(8.0 * constants.x * k * std::log(n) / params.gamma);
        return report;
    }

    void validate(const ExperimentConfig& cfg)
    {
        check_topology_name(cfg.topology.name);
        check_distribution_name(cfg.dist.name);
        if (cfg.trials == 0)
        {
            throw UsageError("trials must be >= 1");
        }
        if (cfg.k == 0)
        {
            throw UsageError("k must be >= 1");
        }
        if (cfg.max_rounds && *cfg.max_rounds == 0)
        {
            throw UsageError("max_rounds must be >= 1");
        }
        if (cfg.phases)
        {
            const double lower = std::log(static_cast<double>(cfg.n)) / cfg.n;
            if (cfg.phases->delta < lower || cfg.phases->delta > 1.0)
            {
                throw UsageError("delta must lie in [ln(n)/n, 1]");
            }
            if (!(cfg.phases->gamma > 0.0) || cfg.phases->gamma > 1.0)
            {
                throw UsageError("gamma must lie in (0, 1]");
            }
            if (cfg.phase_token < 1 || cfg.phase_token > cfg.k)
            {
                throw UsageError("phase token out of range");
            }
        }
    }

    TrialRow run_trial(const ExperimentConfig& cfg, std::uint32_t trial, bool wall_clock)
    {
        const MasterSeed seed = trial_seed(cfg.seed, trial);
        const auto started = std::chrono::steady_clock::now();

        const DynamicSchedule schedule = make_schedule(cfg.topology, cfg.n, seed);
        const TokenAssignment start = make_assignment(cfg.dist, cfg.n, cfg.k, seed);
        const Round max_rounds = cfg.max_rounds.value_or(default_max_rounds(cfg.n, cfg.k));
        const TraceLevel level = cfg.phases ? TraceLevel::Events : TraceLevel::Summary;
        const ExecutionTrace trace = run(schedule, start, cfg.ell, seed, max_rounds, level);

        TrialRow row;
        row.trial = trial;
        row.seed = seed;
        row.n = cfg.n;
        row.k = cfg.k;
        row.ell = cfg.ell;
        row.topology = cfg.topology.name;
        row.dist = cfg.dist.name;
        row.completion = trace.completion;
        row.status = trace.status;
        row.smoothed_deliveries = trace.smoothed_deliveries;
        if (cfg.phases)
        {
            row.phases = phase_metrics(trace, cfg.phase_token, *cfg.phases);
        }
        if (wall_clock)
        {
            row.wall_ms =
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
        }
        return row;
    }

    Aggregate aggregate(std::span<const TrialRow> rows)
    {
        Aggregate agg;
        if (rows.empty())
        {
            return agg;
        }
        agg.n = rows.front().n;
        agg.k = rows.front().k;
        agg.ell = rows.front().ell;
        agg.trials = rows.size();
        std::vector<double> values;
        for (const TrialRow& row : rows)
        {
            if (row.completion)
            {
                values.push_back(static_cast<double>(*row.completion));
            }
        }
        agg.completed = values.size();
        if (values.empty())
        {
            return agg;
        }
        agg.mean = std::accumulate(values.begin(), values.end(), 0.0) / values.size();
        double squares = 0.0;
        for (const double v : values)
        {
            squares += (v - agg.mean) * (v - agg.mean);
        }
        agg.stddev = values.size() > 1 ? std::sqrt(squares / (values.size() - 1)) : 0.0;
        agg.median = median_of(std::move(values));
        return agg;
    }

    SweepResult run_sweep(const SweepGrid& grid, unsigned jobs, bool wall_clock)
    {
        std::vector<ExperimentConfig> points;
        for (const std::uint32_t n : grid.ns)
        {
            for (const std::uint32_t k : grid.ks)
            {
                for (const std::uint32_t ell : grid.ells)
                {
                    ExperimentConfig cfg = grid.base;
                    cfg.n = n;
                    cfg.k = k;
                    cfg.ell = ell;
                    if (grid.phase_defaults == PhaseDefaults::InverseK)
                    {
                        cfg.phases = inverse_k_phase_parameters(k);
                    }
                    else if (grid.phase_defaults == PhaseDefaults::Optimized)
                    {
                        cfg.phases = optimized_phase_parameters(n, ell);
                    }
                    validate(cfg);
                    points.push_back(std::move(cfg));
                }
            }
        }
        if (points.empty())
        {
            throw UsageError("sweep grid is empty");
        }

        const std::size_t trials = grid.base.trials;
        SweepResult result;
        result.rows.resize(points.size() * trials);
        parallel_for(result.rows.size(), jobs, [&](std::size_t i) {
            result.rows[i] = run_trial(points[i / trials], static_cast<std::uint32_t>(i % trials), wall_clock);
        });
        for (std::size_t p = 0; p < points.size(); ++p)
        {
            result.aggregates.push_back(
                aggregate(std::span<const TrialRow>(result.rows).subspan(p * trials, trials)));
        }
        return result;
    }

    void write_sweep_csv(std::ostream& out, const SweepResult& result)
    {
        const bool phases = !result.rows.empty() && result.rows.front().phases.has_value();
        out << "trial,seed,n,k,ell,topology,dist,completion,smoothed_deliveries,wall_ms";
        if (phases)
        {
            out << ",spread,first_seed,sink";
        }
        out << '\n';
        const auto opt = [](const std::optional<Round>& v) { return v ? std::to_string(*v) : std::string("-1"); };
        for (const TrialRow& row : result.rows)
        {
            char wall[32];
            std::snprintf(wall, sizeof(wall), "%.3f", row.wall_ms);
            out << row.trial << ',' << row.seed.value << ',' << row.n << ',' << row.k << ',' << row.ell << ','
                << row.topology << ',' << row.dist << ',' << opt(row.completion) << ',' << row.smoothed_deliveries
                << ',' << wall;
            if (phases)
            {
                out << ',' << opt(row.phases->spread) << ',' << opt(row.phases->first_seeding_after_spread) << ','
                    << opt(row.phases->sink_rounds);
            }
            out << '\n';
        }
    }

    PowerLawFit fit_exponent(std::span<const std::pair<double, double>> points)
    {
        if (points.size() < 2)
        {
            throw UsageError("exponent fit needs at least two points");
        }
        double sx = 0.0;
        double sy = 0.0;
        for (const auto& [n, t] : points)
        {
            if (!(n > 0.0) || !(t > 0.0))
            {
                throw UsageError("exponent fit needs positive n and T");
            }
            sx += std::log(n);
            sy += std::log(t);
        }
        const double m = static_cast<double>(points.size());
        const double mx = sx / m;
        const double my = sy / m;
        double sxx = 0.0;
        double sxy = 0.0;
        for (const auto& [n, t] : points)
        {
            const double dx = std::log(n) - mx;
            sxx += dx * dx;
            sxy += dx * (std::log(t) - my);
        }
        if (sxx == 0.0)
        {
            throw UsageError("exponent fit needs at least two distinct n");
        }
        const double slope = sxy / sxx;
        return {slope, my - slope * mx};
    }

    ProbeResult lower_bound_probe(std::uint32_t n, std::uint32_t k, std::uint32_t ell, std::uint32_t trials,
                                  MasterSeed seed, unsigned jobs)
    {
        if (trials == 0)
        {
            throw UsageError("trials must be >= 1");
        }
        const DynamicSchedule schedule = cyclic_dynamic_star(n);
        const TokenAssignment start = star_worstcase(n, k);
        ProbeResult probe;
        probe.n = n;
        probe.k = k;
        probe.ell = ell;
        probe.completions.resize(trials);
        parallel_for(trials, jobs, [&](std::size_t i) {
            probe.completions[i] =
                run(schedule, start, ell, trial_seed(seed, i), default_max_rounds(n, k), TraceLevel::Summary)
                    .completion;
        });

        std::vector<double> values;
        std::size_t within = 0;
        for (const auto& c : probe.completions)
        {
            const bool inside = c && *c <= n;
            probe.within_horizon.push_back(inside);
            within += inside ? 1 : 0;
            if (c)
            {
                values.push_back(static_cast<double>(*c));
            }
        }
        probe.within_horizon_fraction = static_cast<double>(within) / trials;
        if (!values.empty())
        {
            probe.mean = std::accumulate(values.begin(), values.end(), 0.0) / values.size();
            probe.median = median_of(std::move(values));
        }
        return probe;
    }

    void write_probe_json(std::ostream& out, const ProbeResult& probe)
    {
        nlohmann::ordered_json doc;
        doc["instance"] = "cyclic-star/star-worst";
        doc["n"] = probe.n;
        doc["k"] = probe.k;
        doc["ell"] = probe.ell;
        doc["trials"] = probe.completions.size();
        doc["mean"] = probe.mean;
        doc["median"] = probe.median;
        doc["within_horizon_fraction"] = probe.within_horizon_fraction;
        auto completions = nlohmann::ordered_json::array();
        for (const auto& c : probe.completions)
        {
            completions.push_back(c ? static_cast<long long>(*c) : -1LL);
        }
        doc["completions"] = std::move(completions);
        out << doc.dump() << '\n';
    }
}
