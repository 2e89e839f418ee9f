#include "smoothcast/cli.hpp"

#include "smoothcast/decomposition.hpp"
#include "smoothcast/engine.hpp"
#include "smoothcast/errors.hpp"
#include "smoothcast/harness.hpp"
#include "smoothcast/predecessor.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

namespace smoothcast
{
    namespace
    {
        // Flat JSON object as a CLI11 config source: {"n": [256, 1024], "trials": 50}.
        class JsonConfig : public CLI::Config
        {
        public:
            std::string to_config(const CLI::App*, bool, bool, std::string) const override
            {
                throw CLI::ConversionError("writing JSON configs is not supported");
            }

            std::vector<CLI::ConfigItem> from_config(std::istream& input) const override
            {
                nlohmann::json doc;
                try
                {
                    input >> doc;
                }
                catch (const nlohmann::json::exception& e)
                {
                    throw CLI::ConversionError(std::string("config JSON: ") + e.what());
                }
                if (!doc.is_object())
                {
                    throw CLI::ConversionError("config JSON must be an object");
                }
                std::vector<CLI::ConfigItem> items;
                for (const auto& [key, value] : doc.items())
                {
                    CLI::ConfigItem item;
                    item.name = key;
                    const auto scalar = [](const nlohmann::json& v) {
                        if (v.is_string())
                        {
                            return v.get<std::string>();
                        }
                        if (v.is_boolean())
                        {
                            return std::string(v.get<bool>() ? "true" : "false");
                        }
                        return v.dump();
                    };
                    if (value.is_array())
                    {
                        for (const auto& v : value)
                        {
                            item.inputs.push_back(scalar(v));
                        }
                    }
                    else
                    {
                        item.inputs.push_back(scalar(value));
                    }
                    items.push_back(std::move(item));
                }
                return items;
            }
        };

        struct CommonFlags
        {
            std::string topology = "line";
            std::string dist = "single-source";
            std::uint64_t extra = 0;
            std::string graph;
            double p = 0.5;
            NodeId src = 0;
        };

        void add_topology_flags(CLI::App* cmd, CommonFlags& flags)
        {
            cmd->add_option("--topology", flags.topology,
                            "line, star, complete, grid, random, dynamic-star, cyclic-star, file");
            cmd->add_option("--extra", flags.extra, "extra uniform edges for the random topology");
            cmd->add_option("--graph", flags.graph, "edge-list file (`n m` then m lines `a b`); implies --topology file");
        }

        void add_distribution_flags(CLI::App* cmd, CommonFlags& flags)
        {
            cmd->add_option("--dist", flags.dist, "single-source, line-worst, star-worst, p-mixed");
            cmd->add_option("--p", flags.p, "inclusion probability for p-mixed")->check(CLI::Range(0.0, 1.0));
            cmd->add_option("--src", flags.src, "source node for single-source");
        }

        TopologySpec topology_of(const CommonFlags& flags)
        {
            TopologySpec spec{flags.topology, flags.extra, flags.graph};
            if (!flags.graph.empty())
            {
                spec.name = "file";
            }
            check_topology_name(spec.name);
            return spec;
        }

        DistributionSpec distribution_of(const CommonFlags& flags)
        {
            check_distribution_name(flags.dist);
            return {flags.dist, flags.p, flags.src};
        }

        // n for file topologies comes from the file when --n is absent.
        std::uint32_t resolve_n(const TopologySpec& spec, std::optional<std::uint32_t> n)
        {
            if (spec.name == "file" && !n)
            {
                return read_edge_list_file(spec.graph_file).node_count();
            }
            if (!n)
            {
                throw UsageError("--n is required");
            }
            return *n;
        }

        // Writes through `produce` to --out or to the fallback stream.
        void emit(const std::string& path, std::ostream& fallback, const std::function<void(std::ostream&)>& produce)
        {
            if (path.empty() || path == "-")
            {
                produce(fallback);
                return;
            }
            std::ofstream file(path, std::ios::binary);
            if (!file)
            {
                throw std::runtime_error("cannot open output file " + path);
            }
            produce(file);
        }

        // CLI11 only reads config files attached to the top-level app, so the
        // sweep config is applied here: every key fills the option of the same
        // name unless that option was given on the command line.
        void apply_config(CLI::App* cmd, const std::string& path)
        {
            if (!std::ifstream(path))
            {
                throw UsageError("cannot open config file " + path);
            }
            std::shared_ptr<CLI::Config> reader;
            if (path.ends_with(".json"))
            {
                reader = std::make_shared<JsonConfig>();
            }
            else
            {
                reader = std::make_shared<CLI::ConfigTOML>();
            }
            std::vector<CLI::ConfigItem> items;
            try
            {
                items = reader->from_file(path);
            }
            catch (const CLI::Error& e)
            {
                throw UsageError("config " + path + ": " + e.what());
            }
            for (const CLI::ConfigItem& item : items)
            {
                if (!item.parents.empty() && item.parents != std::vector<std::string>{cmd->get_name()})
                {
                    continue;
                }
                if (item.name == "++" || item.name == "--")
                {
                    continue; // section markers
                }
                CLI::Option* opt = cmd->get_option_no_throw("--" + item.name);
                if (opt == nullptr || item.name == "config")
                {
                    throw UsageError("config " + path + ": unknown key '" + item.name + "'");
                }
                if (opt->count() > 0)
                {
                    continue;
                }
                try
                {
                    opt->add_result(item.inputs);
                    opt->run_callback();
                }
                catch (const CLI::Error& e)
                {
                    throw UsageError("config " + path + ": " + item.name + ": " + e.what());
                }
            }
        }

        TraceLevel trace_level(const std::string& name)
        {
            if (name == "summary")
            {
                return TraceLevel::Summary;
            }
            if (name == "events")
            {
                return TraceLevel::Events;
            }
            return TraceLevel::Full;
        }
    }

    int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
    {
        CLI::App app{"Random broadcast in smoothed dynamic networks: simulation and analysis", "smoothcast"};
        app.option_defaults()->always_capture_default();
        app.require_subcommand(1);
        app.set_help_all_flag("--help-all", "help for every subcommand");

        // run
        CommonFlags run_flags;
        std::optional<std::uint32_t> run_n;
        std::uint32_t run_k = 1;
        std::uint32_t run_ell = 0;
        std::uint64_t run_seed = 0;
        std::optional<Round> run_max_rounds;
        std::string run_trace = "summary";
        std::string run_out;
        std::string run_assignment_in;
        std::string run_assignment_out;
        std::string run_dot;
        Round run_dot_round = 1;
        auto* run_cmd = app.add_subcommand("run", "simulate one execution and write a JSONL trace");
        add_topology_flags(run_cmd, run_flags);
        add_distribution_flags(run_cmd, run_flags);
        run_cmd->add_option("--n", run_n, "node count")->check(CLI::Range(1U, 1U << 26));
        run_cmd->add_option("--k", run_k, "token count")->check(CLI::PositiveNumber);
        run_cmd->add_option("--ell", run_ell, "smoothed edges sampled per round");
        run_cmd->add_option("--seed", run_seed, "master seed")->required();
        run_cmd->add_option("--max-rounds", run_max_rounds, "round cap (default 64*k*n)")->check(CLI::PositiveNumber);
        run_cmd->add_option("--trace", run_trace, "summary, events or full")
            ->check(CLI::IsMember({"summary", "events", "full"}));
        run_cmd->add_option("--assignment", run_assignment_in, "start from this token assignment JSON");
        run_cmd->add_option("--save-assignment", run_assignment_out, "write the start assignment as JSON");
        run_cmd->add_option("--dot", run_dot, "write the realized graph of --dot-round as DOT");
        run_cmd->add_option("--dot-round", run_dot_round, "round exported by --dot")->check(CLI::PositiveNumber);
        run_cmd->add_option("--out", run_out, "output file (default stdout)");

        // sweep
        CommonFlags sweep_flags;
        std::vector<std::uint32_t> sweep_ns;
        std::vector<std::uint32_t> sweep_ks{1};
        std::vector<std::uint32_t> sweep_ells{0};
        std::uint32_t sweep_trials = 1;
        std::optional<std::uint64_t> sweep_seed;
        unsigned sweep_jobs = 1;
        std::optional<Round> sweep_max_rounds;
        std::optional<double> sweep_delta;
        std::optional<double> sweep_gamma;
        std::string sweep_phases = "none";
        TokenId sweep_phase_token = 1;
        bool sweep_wall = false;
        std::string sweep_out;
        std::string sweep_config;
        auto* sweep_cmd = app.add_subcommand("sweep", "Monte-Carlo grid over n, k, ell; writes CSV");
        add_topology_flags(sweep_cmd, sweep_flags);
        add_distribution_flags(sweep_cmd, sweep_flags);
        sweep_cmd->add_option("--n", sweep_ns, "comma list of node counts")->delimiter(',');
        sweep_cmd->add_option("--k", sweep_ks, "comma list of token counts")->delimiter(',');
        sweep_cmd->add_option("--ell", sweep_ells, "comma list of smoothing counts")->delimiter(',');
        sweep_cmd->add_option("--trials", sweep_trials, "trials per grid point")->check(CLI::PositiveNumber);
        sweep_cmd->add_option("--seed", sweep_seed, "master seed; trial i uses seed + i");
        sweep_cmd->add_option("--jobs", sweep_jobs, "worker threads")->check(CLI::PositiveNumber);
        sweep_cmd->add_option("--max-rounds", sweep_max_rounds, "round cap (default 64*k*n)")
            ->check(CLI::PositiveNumber);
        sweep_cmd->add_option("--delta", sweep_delta, "spread fraction for phase marks");
        sweep_cmd->add_option("--gamma", sweep_gamma, "seeding fraction for phase marks");
        sweep_cmd->add_option("--phases", sweep_phases, "none, inverse-k (1/k, 1/k^2) or optimized")
            ->check(CLI::IsMember({"none", "inverse-k", "optimized"}));
        sweep_cmd->add_option("--phase-token", sweep_phase_token, "token tracked by phase marks")
            ->check(CLI::PositiveNumber);
        sweep_cmd->add_flag("--wall-clock", sweep_wall, "fill wall_ms (output is then not reproducible)");
        sweep_cmd->add_option("--out", sweep_out, "output CSV (default stdout)");
        sweep_cmd->add_option("--config", sweep_config, "TOML/INI or .json file with flag values; flags win");

        // decompose
        CommonFlags dec_flags;
        std::optional<std::uint32_t> dec_n;
        std::uint64_t dec_seed = 0;
        std::string dec_out;
        std::string dec_dot;
        auto* dec_cmd = app.add_subcommand("decompose", "sqrt(n) decomposition of a static graph; writes JSON");
        add_topology_flags(dec_cmd, dec_flags);
        dec_cmd->add_option("--n", dec_n, "node count (taken from --graph when omitted)")
            ->check(CLI::Range(1U, 1U << 26));
        dec_cmd->add_option("--seed", dec_seed, "seed for the random topology");
        dec_cmd->add_option("--dot", dec_dot, "write DOT coloured by component");
        dec_cmd->add_option("--out", dec_out, "output JSON (default stdout)");

        // path
        CommonFlags path_flags;
        std::optional<std::uint32_t> path_n;
        std::uint32_t path_k = 1;
        NodeId path_u = 0;
        TokenId path_t = 1;
        Round path_r = 1;
        Round path_rp = 2;
        std::uint64_t path_seed = 0;
        std::uint32_t path_ell = 0;
        bool path_smoothed = false;
        std::string path_out;
        auto* path_cmd = app.add_subcommand("path", "predecessor path P_{u,t}(r, rp); writes JSON");
        add_topology_flags(path_cmd, path_flags);
        path_cmd->add_option("--n", path_n, "node count")->check(CLI::Range(1U, 1U << 26));
        path_cmd->add_option("--k", path_k, "token count")->check(CLI::PositiveNumber);
        path_cmd->add_option("--u", path_u, "target node");
        path_cmd->add_option("--t", path_t, "target token")->check(CLI::PositiveNumber);
        path_cmd->add_option("--r", path_r, "interval start")->check(CLI::PositiveNumber);
        path_cmd->add_option("--rp", path_rp, "interval end")->check(CLI::PositiveNumber);
        path_cmd->add_option("--seed", path_seed, "master seed")->required();
        path_cmd->add_option("--ell", path_ell, "smoothing count for --over-smoothed");
        path_cmd->add_flag("--over-smoothed", path_smoothed, "build over realized smoothed rounds");
        path_cmd->add_option("--out", path_out, "output JSON (default stdout)");

        // probe
        std::uint32_t probe_n = 16;
        std::uint32_t probe_k = 2;
        std::uint32_t probe_ell = 0;
        std::uint32_t probe_trials = 100;
        std::uint64_t probe_seed = 0;
        unsigned probe_jobs = 1;
        std::string probe_out;
        auto* probe_cmd = app.add_subcommand("probe", "completion on the rotating-star lower-bound instance");
        probe_cmd->add_option("--n", probe_n, "node count")->check(CLI::Range(2U, 1U << 26));
        probe_cmd->add_option("--k", probe_k, "token count (>= 2)")->check(CLI::Range(2U, 1U << 20));
        probe_cmd->add_option("--ell", probe_ell, "smoothed edges per round");
        probe_cmd->add_option("--trials", probe_trials, "trials")->check(CLI::PositiveNumber);
        probe_cmd->add_option("--seed", probe_seed, "master seed")->required();
        probe_cmd->add_option("--jobs", probe_jobs, "worker threads")->check(CLI::PositiveNumber);
        probe_cmd->add_option("--out", probe_out, "output JSON (default stdout)");

        std::vector<const char*> argv;
        argv.reserve(args.size());
        for (const auto& a : args)
        {
            argv.push_back(a.c_str());
        }
        try
        {
            app.parse(static_cast<int>(argv.size()), argv.data());
        }
        catch (const CLI::ParseError& e)
        {
            const int code = app.exit(e, out, err);
            return code == 0 ? kExitOk : kExitUsage;
        }

        try
        {
            if (run_cmd->parsed())
            {
                const TopologySpec topo = topology_of(run_flags);
                std::optional<TokenAssignment> start;
                if (!run_assignment_in.empty())
                {
                    std::ifstream in(run_assignment_in);
                    if (!in)
                    {
                        throw UsageError("cannot open assignment file " + run_assignment_in);
                    }
                    start = read_assignment_json(in);
                    if (!run_n)
                    {
                        run_n = start->node_count();
                    }
                    run_k = start->token_count();
                }
                const std::uint32_t n = resolve_n(topo, run_n);
                const MasterSeed seed{run_seed};
                const DistributionSpec dist = distribution_of(run_flags);
                const DynamicSchedule schedule = make_schedule(topo, n, seed);
                if (!start)
                {
                    start = make_assignment(dist, n, run_k, seed);
                }
                if (!run_assignment_out.empty())
                {
                    emit(run_assignment_out, out, [&](std::ostream& os) { write_assignment_json(os, *start); });
                }
                if (!run_dot.empty())
                {
                    const SmoothedRound round = smooth(schedule.snapshot(run_dot_round), run_dot_round, run_ell, seed);
                    emit(run_dot, out, [&](std::ostream& os) { write_dot(os, round.realized()); });
                }
                const Round max_rounds = run_max_rounds.value_or(default_max_rounds(n, run_k));
                const ExecutionTrace trace = run(schedule, *start, run_ell, seed, max_rounds, trace_level(run_trace));
                emit(run_out, out, [&](std::ostream& os) { write_trace_jsonl(os, trace); });
                return kExitOk;
            }

            if (sweep_cmd->parsed())
            {
                if (!sweep_config.empty())
                {
                    apply_config(sweep_cmd, sweep_config);
                }
                if (!sweep_seed)
                {
                    throw UsageError("sweep needs --seed (flag or config)");
                }
                if (sweep_ns.empty())
                {
                    throw UsageError("sweep needs --n");
                }
                SweepGrid grid;
                grid.base.topology = topology_of(sweep_flags);
                grid.base.dist = distribution_of(sweep_flags);
                grid.base.trials = sweep_trials;
                grid.base.seed = MasterSeed{*sweep_seed};
                grid.base.max_rounds = sweep_max_rounds;
                grid.base.phase_token = sweep_phase_token;
                if (sweep_delta || sweep_gamma)
                {
                    if (!sweep_delta || !sweep_gamma || sweep_phases != "none")
                    {
                        throw UsageError("--delta and --gamma go together and exclude --phases");
                    }
                    grid.base.phases = PhaseParameters{*sweep_delta, *sweep_gamma};
                }
                else if (sweep_phases == "inverse-k")
                {
                    grid.phase_defaults = PhaseDefaults::InverseK;
                }
                else if (sweep_phases == "optimized")
                {
                    grid.phase_defaults = PhaseDefaults::Optimized;
                }
                grid.ns = sweep_ns;
                grid.ks = sweep_ks;
                grid.ells = sweep_ells;
                const SweepResult result = run_sweep(grid, sweep_jobs, sweep_wall);
                emit(sweep_out, out, [&](std::ostream& os) { write_sweep_csv(os, result); });
                return kExitOk;
            }

            if (dec_cmd->parsed())
            {
                const TopologySpec topo = topology_of(dec_flags);
                const std::uint32_t n = resolve_n(topo, dec_n);
                const DynamicSchedule schedule = make_schedule(topo, n, MasterSeed{dec_seed});
                if (schedule.kind() != ScheduleKind::Static)
                {
                    throw UsageError("decompose needs a static topology");
                }
                const GraphPtr graph = schedule.snapshot(1);
                const Decomposition d = decompose(*graph);
                if (!dec_dot.empty())
                {
                    emit(dec_dot, out, [&](std::ostream& os) { write_dot(os, *graph, d.component_of); });
                }
                emit(dec_out, out, [&](std::ostream& os) { write_decomposition_json(os, d); });
                return kExitOk;
            }

            if (path_cmd->parsed())
            {
                const TopologySpec topo = topology_of(path_flags);
                const std::uint32_t n = resolve_n(topo, path_n);
                const MasterSeed seed{path_seed};
                const DynamicSchedule schedule = make_schedule(topo, n, seed);
                const BitAssignment bits{seed, n, path_k};
                const PredecessorPath path =
                    construct_path(schedule, bits, path_u, path_t, path_r, path_rp, {path_smoothed, path_ell});
                emit(path_out, out, [&](std::ostream& os) { write_path_json(os, path); });
                return kExitOk;
            }

            if (probe_cmd->parsed())
            {
                const ProbeResult probe =
                    lower_bound_probe(probe_n, probe_k, probe_ell, probe_trials, MasterSeed{probe_seed}, probe_jobs);
                emit(probe_out, out, [&](std::ostream& os) { write_probe_json(os, probe); });
                return kExitOk;
            }
        }
        catch (const UsageError& e)
        {
            err << "usage error: " << e.what() << '\n';
            return kExitUsage;
        }
        catch (const std::exception& e)
        {
            err << "error: " << e.what() << '\n';
            return kExitRuntime;
        }
        return kExitUsage;
    }
}
