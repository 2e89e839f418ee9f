#pragma once

#include "smoothcast/engine.hpp"
#include "smoothcast/tokens.hpp"
#include "smoothcast/topology.hpp"

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace smoothcast
{
    // Named topology: line, star, complete, grid, random, dynamic-star,
    // cyclic-star, file.
    struct TopologySpec
    {
        std::string name = "line";
        std::uint64_t extra_edges = 0; // random
        std::string graph_file;        // file
    };

    // Named start: single-source, line-worst, star-worst, p-mixed.
    struct DistributionSpec
    {
        std::string name = "single-source";
        double p = 0.5;
        NodeId source = 0;
    };

    [[nodiscard]] const std::vector<std::string>& topology_names();
    [[nodiscard]] const std::vector<std::string>& distribution_names();

    // Throws UsageError for unknown names (message lists the valid ones).
    void check_topology_name(const std::string& name);
    void check_distribution_name(const std::string& name);

    [[nodiscard]] DynamicSchedule make_schedule(const TopologySpec& spec, std::uint32_t n, MasterSeed seed);
    [[nodiscard]] TokenAssignment make_assignment(const DistributionSpec& spec, std::uint32_t n, std::uint32_t k,
                                                  MasterSeed seed);

    struct PhaseParameters
    {
        double delta = 0.0; // spread fraction
        double gamma = 0.0; // seeding fraction
    };

    // delta = 1/k, gamma = 1/k^2.
    [[nodiscard]] PhaseParameters inverse_k_phase_parameters(std::uint32_t k);
    // delta = (ln n / (n ell))^(1/3), gamma = ell^(1/3) (ln n / n)^(2/3).
    [[nodiscard]] PhaseParameters optimized_phase_parameters(std::uint32_t n, std::uint32_t ell);

    // Existential constants of the phase bounds, exposed as multipliers.
    struct PhaseConstants
    {
        double x = 4.0;
        double c1 = 8.0 * (4.0 + 1.0);
        double alpha = 32.0;
    };

    struct PhaseReport
    {
        TokenId token = 1;
        PhaseParameters params;
        std::optional<Round> spread;                     // spread_time(token, delta)
        std::vector<Round> seeding_rounds;               // every smoothed delivery of token
        std::optional<Round> first_seeding_after_spread; // start of the seed phase
        std::optional<Round> token_completion;
        std::optional<Round> sink_rounds; // token completion minus last seeding round
        // Phase lengths the bounds allow for these parameters.
        double spread_bound = 0.0;
        double seed_bound = 0.0;
        double sink_bound = 0.0;
    };

    // Requires an Events/Full trace; 0 < delta, gamma <= 1.
    [[nodiscard]] PhaseReport phase_metrics(const ExecutionTrace& trace, TokenId t, PhaseParameters params,
                                            PhaseConstants constants = {});

    struct ExperimentConfig
    {
        TopologySpec topology;
        DistributionSpec dist;
        std::uint32_t n = 2;
        std::uint32_t k = 1;
        std::uint32_t ell = 0;
        std::uint32_t trials = 1;
        MasterSeed seed;
        std::optional<Round> max_rounds; // default 64 k n
        std::optional<PhaseParameters> phases;
        TokenId phase_token = 1;
    };

    // Throws UsageError for trials == 0, unknown names, or phase parameters
    // outside ln(n)/n <= delta <= 1, 0 < gamma <= 1.
    void validate(const ExperimentConfig& cfg);

    enum class PhaseDefaults
    {
        None,      // use base.phases as given
        InverseK,  // inverse_k_phase_parameters(k) per grid point
        Optimized, // optimized_phase_parameters(n, ell) per grid point
    };

    struct SweepGrid
    {
        ExperimentConfig base; // n, k, ell overridden per grid point
        PhaseDefaults phase_defaults = PhaseDefaults::None;
        std::vector<std::uint32_t> ns;
        std::vector<std::uint32_t> ks;
        std::vector<std::uint32_t> ells;
    };

    struct TrialRow
    {
        std::uint32_t trial = 0;
        MasterSeed seed;
        std::uint32_t n = 0;
        std::uint32_t k = 0;
        std::uint32_t ell = 0;
        std::string topology;
        std::string dist;
        std::optional<Round> completion;
        RunStatus status = RunStatus::Completed;
        std::uint64_t smoothed_deliveries = 0;
        double wall_ms = 0.0;
        std::optional<PhaseReport> phases;
    };

    struct Aggregate
    {
        std::uint32_t n = 0;
        std::uint32_t k = 0;
        std::uint32_t ell = 0;
        std::size_t trials = 0;
        std::size_t completed = 0;
        double mean = 0.0; // over completed trials
        double median = 0.0;
        double stddev = 0.0;
    };

    struct SweepResult
    {
        std::vector<TrialRow> rows; // grid order (n, k, ell), then trial index
        std::vector<Aggregate> aggregates;
    };

    // One trial; trial seed = master + trial index.
    [[nodiscard]] TrialRow run_trial(const ExperimentConfig& cfg, std::uint32_t trial, bool wall_clock = false);

    // Trials run on up to `jobs` threads; output is independent of jobs.
    // wall_clock = false writes 0 for wall_ms so repeated sweeps are byte-identical.
    [[nodiscard]] SweepResult run_sweep(const SweepGrid& grid, unsigned jobs = 1, bool wall_clock = false);

    [[nodiscard]] Aggregate aggregate(std::span<const TrialRow> rows);

    void write_sweep_csv(std::ostream& out, const SweepResult& result);

    struct PowerLawFit
    {
        double slope = 0.0;
        double intercept = 0.0; // ln T = intercept + slope ln n
    };

    // Least squares of ln T against ln n. Needs >= 2 points with distinct n, all positive.
    [[nodiscard]] PowerLawFit fit_exponent(std::span<const std::pair<double, double>> points);

    struct ProbeResult
    {
        std::uint32_t n = 0;
        std::uint32_t k = 0;
        std::uint32_t ell = 0;
        std::vector<std::optional<Round>> completions;
        std::vector<bool> within_horizon; // completion <= n
        double mean = 0.0;
        double median = 0.0;
        double within_horizon_fraction = 0.0;
    };

    // Star instance: cyclic dynamic star with the star worst-case start.
    [[nodiscard]] ProbeResult lower_bound_probe(std::uint32_t n, std::uint32_t k, std::uint32_t ell,
                                                std::uint32_t trials, MasterSeed seed, unsigned jobs = 1);

    void write_probe_json(std::ostream& out, const ProbeResult& probe);
}
