#pragma once

#include "wmsn/trace.hpp"

#include <array>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace wmsn {

// X-axis slice of the field used for the regional energy distribution.
struct RegionBin {
    double x_lo = 0.0;
    double x_hi = 0.0;
    int node_count = 0;  // non-sink nodes whose x falls in [x_lo, x_hi)
    int alive_count = 0;
    double mean_energy = 0.0; // dead nodes contribute 0 J
};

constexpr double kRegionWidth = 40.0; // m

struct MetricsReport {
    // Final remaining energy over all non-sink nodes; dead nodes count as 0.
    double mean_remaining_energy = 0.0;
    double remaining_energy_variance = 0.0; // population variance
    std::vector<RegionBin> regional;

    std::vector<double> delay_samples; // s, one per delivered fragment
    double delay_mean = 0.0;           // NaN when nothing was delivered
    double delay_p50 = 0.0;
    double delay_p95 = 0.0;
    double delay_max = 0.0;

    long long generated = 0;
    long long delivered = 0;
    long long in_flight = 0;
    std::array<long long, kDropReasonCount> lost_by_reason{};
    long long lost_total = 0;

    int dead_nodes = 0;
    std::map<NodeId, long long> forward_counts; // data transmissions per node
};

MetricsReport compute_metrics(const Trace& trace, const Topology& topo,
                              const ScenarioConfig& cfg);
// Convenience overload reading topology and config from the trace meta.
MetricsReport compute_metrics(const Trace& trace);

nlohmann::json metrics_to_json(const MetricsReport& report);

// One CSV row per run; shared header.
std::string metrics_csv_header();
std::string metrics_csv_row(const std::string& protocol, std::uint64_t seed,
                            const ScenarioConfig& cfg, const MetricsReport& report);

struct RunMetrics {
    std::string protocol;
    std::uint64_t seed = 0;
    MetricsReport report;
};

struct ProtocolAggregate {
    int runs = 0;
    double mean_remaining_energy = 0.0;
    double mean_variance = 0.0;
    double mean_delay = 0.0; // over runs that delivered anything
    int runs_with_delivery = 0;
    double mean_lost = 0.0;
    double mean_delivered = 0.0;
    double mean_dead_nodes = 0.0;
};

// Per-protocol means plus head-to-head win rates of agem over gpsr (lower
// variance / delay / loss wins; ties count half). Win rates are present only
// when both protocols share at least one seed.
struct ComparisonSummary {
    std::map<std::string, ProtocolAggregate> by_protocol;
    int paired_seeds = 0;
    double win_variance = 0.0;
    double win_delay = 0.0;
    double win_loss = 0.0;
    double win_mean_energy_gpsr = 0.0; // fraction where gpsr keeps more mean energy
};

ComparisonSummary compare_runs(const std::vector<RunMetrics>& runs);

nlohmann::json summary_to_json(const ComparisonSummary& summary);
void print_summary_table(const ComparisonSummary& summary, std::ostream& out);

} // namespace wmsn
