#include "wmsn/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

namespace wmsn {

namespace {

double nearest_rank(const std::vector<double>& sorted, double q)
{
    if (sorted.empty())
        return std::numeric_limits<double>::quiet_NaN();
    const std::size_t n = sorted.size();
    std::size_t rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n)));
    if (rank == 0)
        rank = 1;
    if (rank > n)
        rank = n;
    return sorted[rank - 1];
}

std::string fmt_double(double v)
{
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

} // namespace

MetricsReport compute_metrics(const Trace& trace, const Topology& topo, const ScenarioConfig& cfg)
{
    MetricsReport report;

    // Final energies, clamped to 0 for dead nodes; the sink is infrastructure
    // and stays out of the energy statistics.
    std::map<NodeId, double> final_energy;
    std::map<NodeId, bool> final_alive;
    for (const TraceRecord& rec : trace.records) {
        switch (rec.kind) {
        case TraceKind::Energy:
            if (rec.node != Topology::kSinkId) {
                final_energy[rec.node] = rec.alive ? rec.energy : 0.0;
                final_alive[rec.node] = rec.alive;
            }
            break;
        case TraceKind::Image:
            report.generated += rec.count;
            break;
        case TraceKind::Deliver: {
            report.delivered += 1;
            report.delay_samples.push_back(rec.t - rec.created_at);
            break;
        }
        case TraceKind::Drop:
            report.lost_by_reason[static_cast<std::size_t>(rec.reason)] += 1;
            break;
        case TraceKind::Death:
            if (rec.node != Topology::kSinkId)
                report.dead_nodes += 1;
            break;
        case TraceKind::Send:
            report.forward_counts[rec.node] += 1;
            break;
        default:
            break;
        }
    }

    double sum = 0.0;
    for (const auto& [id, e] : final_energy)
        sum += e;
    const double n = static_cast<double>(final_energy.size());
    report.mean_remaining_energy = n > 0 ? sum / n : 0.0;
    double var = 0.0;
    for (const auto& [id, e] : final_energy) {
        const double d = e - report.mean_remaining_energy;
        var += d * d;
    }
    report.remaining_energy_variance = n > 0 ? var / n : 0.0;

    // 40 m bins over [0, field_width); the last bin absorbs x == width.
    const int bin_count = static_cast<int>(std::ceil(cfg.field.width / kRegionWidth));
    report.regional.resize(static_cast<std::size_t>(bin_count));
    for (int b = 0; b < bin_count; ++b) {
        report.regional[b].x_lo = b * kRegionWidth;
        report.regional[b].x_hi = std::min((b + 1) * kRegionWidth, cfg.field.width);
    }
    std::vector<double> bin_sum(static_cast<std::size_t>(bin_count), 0.0);
    for (const NodePlacement& node : topo.nodes) {
        if (node.id == Topology::kSinkId)
            continue;
        int b = static_cast<int>(node.position.x / kRegionWidth);
        b = std::clamp(b, 0, bin_count - 1);
        RegionBin& bin = report.regional[b];
        bin.node_count += 1;
        if (auto it = final_alive.find(node.id); it != final_alive.end() && it->second)
            bin.alive_count += 1;
        if (auto it = final_energy.find(node.id); it != final_energy.end())
            bin_sum[b] += it->second;
    }
    for (int b = 0; b < bin_count; ++b)
        report.regional[b].mean_energy =
            report.regional[b].node_count > 0
                ? bin_sum[b] / report.regional[b].node_count
                : 0.0;

    std::sort(report.delay_samples.begin(), report.delay_samples.end());
    if (!report.delay_samples.empty()) {
        double dsum = 0.0;
        for (double d : report.delay_samples)
            dsum += d;
        report.delay_mean = dsum / static_cast<double>(report.delay_samples.size());
        report.delay_p50 = nearest_rank(report.delay_samples, 0.50);
        report.delay_p95 = nearest_rank(report.delay_samples, 0.95);
        report.delay_max = report.delay_samples.back();
    } else {
        report.delay_mean = std::numeric_limits<double>::quiet_NaN();
        report.delay_p50 = report.delay_p95 = report.delay_max = report.delay_mean;
    }

    for (long long d : report.lost_by_reason)
        report.lost_total += d;
    report.in_flight = report.generated - report.delivered - report.lost_total;
    return report;
}

MetricsReport compute_metrics(const Trace& trace)
{
    return compute_metrics(trace, trace.meta.topology, trace.meta.config);
}

nlohmann::json metrics_to_json(const MetricsReport& report)
{
    nlohmann::json regional = nlohmann::json::array();
    for (const RegionBin& bin : report.regional)
        regional.push_back({{"x_lo", bin.x_lo},
                            {"x_hi", bin.x_hi},
                            {"nodes", bin.node_count},
                            {"alive", bin.alive_count},
                            {"mean_energy", bin.mean_energy}});
    nlohmann::json losses = nlohmann::json::object();
    for (std::size_t i = 0; i < kDropReasonCount; ++i)
        losses[drop_reason_name(static_cast<DropReason>(i))] = report.lost_by_reason[i];
    nlohmann::json forwards = nlohmann::json::object();
    for (const auto& [id, count] : report.forward_counts)
        forwards[std::to_string(id)] = count;
    nlohmann::json j{
        {"mean_remaining_energy", report.mean_remaining_energy},
        {"remaining_energy_variance", report.remaining_energy_variance},
        {"regional", regional},
        {"delivered", report.delivered},
        {"generated", report.generated},
        {"in_flight", report.in_flight},
        {"lost_total", report.lost_total},
        {"lost_by_reason", losses},
        {"dead_nodes", report.dead_nodes},
        {"forward_counts", forwards},
        {"delay_count", report.delay_samples.size()},
    };
    if (!report.delay_samples.empty()) {
        j["delay_mean"] = report.delay_mean;
        j["delay_p50"] = report.delay_p50;
        j["delay_p95"] = report.delay_p95;
        j["delay_max"] = report.delay_max;
    }
    return j;
}

std::string metrics_csv_header()
{
    return "protocol,seed,node_count,generated,delivered,in_flight,lost_total,lost_queue,"
           "lost_void,lost_perimeter,lost_ttl,lost_death,dead_nodes,mean_remaining_energy,"
           "energy_variance,delay_mean,delay_p50,delay_p95,delay_max";
}

std::string metrics_csv_row(const std::string& protocol, std::uint64_t seed,
                            const ScenarioConfig& cfg, const MetricsReport& report)
{
    std::ostringstream os;
    os << protocol << ',' << seed << ',' << cfg.node_count << ',' << report.generated << ','
       << report.delivered << ',' << report.in_flight << ',' << report.lost_total;
    for (std::size_t i = 0; i < kDropReasonCount; ++i)
        os << ',' << report.lost_by_reason[i];
    os << ',' << report.dead_nodes << ',' << fmt_double(report.mean_remaining_energy) << ','
       << fmt_double(report.remaining_energy_variance) << ',' << fmt_double(report.delay_mean)
       << ',' << fmt_double(report.delay_p50) << ',' << fmt_double(report.delay_p95) << ','
       << fmt_double(report.delay_max);
    return os.str();
}

namespace {

// Missing delays (nothing delivered) rank worst.
double delay_or_worst(const MetricsReport& r)
{
    return std::isnan(r.delay_mean) ? std::numeric_limits<double>::infinity() : r.delay_mean;
}

double win_score(double agem, double gpsr)
{
    if (agem < gpsr)
        return 1.0;
    if (agem == gpsr)
        return 0.5;
    return 0.0;
}

} // namespace

ComparisonSummary compare_runs(const std::vector<RunMetrics>& runs)
{
    ComparisonSummary summary;
    for (const RunMetrics& run : runs) {
        ProtocolAggregate& agg = summary.by_protocol[run.protocol];
        agg.runs += 1;
        agg.mean_remaining_energy += run.report.mean_remaining_energy;
        agg.mean_variance += run.report.remaining_energy_variance;
        if (!run.report.delay_samples.empty()) {
            agg.mean_delay += run.report.delay_mean;
            agg.runs_with_delivery += 1;
        }
        agg.mean_lost += static_cast<double>(run.report.lost_total);
        agg.mean_delivered += static_cast<double>(run.report.delivered);
        agg.mean_dead_nodes += run.report.dead_nodes;
    }
    for (auto& [name, agg] : summary.by_protocol) {
        agg.mean_remaining_energy /= agg.runs;
        agg.mean_variance /= agg.runs;
        agg.mean_delay = agg.runs_with_delivery > 0
                             ? agg.mean_delay / agg.runs_with_delivery
                             : std::numeric_limits<double>::quiet_NaN();
        agg.mean_lost /= agg.runs;
        agg.mean_delivered /= agg.runs;
        agg.mean_dead_nodes /= agg.runs;
    }

    std::map<std::uint64_t, const MetricsReport*> agem_by_seed, gpsr_by_seed;
    for (const RunMetrics& run : runs) {
        if (run.protocol == "agem")
            agem_by_seed[run.seed] = &run.report;
        else if (run.protocol == "gpsr")
            gpsr_by_seed[run.seed] = &run.report;
    }
    for (const auto& [seed, agem] : agem_by_seed) {
        auto it = gpsr_by_seed.find(seed);
        if (it == gpsr_by_seed.end())
            continue;
        const MetricsReport* gpsr = it->second;
        summary.paired_seeds += 1;
        summary.win_variance +=
            win_score(agem->remaining_energy_variance, gpsr->remaining_energy_variance);
        summary.win_delay += win_score(delay_or_worst(*agem), delay_or_worst(*gpsr));
        summary.win_loss += win_score(static_cast<double>(agem->lost_total),
                                      static_cast<double>(gpsr->lost_total));
        summary.win_mean_energy_gpsr +=
            win_score(agem->mean_remaining_energy, gpsr->mean_remaining_energy);
    }
    if (summary.paired_seeds > 0) {
        summary.win_variance /= summary.paired_seeds;
        summary.win_delay /= summary.paired_seeds;
        summary.win_loss /= summary.paired_seeds;
        summary.win_mean_energy_gpsr /= summary.paired_seeds;
    }
    return summary;
}

nlohmann::json summary_to_json(const ComparisonSummary& summary)
{
    nlohmann::json protocols = nlohmann::json::object();
    for (const auto& [name, agg] : summary.by_protocol) {
        protocols[name] = {{"runs", agg.runs},
                           {"mean_remaining_energy", agg.mean_remaining_energy},
                           {"mean_variance", agg.mean_variance},
                           {"mean_lost", agg.mean_lost},
                           {"mean_delivered", agg.mean_delivered},
                           {"mean_dead_nodes", agg.mean_dead_nodes},
                           {"runs_with_delivery", agg.runs_with_delivery}};
        if (agg.runs_with_delivery > 0)
            protocols[name]["mean_delay"] = agg.mean_delay;
    }
    nlohmann::json j{{"protocols", protocols}, {"paired_seeds", summary.paired_seeds}};
    if (summary.paired_seeds > 0) {
        j["win_rates"] = {{"agem_lower_variance", summary.win_variance},
                          {"agem_lower_delay", summary.win_delay},
                          {"agem_lower_loss", summary.win_loss},
                          {"gpsr_higher_mean_energy", summary.win_mean_energy_gpsr}};
    }
    return j;
}

void print_summary_table(const ComparisonSummary& summary, std::ostream& out)
{
    out << std::left << std::setw(14) << "protocol" << std::right << std::setw(6) << "runs"
        << std::setw(14) << "mean_energy" << std::setw(14) << "variance" << std::setw(12)
        << "delay[s]" << std::setw(12) << "delivered" << std::setw(10) << "lost" << std::setw(10)
        << "dead" << '\n';
    for (const auto& [name, agg] : summary.by_protocol) {
        out << std::left << std::setw(14) << name << std::right << std::setw(6) << agg.runs
            << std::setw(14) << std::setprecision(6) << agg.mean_remaining_energy << std::setw(14)
            << agg.mean_variance << std::setw(12) << agg.mean_delay << std::setw(12)
            << agg.mean_delivered << std::setw(10) << agg.mean_lost << std::setw(10)
            << agg.mean_dead_nodes << '\n';
    }
    if (summary.paired_seeds > 0) {
        out << "agem vs gpsr over " << summary.paired_seeds
            << " paired seeds (ties count half):\n";
        out << "  lower variance: " << summary.win_variance
            << "  lower delay: " << summary.win_delay << "  lower loss: " << summary.win_loss
            << "  gpsr higher mean energy: " << summary.win_mean_energy_gpsr << '\n';
    }
}

} // namespace wmsn
