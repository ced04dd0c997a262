#include "wmsn/trace.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace wmsn {

using nlohmann::json;

const char* drop_reason_name(DropReason reason)
{
    switch (reason) {
    case DropReason::QueueOverflow: return "queue-overflow";
    case DropReason::VoidUnrecoverable: return "void-unrecoverable";
    case DropReason::PerimeterLoop: return "perimeter-loop";
    case DropReason::TtlExhausted: return "ttl-exhausted";
    case DropReason::NodeDeath: return "node-death";
    }
    return "?";
}

std::optional<DropReason> drop_reason_from_name(std::string_view name)
{
    if (name == "queue-overflow")
        return DropReason::QueueOverflow;
    if (name == "void-unrecoverable")
        return DropReason::VoidUnrecoverable;
    if (name == "perimeter-loop")
        return DropReason::PerimeterLoop;
    if (name == "ttl-exhausted")
        return DropReason::TtlExhausted;
    if (name == "node-death")
        return DropReason::NodeDeath;
    return std::nullopt;
}

namespace {

json record_to_json(const TraceRecord& rec)
{
    json j{{"t", rec.t}};
    switch (rec.kind) {
    case TraceKind::Image:
        j["ev"] = "image";
        j["node"] = rec.node;
        j["stream"] = rec.stream;
        j["count"] = rec.count;
        break;
    case TraceKind::Send:
        j["ev"] = "send";
        j["node"] = rec.node;
        j["peer"] = rec.peer;
        j["src"] = rec.source;
        j["stream"] = rec.stream;
        j["seq"] = rec.seq;
        j["hop"] = rec.hop;
        j["e"] = rec.energy;
        break;
    case TraceKind::Recv:
        j["ev"] = "recv";
        j["node"] = rec.node;
        j["peer"] = rec.peer;
        j["src"] = rec.source;
        j["stream"] = rec.stream;
        j["seq"] = rec.seq;
        j["e"] = rec.energy;
        break;
    case TraceKind::Deliver:
        j["ev"] = "deliver";
        j["node"] = rec.node;
        j["peer"] = rec.peer;
        j["src"] = rec.source;
        j["stream"] = rec.stream;
        j["seq"] = rec.seq;
        j["hop"] = rec.hop;
        j["created"] = rec.created_at;
        break;
    case TraceKind::Drop:
        j["ev"] = "drop";
        j["node"] = rec.node;
        j["src"] = rec.source;
        j["stream"] = rec.stream;
        j["seq"] = rec.seq;
        j["reason"] = drop_reason_name(rec.reason);
        break;
    case TraceKind::Beacon:
        j["ev"] = "beacon";
        j["node"] = rec.node;
        j["e"] = rec.energy;
        j["e_rx"] = rec.energy_rx;
        break;
    case TraceKind::Notice:
        j["ev"] = "notice";
        j["node"] = rec.node;
        j["e"] = rec.energy;
        j["e_rx"] = rec.energy_rx;
        break;
    case TraceKind::Death:
        j["ev"] = "death";
        j["node"] = rec.node;
        break;
    case TraceKind::Energy:
        j["ev"] = "energy";
        j["node"] = rec.node;
        j["e"] = rec.energy;
        j["alive"] = rec.alive;
        break;
    }
    return j;
}

TraceRecord record_from_json(const json& j)
{
    TraceRecord rec;
    rec.t = j.at("t").get<double>();
    const std::string ev = j.at("ev").get<std::string>();
    auto get_packet = [&](TraceRecord& r) {
        r.source = j.at("src").get<NodeId>();
        r.stream = j.at("stream").get<std::uint32_t>();
        r.seq = j.at("seq").get<std::uint32_t>();
    };
    if (ev == "image") {
        rec.kind = TraceKind::Image;
        rec.node = j.at("node").get<NodeId>();
        rec.stream = j.at("stream").get<std::uint32_t>();
        rec.count = j.at("count").get<int>();
    } else if (ev == "send") {
        rec.kind = TraceKind::Send;
        rec.node = j.at("node").get<NodeId>();
        rec.peer = j.at("peer").get<NodeId>();
        get_packet(rec);
        rec.hop = j.at("hop").get<std::uint32_t>();
        rec.energy = j.at("e").get<double>();
    } else if (ev == "recv") {
        rec.kind = TraceKind::Recv;
        rec.node = j.at("node").get<NodeId>();
        rec.peer = j.at("peer").get<NodeId>();
        get_packet(rec);
        rec.energy = j.at("e").get<double>();
    } else if (ev == "deliver") {
        rec.kind = TraceKind::Deliver;
        rec.node = j.at("node").get<NodeId>();
        rec.peer = j.at("peer").get<NodeId>();
        get_packet(rec);
        rec.hop = j.at("hop").get<std::uint32_t>();
        rec.created_at = j.at("created").get<double>();
    } else if (ev == "drop") {
        rec.kind = TraceKind::Drop;
        rec.node = j.at("node").get<NodeId>();
        get_packet(rec);
        auto reason = drop_reason_from_name(j.at("reason").get<std::string>());
        if (!reason)
            throw std::runtime_error("trace: unknown drop reason");
        rec.reason = *reason;
    } else if (ev == "beacon" || ev == "notice") {
        rec.kind = ev == "beacon" ? TraceKind::Beacon : TraceKind::Notice;
        rec.node = j.at("node").get<NodeId>();
        rec.energy = j.at("e").get<double>();
        rec.energy_rx = j.at("e_rx").get<double>();
    } else if (ev == "death") {
        rec.kind = TraceKind::Death;
        rec.node = j.at("node").get<NodeId>();
    } else if (ev == "energy") {
        rec.kind = TraceKind::Energy;
        rec.node = j.at("node").get<NodeId>();
        rec.energy = j.at("e").get<double>();
        rec.alive = j.at("alive").get<bool>();
    } else {
        throw std::runtime_error("trace: unknown record kind '" + ev + "'");
    }
    return rec;
}

} // namespace

void write_trace(const Trace& trace, std::ostream& out)
{
    json meta{{"ev", "meta"},
              {"version", trace.meta.version},
              {"seed", trace.meta.seed},
              {"protocol", trace.meta.protocol},
              {"digest", trace.meta.config_digest},
              {"config", config_to_json(trace.meta.config)},
              {"topology", topology_to_json(trace.meta.topology)}};
    out << meta.dump() << '\n';
    for (const TraceRecord& rec : trace.records)
        out << record_to_json(rec).dump() << '\n';
    json end{{"ev", "end"},
             {"generated", trace.stats.generated},
             {"delivered", trace.stats.delivered},
             {"in_flight", trace.stats.in_flight}};
    json drops = json::object();
    for (std::size_t i = 0; i < kDropReasonCount; ++i)
        drops[drop_reason_name(static_cast<DropReason>(i))] = trace.stats.drops[i];
    end["drops"] = drops;
    out << end.dump() << '\n';
}

std::string trace_to_string(const Trace& trace)
{
    std::ostringstream os;
    write_trace(trace, os);
    return os.str();
}

Trace read_trace(std::istream& in)
{
    Trace trace;
    std::string line;
    bool saw_meta = false, saw_end = false;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        const json j = json::parse(line);
        const std::string ev = j.at("ev").get<std::string>();
        if (ev == "meta") {
            trace.meta.version = j.at("version").get<int>();
            trace.meta.seed = j.at("seed").get<std::uint64_t>();
            trace.meta.protocol = j.at("protocol").get<std::string>();
            trace.meta.config_digest = j.at("digest").get<std::uint64_t>();
            trace.meta.config = config_from_json(j.at("config"));
            trace.meta.topology = topology_from_json(j.at("topology"));
            saw_meta = true;
        } else if (ev == "end") {
            trace.stats.generated = j.at("generated").get<long long>();
            trace.stats.delivered = j.at("delivered").get<long long>();
            trace.stats.in_flight = j.at("in_flight").get<long long>();
            for (std::size_t i = 0; i < kDropReasonCount; ++i)
                trace.stats.drops[i] =
                    j.at("drops").at(drop_reason_name(static_cast<DropReason>(i))).get<long long>();
            saw_end = true;
        } else {
            trace.records.push_back(record_from_json(j));
        }
    }
    if (!saw_meta)
        throw std::runtime_error("trace: missing meta record");
    if (!saw_end)
        throw std::runtime_error("trace: missing end record");
    return trace;
}

Trace load_trace(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("trace: cannot open '" + path + "'");
    return read_trace(in);
}

} // namespace wmsn
