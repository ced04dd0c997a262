#pragma once

#include "wmsn/router.hpp"
#include "wmsn/scenario.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace wmsn {

enum class TraceKind {
    Image,   // source produced an image and fragmented it
    Send,    // data transmission completed at the sender
    Recv,    // data reception charged at a relay
    Deliver, // data packet arrived at the sink
    Drop,    // packet lost, reason says why
    Beacon,  // one-hop broadcast of a beacon
    Notice,  // one-hop broadcast of a dead-end notice
    Death,   // node ran out of energy
    Energy,  // final per-node energy sample
};

// One line of the run log. Field use depends on kind; unused fields hold
// their zero values and are not serialized.
struct TraceRecord {
    TraceKind kind = TraceKind::Image;
    double t = 0.0;
    NodeId node = 0; // acting node (sender, receiver, dier, sampled node)
    NodeId peer = 0; // counterpart (receiver of a send, sender of a recv)
    NodeId source = 0;
    std::uint32_t stream = 0;
    std::uint32_t seq = 0;
    std::uint32_t hop = 0;
    double energy = 0.0;     // energy delta, or final sample for Energy
    double energy_rx = 0.0;  // summed receiver charge for broadcasts
    double created_at = 0.0; // Deliver: packet creation time
    int count = 0;           // Image: fragment count
    bool alive = true;       // Energy: node alive at the end
    DropReason reason = DropReason::QueueOverflow;
};

constexpr std::size_t kDropReasonCount = 5;

struct RunStats {
    long long generated = 0;
    long long delivered = 0;
    long long in_flight = 0; // still queued or on the air at the horizon
    std::array<long long, kDropReasonCount> drops{};

    long long total_dropped() const
    {
        long long sum = 0;
        for (long long d : drops)
            sum += d;
        return sum;
    }
};

struct TraceMeta {
    int version = 1;
    std::uint64_t seed = 0;
    std::string protocol;
    std::uint64_t config_digest = 0;
    ScenarioConfig config;
    Topology topology;
};

// Append-only event log of one run. Identical (config, seed) pairs produce
// bit-identical serialized traces.
struct Trace {
    TraceMeta meta;
    std::vector<TraceRecord> records;
    RunStats stats;
};

// Line-delimited JSON, one record per line, meta record first, end record
// (the run counters) last.
void write_trace(const Trace& trace, std::ostream& out);
std::string trace_to_string(const Trace& trace);
Trace read_trace(std::istream& in);
Trace load_trace(const std::string& path);

} // namespace wmsn
