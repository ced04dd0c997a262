#pragma once

#include "wmsn/geometry.hpp"

#include <cstdint>
#include <optional>
#include <set>

namespace wmsn {

enum class GpsrMode { Greedy, Perimeter };

// GPSR header state carried by each packet while the baseline protocol owns
// it. loop_entry_position and the first-edge fields are meaningful only in
// Perimeter mode.
struct GpsrPacketState {
    GpsrMode mode = GpsrMode::Greedy;
    Position loop_entry_position;               // where perimeter mode began
    NodeId first_edge_sender = 0;               // current face's first edge, for loop detection
    std::optional<NodeId> first_edge_receiver;
};

struct DataPacket {
    NodeId source = 0;
    std::uint32_t stream = 0; // image index; fragments of one image share it
    std::uint32_t seq = 0;    // fragment index within the stream
    std::uint32_t hop_count = 0;
    Position dest_position;
    double size_bits = 0.0;
    int ttl = 0;
    double created_at = 0.0;
    // Nodes that declared a dead end while this packet was in flight; never
    // forwarded back into.
    std::set<NodeId> traversal_guard;
    std::optional<GpsrPacketState> gpsr;
};

// One-time broadcast: the sender cannot make progress toward the sink and
// must not be considered a forwarder for it anymore.
struct DeadEndNotice {
    NodeId sender = 0;
    NodeId sink = 0;
    double timestamp = 0.0;
};

} // namespace wmsn
