#pragma once

#include "wmsn/messages.hpp"
#include "wmsn/neighbor_table.hpp"

#include <optional>
#include <string_view>

namespace wmsn {

enum class DropReason {
    QueueOverflow,     // drop-tail at a full transmit queue
    VoidUnrecoverable, // no forwarding option at a void
    PerimeterLoop,     // GPSR toured a face without progress
    TtlExhausted,      // hop budget spent
    NodeDeath,         // holder or addressed receiver died
};

const char* drop_reason_name(DropReason reason);
std::optional<DropReason> drop_reason_from_name(std::string_view name);

struct RouteResult {
    std::optional<NodeId> next_hop;                  // nullopt: drop the packet
    DropReason drop_reason = DropReason::VoidUnrecoverable;
    std::optional<DeadEndNotice> notice;             // broadcast before anything else
};

// Per-node forwarding logic. The engine calls route() for every data packet
// the node must relay; the packet may be mutated (hop state, guard set,
// protocol headers).
class Router {
public:
    virtual ~Router() = default;
    virtual RouteResult route(const NeighborTable& table, Position self_pos, DataPacket& pk,
                              std::optional<NodeId> arrived_from, double now) = 0;
};

} // namespace wmsn
