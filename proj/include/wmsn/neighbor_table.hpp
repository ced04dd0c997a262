#pragma once

#include "wmsn/geometry.hpp"
#include "wmsn/link.hpp"

#include <map>
#include <vector>

namespace wmsn {

// Periodic one-hop broadcast advertising position, energy and sink distance.
struct Beacon {
    NodeId sender = 0;
    Position position;
    double remaining_energy = 0.0; // J
    double distance_to_sink = 0.0; // m, computed by the sender
    double timestamp = 0.0;        // s
};

struct NeighborRecord {
    NodeId id = 0;
    Position position;
    double distance = 0.0;         // m from the table owner
    double distance_to_sink = 0.0; // m
    double link_rate = 0.0;        // bits/s on the link owner<->neighbor
    double remaining_energy = 0.0; // J, as last advertised
    double last_heard = 0.0;       // s
    bool dead_end = false;         // neighbor declared itself unable to reach the sink
};

// A node's one-hop view, maintained by beacons. Owned and mutated by exactly
// one simulated node; the engine serializes all events, so no locking.
class NeighborTable {
public:
    NeighborTable() = default;
    explicit NeighborTable(NodeId owner) : owner_(owner) {}

    NodeId owner() const { return owner_; }

    // Insert or refresh the sender's entry. Distance is recomputed from the
    // positions, the link rate from the distance. A dead_end flag set on an
    // existing entry survives the refresh.
    void apply_beacon(const Beacon& beacon, Position self_position, double now,
                      const LinkModel& link);

    // Drop every entry with now - last_heard > timeout.
    void expire_stale(double now, double timeout);

    // Entries strictly closer to the sink than the owner, dead ends excluded.
    std::vector<NeighborRecord> candidates_toward(double self_distance_to_sink) const;

    // Flag the neighbor as a dead end. Returns false when the node is unknown
    // (the notice is then ignored). Idempotent.
    bool mark_dead_end(NodeId id);

    // Refresh last_heard only (passive refresh from data receptions).
    void touch(NodeId id, double now);

    const NeighborRecord* find(NodeId id) const;
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    // Id-ordered iteration; downstream tie-breaks rely on this determinism.
    const std::map<NodeId, NeighborRecord>& entries() const { return entries_; }

private:
    NodeId owner_ = 0;
    std::map<NodeId, NeighborRecord> entries_;
};

} // namespace wmsn
