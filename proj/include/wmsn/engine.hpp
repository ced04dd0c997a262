#pragma once

#include "wmsn/messages.hpp"
#include "wmsn/router.hpp"
#include "wmsn/scenario.hpp"
#include "wmsn/trace.hpp"

#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <queue>
#include <vector>

namespace wmsn {

enum class EventKind { BeaconDue, PacketArrival, TransmitComplete, ImageDue, NodeDeath };

// Events dequeue in (time, sequence) order; sequence numbers are handed out
// at scheduling time, so the whole run is deterministic for a given seed.
struct Event {
    double time = 0.0;
    std::uint64_t sequence = 0;
    EventKind kind = EventKind::BeaconDue;
    NodeId node = 0;             // target node
    NodeId from = 0;             // PacketArrival: sender
    std::uint32_t image_index = 0;
    DataPacket packet;           // PacketArrival payload
};

struct QueuedPacket {
    DataPacket packet;
    NodeId to = 0;
    double enqueued_at = 0.0;
};

struct NodeRuntime {
    NodeId id = 0;
    Position position;
    double remaining_energy = 0.0;
    bool alive = true;
    bool death_logged = false;
    std::deque<QueuedPacket> queue; // waiting packets; the in-flight one is separate
    std::optional<QueuedPacket> transmitting;
    double busy_until = 0.0;
    double beacon_phase = 0.0;
    NeighborTable table;
    std::unique_ptr<Router> router; // null for the sink
};

// Number of equal-size fragments an image splits into. Sizes must divide
// exactly (enforced by config validation).
int fragment_image(double image_size_bits, double packet_size_bits);

// Runs one scenario to completion and returns the full event log. The
// topology comes from the override when given, else from cfg.topology_file,
// else from seeded rejection sampling.
Trace run_simulation(const ScenarioConfig& cfg, std::uint64_t seed,
                     const Topology* topology_override = nullptr);

class Simulation {
public:
    Simulation(const ScenarioConfig& cfg, std::uint64_t seed, Topology topology);

    Trace run();

private:
    void schedule(double time, Event ev);
    void handle_beacon_due(const Event& ev);
    void handle_image_due(const Event& ev);
    void handle_packet_arrival(Event& ev);
    void handle_transmit_complete(const Event& ev);
    void handle_node_death(const Event& ev);

    void route_and_enqueue(NodeRuntime& node, DataPacket pk, std::optional<NodeId> arrived_from,
                           double now);
    void enqueue_for_transmit(NodeRuntime& node, QueuedPacket qp, double now);
    void start_transmission(NodeRuntime& node, double now);
    void broadcast_notice(NodeRuntime& sender, const DeadEndNotice& notice, double now);
    // Deducts energy; a node hitting zero is marked dead immediately and its
    // cleanup event is scheduled at the current time.
    void charge(NodeRuntime& node, double joules, double now);
    void log_drop(const DataPacket& pk, NodeId where, DropReason reason, double now);

    ScenarioConfig cfg_;
    std::uint64_t seed_;
    Topology topology_;
    std::vector<NodeRuntime> nodes_; // indexed by NodeId
    Position sink_position_;

    struct EventLater {
        bool operator()(const Event& a, const Event& b) const
        {
            if (a.time != b.time)
                return a.time > b.time;
            return a.sequence > b.sequence;
        }
    };
    std::priority_queue<Event, std::vector<Event>, EventLater> events_;
    std::uint64_t next_sequence_ = 0;

    Trace trace_;
};

} // namespace wmsn
