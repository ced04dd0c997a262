#include "wmsn/engine.hpp"

#include "wmsn/agem.hpp"
#include "wmsn/gpsr.hpp"

#include <cmath>
#include <stdexcept>

namespace wmsn {

namespace {

// Runs a catalog policy every hop; per-node seeded rng feeds RandomCompass.
class PolicyRouter : public Router {
public:
    PolicyRouter(PolicySpec policy, RandomStream rng) : policy_(policy), rng_(rng) {}

    RouteResult route(const NeighborTable& table, Position self_pos, DataPacket& pk,
                      std::optional<NodeId> /*arrived_from*/, double /*now*/) override
    {
        std::vector<NeighborRecord> neighbors;
        neighbors.reserve(table.size());
        for (const auto& [id, rec] : table.entries())
            neighbors.push_back(rec);
        auto next = select_next_hop(policy_, self_pos, neighbors, pk.dest_position, rng_);
        if (!next)
            return RouteResult{std::nullopt, DropReason::VoidUnrecoverable, std::nullopt};
        return RouteResult{next, DropReason::VoidUnrecoverable, std::nullopt};
    }

private:
    PolicySpec policy_;
    RandomStream rng_;
};

std::unique_ptr<Router> make_router(const ScenarioConfig& cfg, NodeId id, std::uint64_t seed)
{
    switch (cfg.protocol) {
    case Protocol::Agem:
        return std::make_unique<AgemRouter>(id, Topology::kSinkId, cfg.radio, cfg.compass,
                                            cfg.packet_size_bits, cfg.walkback);
    case Protocol::Gpsr:
        return std::make_unique<GpsrRouter>(id, /*greedy_only=*/false);
    case Protocol::GreedyOnly:
        return std::make_unique<GpsrRouter>(id, /*greedy_only=*/true);
    case Protocol::Policy:
        return std::make_unique<PolicyRouter>(cfg.policy, derive_stream(seed, "policy", id));
    }
    throw std::logic_error("make_router: unknown protocol");
}

} // namespace

int fragment_image(double image_size_bits, double packet_size_bits)
{
    const double frags = image_size_bits / packet_size_bits;
    if (frags != std::floor(frags) || frags < 1.0)
        throw std::invalid_argument("fragment_image: packet size must divide image size");
    return static_cast<int>(frags);
}

Simulation::Simulation(const ScenarioConfig& cfg, std::uint64_t seed, Topology topology)
    : cfg_(cfg), seed_(seed), topology_(std::move(topology))
{
    if (static_cast<int>(topology_.nodes.size()) != cfg_.node_count)
        throw ConfigError("node_count", "does not match the topology's node count");
    for (std::size_t i = 0; i < topology_.nodes.size(); ++i)
        if (topology_.nodes[i].id != static_cast<NodeId>(i))
            throw ConfigError("topology.file", "node ids must be contiguous from 0");

    sink_position_ = topology_.nodes[Topology::kSinkId].position;

    nodes_.reserve(topology_.nodes.size());
    for (const NodePlacement& placement : topology_.nodes) {
        NodeRuntime node;
        node.id = placement.id;
        node.position = placement.position;
        node.remaining_energy = cfg_.initial_energy;
        node.table = NeighborTable(placement.id);
        node.beacon_phase =
            derive_stream(seed_, "beacon-phase", placement.id).uniform() * cfg_.beacon.jitter *
            cfg_.beacon.interval;
        if (placement.id != Topology::kSinkId)
            node.router = make_router(cfg_, placement.id, seed_);
        nodes_.push_back(std::move(node));
    }

    trace_.meta.seed = seed_;
    trace_.meta.protocol = protocol_label(cfg_);
    trace_.meta.config = cfg_;
    trace_.meta.config.seed = seed_;
    trace_.meta.config_digest = config_digest(trace_.meta.config);
    trace_.meta.topology = topology_;
}

void Simulation::schedule(double time, Event ev)
{
    ev.time = time;
    ev.sequence = next_sequence_++;
    events_.push(std::move(ev));
}

Trace Simulation::run()
{
    // Bootstrap beacon round before any data traffic, then the image schedule.
    for (const NodeRuntime& node : nodes_)
        schedule(0.0, Event{.kind = EventKind::BeaconDue, .node = node.id});
    for (int i = 0; i < cfg_.images.count; ++i)
        schedule(i * cfg_.images.interval,
                 Event{.kind = EventKind::ImageDue, .image_index = static_cast<std::uint32_t>(i)});

    while (!events_.empty()) {
        Event ev = events_.top();
        events_.pop();
        if (ev.time > cfg_.horizon)
            break;
        switch (ev.kind) {
        case EventKind::BeaconDue: handle_beacon_due(ev); break;
        case EventKind::ImageDue: handle_image_due(ev); break;
        case EventKind::PacketArrival: handle_packet_arrival(ev); break;
        case EventKind::TransmitComplete: handle_transmit_complete(ev); break;
        case EventKind::NodeDeath: handle_node_death(ev); break;
        }
    }

    // Final energy samples and the accounting identity.
    long long physically_in_flight = 0;
    for (const NodeRuntime& node : nodes_) {
        physically_in_flight += static_cast<long long>(node.queue.size());
        if (node.transmitting)
            ++physically_in_flight;
        TraceRecord rec;
        rec.kind = TraceKind::Energy;
        rec.t = cfg_.horizon;
        rec.node = node.id;
        rec.energy = node.remaining_energy;
        rec.alive = node.alive;
        trace_.records.push_back(rec);
    }
    trace_.stats.in_flight =
        trace_.stats.generated - trace_.stats.delivered - trace_.stats.total_dropped();
    if (trace_.stats.in_flight != physically_in_flight)
        throw std::logic_error("engine: packet accounting identity violated");
    return std::move(trace_);
}

void Simulation::handle_beacon_due(const Event& ev)
{
    NodeRuntime& node = nodes_[ev.node];
    if (!node.alive)
        return;
    node.table.expire_stale(ev.time, cfg_.beacon_timeout());

    Beacon beacon{node.id, node.position, node.remaining_energy,
                  distance(node.position, sink_position_), ev.time};

    TraceRecord rec;
    rec.kind = TraceKind::Beacon;
    rec.t = ev.time;
    rec.node = node.id;
    if (cfg_.count_control_energy && node.id != Topology::kSinkId) {
        rec.energy = tx_energy(cfg_.radio, cfg_.beacon.size_bits, cfg_.radio.max_range);
        charge(node, rec.energy, ev.time);
    }
    for (NodeRuntime& other : nodes_) {
        if (other.id == node.id || !other.alive)
            continue;
        if (distance(node.position, other.position) > cfg_.radio.max_range)
            continue;
        other.table.apply_beacon(beacon, other.position, ev.time, cfg_.link);
        if (cfg_.count_control_energy && other.id != Topology::kSinkId) {
            const double e = rx_energy(cfg_.radio, cfg_.beacon.size_bits);
            charge(other, e, ev.time);
            rec.energy_rx += e;
        }
    }
    trace_.records.push_back(rec);

    // The bootstrap round runs at t = 0; the steady schedule starts at the
    // node's jittered phase.
    const double next = ev.time == 0.0 ? node.beacon_phase + cfg_.beacon.interval
                                       : ev.time + cfg_.beacon.interval;
    schedule(next, Event{.kind = EventKind::BeaconDue, .node = node.id});
}

void Simulation::handle_image_due(const Event& ev)
{
    NodeRuntime& source = nodes_[Topology::kSourceId];
    const int fragments = fragment_image(cfg_.images.size_bits, cfg_.packet_size_bits);

    TraceRecord rec;
    rec.kind = TraceKind::Image;
    rec.t = ev.time;
    rec.node = source.id;
    rec.stream = ev.image_index;
    rec.count = fragments;
    trace_.records.push_back(rec);
    trace_.stats.generated += fragments;

    for (int i = 0; i < fragments; ++i) {
        DataPacket pk;
        pk.source = source.id;
        pk.stream = ev.image_index;
        pk.seq = static_cast<std::uint32_t>(i);
        pk.dest_position = sink_position_;
        pk.size_bits = cfg_.packet_size_bits;
        pk.ttl = cfg_.packet_ttl();
        pk.created_at = ev.time;
        if (!source.alive) {
            log_drop(pk, source.id, DropReason::NodeDeath, ev.time);
            continue;
        }
        route_and_enqueue(source, std::move(pk), std::nullopt, ev.time);
    }
}

void Simulation::handle_packet_arrival(Event& ev)
{
    NodeRuntime& node = nodes_[ev.node];
    DataPacket& pk = ev.packet;
    if (!node.alive) {
        log_drop(pk, node.id, DropReason::NodeDeath, ev.time);
        return;
    }

    if (node.id == Topology::kSinkId) {
        // The sink is infrastructure: reception is free and final.
        TraceRecord rec;
        rec.kind = TraceKind::Deliver;
        rec.t = ev.time;
        rec.node = node.id;
        rec.peer = ev.from;
        rec.source = pk.source;
        rec.stream = pk.stream;
        rec.seq = pk.seq;
        rec.hop = pk.hop_count;
        rec.created_at = pk.created_at;
        trace_.records.push_back(rec);
        ++trace_.stats.delivered;
        return;
    }

    const double e = rx_energy(cfg_.radio, pk.size_bits);
    charge(node, e, ev.time);
    TraceRecord rec;
    rec.kind = TraceKind::Recv;
    rec.t = ev.time;
    rec.node = node.id;
    rec.peer = ev.from;
    rec.source = pk.source;
    rec.stream = pk.stream;
    rec.seq = pk.seq;
    rec.energy = e;
    trace_.records.push_back(rec);

    if (!node.alive) {
        // The reception that killed the node still completed, but the packet
        // dies with its holder.
        log_drop(pk, node.id, DropReason::NodeDeath, ev.time);
        return;
    }
    route_and_enqueue(node, std::move(pk), ev.from, ev.time);
}

void Simulation::route_and_enqueue(NodeRuntime& node, DataPacket pk,
                                   std::optional<NodeId> arrived_from, double now)
{
    node.table.expire_stale(now, cfg_.beacon_timeout());
    if (cfg_.passive_refresh && arrived_from)
        node.table.touch(*arrived_from, now);

    if (pk.ttl <= 0) {
        log_drop(pk, node.id, DropReason::TtlExhausted, now);
        return;
    }

    RouteResult result = node.router->route(node.table, node.position, pk, arrived_from, now);
    if (result.notice)
        broadcast_notice(node, *result.notice, now);
    if (!result.next_hop) {
        log_drop(pk, node.id, result.drop_reason, now);
        return;
    }

    pk.hop_count += 1;
    pk.ttl -= 1;
    enqueue_for_transmit(node, QueuedPacket{std::move(pk), *result.next_hop, now}, now);
}

void Simulation::enqueue_for_transmit(NodeRuntime& node, QueuedPacket qp, double now)
{
    if (!node.transmitting) {
        node.transmitting = std::move(qp);
        start_transmission(node, now);
        return;
    }
    if (static_cast<int>(node.queue.size()) < cfg_.queue_capacity) {
        node.queue.push_back(std::move(qp));
        return;
    }
    log_drop(qp.packet, node.id, DropReason::QueueOverflow, now);
}

void Simulation::start_transmission(NodeRuntime& node, double now)
{
    const QueuedPacket& qp = *node.transmitting;
    const double length = distance(node.position, nodes_[qp.to].position);
    const double duration = transmit_time(cfg_.link, length, qp.packet.size_bits);
    node.busy_until = now + duration;
    schedule(node.busy_until, Event{.kind = EventKind::TransmitComplete, .node = node.id});
}

void Simulation::handle_transmit_complete(const Event& ev)
{
    NodeRuntime& node = nodes_[ev.node];
    if (!node.alive || !node.transmitting)
        return; // aborted by death
    QueuedPacket qp = std::move(*node.transmitting);
    node.transmitting.reset();

    const double length = distance(node.position, nodes_[qp.to].position);
    const double e = tx_energy(cfg_.radio, qp.packet.size_bits, length);
    charge(node, e, ev.time);

    TraceRecord rec;
    rec.kind = TraceKind::Send;
    rec.t = ev.time;
    rec.node = node.id;
    rec.peer = qp.to;
    rec.source = qp.packet.source;
    rec.stream = qp.packet.stream;
    rec.seq = qp.packet.seq;
    rec.hop = qp.packet.hop_count;
    rec.energy = e;
    trace_.records.push_back(rec);

    // The transmission that kills the sender is still delivered.
    NodeRuntime& receiver = nodes_[qp.to];
    if (!receiver.alive) {
        log_drop(qp.packet, qp.to, DropReason::NodeDeath, ev.time);
    } else {
        schedule(ev.time, Event{.kind = EventKind::PacketArrival,
                                .node = qp.to,
                                .from = node.id,
                                .packet = std::move(qp.packet)});
    }

    if (node.alive && !node.queue.empty()) {
        node.transmitting = std::move(node.queue.front());
        node.queue.pop_front();
        start_transmission(node, ev.time);
    }
}

void Simulation::handle_node_death(const Event& ev)
{
    NodeRuntime& node = nodes_[ev.node];
    if (node.death_logged)
        return;
    node.death_logged = true;

    TraceRecord rec;
    rec.kind = TraceKind::Death;
    rec.t = ev.time;
    rec.node = node.id;
    trace_.records.push_back(rec);

    if (node.transmitting) {
        log_drop(node.transmitting->packet, node.id, DropReason::NodeDeath, ev.time);
        node.transmitting.reset();
    }
    for (const QueuedPacket& qp : node.queue)
        log_drop(qp.packet, node.id, DropReason::NodeDeath, ev.time);
    node.queue.clear();
}

void Simulation::broadcast_notice(NodeRuntime& sender, const DeadEndNotice& notice, double now)
{
    TraceRecord rec;
    rec.kind = TraceKind::Notice;
    rec.t = now;
    rec.node = sender.id;
    if (cfg_.count_control_energy) {
        rec.energy = tx_energy(cfg_.radio, cfg_.beacon.size_bits, cfg_.radio.max_range);
        charge(sender, rec.energy, now);
    }
    for (NodeRuntime& other : nodes_) {
        if (other.id == sender.id || !other.alive)
            continue;
        if (distance(sender.position, other.position) > cfg_.radio.max_range)
            continue;
        handle_dead_end_notice(other.table, notice);
        if (cfg_.count_control_energy && other.id != Topology::kSinkId) {
            const double e = rx_energy(cfg_.radio, cfg_.beacon.size_bits);
            charge(other, e, now);
            rec.energy_rx += e;
        }
    }
    trace_.records.push_back(rec);
}

void Simulation::charge(NodeRuntime& node, double joules, double now)
{
    if (node.id == Topology::kSinkId)
        return; // the sink's energy is not modeled
    node.remaining_energy -= joules;
    if (node.alive && node.remaining_energy <= 0.0) {
        node.alive = false;
        schedule(now, Event{.kind = EventKind::NodeDeath, .node = node.id});
    }
}

void Simulation::log_drop(const DataPacket& pk, NodeId where, DropReason reason, double now)
{
    TraceRecord rec;
    rec.kind = TraceKind::Drop;
    rec.t = now;
    rec.node = where;
    rec.source = pk.source;
    rec.stream = pk.stream;
    rec.seq = pk.seq;
    rec.reason = reason;
    trace_.records.push_back(rec);
    ++trace_.stats.drops[static_cast<std::size_t>(reason)];
}

Trace run_simulation(const ScenarioConfig& cfg, std::uint64_t seed,
                     const Topology* topology_override)
{
    validate(cfg);
    Topology topo;
    if (topology_override) {
        topo = *topology_override;
    } else if (!cfg.topology_file.empty()) {
        topo = load_topology(cfg.topology_file);
    } else {
        RandomStream rng = derive_stream(seed, "topology");
        topo = generate_topology(cfg, rng);
    }
    Simulation sim(cfg, seed, std::move(topo));
    return sim.run();
}

} // namespace wmsn
