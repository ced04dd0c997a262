#pragma once

#include "wmsn/engine.hpp"
#include "wmsn/metrics.hpp"

#include <cmath>
#include <vector>

namespace wmsn::test {

// Neighbor record as a node at `self` would hold it after a beacon from a
// node at `pos`, with the sink at `sink`.
inline NeighborRecord make_record(NodeId id, Position pos, Position self, Position sink,
                                  double energy = 1.0, const LinkModel& link = LinkModel{})
{
    NeighborRecord rec;
    rec.id = id;
    rec.position = pos;
    rec.distance = distance(self, pos);
    rec.distance_to_sink = distance(pos, sink);
    rec.link_rate = rec.distance >= link.min_length ? link.rate(rec.distance) : link.base_rate;
    rec.remaining_energy = energy;
    rec.last_heard = 0.0;
    return rec;
}

inline Topology make_topology(const std::vector<Position>& positions)
{
    Topology topo;
    for (std::size_t i = 0; i < positions.size(); ++i)
        topo.nodes.push_back({static_cast<NodeId>(i), positions[i]});
    return topo;
}

// Scenario skeleton for fixture topologies: effectively infinite energy and
// queues unless the test tightens them.
inline ScenarioConfig fixture_config(const Topology& topo, Protocol protocol)
{
    ScenarioConfig cfg;
    cfg.node_count = static_cast<int>(topo.nodes.size());
    cfg.sink_position = topo.nodes.at(Topology::kSinkId).position;
    cfg.source_position = topo.nodes.at(Topology::kSourceId).position;
    cfg.protocol = protocol;
    cfg.initial_energy = 1e9;
    cfg.queue_capacity = 1000000;
    cfg.images.count = 1;
    cfg.images.size_bits = 1000.0;
    cfg.packet_size_bits = 1000.0;
    return cfg;
}

// Sink at (490, 90), source at (10, 90), a three-node dead-end spur that
// initially out-scores the open corridor, and the corridor itself. The first
// packet walks back across the spur; labeled nodes are avoided afterwards.
//
//   ids: 0 sink, 1 source, 2 A, 3 B, 4..6 dead-end spur, 7..11 corridor
inline Topology walkback_topology()
{
    return make_topology({
        {490, 90},  // 0 sink
        {10, 90},   // 1 source
        {70, 90},   // 2 A
        {130, 90},  // 3 B (branch point)
        {195, 125}, // 4 D1: in B's initial cone, best score
        {260, 160}, // 5 D2
        {310, 185}, // 6 D3: dead end (no neighbor closer to sink)
        {185, 40},  // 7 G1: open corridor
        {255, 45},  // 8 G2
        {325, 50},  // 9 G3
        {395, 60},  // 10 G4
        {450, 80},  // 11 G5
    });
}

// Greedy local maximum at node 2 with a four-node detour around the void.
//   ids: 0 sink, 1 source, 2 M (local max), 3 U, 4 L, 5 UR, 6 LR, 7 R
inline Topology square_void_topology()
{
    return make_topology({
        {400, 100}, // 0 sink
        {130, 100}, // 1 source
        {200, 100}, // 2 M: all neighbors farther from the sink
        {200, 165}, // 3 U
        {200, 35},  // 4 L
        {270, 150}, // 5 UR
        {270, 50},  // 6 LR
        {330, 100}, // 7 R
    });
}

// Source feeds a branch node with two disjoint equal-length corridors to the
// sink. ids: 0 sink, 1 source, 2 branch, 3..8 upper path, 9..14 lower path.
inline Topology two_branch_topology()
{
    return make_topology({
        {490, 90},  // 0 sink
        {10, 90},   // 1 source
        {60, 90},   // 2 branch
        {120, 140}, // 3 upper corridor
        {190, 140}, // 4
        {260, 140}, // 5
        {330, 140}, // 6
        {400, 135}, // 7
        {460, 115}, // 8
        {120, 40},  // 9 lower corridor, mirror image
        {190, 40},  // 10
        {260, 40},  // 11
        {330, 40},  // 12
        {400, 45},  // 13
        {460, 65},  // 14
    });
}

// Two-lane corridor aligned with the 40 m metric bins: greedy forwarding
// rides one lane with 80 m jumps and drains it to death, then repeats on the
// second lane, emptying whole bins; energy-aware rotation shares each
// column's load between lanes. Six off-corridor pads keep the remaining bins
// occupied and bring the count to 30 nodes.
inline Topology lattice_topology()
{
    std::vector<Position> positions;
    positions.push_back({490, 90}); // sink
    positions.push_back({10, 90});  // source
    for (int k = 0; k < 11; ++k) {
        const double x = 50.0 + 40.0 * k;
        positions.push_back({x, 80});  // lane A
        positions.push_back({x, 100}); // lane B
    }
    for (double x : {30.0, 100.0, 180.0, 260.0, 420.0, 485.0})
        positions.push_back({x, 190}); // isolated pads
    return make_topology(positions);
}

// Connected triangle far away from an unreachable sink: greedy reaches a
// local max and the perimeter walk must detect the loop and drop.
//   ids: 0 sink (isolated), 1 source, 2 A, 3 B, 4 C
inline Topology unreachable_sink_topology()
{
    return make_topology({
        {400, 100}, // 0 sink, out of everyone's range
        {100, 100}, // 1 source
        {170, 100}, // 2 A
        {235, 135}, // 3 B
        {235, 65},  // 4 C
    });
}

inline long long count_kind(const Trace& trace, TraceKind kind)
{
    long long n = 0;
    for (const TraceRecord& rec : trace.records)
        if (rec.kind == kind)
            ++n;
    return n;
}

// Sum of all energy deltas recorded in the trace (tx, rx and control).
inline double trace_energy_spent(const Trace& trace)
{
    double sum = 0.0;
    for (const TraceRecord& rec : trace.records) {
        switch (rec.kind) {
        case TraceKind::Send:
        case TraceKind::Recv:
            sum += rec.energy;
            break;
        case TraceKind::Beacon:
        case TraceKind::Notice:
            sum += rec.energy + rec.energy_rx;
            break;
        default:
            break;
        }
    }
    return sum;
}

// Sum over nodes of initial minus final (raw) remaining energy.
inline double node_energy_spent(const Trace& trace)
{
    double sum = 0.0;
    for (const TraceRecord& rec : trace.records)
        if (rec.kind == TraceKind::Energy)
            sum += trace.meta.config.initial_energy - rec.energy;
    return sum;
}

inline bool energy_conserved(const Trace& trace, double rel_tol = 1e-9)
{
    const double spent = trace_energy_spent(trace);
    const double drained = node_energy_spent(trace);
    const double scale = std::max({std::fabs(spent), std::fabs(drained), 1e-12});
    return std::fabs(spent - drained) / scale <= rel_tol ||
           std::fabs(spent - drained) < 1e-15;
}

// Every node id a (source, stream, seq) packet was sent to, in trace order.
inline std::vector<NodeId> packet_path(const Trace& trace, NodeId source, std::uint32_t stream,
                                       std::uint32_t seq)
{
    std::vector<NodeId> path;
    for (const TraceRecord& rec : trace.records)
        if (rec.kind == TraceKind::Send && rec.source == source && rec.stream == stream &&
            rec.seq == seq)
            path.push_back(rec.peer);
    return path;
}

} // namespace wmsn::test
