#pragma once

#include "wmsn/router.hpp"

#include <optional>
#include <span>
#include <vector>

namespace wmsn {

// Neighbor strictly closer to d than u itself, minimizing distance to d.
// nullopt is the local maximum ("void") case.
std::optional<NodeId> greedy_next(Position u, std::span<const NeighborRecord> neighbors,
                                  Position d);

// Gabriel-graph pruning with one-hop knowledge: an edge u->v survives when no
// other known neighbor lies strictly inside the circle with diameter uv.
// Returns ids in ascending order.
std::vector<NodeId> gabriel_planarize(Position self, std::span<const NeighborRecord> neighbors);

struct PerimeterStep {
    std::optional<NodeId> next_hop; // nullopt: first perimeter edge repeated, drop
    GpsrPacketState state;
};

// One right-hand-rule step over the planar neighbors. On entry to perimeter
// mode arrived_from is empty and the sweep starts from the line toward d;
// afterwards it starts from the incoming edge. Faces change when the chosen
// edge properly crosses the segment from the perimeter entry point to d.
PerimeterStep perimeter_next(NodeId self, Position self_pos,
                             std::span<const NeighborRecord> planar_neighbors, Position d,
                             GpsrPacketState state, std::optional<NodeId> arrived_from);

// Baseline router: greedy forwarding with perimeter recovery, or pure greedy
// with drops at local maxima when greedy_only is set. Per-packet mode state
// travels in the packet header.
class GpsrRouter : public Router {
public:
    GpsrRouter(NodeId self, bool greedy_only) : self_(self), greedy_only_(greedy_only) {}

    RouteResult route(const NeighborTable& table, Position self_pos, DataPacket& pk,
                      std::optional<NodeId> arrived_from, double now) override;

private:
    NodeId self_;
    bool greedy_only_;
};

} // namespace wmsn
