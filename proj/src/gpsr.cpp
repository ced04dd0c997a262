#include "wmsn/gpsr.hpp"

#include <algorithm>
#include <cmath>

namespace wmsn {

std::optional<NodeId> greedy_next(Position u, std::span<const NeighborRecord> neighbors,
                                  Position d)
{
    const double self_dist = distance(u, d);
    const NeighborRecord* best = nullptr;
    double best_dist = self_dist;
    for (const NeighborRecord& rec : neighbors) {
        const double nd = distance(rec.position, d);
        if (nd < best_dist || (best && nd == best_dist && rec.id < best->id)) {
            best = &rec;
            best_dist = nd;
        }
    }
    if (!best)
        return std::nullopt;
    return best->id;
}

std::vector<NodeId> gabriel_planarize(Position self, std::span<const NeighborRecord> neighbors)
{
    std::vector<NodeId> kept;
    for (const NeighborRecord& rec : neighbors) {
        const Position mid{(self.x + rec.position.x) / 2.0, (self.y + rec.position.y) / 2.0};
        const double radius = distance(rec.position, mid);
        bool witnessed = false;
        for (const NeighborRecord& other : neighbors) {
            if (other.id == rec.id)
                continue;
            if (distance(other.position, mid) < radius) {
                witnessed = true;
                break;
            }
        }
        if (!witnessed)
            kept.push_back(rec.id);
    }
    std::sort(kept.begin(), kept.end());
    return kept;
}

namespace {

const NeighborRecord* find_rec(std::span<const NeighborRecord> recs, NodeId id)
{
    for (const NeighborRecord& rec : recs)
        if (rec.id == id)
            return &rec;
    return nullptr;
}

// Planar neighbor with the smallest counterclockwise angle from base_deg,
// skipping `exclude`. Zero offsets count unless they belong to `exclude`.
// Falls back to `exclude` itself when it is the only planar neighbor.
const NeighborRecord* next_ccw(Position self, std::span<const NeighborRecord> planar,
                               double base_deg, const NeighborRecord* exclude)
{
    const NeighborRecord* best = nullptr;
    double best_diff = 0.0;
    for (const NeighborRecord& rec : planar) {
        if (exclude && rec.id == exclude->id)
            continue;
        double diff = bearing_deg(self, rec.position) - base_deg;
        while (diff < 0.0)
            diff += 360.0;
        while (diff >= 360.0)
            diff -= 360.0;
        if (!best || diff < best_diff || (diff == best_diff && rec.id < best->id)) {
            best = &rec;
            best_diff = diff;
        }
    }
    if (!best)
        return exclude;
    return best;
}

} // namespace

PerimeterStep perimeter_next(NodeId self, Position self_pos,
                             std::span<const NeighborRecord> planar_neighbors, Position d,
                             GpsrPacketState state, std::optional<NodeId> arrived_from)
{
    if (planar_neighbors.empty())
        return {std::nullopt, state};

    const NeighborRecord* exclude = nullptr;
    double base_deg;
    if (arrived_from && (exclude = find_rec(planar_neighbors, *arrived_from)) != nullptr) {
        base_deg = bearing_deg(self_pos, exclude->position);
    } else {
        exclude = nullptr;
        base_deg = bearing_deg(self_pos, d);
    }

    const NeighborRecord* chosen = next_ccw(self_pos, planar_neighbors, base_deg, exclude);

    // Face changes: when the chosen edge properly crosses the segment from the
    // perimeter entry point to the destination, restart the face bookkeeping
    // and keep sweeping from that edge.
    std::size_t guard = planar_neighbors.size() + 1;
    while (guard-- > 0 &&
           segments_properly_intersect(self_pos, chosen->position, state.loop_entry_position, d)) {
        state.first_edge_sender = self;
        state.first_edge_receiver.reset();
        const NeighborRecord* next =
            next_ccw(self_pos, planar_neighbors, bearing_deg(self_pos, chosen->position), chosen);
        if (next == chosen)
            break;
        chosen = next;
    }

    if (state.first_edge_receiver && state.first_edge_sender == self &&
        *state.first_edge_receiver == chosen->id)
        return {std::nullopt, state}; // toured the face: destination unreachable

    if (!state.first_edge_receiver) {
        state.first_edge_sender = self;
        state.first_edge_receiver = chosen->id;
    }
    return {chosen->id, state};
}

RouteResult GpsrRouter::route(const NeighborTable& table, Position self_pos, DataPacket& pk,
                              std::optional<NodeId> arrived_from, double /*now*/)
{
    std::vector<NeighborRecord> neighbors;
    neighbors.reserve(table.size());
    for (const auto& [id, rec] : table.entries())
        neighbors.push_back(rec);

    GpsrPacketState state = pk.gpsr.value_or(GpsrPacketState{});
    const Position d = pk.dest_position;

    if (state.mode == GpsrMode::Perimeter &&
        distance(self_pos, d) < distance(state.loop_entry_position, d)) {
        state = GpsrPacketState{}; // progress made: back to greedy
    }

    bool entering_perimeter = false;
    if (state.mode == GpsrMode::Greedy) {
        if (auto next = greedy_next(self_pos, neighbors, d)) {
            pk.gpsr = state;
            return RouteResult{next, DropReason::VoidUnrecoverable, std::nullopt};
        }
        if (greedy_only_)
            return RouteResult{std::nullopt, DropReason::VoidUnrecoverable, std::nullopt};
        state.mode = GpsrMode::Perimeter;
        state.loop_entry_position = self_pos;
        state.first_edge_sender = self_;
        state.first_edge_receiver.reset();
        entering_perimeter = true;
    }

    std::vector<NodeId> planar_ids = gabriel_planarize(self_pos, neighbors);
    std::vector<NeighborRecord> planar;
    planar.reserve(planar_ids.size());
    for (NodeId id : planar_ids)
        planar.push_back(*table.find(id));

    const PerimeterStep step = perimeter_next(self_, self_pos, planar, d, state,
                                              entering_perimeter ? std::nullopt : arrived_from);
    if (!step.next_hop) {
        const DropReason reason =
            planar.empty() ? DropReason::VoidUnrecoverable : DropReason::PerimeterLoop;
        return RouteResult{std::nullopt, reason, std::nullopt};
    }
    pk.gpsr = step.state;
    return RouteResult{step.next_hop, DropReason::VoidUnrecoverable, std::nullopt};
}

} // namespace wmsn
