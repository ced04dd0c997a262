#pragma once

#include "wmsn/energy.hpp"
#include "wmsn/policies.hpp"
#include "wmsn/router.hpp"

#include <map>
#include <span>
#include <vector>

namespace wmsn {

// Per-source forwarding memory: the empirical hop count H and the index j of
// the neighbor whose score sits closest to the set average.
struct StreamState {
    int hop_estimate = 0;  // H
    int average_index = 1; // j, 1-based
};

struct ScoredNeighbor {
    NodeId id = 0;
    double score = 0.0; // J
};

// 1-based index of the score closest to the arithmetic mean of a descending
// score list; ties go to the smaller index.
int average_score_index(std::span<const double> scores_descending);

// Adaptive compass selection followed by scoring, sorted by descending score
// with NodeId tie-break. nullopt propagates a hole.
std::optional<std::vector<ScoredNeighbor>> best_neighbor_set(
    std::span<const NeighborRecord> candidates, const RadioParams& radio, double packet_bits,
    Position u, Position d, const AdaptiveCompassConfig& compass);

struct SmartForwardChoice {
    int index = 1; // 1-based position in the best-neighbor set
    StreamState state;
};

// Hop-count-steered pick from a non-empty best set. Unknown sources go to the
// top; known sources are offset by how far the packet's hop count deviates
// from the stored estimate, clamped into [1, m] while re-centering H.
SmartForwardChoice smart_forward(std::optional<StreamState> state, std::uint32_t packet_hop_count,
                                 std::span<const double> scores_descending);

enum class WalkbackMetric { NearestToSink, NearestToSelf };

// AGEM node state machine: smart greedy forwarding plus walking-back void
// recovery with one-time dead-end labeling.
class AgemRouter : public Router {
public:
    AgemRouter(NodeId self, NodeId sink, RadioParams radio, AdaptiveCompassConfig compass,
               double packet_bits, WalkbackMetric walkback)
        : self_(self), sink_(sink), radio_(radio), compass_(compass), packet_bits_(packet_bits),
          walkback_(walkback)
    {
    }

    RouteResult route(const NeighborTable& table, Position self_pos, DataPacket& pk,
                      std::optional<NodeId> arrived_from, double now) override;

    // Void recovery: emit at most one dead-end notice per run, add self to
    // the packet's guard, and pick the walk-back fallback neighbor (nullopt
    // when the void is unrecoverable from here).
    std::pair<std::optional<DeadEndNotice>, std::optional<NodeId>> on_hole(
        const NeighborTable& table, DataPacket& pk, double now);

    bool dead_end_sent() const { return dead_end_sent_; }
    const std::map<NodeId, StreamState>& streams() const { return streams_; }

private:
    NodeId self_;
    NodeId sink_;
    RadioParams radio_;
    AdaptiveCompassConfig compass_;
    double packet_bits_;
    WalkbackMetric walkback_;
    bool dead_end_sent_ = false;
    std::map<NodeId, StreamState> streams_; // keyed by packet source
};

// Flag the notice sender in the receiving node's table; unknown senders are
// ignored. Replays are no-ops.
void handle_dead_end_notice(NeighborTable& table, const DeadEndNotice& notice);

} // namespace wmsn
