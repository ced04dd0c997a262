#include "wmsn/agem.hpp"

#include <algorithm>
#include <cmath>

namespace wmsn {

int average_score_index(std::span<const double> scores_descending)
{
    double mean = 0.0;
    double scale = 1.0;
    for (double s : scores_descending) {
        mean += s;
        scale = std::max(scale, std::fabs(s));
    }
    mean /= static_cast<double>(scores_descending.size());

    // Rounding noise must not decide ties: distances within tol count as
    // equal and the smaller index (better neighbor) wins.
    const double tol = 1e-9 * std::max(scale, std::fabs(mean));
    int best = 1;
    double best_dist = std::fabs(scores_descending[0] - mean);
    for (std::size_t i = 1; i < scores_descending.size(); ++i) {
        const double dist = std::fabs(scores_descending[i] - mean);
        if (dist < best_dist - tol) {
            best_dist = dist;
            best = static_cast<int>(i) + 1;
        }
    }
    return best;
}

std::optional<std::vector<ScoredNeighbor>> best_neighbor_set(
    std::span<const NeighborRecord> candidates, const RadioParams& radio, double packet_bits,
    Position u, Position d, const AdaptiveCompassConfig& compass)
{
    auto selection = adaptive_compass_set(candidates, u, d, compass);
    if (!selection)
        return std::nullopt;

    std::vector<ScoredNeighbor> best;
    best.reserve(selection->selected.size());
    for (const NeighborRecord& rec : selection->selected)
        best.push_back({rec.id, neighbor_score(radio, rec.remaining_energy, rec.distance, packet_bits)});
    std::sort(best.begin(), best.end(), [](const ScoredNeighbor& a, const ScoredNeighbor& b) {
        if (a.score != b.score)
            return a.score > b.score;
        return a.id < b.id;
    });
    return best;
}

SmartForwardChoice smart_forward(std::optional<StreamState> state, std::uint32_t packet_hop_count,
                                 std::span<const double> scores_descending)
{
    const int m = static_cast<int>(scores_descending.size());
    const int j = average_score_index(scores_descending);

    if (!state) {
        // First packet from this source: default forward to the best node.
        return {1, StreamState{static_cast<int>(packet_hop_count), j}};
    }

    int h = state->hop_estimate;
    const int delta = h - static_cast<int>(packet_hop_count);
    int index = j + delta;
    if (index <= 0) {
        h = h - index + 1;
        index = 1;
    } else if (index > m) {
        h = h - index + m;
        index = m;
    }
    return {index, StreamState{h, j}};
}

RouteResult AgemRouter::route(const NeighborTable& table, Position self_pos, DataPacket& pk,
                              std::optional<NodeId> /*arrived_from*/, double now)
{
    const double self_dist = distance(self_pos, pk.dest_position);
    std::vector<NeighborRecord> candidates = table.candidates_toward(self_dist);
    std::erase_if(candidates,
                  [&](const NeighborRecord& rec) { return pk.traversal_guard.contains(rec.id); });

    auto best = best_neighbor_set(candidates, radio_, packet_bits_, self_pos, pk.dest_position,
                                  compass_);
    if (!best) {
        auto [notice, fallback] = on_hole(table, pk, now);
        RouteResult result;
        result.notice = notice;
        if (fallback)
            result.next_hop = fallback;
        else
            result.drop_reason = DropReason::VoidUnrecoverable;
        return result;
    }

    std::vector<double> scores;
    scores.reserve(best->size());
    for (const ScoredNeighbor& sn : *best)
        scores.push_back(sn.score);

    std::optional<StreamState> state;
    if (auto it = streams_.find(pk.source); it != streams_.end())
        state = it->second;
    const SmartForwardChoice choice = smart_forward(state, pk.hop_count, scores);
    streams_[pk.source] = choice.state;

    RouteResult result;
    result.next_hop = (*best)[static_cast<std::size_t>(choice.index - 1)].id;
    return result;
}

std::pair<std::optional<DeadEndNotice>, std::optional<NodeId>> AgemRouter::on_hole(
    const NeighborTable& table, DataPacket& pk, double now)
{
    std::optional<DeadEndNotice> notice;
    if (!dead_end_sent_) {
        notice = DeadEndNotice{self_, sink_, now};
        dead_end_sent_ = true;
    }

    pk.traversal_guard.insert(self_);

    const NeighborRecord* fallback = nullptr;
    for (const auto& [id, rec] : table.entries()) {
        if (rec.dead_end || pk.traversal_guard.contains(id))
            continue;
        if (!fallback) {
            fallback = &rec;
            continue;
        }
        const double lhs = walkback_ == WalkbackMetric::NearestToSink ? rec.distance_to_sink
                                                                      : rec.distance;
        const double rhs = walkback_ == WalkbackMetric::NearestToSink ? fallback->distance_to_sink
                                                                      : fallback->distance;
        if (lhs < rhs || (lhs == rhs && rec.id < fallback->id))
            fallback = &rec;
    }

    if (!fallback)
        return {notice, std::nullopt};
    return {notice, fallback->id};
}

void handle_dead_end_notice(NeighborTable& table, const DeadEndNotice& notice)
{
    table.mark_dead_end(notice.sender);
}

} // namespace wmsn
