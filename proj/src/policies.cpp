#include "wmsn/policies.hpp"

#include <algorithm>
#include <cmath>

namespace wmsn {

namespace {

// Keep the candidate with the smallest metric, breaking ties on NodeId.
struct ArgBest {
    const NeighborRecord* rec = nullptr;
    double metric = 0.0;

    void offer_min(const NeighborRecord& r, double m)
    {
        if (!rec || m < metric || (m == metric && r.id < rec->id)) {
            rec = &r;
            metric = m;
        }
    }
    void offer_max(const NeighborRecord& r, double m) { offer_min(r, -m); }
};

std::optional<NodeId> id_of(const ArgBest& b)
{
    if (!b.rec)
        return std::nullopt;
    return b.rec->id;
}

} // namespace

std::optional<NodeId> select_next_hop(const PolicySpec& policy, Position u,
                                      std::span<const NeighborRecord> neighbors,
                                      Position d, RandomStream& rng)
{
    const double self_to_dest = distance(u, d);
    std::vector<const NeighborRecord*> cands;
    cands.reserve(neighbors.size());
    for (const NeighborRecord& rec : neighbors) {
        if (policy.require_progress && !(distance(rec.position, d) < self_to_dest))
            continue;
        cands.push_back(&rec);
    }
    if (cands.empty())
        return std::nullopt;

    switch (policy.kind) {
    case PolicyKind::Compass: {
        ArgBest best;
        for (const auto* r : cands)
            best.offer_min(*r, angular_offset(u, r->position, d));
        return id_of(best);
    }
    case PolicyKind::RandomCompass: {
        // Side minimizers about line ud; a node exactly on the line counts as
        // the counterclockwise side.
        ArgBest ccw_side, cw_side;
        for (const auto* r : cands) {
            const double s = signed_offset(u, r->position, d);
            if (s >= 0.0)
                ccw_side.offer_min(*r, s);
            else
                cw_side.offer_min(*r, -s);
        }
        if (ccw_side.rec && cw_side.rec && ccw_side.rec->id != cw_side.rec->id)
            return rng.coin() ? ccw_side.rec->id : cw_side.rec->id;
        return ccw_side.rec ? id_of(ccw_side) : id_of(cw_side);
    }
    case PolicyKind::Greedy: {
        ArgBest best;
        for (const auto* r : cands)
            best.offer_min(*r, distance(r->position, d));
        return id_of(best);
    }
    case PolicyKind::Mfr: {
        ArgBest best;
        for (const auto* r : cands)
            best.offer_max(*r, projection_advance(u, r->position, d));
        return id_of(best);
    }
    case PolicyKind::NearestNeighbor:
    case PolicyKind::FarthestNeighbor: {
        ArgBest best;
        for (const auto* r : cands) {
            if (angular_offset(u, r->position, d) > policy.alpha)
                continue;
            const double dist = distance(u, r->position);
            if (policy.kind == PolicyKind::NearestNeighbor)
                best.offer_min(*r, dist);
            else
                best.offer_max(*r, dist);
        }
        return id_of(best);
    }
    case PolicyKind::GreedyCompass: {
        // First neighbor met sweeping counterclockwise from ray ud, and first
        // met sweeping clockwise; forward to whichever is closer to d.
        ArgBest ccw_first, cw_first;
        for (const auto* r : cands) {
            const double s = signed_offset(u, r->position, d);
            const double ccw = s >= 0.0 ? s : s + 360.0;
            const double cw = ccw == 0.0 ? 0.0 : 360.0 - ccw;
            ccw_first.offer_min(*r, ccw);
            cw_first.offer_min(*r, cw);
        }
        const NeighborRecord* a = ccw_first.rec;
        const NeighborRecord* b = cw_first.rec;
        const double da = distance(a->position, d);
        const double db = distance(b->position, d);
        if (da < db || (da == db && a->id <= b->id))
            return a->id;
        return b->id;
    }
    }
    return std::nullopt;
}

std::optional<CompassSelection> adaptive_compass_set(std::span<const NeighborRecord> candidates,
                                                     Position u, Position d,
                                                     const AdaptiveCompassConfig& cfg)
{
    std::vector<std::pair<double, const NeighborRecord*>> offsets;
    offsets.reserve(candidates.size());
    for (const NeighborRecord& rec : candidates)
        offsets.emplace_back(angular_offset(u, rec.position, d), &rec);

    auto collect = [&](double alpha) {
        std::vector<NeighborRecord> sel;
        for (const auto& [off, rec] : offsets)
            if (off <= alpha)
                sel.push_back(*rec);
        std::sort(sel.begin(), sel.end(),
                  [](const NeighborRecord& a, const NeighborRecord& b) { return a.id < b.id; });
        return sel;
    };

    double alpha = cfg.initial_alpha;
    for (;;) {
        std::vector<NeighborRecord> sel = collect(alpha);
        if (static_cast<int>(sel.size()) >= cfg.min_candidates)
            return CompassSelection{std::move(sel), alpha};
        if (alpha >= cfg.max_alpha)
            break;
        alpha = std::min(alpha + cfg.step, cfg.max_alpha);
    }

    // Ladder exhausted short of min_candidates: proceed single-path through
    // whatever is visible at the widest angle; only an empty view is a hole.
    std::vector<NeighborRecord> sel = collect(cfg.max_alpha);
    if (sel.empty())
        return std::nullopt;
    return CompassSelection{std::move(sel), cfg.max_alpha};
}

} // namespace wmsn
