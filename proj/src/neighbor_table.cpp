#include "wmsn/neighbor_table.hpp"

namespace wmsn {

void NeighborTable::apply_beacon(const Beacon& beacon, Position self_position, double now,
                                 const LinkModel& link)
{
    if (beacon.sender == owner_)
        return;
    auto [it, inserted] = entries_.try_emplace(beacon.sender);
    NeighborRecord& rec = it->second;
    const bool was_dead_end = !inserted && rec.dead_end;
    rec.id = beacon.sender;
    rec.position = beacon.position;
    rec.distance = distance(self_position, beacon.position);
    rec.distance_to_sink = beacon.distance_to_sink;
    rec.link_rate = link.rate(rec.distance);
    rec.remaining_energy = beacon.remaining_energy;
    rec.last_heard = now;
    rec.dead_end = was_dead_end;
}

void NeighborTable::expire_stale(double now, double timeout)
{
    for (auto it = entries_.begin(); it != entries_.end();) {
        if (now - it->second.last_heard > timeout)
            it = entries_.erase(it);
        else
            ++it;
    }
}

std::vector<NeighborRecord> NeighborTable::candidates_toward(double self_distance_to_sink) const
{
    std::vector<NeighborRecord> out;
    for (const auto& [id, rec] : entries_) {
        if (!rec.dead_end && rec.distance_to_sink < self_distance_to_sink)
            out.push_back(rec);
    }
    return out;
}

bool NeighborTable::mark_dead_end(NodeId id)
{
    auto it = entries_.find(id);
    if (it == entries_.end())
        return false;
    it->second.dead_end = true;
    return true;
}

void NeighborTable::touch(NodeId id, double now)
{
    auto it = entries_.find(id);
    if (it != entries_.end())
        it->second.last_heard = now;
}

const NeighborRecord* NeighborTable::find(NodeId id) const
{
    auto it = entries_.find(id);
    return it == entries_.end() ? nullptr : &it->second;
}

} // namespace wmsn
