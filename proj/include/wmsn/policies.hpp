#pragma once

#include "wmsn/geometry.hpp"
#include "wmsn/neighbor_table.hpp"
#include "wmsn/rng.hpp"

#include <optional>
#include <span>
#include <vector>

namespace wmsn {

// Catalog of localized next-hop selection rules.
enum class PolicyKind {
    Compass,          // smallest angular offset from the line of sight
    RandomCompass,    // coin flip between the two per-side angle minimizers
    Greedy,           // smallest distance to the destination
    Mfr,              // largest forward projection onto the line of sight
    NearestNeighbor,  // nearest node within the alpha cone
    FarthestNeighbor, // farthest node within the alpha cone
    GreedyCompass,    // closer-to-destination of the two rotational sweep minimizers
};

struct PolicySpec {
    PolicyKind kind = PolicyKind::Greedy;
    double alpha = 180.0;          // view-cone half angle for NN/FN, degrees
    bool require_progress = false; // pre-filter to nodes strictly closer to d
};

// Apply the policy at position u over the given neighbors toward destination
// d. Returns the winner's id, or nullopt when the policy's candidate set is
// empty. Ties break on the smaller NodeId. Only RandomCompass consumes rng,
// and only when both side minimizers exist and differ.
std::optional<NodeId> select_next_hop(const PolicySpec& policy, Position u,
                                      std::span<const NeighborRecord> neighbors,
                                      Position d, RandomStream& rng);

// Widening view cone: start at initial_alpha and grow by step until at least
// min_candidates neighbors fall inside, capping at max_alpha.
struct AdaptiveCompassConfig {
    double initial_alpha = 30.0; // degrees, half angle of the cone
    double step = 10.0;
    double max_alpha = 180.0;
    int min_candidates = 2;
};

struct CompassSelection {
    std::vector<NeighborRecord> selected; // id order
    double final_alpha = 0.0;
};

// Run the widening ladder over candidates (already filtered to strictly
// closer-to-sink, non-dead-end nodes). Returns the smallest ladder alpha
// reaching min_candidates together with exactly the in-cone candidates; if
// the ladder exhausts, all candidates visible at max_alpha (degenerate
// single-path case); nullopt (a hole) when none are visible at all.
std::optional<CompassSelection> adaptive_compass_set(std::span<const NeighborRecord> candidates,
                                                     Position u, Position d,
                                                     const AdaptiveCompassConfig& cfg);

} // namespace wmsn
