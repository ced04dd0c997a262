#pragma once

#include <cstdint>

namespace wmsn {

// Stable node identity. Ids are unique per topology and totally ordered;
// the smallest id wins every tie-break in the routing layers.
using NodeId = std::uint32_t;

struct Position {
    double x = 0.0;
    double y = 0.0;
};

// Euclidean distance in meters.
double distance(Position a, Position b);

// Unsigned angle at u between rays u->v and u->d, degrees in [0, 180].
// Throws std::invalid_argument when v == u or d == u.
double angular_offset(Position u, Position v, Position d);

// Signed variant, degrees in (-180, 180]: positive when v lies on the
// counterclockwise side of ray u->d.
double signed_offset(Position u, Position v, Position d);

// Scalar projection of u->v onto the unit vector u->d, meters (signed).
double projection_advance(Position u, Position v, Position d);

// Counterclockwise bearing of a->b from the +x axis, degrees in [0, 360).
double bearing_deg(Position a, Position b);

// True when segments ab and cd cross at a single point interior to both.
// Shared endpoints and collinear overlaps do not count.
bool segments_properly_intersect(Position a, Position b, Position c, Position d);

} // namespace wmsn
