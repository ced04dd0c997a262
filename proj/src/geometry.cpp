#include "wmsn/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wmsn {

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

} // namespace

double distance(Position a, Position b)
{
    return std::hypot(b.x - a.x, b.y - a.y);
}

double signed_offset(Position u, Position v, Position d)
{
    const double vx = v.x - u.x, vy = v.y - u.y;
    const double dx = d.x - u.x, dy = d.y - u.y;
    if ((vx == 0.0 && vy == 0.0) || (dx == 0.0 && dy == 0.0))
        throw std::invalid_argument("signed_offset: degenerate ray (v == u or d == u)");
    // atan2 of cross/dot keeps the result well conditioned near 0 and 180.
    const double cross = dx * vy - dy * vx;
    const double dot = dx * vx + dy * vy;
    double deg = std::atan2(cross, dot) * kRadToDeg;
    if (deg == -180.0)
        deg = 180.0;
    return deg;
}

double angular_offset(Position u, Position v, Position d)
{
    return std::fabs(signed_offset(u, v, d));
}

double projection_advance(Position u, Position v, Position d)
{
    const double dx = d.x - u.x, dy = d.y - u.y;
    const double len = std::hypot(dx, dy);
    if (len == 0.0)
        throw std::invalid_argument("projection_advance: degenerate ray (d == u)");
    const double vx = v.x - u.x, vy = v.y - u.y;
    return (vx * dx + vy * dy) / len;
}

double bearing_deg(Position a, Position b)
{
    double deg = std::atan2(b.y - a.y, b.x - a.x) * kRadToDeg;
    if (deg < 0.0)
        deg += 360.0;
    return deg;
}

namespace {

// Sign of the signed area of triangle (a, b, c).
int orientation(Position a, Position b, Position c)
{
    const double area = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
    if (area > 0.0)
        return 1;
    if (area < 0.0)
        return -1;
    return 0;
}

} // namespace

bool segments_properly_intersect(Position a, Position b, Position c, Position d)
{
    const int o1 = orientation(a, b, c);
    const int o2 = orientation(a, b, d);
    const int o3 = orientation(c, d, a);
    const int o4 = orientation(c, d, b);
    return o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0 && o1 != o2 && o3 != o4;
}

} // namespace wmsn
