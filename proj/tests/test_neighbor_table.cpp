#include "wmsn/neighbor_table.hpp"

#include "doctest.h"

using namespace wmsn;

namespace {

Beacon beacon_from(NodeId sender, Position pos, double energy, double sink_dist, double t)
{
    return Beacon{sender, pos, energy, sink_dist, t};
}

} // namespace

TEST_CASE("apply_beacon inserts and refreshes")
{
    const LinkModel link;
    NeighborTable table(1);
    const Position self{0, 0};

    table.apply_beacon(beacon_from(2, {25, 0}, 1.0, 300.0, 0.0), self, 0.0, link);
    REQUIRE(table.size() == 1);
    const NeighborRecord* rec = table.find(2);
    REQUIRE(rec != nullptr);
    CHECK(rec->distance == doctest::Approx(25.0));
    // 250 kbps / sqrt(25)
    CHECK(rec->link_rate == doctest::Approx(50000.0));
    CHECK(rec->remaining_energy == doctest::Approx(1.0));

    table.apply_beacon(beacon_from(2, {25, 0}, 0.7, 300.0, 1.0), self, 1.0, link);
    REQUIRE(table.size() == 1);
    rec = table.find(2);
    CHECK(rec->remaining_energy == doctest::Approx(0.7));
    CHECK(rec->last_heard == doctest::Approx(1.0));
}

TEST_CASE("dead-end flag survives refreshes")
{
    const LinkModel link;
    NeighborTable table(1);
    table.apply_beacon(beacon_from(2, {10, 0}, 1.0, 300.0, 0.0), {0, 0}, 0.0, link);
    CHECK(table.mark_dead_end(2));
    table.apply_beacon(beacon_from(2, {10, 0}, 0.9, 300.0, 1.0), {0, 0}, 1.0, link);
    CHECK(table.find(2)->dead_end);
    // replaying the flag is a no-op
    CHECK(table.mark_dead_end(2));
    CHECK(table.find(2)->dead_end);
    CHECK_FALSE(table.mark_dead_end(42));
}

TEST_CASE("expire_stale")
{
    const LinkModel link;
    NeighborTable table(1);
    table.apply_beacon(beacon_from(2, {10, 0}, 1.0, 300.0, 0.0), {0, 0}, 0.0, link);
    table.apply_beacon(beacon_from(3, {20, 0}, 1.0, 300.0, 2.5), {0, 0}, 2.5, link);

    table.expire_stale(3.0, 3.0);
    CHECK(table.size() == 2); // both fresh enough

    table.expire_stale(3.5, 3.0);
    CHECK(table.size() == 1); // node 2 aged out
    CHECK(table.find(2) == nullptr);
    CHECK(table.find(3) != nullptr);
}

TEST_CASE("fresh entry survives any positive timeout")
{
    const LinkModel link;
    NeighborTable table(1);
    for (double timeout : {1e-6, 0.5, 3.0, 100.0}) {
        table.apply_beacon(beacon_from(2, {10, 0}, 1.0, 300.0, 5.0), {0, 0}, 5.0, link);
        table.expire_stale(5.0, timeout);
        CHECK(table.find(2) != nullptr);
    }
}

TEST_CASE("candidates_toward filters by progress and dead ends")
{
    const LinkModel link;
    NeighborTable table(1);
    const Position self{100, 90};

    CHECK(table.candidates_toward(390.0).empty());

    table.apply_beacon(beacon_from(2, {150, 90}, 1.0, 340.0, 0.0), self, 0.0, link);
    table.apply_beacon(beacon_from(3, {160, 90}, 1.0, 330.0, 0.0), self, 0.0, link);
    table.apply_beacon(beacon_from(4, {50, 90}, 1.0, 440.0, 0.0), self, 0.0, link);

    auto cands = table.candidates_toward(390.0);
    REQUIRE(cands.size() == 2); // node 4 is farther from the sink
    CHECK(cands[0].id == 2);
    CHECK(cands[1].id == 3);

    table.mark_dead_end(3);
    cands = table.candidates_toward(390.0);
    REQUIRE(cands.size() == 1);
    CHECK(cands[0].id == 2);

    // never the owner, never a non-improving node
    for (const NeighborRecord& rec : cands) {
        CHECK(rec.id != table.owner());
        CHECK(rec.distance_to_sink < 390.0);
        CHECK_FALSE(rec.dead_end);
    }
}

TEST_CASE("equal sink distance does not qualify")
{
    const LinkModel link;
    NeighborTable table(1);
    table.apply_beacon(beacon_from(2, {10, 0}, 1.0, 390.0, 0.0), {0, 0}, 0.0, link);
    CHECK(table.candidates_toward(390.0).empty());
}

TEST_CASE("passive touch only refreshes liveness")
{
    const LinkModel link;
    NeighborTable table(1);
    table.apply_beacon(beacon_from(2, {10, 0}, 1.0, 300.0, 0.0), {0, 0}, 0.0, link);
    table.touch(2, 4.0);
    CHECK(table.find(2)->last_heard == doctest::Approx(4.0));
    CHECK(table.find(2)->remaining_energy == doctest::Approx(1.0));
    table.touch(99, 4.0); // unknown: no-op
    CHECK(table.size() == 1);
}
