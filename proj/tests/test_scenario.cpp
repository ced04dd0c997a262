#include "wmsn/scenario.hpp"

#include "doctest.h"

#include <stdexcept>

#include <sstream>

using namespace wmsn;

TEST_CASE("defaults match the reference simulation parameters")
{
    const ScenarioConfig cfg;
    CHECK(cfg.field.width == 500.0);
    CHECK(cfg.field.height == 200.0);
    CHECK(cfg.sink_position.x == 490.0);
    CHECK(cfg.sink_position.y == 90.0);
    CHECK(cfg.source_position.x == 10.0);
    CHECK(cfg.source_position.y == 90.0);
    CHECK(cfg.images.count == 30);
    CHECK(cfg.images.interval == 1.0);
    CHECK(cfg.radio.max_range == 80.0);
    CHECK(cfg.link.base_rate == 250000.0);
    CHECK(cfg.compass.initial_alpha == 30.0);
    CHECK(cfg.compass.step == 10.0);
    CHECK(cfg.compass.max_alpha == 180.0);
    CHECK(cfg.compass.min_candidates == 2);
    CHECK(cfg.fragments_per_image() == 10);
    CHECK_NOTHROW(validate(cfg));
}

TEST_CASE("config file parsing")
{
    std::istringstream in(R"(
# comment line
protocol = gpsr
node_count = 50
images.size = 20000   # trailing comment
packet.size = 2000
energy.initial = 2.5
walkback.metric = self
seed = 42
)");
    const ScenarioConfig cfg = parse_config(in);
    CHECK(cfg.protocol == Protocol::Gpsr);
    CHECK(cfg.node_count == 50);
    CHECK(cfg.images.size_bits == 20000.0);
    CHECK(cfg.packet_size_bits == 2000.0);
    CHECK(cfg.initial_energy == 2.5);
    CHECK(cfg.walkback == WalkbackMetric::NearestToSelf);
    CHECK(cfg.seed == 42);
    ScenarioConfig alias = cfg;
    apply_config_key(alias, "walkback_metric", "sink"); // undotted alias
    CHECK(alias.walkback == WalkbackMetric::NearestToSink);
    CHECK_NOTHROW(validate(cfg));
}

TEST_CASE("unknown keys and bad values are rejected by name")
{
    ScenarioConfig cfg;
    CHECK_THROWS_WITH_AS(apply_config_key(cfg, "no.such.key", "1"),
                         doctest::Contains("no.such.key"), ConfigError);
    CHECK_THROWS_WITH_AS(apply_config_key(cfg, "node_count", "many"),
                         doctest::Contains("node_count"), ConfigError);
    CHECK_THROWS_WITH_AS(apply_config_key(cfg, "protocol", "osrp"), doctest::Contains("protocol"),
                         ConfigError);
    std::istringstream in("images.count 30\n");
    CHECK_THROWS_AS(parse_config(in), ConfigError);
}

TEST_CASE("validation names the offending key")
{
    ScenarioConfig cfg;
    cfg.packet_size_bits = 333.0; // does not divide 10000
    try {
        validate(cfg);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.key() == "packet.size");
    }

    ScenarioConfig bad_alpha;
    bad_alpha.compass.initial_alpha = 200.0;
    CHECK_THROWS_AS(validate(bad_alpha), ConfigError);

    ScenarioConfig bad_sink;
    bad_sink.sink_position = {600.0, 90.0};
    CHECK_THROWS_AS(validate(bad_sink), ConfigError);

    ScenarioConfig one_node;
    one_node.node_count = 1;
    CHECK_THROWS_AS(validate(one_node), ConfigError);

    ScenarioConfig wide_cone;
    apply_config_key(wide_cone, "protocol", "nn:200");
    CHECK_THROWS_AS(validate(wide_cone), ConfigError);
}

TEST_CASE("policy protocols parse with parameters")
{
    ScenarioConfig cfg;
    apply_config_key(cfg, "protocol", "nn:45");
    CHECK(cfg.protocol == Protocol::Policy);
    CHECK(cfg.policy.kind == PolicyKind::NearestNeighbor);
    CHECK(cfg.policy.alpha == 45.0);
    CHECK(protocol_label(cfg) == "nn:45");

    apply_config_key(cfg, "protocol", "greedy-compass");
    CHECK(cfg.policy.kind == PolicyKind::GreedyCompass);
    CHECK(protocol_label(cfg) == "greedy-compass");
}

TEST_CASE("config json round trip is exact")
{
    ScenarioConfig cfg;
    cfg.node_count = 80;
    cfg.initial_energy = 0.731;
    cfg.beacon.jitter = 0.05;
    cfg.protocol = Protocol::Gpsr;
    cfg.seed = 12345;
    const nlohmann::json j = config_to_json(cfg);
    const ScenarioConfig back = config_from_json(j);
    CHECK(config_to_json(back) == j);
    CHECK(config_digest(back) == config_digest(cfg));
}

TEST_CASE("topology generation")
{
    SUBCASE("two nodes are exactly sink and source")
    {
        ScenarioConfig cfg;
        cfg.node_count = 2;
        RandomStream rng = derive_stream(1, "topology");
        const Topology topo = generate_topology(cfg, rng);
        REQUIRE(topo.nodes.size() == 2);
        CHECK(topo.nodes[0].id == Topology::kSinkId);
        CHECK(topo.nodes[0].position.x == 490.0);
        CHECK(topo.nodes[0].position.y == 90.0);
        CHECK(topo.nodes[1].id == Topology::kSourceId);
        CHECK(topo.nodes[1].position.x == 10.0);
        CHECK(topo.nodes[1].position.y == 90.0);
    }
    SUBCASE("same seed, same topology")
    {
        ScenarioConfig cfg;
        cfg.node_count = 100;
        RandomStream a = derive_stream(9, "topology");
        RandomStream b = derive_stream(9, "topology");
        const Topology ta = generate_topology(cfg, a);
        const Topology tb = generate_topology(cfg, b);
        REQUIRE(ta.nodes.size() == tb.nodes.size());
        for (std::size_t i = 0; i < ta.nodes.size(); ++i) {
            CHECK(ta.nodes[i].position.x == tb.nodes[i].position.x);
            CHECK(ta.nodes[i].position.y == tb.nodes[i].position.y);
        }
    }
    SUBCASE("minimum separation holds for every pair")
    {
        ScenarioConfig cfg;
        cfg.node_count = 100;
        for (std::uint64_t seed : {1ULL, 2ULL, 3ULL, 4ULL}) {
            RandomStream rng = derive_stream(seed, "topology");
            const Topology topo = generate_topology(cfg, rng);
            for (std::size_t i = 0; i < topo.nodes.size(); ++i) {
                for (std::size_t j = i + 1; j < topo.nodes.size(); ++j)
                    CHECK(distance(topo.nodes[i].position, topo.nodes[j].position) >= 1.0);
                CHECK(topo.nodes[i].position.x >= 0.0);
                CHECK(topo.nodes[i].position.x <= cfg.field.width);
                CHECK(topo.nodes[i].position.y >= 0.0);
                CHECK(topo.nodes[i].position.y <= cfg.field.height);
            }
        }
    }
    SUBCASE("overdense requests fail with a bounded search")
    {
        ScenarioConfig cfg;
        cfg.field = {10.0, 10.0};
        cfg.sink_position = {9.0, 5.0};
        cfg.source_position = {1.0, 5.0};
        cfg.node_count = 500;
        RandomStream rng = derive_stream(1, "topology");
        CHECK_THROWS_AS(generate_topology(cfg, rng), std::runtime_error);
    }
}

TEST_CASE("topology json round trip")
{
    ScenarioConfig cfg;
    cfg.node_count = 20;
    RandomStream rng = derive_stream(3, "topology");
    const Topology topo = generate_topology(cfg, rng);
    const Topology back = topology_from_json(topology_to_json(topo));
    REQUIRE(back.nodes.size() == topo.nodes.size());
    for (std::size_t i = 0; i < topo.nodes.size(); ++i) {
        CHECK(back.nodes[i].id == topo.nodes[i].id);
        CHECK(back.nodes[i].position.x == topo.nodes[i].position.x);
        CHECK(back.nodes[i].position.y == topo.nodes[i].position.y);
    }
}
