#pragma once

#include "wmsn/agem.hpp"
#include "wmsn/energy.hpp"
#include "wmsn/link.hpp"
#include "wmsn/policies.hpp"
#include "wmsn/rng.hpp"

#include "json.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace wmsn {

enum class Protocol { Agem, Gpsr, GreedyOnly, Policy };

// Thrown for malformed or inconsistent configuration; carries the offending
// key so the CLI can name it.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, const std::string& message)
        : std::runtime_error(key + ": " + message), key_(std::move(key))
    {
    }
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

struct FieldSize {
    double width = 500.0;
    double height = 200.0;
};

struct ImageTraffic {
    int count = 30;
    double size_bits = 10000.0;
    double interval = 1.0; // s
};

struct BeaconSettings {
    double interval = 1.0;       // s
    double jitter = 0.1;         // fraction of the interval for per-node phase
    double timeout_factor = 3.0; // staleness timeout = factor * interval
    double size_bits = 64.0;     // only charged when energy.count_control is on
};

struct ScenarioConfig {
    FieldSize field;
    int node_count = 100;
    Position sink_position{490.0, 90.0};
    Position source_position{10.0, 90.0};
    ImageTraffic images;
    double packet_size_bits = 1000.0;
    RadioParams radio;
    LinkModel link;
    Protocol protocol = Protocol::Agem;
    PolicySpec policy; // when protocol == Policy
    AdaptiveCompassConfig compass;
    double initial_energy = 1.0; // J per node
    bool count_control_energy = false;
    int queue_capacity = 64;
    BeaconSettings beacon;
    double horizon = 60.0; // s
    int ttl_multiplier = 4;
    WalkbackMetric walkback = WalkbackMetric::NearestToSink;
    bool passive_refresh = false;
    std::uint64_t seed = 1;
    std::string topology_file; // optional: load placements instead of sampling

    double beacon_timeout() const { return beacon.timeout_factor * beacon.interval; }
    int fragments_per_image() const
    {
        return static_cast<int>(images.size_bits / packet_size_bits);
    }
    int packet_ttl() const { return ttl_multiplier * node_count; }
};

// Throws ConfigError on the first violated invariant.
void validate(const ScenarioConfig& cfg);

// Set one dotted key from its textual value; throws ConfigError for unknown
// keys or unparsable values.
void apply_config_key(ScenarioConfig& cfg, const std::string& key, const std::string& value);

// Flat key-value text ("key = value", '#' comments). Parsed keys only; call
// validate() afterwards.
ScenarioConfig parse_config(std::istream& in);
ScenarioConfig load_config(const std::string& path);

nlohmann::json config_to_json(const ScenarioConfig& cfg);
ScenarioConfig config_from_json(const nlohmann::json& j);

// Digest of the canonical JSON form, for output file headers.
std::uint64_t config_digest(const ScenarioConfig& cfg);

const char* protocol_name(Protocol p);
std::string protocol_label(const ScenarioConfig& cfg); // includes policy details

struct NodePlacement {
    NodeId id = 0;
    Position position;
};

// Sink and source first at their fixed coordinates, then uniformly sampled
// sensors at pairwise distance >= 1 m.
struct Topology {
    std::vector<NodePlacement> nodes;

    static constexpr NodeId kSinkId = 0;
    static constexpr NodeId kSourceId = 1;
};

// Rejection sampling; throws std::runtime_error when the field cannot fit
// node_count placements at the minimum separation.
Topology generate_topology(const ScenarioConfig& cfg, RandomStream& rng);

nlohmann::json topology_to_json(const Topology& topo);
Topology topology_from_json(const nlohmann::json& j);
Topology load_topology(const std::string& path);

} // namespace wmsn
