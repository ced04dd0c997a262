#include "wmsn/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace wmsn {

namespace {

double parse_double(const std::string& key, const std::string& value)
{
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size())
            throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key, "expected a number, got '" + value + "'");
    }
}

long long parse_int(const std::string& key, const std::string& value)
{
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(value, &pos);
        if (pos != value.size())
            throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key, "expected an integer, got '" + value + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& value)
{
    if (value == "true" || value == "on" || value == "1")
        return true;
    if (value == "false" || value == "off" || value == "0")
        return false;
    throw ConfigError(key, "expected a boolean, got '" + value + "'");
}

void parse_protocol(ScenarioConfig& cfg, const std::string& value)
{
    const std::string key = "protocol";
    if (value == "agem") {
        cfg.protocol = Protocol::Agem;
        return;
    }
    if (value == "gpsr") {
        cfg.protocol = Protocol::Gpsr;
        return;
    }
    if (value == "greedy-only") {
        cfg.protocol = Protocol::GreedyOnly;
        return;
    }
    cfg.protocol = Protocol::Policy;
    std::string name = value;
    double alpha = 180.0;
    if (auto colon = value.find(':'); colon != std::string::npos) {
        name = value.substr(0, colon);
        alpha = parse_double(key, value.substr(colon + 1));
    }
    if (name == "compass")
        cfg.policy.kind = PolicyKind::Compass;
    else if (name == "random-compass")
        cfg.policy.kind = PolicyKind::RandomCompass;
    else if (name == "greedy")
        cfg.policy.kind = PolicyKind::Greedy;
    else if (name == "mfr")
        cfg.policy.kind = PolicyKind::Mfr;
    else if (name == "nn")
        cfg.policy.kind = PolicyKind::NearestNeighbor;
    else if (name == "fn")
        cfg.policy.kind = PolicyKind::FarthestNeighbor;
    else if (name == "greedy-compass")
        cfg.policy.kind = PolicyKind::GreedyCompass;
    else
        throw ConfigError(key, "unknown protocol '" + value + "'");
    cfg.policy.alpha = alpha;
}

const char* policy_kind_name(PolicyKind kind)
{
    switch (kind) {
    case PolicyKind::Compass: return "compass";
    case PolicyKind::RandomCompass: return "random-compass";
    case PolicyKind::Greedy: return "greedy";
    case PolicyKind::Mfr: return "mfr";
    case PolicyKind::NearestNeighbor: return "nn";
    case PolicyKind::FarthestNeighbor: return "fn";
    case PolicyKind::GreedyCompass: return "greedy-compass";
    }
    return "?";
}

} // namespace

const char* protocol_name(Protocol p)
{
    switch (p) {
    case Protocol::Agem: return "agem";
    case Protocol::Gpsr: return "gpsr";
    case Protocol::GreedyOnly: return "greedy-only";
    case Protocol::Policy: return "policy";
    }
    return "?";
}

std::string protocol_label(const ScenarioConfig& cfg)
{
    if (cfg.protocol != Protocol::Policy)
        return protocol_name(cfg.protocol);
    std::string label = policy_kind_name(cfg.policy.kind);
    if (cfg.policy.kind == PolicyKind::NearestNeighbor ||
        cfg.policy.kind == PolicyKind::FarthestNeighbor) {
        std::ostringstream os;
        os << label << ':' << cfg.policy.alpha;
        return os.str();
    }
    return label;
}

void apply_config_key(ScenarioConfig& cfg, const std::string& key, const std::string& value)
{
    if (key == "field.width")
        cfg.field.width = parse_double(key, value);
    else if (key == "field.height")
        cfg.field.height = parse_double(key, value);
    else if (key == "node_count")
        cfg.node_count = static_cast<int>(parse_int(key, value));
    else if (key == "sink.x")
        cfg.sink_position.x = parse_double(key, value);
    else if (key == "sink.y")
        cfg.sink_position.y = parse_double(key, value);
    else if (key == "source.x")
        cfg.source_position.x = parse_double(key, value);
    else if (key == "source.y")
        cfg.source_position.y = parse_double(key, value);
    else if (key == "images.count")
        cfg.images.count = static_cast<int>(parse_int(key, value));
    else if (key == "images.size")
        cfg.images.size_bits = parse_double(key, value);
    else if (key == "images.interval")
        cfg.images.interval = parse_double(key, value);
    else if (key == "packet.size")
        cfg.packet_size_bits = parse_double(key, value);
    else if (key == "radio.e_elec")
        cfg.radio.e_elec = parse_double(key, value);
    else if (key == "radio.eps_amp")
        cfg.radio.eps_amp = parse_double(key, value);
    else if (key == "radio.max_range")
        cfg.radio.max_range = parse_double(key, value);
    else if (key == "link.base_rate")
        cfg.link.base_rate = parse_double(key, value);
    else if (key == "link.min_length")
        cfg.link.min_length = parse_double(key, value);
    else if (key == "protocol")
        parse_protocol(cfg, value);
    else if (key == "policy.require_progress")
        cfg.policy.require_progress = parse_bool(key, value);
    else if (key == "compass.initial_alpha")
        cfg.compass.initial_alpha = parse_double(key, value);
    else if (key == "compass.step")
        cfg.compass.step = parse_double(key, value);
    else if (key == "compass.max_alpha")
        cfg.compass.max_alpha = parse_double(key, value);
    else if (key == "compass.min_candidates")
        cfg.compass.min_candidates = static_cast<int>(parse_int(key, value));
    else if (key == "energy.initial")
        cfg.initial_energy = parse_double(key, value);
    else if (key == "energy.count_control")
        cfg.count_control_energy = parse_bool(key, value);
    else if (key == "queue.capacity")
        cfg.queue_capacity = static_cast<int>(parse_int(key, value));
    else if (key == "beacon.interval")
        cfg.beacon.interval = parse_double(key, value);
    else if (key == "beacon.jitter")
        cfg.beacon.jitter = parse_double(key, value);
    else if (key == "beacon.timeout_factor")
        cfg.beacon.timeout_factor = parse_double(key, value);
    else if (key == "beacon.size")
        cfg.beacon.size_bits = parse_double(key, value);
    else if (key == "sim.horizon")
        cfg.horizon = parse_double(key, value);
    else if (key == "ttl.multiplier")
        cfg.ttl_multiplier = static_cast<int>(parse_int(key, value));
    else if (key == "walkback.metric" || key == "walkback_metric") {
        if (value == "sink")
            cfg.walkback = WalkbackMetric::NearestToSink;
        else if (value == "self")
            cfg.walkback = WalkbackMetric::NearestToSelf;
        else
            throw ConfigError(key, "expected 'sink' or 'self', got '" + value + "'");
    } else if (key == "passive_refresh")
        cfg.passive_refresh = parse_bool(key, value);
    else if (key == "seed")
        cfg.seed = static_cast<std::uint64_t>(parse_int(key, value));
    else if (key == "topology.file")
        cfg.topology_file = value;
    else
        throw ConfigError(key, "unknown configuration key");
}

namespace {

std::string trim(const std::string& s)
{
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos)
        return {};
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

} // namespace

ScenarioConfig parse_config(std::istream& in)
{
    ScenarioConfig cfg;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no), "expected 'key = value'");
        apply_config_key(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

ScenarioConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("config", "cannot open '" + path + "'");
    return parse_config(in);
}

void validate(const ScenarioConfig& cfg)
{
    auto require = [](bool ok, const char* key, const char* msg) {
        if (!ok)
            throw ConfigError(key, msg);
    };
    require(cfg.field.width > 0 && cfg.field.height > 0, "field.width", "field must be positive");
    require(cfg.node_count >= 2, "node_count", "need at least sink and source");
    require(cfg.sink_position.x >= 0 && cfg.sink_position.x <= cfg.field.width &&
                cfg.sink_position.y >= 0 && cfg.sink_position.y <= cfg.field.height,
            "sink.x", "sink must lie inside the field");
    require(cfg.source_position.x >= 0 && cfg.source_position.x <= cfg.field.width &&
                cfg.source_position.y >= 0 && cfg.source_position.y <= cfg.field.height,
            "source.x", "source must lie inside the field");
    require(cfg.images.count >= 0, "images.count", "must be non-negative");
    require(cfg.images.size_bits > 0, "images.size", "must be positive");
    require(cfg.images.interval > 0, "images.interval", "must be positive");
    require(cfg.packet_size_bits > 0, "packet.size", "must be positive");
    const double frags = cfg.images.size_bits / cfg.packet_size_bits;
    require(frags == std::floor(frags), "packet.size", "must divide images.size exactly");
    require(cfg.radio.e_elec > 0, "radio.e_elec", "must be positive");
    require(cfg.radio.eps_amp > 0, "radio.eps_amp", "must be positive");
    require(cfg.radio.max_range > 0, "radio.max_range", "must be positive");
    require(cfg.link.base_rate > 0, "link.base_rate", "must be positive");
    require(cfg.link.min_length > 0, "link.min_length", "must be positive");
    require(cfg.compass.initial_alpha > 0, "compass.initial_alpha", "must be positive");
    require(cfg.compass.initial_alpha <= cfg.compass.max_alpha, "compass.initial_alpha",
            "must not exceed compass.max_alpha");
    require(cfg.compass.max_alpha <= 180.0, "compass.max_alpha", "must be at most 180");
    require(cfg.compass.step > 0, "compass.step", "must be positive");
    require(cfg.compass.min_candidates >= 1, "compass.min_candidates", "must be at least 1");
    require(cfg.initial_energy > 0, "energy.initial", "must be positive");
    require(cfg.queue_capacity >= 1, "queue.capacity", "must be at least 1");
    require(cfg.beacon.interval > 0, "beacon.interval", "must be positive");
    require(cfg.beacon.jitter >= 0 && cfg.beacon.jitter < 1, "beacon.jitter", "must be in [0, 1)");
    require(cfg.beacon.timeout_factor > 0, "beacon.timeout_factor", "must be positive");
    require(cfg.beacon.size_bits > 0, "beacon.size", "must be positive");
    require(cfg.horizon > 0, "sim.horizon", "must be positive");
    require(cfg.ttl_multiplier >= 1, "ttl.multiplier", "must be at least 1");
    if (cfg.protocol == Protocol::Policy) {
        require(cfg.policy.alpha > 0 && cfg.policy.alpha <= 180.0, "protocol",
                "policy alpha must be in (0, 180]");
    }
}

nlohmann::json config_to_json(const ScenarioConfig& cfg)
{
    return nlohmann::json{
        {"field", {{"width", cfg.field.width}, {"height", cfg.field.height}}},
        {"node_count", cfg.node_count},
        {"sink", {{"x", cfg.sink_position.x}, {"y", cfg.sink_position.y}}},
        {"source", {{"x", cfg.source_position.x}, {"y", cfg.source_position.y}}},
        {"images",
         {{"count", cfg.images.count},
          {"size", cfg.images.size_bits},
          {"interval", cfg.images.interval}}},
        {"packet", {{"size", cfg.packet_size_bits}}},
        {"radio",
         {{"e_elec", cfg.radio.e_elec},
          {"eps_amp", cfg.radio.eps_amp},
          {"max_range", cfg.radio.max_range}}},
        {"link", {{"base_rate", cfg.link.base_rate}, {"min_length", cfg.link.min_length}}},
        {"protocol", protocol_label(cfg)},
        {"policy", {{"require_progress", cfg.policy.require_progress}}},
        {"compass",
         {{"initial_alpha", cfg.compass.initial_alpha},
          {"step", cfg.compass.step},
          {"max_alpha", cfg.compass.max_alpha},
          {"min_candidates", cfg.compass.min_candidates}}},
        {"energy", {{"initial", cfg.initial_energy}, {"count_control", cfg.count_control_energy}}},
        {"queue", {{"capacity", cfg.queue_capacity}}},
        {"beacon",
         {{"interval", cfg.beacon.interval},
          {"jitter", cfg.beacon.jitter},
          {"timeout_factor", cfg.beacon.timeout_factor},
          {"size", cfg.beacon.size_bits}}},
        {"sim", {{"horizon", cfg.horizon}}},
        {"ttl", {{"multiplier", cfg.ttl_multiplier}}},
        {"walkback",
         {{"metric", cfg.walkback == WalkbackMetric::NearestToSink ? "sink" : "self"}}},
        {"passive_refresh", cfg.passive_refresh},
        {"seed", cfg.seed},
        {"topology", {{"file", cfg.topology_file}}},
    };
}

ScenarioConfig config_from_json(const nlohmann::json& j)
{
    ScenarioConfig cfg;
    cfg.field.width = j.at("field").at("width").get<double>();
    cfg.field.height = j.at("field").at("height").get<double>();
    cfg.node_count = j.at("node_count").get<int>();
    cfg.sink_position = {j.at("sink").at("x").get<double>(), j.at("sink").at("y").get<double>()};
    cfg.source_position = {j.at("source").at("x").get<double>(),
                           j.at("source").at("y").get<double>()};
    cfg.images.count = j.at("images").at("count").get<int>();
    cfg.images.size_bits = j.at("images").at("size").get<double>();
    cfg.images.interval = j.at("images").at("interval").get<double>();
    cfg.packet_size_bits = j.at("packet").at("size").get<double>();
    cfg.radio.e_elec = j.at("radio").at("e_elec").get<double>();
    cfg.radio.eps_amp = j.at("radio").at("eps_amp").get<double>();
    cfg.radio.max_range = j.at("radio").at("max_range").get<double>();
    cfg.link.base_rate = j.at("link").at("base_rate").get<double>();
    cfg.link.min_length = j.at("link").at("min_length").get<double>();
    parse_protocol(cfg, j.at("protocol").get<std::string>());
    cfg.policy.require_progress = j.at("policy").at("require_progress").get<bool>();
    cfg.compass.initial_alpha = j.at("compass").at("initial_alpha").get<double>();
    cfg.compass.step = j.at("compass").at("step").get<double>();
    cfg.compass.max_alpha = j.at("compass").at("max_alpha").get<double>();
    cfg.compass.min_candidates = j.at("compass").at("min_candidates").get<int>();
    cfg.initial_energy = j.at("energy").at("initial").get<double>();
    cfg.count_control_energy = j.at("energy").at("count_control").get<bool>();
    cfg.queue_capacity = j.at("queue").at("capacity").get<int>();
    cfg.beacon.interval = j.at("beacon").at("interval").get<double>();
    cfg.beacon.jitter = j.at("beacon").at("jitter").get<double>();
    cfg.beacon.timeout_factor = j.at("beacon").at("timeout_factor").get<double>();
    cfg.beacon.size_bits = j.at("beacon").at("size").get<double>();
    cfg.horizon = j.at("sim").at("horizon").get<double>();
    cfg.ttl_multiplier = j.at("ttl").at("multiplier").get<int>();
    cfg.walkback = j.at("walkback").at("metric").get<std::string>() == "self"
                       ? WalkbackMetric::NearestToSelf
                       : WalkbackMetric::NearestToSink;
    cfg.passive_refresh = j.at("passive_refresh").get<bool>();
    cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.topology_file = j.at("topology").at("file").get<std::string>();
    return cfg;
}

std::uint64_t config_digest(const ScenarioConfig& cfg)
{
    return fnv1a(config_to_json(cfg).dump());
}

Topology generate_topology(const ScenarioConfig& cfg, RandomStream& rng)
{
    constexpr double kMinSeparation = 1.0;
    if (distance(cfg.sink_position, cfg.source_position) < kMinSeparation)
        throw std::runtime_error("topology: sink and source closer than 1 m");

    Topology topo;
    topo.nodes.push_back({Topology::kSinkId, cfg.sink_position});
    topo.nodes.push_back({Topology::kSourceId, cfg.source_position});

    auto too_close = [&](Position p) {
        for (const NodePlacement& n : topo.nodes)
            if (distance(n.position, p) < kMinSeparation)
                return true;
        return false;
    };

    for (int i = 2; i < cfg.node_count; ++i) {
        bool placed = false;
        for (int attempt = 0; attempt < 10000; ++attempt) {
            const Position p{rng.uniform(0.0, cfg.field.width), rng.uniform(0.0, cfg.field.height)};
            if (!too_close(p)) {
                topo.nodes.push_back({static_cast<NodeId>(i), p});
                placed = true;
                break;
            }
        }
        if (!placed)
            throw std::runtime_error(
                "topology: field too dense to honor the 1 m minimum separation");
    }
    return topo;
}

nlohmann::json topology_to_json(const Topology& topo)
{
    nlohmann::json nodes = nlohmann::json::array();
    for (const NodePlacement& n : topo.nodes)
        nodes.push_back({n.id, n.position.x, n.position.y});
    return nlohmann::json{{"nodes", nodes}};
}

Topology topology_from_json(const nlohmann::json& j)
{
    Topology topo;
    for (const auto& row : j.at("nodes"))
        topo.nodes.push_back(
            {row.at(0).get<NodeId>(), {row.at(1).get<double>(), row.at(2).get<double>()}});
    return topo;
}

Topology load_topology(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("topology.file", "cannot open '" + path + "'");
    nlohmann::json j;
    in >> j;
    return topology_from_json(j);
}

} // namespace wmsn
