#include "wmsn/cli.hpp"

#include "wmsn/engine.hpp"
#include "wmsn/metrics.hpp"

#include "CLI11.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace wmsn {

namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;
constexpr const char* kArtifactVersion = "1.0.0";

void write_atomically(const fs::path& path, const std::string& content)
{
    if (path.has_parent_path())
        fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot write '" + tmp.string() + "'");
        out << content;
    }
    fs::rename(tmp, path);
}

struct ScenarioArgs {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir = ".";

    ScenarioConfig make_config() const
    {
        ScenarioConfig cfg =
            config_path.empty() ? ScenarioConfig{} : load_config(config_path);
        for (const std::string& kv : overrides) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos)
                throw ConfigError("--set", "expected key=value, got '" + kv + "'");
            std::string key = kv.substr(0, eq);
            std::string value = kv.substr(eq + 1);
            auto strip = [](std::string& s) {
                while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
                    s.erase(s.begin());
                while (!s.empty() && (s.back() == ' ' || s.back() == '\t'))
                    s.pop_back();
            };
            strip(key);
            strip(value);
            apply_config_key(cfg, key, value);
        }
        return cfg;
    }
};

void add_scenario_options(CLI::App* cmd, ScenarioArgs& args, bool config_required)
{
    auto* opt = cmd->add_option("--config", args.config_path, "scenario config file");
    if (config_required)
        opt->required();
    cmd->add_option("--set", args.overrides, "override a config key (key=value, repeatable)");
    cmd->add_option("--out", args.out_dir, "output directory");
}

std::string comment_header(const ScenarioConfig& cfg, std::uint64_t seed)
{
    std::ostringstream os;
    os << "# wmsim " << kArtifactVersion << " digest=" << config_digest(cfg) << " seed=" << seed
       << " protocol=" << protocol_label(cfg) << '\n';
    return os.str();
}

std::string run_tag(const std::string& protocol, std::uint64_t seed)
{
    return protocol + "_seed" + std::to_string(seed);
}

void write_run_outputs(const fs::path& dir, const Trace& trace, const MetricsReport& report)
{
    const ScenarioConfig& cfg = trace.meta.config;
    const std::string tag = run_tag(trace.meta.protocol, trace.meta.seed);

    write_atomically(dir / ("trace_" + tag + ".jsonl"), trace_to_string(trace));

    std::ostringstream csv;
    csv << comment_header(cfg, trace.meta.seed) << metrics_csv_header() << '\n'
        << metrics_csv_row(trace.meta.protocol, trace.meta.seed, cfg, report) << '\n';
    write_atomically(dir / ("metrics_" + tag + ".csv"), csv.str());

    nlohmann::json j{{"meta",
                      {{"version", kArtifactVersion},
                       {"digest", trace.meta.config_digest},
                       {"seed", trace.meta.seed},
                       {"protocol", trace.meta.protocol}}},
                     {"metrics", metrics_to_json(report)}};
    write_atomically(dir / ("metrics_" + tag + ".json"), j.dump(2) + "\n");
}

std::pair<std::uint64_t, std::uint64_t> parse_seed_range(const std::string& text)
{
    const auto dots = text.find("..");
    try {
        if (dots == std::string::npos) {
            const std::uint64_t s = std::stoull(text);
            return {s, s};
        }
        const std::uint64_t a = std::stoull(text.substr(0, dots));
        const std::uint64_t b = std::stoull(text.substr(dots + 2));
        if (b < a)
            throw std::invalid_argument("descending");
        return {a, b};
    } catch (const std::exception&) {
        throw ConfigError("--seeds", "expected N or A..B, got '" + text + "'");
    }
}

int cmd_run(const ScenarioArgs& args, std::optional<std::uint64_t> seed,
            const std::string& protocol)
{
    ScenarioConfig cfg = args.make_config();
    if (!protocol.empty())
        apply_config_key(cfg, "protocol", protocol);
    const std::uint64_t run_seed = seed.value_or(cfg.seed);
    validate(cfg);

    const Trace trace = run_simulation(cfg, run_seed);
    const MetricsReport report = compute_metrics(trace);
    write_run_outputs(args.out_dir, trace, report);

    std::cout << "run " << run_tag(trace.meta.protocol, run_seed) << ": delivered "
              << report.delivered << "/" << report.generated << ", lost " << report.lost_total
              << ", dead nodes " << report.dead_nodes << ", mean energy "
              << report.mean_remaining_energy << " J\n";
    return kExitOk;
}

int cmd_compare(const ScenarioArgs& args, const std::string& seeds_text,
                std::vector<std::string> protocols)
{
    ScenarioConfig base = args.make_config();
    validate(base);
    if (protocols.empty())
        protocols = {"agem", "gpsr"};
    const auto [seed_lo, seed_hi] = parse_seed_range(seeds_text);

    struct Job {
        ScenarioConfig cfg;
        std::string protocol;
        std::uint64_t seed;
    };
    std::vector<Job> jobs;
    for (const std::string& proto : protocols) {
        for (std::uint64_t seed = seed_lo; seed <= seed_hi; ++seed) {
            ScenarioConfig cfg = base;
            apply_config_key(cfg, "protocol", proto);
            validate(cfg);
            jobs.push_back({std::move(cfg), proto, seed});
        }
    }

    std::vector<RunMetrics> results(jobs.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::string failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= jobs.size() || failed.load())
                return;
            try {
                const Trace trace = run_simulation(jobs[i].cfg, jobs[i].seed);
                results[i] = {protocol_label(jobs[i].cfg), jobs[i].seed, compute_metrics(trace)};
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                failed = true;
                failure = e.what();
            }
        }
    };
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t worker_count = std::min<std::size_t>(hw, jobs.size());
    std::vector<std::thread> threads;
    for (std::size_t i = 0; i < worker_count; ++i)
        threads.emplace_back(worker);
    for (std::thread& t : threads)
        t.join();
    if (failed)
        throw std::runtime_error("compare: " + failure);

    std::ostringstream csv;
    csv << comment_header(base, seed_lo) << metrics_csv_header() << '\n';
    for (std::size_t i = 0; i < jobs.size(); ++i)
        csv << metrics_csv_row(results[i].protocol, results[i].seed, jobs[i].cfg,
                               results[i].report)
            << '\n';
    write_atomically(fs::path(args.out_dir) / "runs.csv", csv.str());

    const ComparisonSummary summary = compare_runs(results);
    nlohmann::json sj{{"meta",
                       {{"version", kArtifactVersion},
                        {"digest", config_digest(base)},
                        {"seeds", {{"from", seed_lo}, {"to", seed_hi}}}}},
                      {"summary", summary_to_json(summary)}};
    write_atomically(fs::path(args.out_dir) / "summary.json", sj.dump(2) + "\n");

    print_summary_table(summary, std::cout);
    return kExitOk;
}

int cmd_topo(const ScenarioArgs& args, const std::string& out_file,
             std::optional<std::uint64_t> seed)
{
    ScenarioConfig cfg = args.make_config();
    validate(cfg);
    const std::uint64_t topo_seed = seed.value_or(cfg.seed);
    RandomStream rng = derive_stream(topo_seed, "topology");
    const Topology topo = generate_topology(cfg, rng);

    nlohmann::json j = topology_to_json(topo);
    j["meta"] = {{"version", kArtifactVersion},
                 {"digest", config_digest(cfg)},
                 {"seed", topo_seed}};
    write_atomically(out_file, j.dump(2) + "\n");
    std::cout << "topology with " << topo.nodes.size() << " nodes written to " << out_file
              << '\n';
    return kExitOk;
}

int cmd_analyze(const std::string& trace_path, const std::string& out_dir)
{
    if (!fs::exists(trace_path))
        throw ConfigError("--trace", "cannot open '" + trace_path + "'");
    const Trace trace = load_trace(trace_path);
    const MetricsReport report = compute_metrics(trace);
    write_run_outputs(out_dir, trace, report);
    std::cout << metrics_to_json(report).dump(2) << '\n';
    return kExitOk;
}

} // namespace

int run_cli(int argc, const char* const* argv)
{
    CLI::App app{"wmsim: packet-level simulator for geographic routing in WMSNs"};
    app.require_subcommand(1);

    ScenarioArgs run_args;
    std::optional<std::uint64_t> run_seed;
    std::string run_protocol;
    CLI::App* run = app.add_subcommand("run", "run one scenario, write trace and metrics");
    add_scenario_options(run, run_args, false);
    run->add_option("--seed", run_seed, "override the config seed");
    run->add_option("--protocol", run_protocol, "override the protocol");

    ScenarioArgs cmp_args;
    std::string cmp_seeds = "1..20";
    std::vector<std::string> cmp_protocols;
    CLI::App* cmp = app.add_subcommand("compare", "seed sweep across protocols");
    add_scenario_options(cmp, cmp_args, false);
    cmp->add_option("--seeds", cmp_seeds, "seed range A..B");
    cmp->add_option("--protocol", cmp_protocols, "protocol to include (repeatable)");

    ScenarioArgs topo_args;
    std::string topo_out = "topology.json";
    std::optional<std::uint64_t> topo_seed;
    CLI::App* topo = app.add_subcommand("topo", "generate and save a topology");
    add_scenario_options(topo, topo_args, false);
    topo->add_option("--out-file", topo_out, "topology output file");
    topo->add_option("--seed", topo_seed, "override the config seed");

    std::string analyze_trace;
    std::string analyze_out = ".";
    CLI::App* analyze = app.add_subcommand("analyze", "recompute metrics from a trace file");
    analyze->add_option("--trace", analyze_trace, "trace file produced by run")->required();
    analyze->add_option("--out", analyze_out, "output directory");

    try {
        app.parse(argc, argv);
        if (run->parsed())
            return cmd_run(run_args, run_seed, run_protocol);
        if (cmp->parsed())
            return cmd_compare(cmp_args, cmp_seeds, cmp_protocols);
        if (topo->parsed())
            return cmd_topo(topo_args, topo_out, topo_seed);
        if (analyze->parsed())
            return cmd_analyze(analyze_trace, analyze_out);
        return kExitValidation;
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitValidation;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}

} // namespace wmsn
