// Command-line front end for the propagation simulator: single runs, the two
// figure sweeps, and topology/trace dumps. Every config key can come from a
// key=value file (--config) and be overridden by a flag.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cstn/engine.hpp"
#include "cstn/experiments.hpp"
#include "cstn/metrics.hpp"
#include "cstn/model.hpp"
#include "cstn/rng.hpp"
#include "cstn/textio.hpp"
#include "cstn/topology.hpp"

namespace {

using namespace cstn;

struct ConfigCli {
    std::string config_path;
    SimConfig flags;  // holds values parsed from flags; consulted via counts
    CLI::Option* n_nodes = nullptr;
    CLI::Option* super_fraction = nullptr;
    CLI::Option* gateway_count = nullptr;
    CLI::Option* list_capacity = nullptr;
    CLI::Option* bandwidth_bps = nullptr;
    CLI::Option* intrinsic_delay_ms = nullptr;
    CLI::Option* satellite_delay_ms = nullptr;
    CLI::Option* tx_size_bits = nullptr;
    CLI::Option* block_size_bits = nullptr;
    CLI::Option* sync_threshold = nullptr;
    CLI::Option* satellite_miss_prob = nullptr;
    CLI::Option* demotion_interval_count = nullptr;
    CLI::Option* rng_seed = nullptr;
};

void add_config_flags(CLI::App& cmd, ConfigCli& c) {
    cmd.add_option("--config", c.config_path, "Configuration file (key = value lines)");
    c.n_nodes = cmd.add_option("--nodes,--n_nodes", c.flags.n_nodes, "Number of nodes");
    c.super_fraction =
        cmd.add_option("--supers,--super_fraction", c.flags.super_fraction,
                       "Fraction of super nodes");
    c.gateway_count =
        cmd.add_option("--gateways,--gateway_count", c.flags.gateway_count,
                       "Gateway count (default: max(1, nodes/1000))");
    c.list_capacity =
        cmd.add_option("--capacity,--list_capacity", c.flags.list_capacity,
                       "Neighbor list capacity K");
    c.bandwidth_bps =
        cmd.add_option("--bandwidth,--bandwidth_bps", c.flags.bandwidth_bps,
                       "Node bandwidth in bits/s");
    c.intrinsic_delay_ms =
        cmd.add_option("--intrinsic,--intrinsic_delay_ms", c.flags.intrinsic_delay_ms,
                       "Per-hop intrinsic delay in ms");
    c.satellite_delay_ms =
        cmd.add_option("--sat-delay,--satellite_delay_ms", c.flags.satellite_delay_ms,
                       "Gateway-to-ground broadcast delay in ms");
    c.tx_size_bits =
        cmd.add_option("--tx-size,--tx_size_bits", c.flags.tx_size_bits,
                       "Transaction size in bits");
    c.block_size_bits =
        cmd.add_option("--block-size,--block_size_bits", c.flags.block_size_bits,
                       "Block size in bits");
    c.sync_threshold =
        cmd.add_option("--threshold,--sync_threshold", c.flags.sync_threshold,
                       "Fraction of nodes defining the sync time");
    c.satellite_miss_prob =
        cmd.add_option("--miss-prob,--satellite_miss_prob", c.flags.satellite_miss_prob,
                       "Per-super broadcast loss probability");
    c.demotion_interval_count =
        cmd.add_option("--demotion-intervals,--demotion_interval_count",
                       c.flags.demotion_interval_count,
                       "Missed broadcasts before a super demotes itself");
    c.rng_seed = cmd.add_option("--seed,--rng_seed", c.flags.rng_seed, "Base RNG seed");
}

// defaults -> config file -> flags; reports whether gateway_count was pinned
// by the user (otherwise it tracks max(1, n/1000)).
SimConfig resolve_config(const ConfigCli& c, bool& gateway_pinned) {
    SimConfig cfg;
    gateway_pinned = false;
    if (!c.config_path.empty()) {
        std::vector<std::string> seen;
        cfg = load_config_file(c.config_path, cfg, &seen);
        for (const auto& key : seen)
            if (key == "gateway_count") gateway_pinned = true;
    }
    if (c.n_nodes->count()) cfg.n_nodes = c.flags.n_nodes;
    if (c.super_fraction->count()) cfg.super_fraction = c.flags.super_fraction;
    if (c.gateway_count->count()) {
        cfg.gateway_count = c.flags.gateway_count;
        gateway_pinned = true;
    }
    if (c.list_capacity->count()) cfg.list_capacity = c.flags.list_capacity;
    if (c.bandwidth_bps->count()) cfg.bandwidth_bps = c.flags.bandwidth_bps;
    if (c.intrinsic_delay_ms->count()) cfg.intrinsic_delay_ms = c.flags.intrinsic_delay_ms;
    if (c.satellite_delay_ms->count()) cfg.satellite_delay_ms = c.flags.satellite_delay_ms;
    if (c.tx_size_bits->count()) cfg.tx_size_bits = c.flags.tx_size_bits;
    if (c.block_size_bits->count()) cfg.block_size_bits = c.flags.block_size_bits;
    if (c.sync_threshold->count()) cfg.sync_threshold = c.flags.sync_threshold;
    if (c.satellite_miss_prob->count()) cfg.satellite_miss_prob = c.flags.satellite_miss_prob;
    if (c.demotion_interval_count->count())
        cfg.demotion_interval_count = c.flags.demotion_interval_count;
    if (c.rng_seed->count()) cfg.rng_seed = c.flags.rng_seed;
    if (!gateway_pinned) cfg.gateway_count = default_gateway_count(cfg.n_nodes);
    return cfg;
}

NetMode parse_mode(const std::string& mode) {
    return mode == "terrestrial" ? NetMode::Terrestrial : NetMode::Cstn;
}

SimConfig apply_mode(SimConfig cfg, NetMode mode) {
    if (mode == NetMode::Terrestrial) {
        cfg.super_fraction = 0.0;
        cfg.gateway_count = 0;
    }
    return cfg;
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::fputs(content.c_str(), stdout);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write output: " + path);
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("cannot write output: " + path);
}

std::string opt_str(const std::optional<double>& v) {
    return v ? format_double(*v) : "-";
}

int cmd_run(const ConfigCli& c, const std::string& mode) {
    bool pinned = false;
    const SimConfig cfg = apply_mode(resolve_config(c, pinned), parse_mode(mode));
    const auto vcfg = validate_config(cfg);
    const TpsResult result = run_trial(vcfg, cfg.rng_seed, 0);

    std::string out;
    out += "sync_time_ms: " + opt_str(result.sync_time_ms) + "\n";
    out += "tps: " + opt_str(result.tps) + "\n";
    out += "reached_fraction: " + format_double(result.reached_fraction) + "\n";
    out += "tx_per_block: " +
           format_u64(transactions_per_block(cfg.block_size_bits, cfg.tx_size_bits)) + "\n";
    std::fputs(out.c_str(), stdout);
    return 0;
}

int cmd_sweep(const ConfigCli& c, const std::string& mode, SweepKind kind,
              std::vector<double> values, std::uint32_t trials, const std::string& out_path) {
    bool pinned = false;
    Scenario scenario;
    scenario.base = resolve_config(c, pinned);
    scenario.mode = parse_mode(mode);
    scenario.kind = kind;
    scenario.values = std::move(values);
    scenario.trials = trials;
    scenario.output_path = out_path;
    scenario.auto_gateway_count = !pinned;

    const auto rows = run_sweep(scenario);
    write_output(out_path, emit_csv(rows));
    return 0;
}

int cmd_dump_topology(const ConfigCli& c, const std::string& mode, const std::string& out_path) {
    bool pinned = false;
    const SimConfig cfg = apply_mode(resolve_config(c, pinned), parse_mode(mode));
    const auto vcfg = validate_config(cfg);
    const Network net = build_network(vcfg, cfg.rng_seed);
    write_output(out_path, export_edge_list(net));
    return 0;
}

int cmd_dump_trace(const ConfigCli& c, const std::string& mode, bool origin_given,
                   NodeId origin, const std::string& out_path) {
    bool pinned = false;
    const SimConfig cfg = apply_mode(resolve_config(c, pinned), parse_mode(mode));
    const auto vcfg = validate_config(cfg);

    PropagationTrace trace;
    if (origin_given) {
        Network net = build_network(vcfg, cfg.rng_seed);
        if (origin >= net.size()) throw std::runtime_error("origin out of range");
        if (net.role(origin) != NodeRole::Ordinary)
            throw std::runtime_error("origin must be an ordinary node");
        const Message block{MessageKind::Block, cfg.block_size_bits, origin};
        trace = run(net, vcfg, block, origin, derive_seed(cfg.rng_seed, 2));
    } else {
        trace = run_trial_detailed(vcfg, cfg.rng_seed, 0).trace;
    }
    write_output(out_path, dump_trace(trace));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Block propagation simulator for satellite-terrestrial blockchain networks"};
    app.require_subcommand(1);

    const std::vector<double> default_block_sizes = {5e5, 1e6, 2e6, 4e6, 8e6, 1.6e7, 3.2e7};
    const std::vector<double> default_network_sizes = {100, 1000, 10000};

    std::string mode = "cstn";
    std::uint32_t trials = 100;
    std::string out_path;
    std::vector<double> values;
    NodeId origin = 0;

    auto add_mode = [&](CLI::App* cmd) {
        cmd->add_option("--mode", mode, "cstn or terrestrial")
            ->check(CLI::IsMember({"cstn", "terrestrial"}));
    };

    ConfigCli run_cfg;
    auto* run_cmd = app.add_subcommand("run", "Propagate one block and print the TPS result");
    add_config_flags(*run_cmd, run_cfg);
    add_mode(run_cmd);

    ConfigCli block_cfg;
    auto* block_cmd =
        app.add_subcommand("sweep-block-size", "TPS versus block size, CSV output");
    add_config_flags(*block_cmd, block_cfg);
    add_mode(block_cmd);
    block_cmd->add_option("--values", values, "Block sizes in bits (default 0.5..32 Mbit)");
    block_cmd->add_option("--trials", trials, "Monte-Carlo trials per value");
    block_cmd->add_option("--out", out_path, "CSV output path (default stdout)");

    ConfigCli net_cfg;
    auto* net_cmd =
        app.add_subcommand("sweep-network-size", "TPS versus network size, CSV output");
    add_config_flags(*net_cmd, net_cfg);
    add_mode(net_cmd);
    net_cmd->add_option("--values", values, "Node counts (default 100,1000,10000)");
    net_cmd->add_option("--trials", trials, "Monte-Carlo trials per value");
    net_cmd->add_option("--out", out_path, "CSV output path (default stdout)");

    ConfigCli topo_cfg;
    auto* topo_cmd =
        app.add_subcommand("dump-topology", "Write the overlay as 'src dst listkind' lines");
    add_config_flags(*topo_cmd, topo_cfg);
    add_mode(topo_cmd);
    topo_cmd->add_option("--out", out_path, "Output path (default stdout)");

    ConfigCli trace_cfg;
    auto* trace_cmd =
        app.add_subcommand("dump-trace", "Propagate one block and dump per-node receipt times");
    add_config_flags(*trace_cmd, trace_cfg);
    add_mode(trace_cmd);
    auto* origin_opt =
        trace_cmd->add_option("--origin", origin, "Mining node id (default: seeded random)");
    trace_cmd->add_option("--out", out_path, "Output path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) return cmd_run(run_cfg, mode);
        if (block_cmd->parsed())
            return cmd_sweep(block_cfg, mode, SweepKind::BlockSize,
                             values.empty() ? default_block_sizes : values, trials, out_path);
        if (net_cmd->parsed())
            return cmd_sweep(net_cfg, mode, SweepKind::NetworkSize,
                             values.empty() ? default_network_sizes : values, trials, out_path);
        if (topo_cmd->parsed()) return cmd_dump_topology(topo_cfg, mode, out_path);
        if (trace_cmd->parsed())
            return cmd_dump_trace(trace_cfg, mode, origin_opt->count() > 0, origin, out_path);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
