#include "cstn/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "cstn/engine.hpp"
#include "cstn/protocol.hpp"
#include "cstn/rng.hpp"
#include "cstn/textio.hpp"
#include "cstn/topology.hpp"

namespace cstn {

void validate_scenario(const Scenario& scenario) {
    if (scenario.trials < 1) throw ConfigError("trials must be >= 1");
    if (scenario.values.empty()) throw ConfigError("sweep values must not be empty");
    double prev = 0.0;
    for (double v : scenario.values) {
        if (!(v > 0.0)) throw ConfigError("sweep values must be positive");
        if (v <= prev && prev != 0.0) throw ConfigError("sweep values must be strictly increasing");
        prev = v;
    }
}

SimConfig scenario_config(const Scenario& scenario, double sweep_value) {
    SimConfig cfg = scenario.base;
    switch (scenario.kind) {
        case SweepKind::BlockSize:
            cfg.block_size_bits = sweep_value;
            break;
        case SweepKind::NetworkSize:
            cfg.n_nodes = static_cast<std::uint32_t>(sweep_value);
            if (scenario.auto_gateway_count)
                cfg.gateway_count = default_gateway_count(cfg.n_nodes);
            break;
    }
    if (scenario.mode == NetMode::Terrestrial) {
        cfg.super_fraction = 0.0;
        cfg.gateway_count = 0;
    }
    return cfg;
}

TrialRun run_trial_detailed(const ValidatedConfig& vcfg, std::uint64_t base_seed,
                            std::uint32_t index) {
    const SimConfig& cfg = vcfg.get();
    const std::uint64_t trial_seed = base_seed + index;

    TrialRun out;
    out.network = build_network(vcfg, trial_seed);

    const std::vector<NodeId> ordinary = out.network.nodes_with_role(NodeRole::Ordinary);
    if (ordinary.empty()) throw std::runtime_error("run_trial: no ordinary node to mine");
    Rng pick(derive_seed(trial_seed, 1));
    out.miner = ordinary[pick.below(ordinary.size())];

    const Message block{MessageKind::Block, cfg.block_size_bits, out.miner};
    out.trace = run(out.network, vcfg, block, out.miner, derive_seed(trial_seed, 2));
    return out;
}

TpsResult run_trial(const ValidatedConfig& vcfg, std::uint64_t base_seed, std::uint32_t index) {
    const SimConfig& cfg = vcfg.get();
    const TrialRun trial = run_trial_detailed(vcfg, base_seed, index);
    return tps(trial.trace, cfg.block_size_bits, cfg.tx_size_bits, cfg.sync_threshold);
}

namespace {

SweepRow aggregate(double sweep_value, const std::vector<TpsResult>& outcomes) {
    SweepRow row;
    row.sweep_value = sweep_value;

    double reached_sum = 0.0;
    double tps_sum = 0.0;
    std::uint32_t completed = 0;
    for (const auto& o : outcomes) {
        reached_sum += o.reached_fraction;
        if (o.tps) {
            tps_sum += *o.tps;
            ++completed;
        }
    }
    row.mean_reached = reached_sum / static_cast<double>(outcomes.size());
    row.trials_completed = completed;
    if (completed == 0) return row;

    const double mean = tps_sum / static_cast<double>(completed);
    double sq_sum = 0.0;
    for (const auto& o : outcomes)
        if (o.tps) sq_sum += (*o.tps - mean) * (*o.tps - mean);
    row.mean_tps = mean;
    row.std_tps = completed > 1 ? std::sqrt(sq_sum / static_cast<double>(completed - 1)) : 0.0;
    return row;
}

std::vector<SweepRow> run_sweep_impl(const Scenario& scenario, bool parallel) {
    validate_scenario(scenario);

    std::vector<SweepRow> rows;
    rows.reserve(scenario.values.size());
    for (double value : scenario.values) {
        const ValidatedConfig vcfg = validate_config(scenario_config(scenario, value));
        const std::uint64_t base_seed = vcfg.get().rng_seed;
        const std::int64_t trials = scenario.trials;

        std::vector<TpsResult> outcomes(scenario.trials);
        if (parallel) {
#pragma omp parallel for schedule(dynamic)
            for (std::int64_t t = 0; t < trials; ++t)
                outcomes[static_cast<std::size_t>(t)] =
                    run_trial(vcfg, base_seed, static_cast<std::uint32_t>(t));
        } else {
            for (std::int64_t t = 0; t < trials; ++t)
                outcomes[static_cast<std::size_t>(t)] =
                    run_trial(vcfg, base_seed, static_cast<std::uint32_t>(t));
        }

        SweepRow row = aggregate(value, outcomes);
        if (row.trials_completed * 2 < scenario.trials) {
            std::fprintf(stderr,
                         "warning: sweep value %s: only %u of %u trials reached the sync threshold\n",
                         format_double(value).c_str(), row.trials_completed, scenario.trials);
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

std::vector<SweepRow> run_sweep(const Scenario& scenario) {
    return run_sweep_impl(scenario, true);
}

std::vector<SweepRow> run_sweep_serial(const Scenario& scenario) {
    return run_sweep_impl(scenario, false);
}

std::string emit_csv(const std::vector<SweepRow>& rows) {
    std::string out = "sweep_value,mean_tps,std_tps,mean_reached,trials\n";
    for (const auto& row : rows) {
        out += format_double(row.sweep_value);
        out += ',';
        if (row.mean_tps) out += format_double(*row.mean_tps);
        out += ',';
        if (row.std_tps) out += format_double(*row.std_tps);
        out += ',';
        out += format_double(row.mean_reached);
        out += ',';
        out += format_u64(row.trials_completed);
        out += '\n';
    }
    return out;
}

std::vector<SweepRow> parse_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || trim(line) != "sweep_value,mean_tps,std_tps,mean_reached,trials")
        throw std::runtime_error("parse_csv: missing or malformed header");

    std::vector<SweepRow> rows;
    while (std::getline(in, line)) {
        const std::string_view sv = trim(line);
        if (sv.empty()) continue;
        std::vector<std::string_view> cells;
        std::size_t start = 0;
        for (std::size_t i = 0; i <= sv.size(); ++i) {
            if (i == sv.size() || sv[i] == ',') {
                cells.push_back(sv.substr(start, i - start));
                start = i + 1;
            }
        }
        if (cells.size() != 5) throw std::runtime_error("parse_csv: expected 5 cells per row");
        SweepRow row;
        row.sweep_value = parse_double(cells[0], "sweep_value");
        if (!cells[1].empty()) row.mean_tps = parse_double(cells[1], "mean_tps");
        if (!cells[2].empty()) row.std_tps = parse_double(cells[2], "std_tps");
        row.mean_reached = parse_double(cells[3], "mean_reached");
        row.trials_completed = static_cast<std::uint32_t>(parse_u64(cells[4], "trials"));
        rows.push_back(row);
    }
    return rows;
}

}  // namespace cstn
