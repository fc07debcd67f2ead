#ifndef CSTN_EXPERIMENTS_HPP
#define CSTN_EXPERIMENTS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cstn/metrics.hpp"
#include "cstn/model.hpp"

// Scenario runner: Monte-Carlo sweeps over block size or network size, with
// trial-parallel execution (OpenMP) and a serial reference path that must
// produce bit-identical rows.

namespace cstn {

enum class NetMode : std::uint8_t { Terrestrial, Cstn };

enum class SweepKind : std::uint8_t { BlockSize, NetworkSize };

struct Scenario {
    SimConfig base;
    NetMode mode = NetMode::Cstn;
    SweepKind kind = SweepKind::BlockSize;
    std::vector<double> values;  // block sizes in bits, or node counts
    std::uint32_t trials = 100;
    std::string output_path;  // empty: caller decides (CLI prints to stdout)
    // Recompute gateway_count = max(1, N/1000) per network-size value unless
    // the user pinned it explicitly.
    bool auto_gateway_count = true;
};

// Throws ConfigError on trials < 1 or values not positive strictly increasing.
void validate_scenario(const Scenario& scenario);

struct SweepRow {
    double sweep_value = 0.0;
    std::optional<double> mean_tps;  // over trials that reached the threshold
    std::optional<double> std_tps;   // sample standard deviation of the same
    double mean_reached = 0.0;       // over all trials
    std::uint32_t trials_completed = 0;

    bool operator==(const SweepRow&) const = default;
};

// The effective config for one sweep value (mode forcing + value + gateway
// recomputation applied). Exposed for tests and the single-run CLI path.
SimConfig scenario_config(const Scenario& scenario, double sweep_value);

// Outcome of trial `index` under config `cfg`: seeded network (base seed +
// index), uniform-random ordinary miner, one block propagation.
TpsResult run_trial(const ValidatedConfig& cfg, std::uint64_t base_seed, std::uint32_t index);

// Same trial, keeping the network and trace (topology/trace dumps, tests).
struct TrialRun {
    Network network;
    NodeId miner = 0;
    PropagationTrace trace;
};
TrialRun run_trial_detailed(const ValidatedConfig& cfg, std::uint64_t base_seed,
                            std::uint32_t index);

// Runs the full sweep; trials execute in parallel when OpenMP is enabled.
// Aggregation is a deterministic fold in trial-index order, so the result is
// independent of the thread count.
std::vector<SweepRow> run_sweep(const Scenario& scenario);

// Serial reference implementation; kept for testing against run_sweep and as
// the benchmark baseline.
std::vector<SweepRow> run_sweep_serial(const Scenario& scenario);

// CSV with header "sweep_value,mean_tps,std_tps,mean_reached,trials".
// Absent statistics emit as empty cells. parse(emit(rows)) == rows.
std::string emit_csv(const std::vector<SweepRow>& rows);
std::vector<SweepRow> parse_csv(const std::string& text);

}  // namespace cstn

#endif  // CSTN_EXPERIMENTS_HPP
