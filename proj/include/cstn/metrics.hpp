#ifndef CSTN_METRICS_HPP
#define CSTN_METRICS_HPP

#include <cstdint>
#include <optional>

#include "cstn/engine.hpp"

// Trace-derived quantities: threshold synchronization time and TPS.

namespace cstn {

struct TpsResult {
    std::optional<double> sync_time_ms;
    std::optional<double> tps;  // present iff sync_time_ms present and > 0
    double reached_fraction = 0.0;
};

// The ceil(threshold * N)-th smallest first-receipt time (origin's 0
// included); absent when fewer nodes ever receive.
std::optional<double> sync_time(const PropagationTrace& trace, double threshold);

// Transactions per second when the block interval equals the threshold sync
// time: (block/tx) / (sync_time in seconds).
TpsResult tps(const PropagationTrace& trace, double block_size_bits, double tx_size_bits,
              double threshold);

// Whole transactions that fit in a block, for reporting.
std::uint64_t transactions_per_block(double block_size_bits, double tx_size_bits);

}  // namespace cstn

#endif  // CSTN_METRICS_HPP
