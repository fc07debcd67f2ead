#include "cstn/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace cstn {

namespace {

// Smallest integer >= threshold * n, nudged against binary rounding so that
// e.g. 0.8 * 10 stays 8 rather than ceil(8.000000000000002) = 9.
std::size_t threshold_rank(double threshold, std::size_t n) {
    const double scaled = threshold * static_cast<double>(n);
    auto rank = static_cast<std::size_t>(std::ceil(scaled - 1e-9));
    return std::max<std::size_t>(rank, 1);
}

}  // namespace

std::optional<double> sync_time(const PropagationTrace& trace, double threshold) {
    std::vector<double> times;
    times.reserve(trace.n_nodes);
    for (const auto& t : trace.first_receipt_ms)
        if (t) times.push_back(*t);

    const std::size_t rank = threshold_rank(threshold, trace.n_nodes);
    if (times.size() < rank) return std::nullopt;
    std::nth_element(times.begin(), times.begin() + (rank - 1), times.end());
    return times[rank - 1];
}

TpsResult tps(const PropagationTrace& trace, double block_size_bits, double tx_size_bits,
              double threshold) {
    TpsResult result;
    result.reached_fraction =
        static_cast<double>(trace.received_count()) / static_cast<double>(trace.n_nodes);
    result.sync_time_ms = sync_time(trace, threshold);
    if (result.sync_time_ms && *result.sync_time_ms > 0.0) {
        const double tx_per_block = block_size_bits / tx_size_bits;
        result.tps = tx_per_block / (*result.sync_time_ms / 1000.0);
    }
    return result;
}

std::uint64_t transactions_per_block(double block_size_bits, double tx_size_bits) {
    return static_cast<std::uint64_t>(block_size_bits / tx_size_bits);
}

}  // namespace cstn
