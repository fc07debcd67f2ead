#include "cstn/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "cstn/rng.hpp"
#include "doctest.h"

using namespace cstn;

namespace {

PropagationTrace trace_with(std::vector<std::optional<double>> times, NodeId origin = 0) {
    PropagationTrace trace;
    trace.origin = origin;
    trace.n_nodes = static_cast<std::uint32_t>(times.size());
    trace.first_receipt_ms = std::move(times);
    trace.via.assign(trace.n_nodes, Via::Terrestrial);
    trace.satellite_derived.assign(trace.n_nodes, 0);
    return trace;
}

// Direct sort-and-index reference for the order statistic.
std::optional<double> sync_time_by_sort(const PropagationTrace& trace, double threshold) {
    std::vector<double> times;
    for (const auto& t : trace.first_receipt_ms)
        if (t) times.push_back(*t);
    std::sort(times.begin(), times.end());
    const auto rank = static_cast<std::size_t>(
        std::ceil(threshold * static_cast<double>(trace.n_nodes) - 1e-9));
    if (times.size() < rank) return std::nullopt;
    return times[rank - 1];
}

}  // namespace

TEST_CASE("sync_time is the threshold-rank order statistic") {
    const auto trace = trace_with({0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0});
    CHECK(sync_time(trace, 0.8) == 7.0);  // the 8th smallest of 0..9
    CHECK(sync_time(trace, 1.0) == 9.0);
    CHECK(sync_time(trace, 0.05) == 0.0);
}

TEST_CASE("sync_time of an instantaneous broadcast is zero") {
    const auto trace = trace_with(std::vector<std::optional<double>>(16, 0.0));
    CHECK(sync_time(trace, 0.8) == 0.0);
}

TEST_CASE("sync_time is absent when the threshold is unreachable") {
    std::vector<std::optional<double>> times(10);
    for (int i = 0; i < 7; ++i) times[i] = static_cast<double>(i);
    const auto trace = trace_with(std::move(times));
    CHECK_FALSE(sync_time(trace, 0.8).has_value());
    CHECK(sync_time(trace, 0.7) == 6.0);
}

TEST_CASE("sync_time is monotone in the threshold") {
    Rng rng(404);
    for (int round = 0; round < 100; ++round) {
        std::vector<std::optional<double>> times(1 + rng.below(40));
        times[0] = 0.0;
        for (std::size_t i = 1; i < times.size(); ++i)
            if (rng.unit() < 0.8) times[i] = rng.unit() * 1e4;
        const auto trace = trace_with(std::move(times));

        std::optional<double> prev;
        bool absent_seen = false;
        for (double threshold : {0.1, 0.3, 0.5, 0.8, 0.9, 1.0}) {
            const auto s = sync_time(trace, threshold);
            if (absent_seen) CHECK_FALSE(s.has_value());
            if (!s) {
                absent_seen = true;
                continue;
            }
            if (prev) CHECK(*s >= *prev);
            prev = s;
        }
    }
}

TEST_CASE("sync_time equals the sort-and-index reference on small traces") {
    Rng rng(2024);
    for (int round = 0; round < 500; ++round) {
        std::vector<std::optional<double>> times(2 + rng.below(19));
        times[0] = 0.0;
        for (std::size_t i = 1; i < times.size(); ++i)
            if (rng.unit() < 0.7) times[i] = rng.unit() * 500.0;
        const auto trace = trace_with(std::move(times));
        const double threshold = 0.05 + 0.95 * rng.unit();
        CAPTURE(round);
        CHECK(sync_time(trace, threshold) == sync_time_by_sort(trace, threshold));
    }
}

TEST_CASE("tps divides transactions per block by the sync time") {
    std::vector<std::optional<double>> times(10, 1000.0);
    times[0] = 0.0;
    const auto trace = trace_with(std::move(times));

    const TpsResult r = tps(trace, 8e6, 2000.0, 0.8);
    REQUIRE(r.sync_time_ms == 1000.0);
    CHECK(r.tps == 4000.0);  // 4000 transactions per one-second interval
    CHECK(r.reached_fraction == 1.0);
}

TEST_CASE("tps is absent when propagation misses the threshold") {
    std::vector<std::optional<double>> times(10);
    times[0] = 0.0;
    const auto trace = trace_with(std::move(times));
    const TpsResult r = tps(trace, 8e6, 2000.0, 0.8);
    CHECK_FALSE(r.sync_time_ms.has_value());
    CHECK_FALSE(r.tps.has_value());
    CHECK(r.reached_fraction == doctest::Approx(0.1));
}

TEST_CASE("tps is absent for a zero sync time") {
    const auto trace = trace_with(std::vector<std::optional<double>>(4, 0.0));
    const TpsResult r = tps(trace, 8e6, 2000.0, 1.0);
    CHECK(r.sync_time_ms == 0.0);
    CHECK_FALSE(r.tps.has_value());
}

TEST_CASE("halving the sync time doubles tps") {
    auto make = [](double sync_ms) {
        std::vector<std::optional<double>> times(10, sync_ms);
        times[0] = 0.0;
        return trace_with(std::move(times));
    };
    const auto fast = tps(make(500.0), 8e6, 2000.0, 0.8);
    const auto slow = tps(make(1000.0), 8e6, 2000.0, 0.8);
    CHECK(*fast.tps == doctest::Approx(2.0 * *slow.tps));
}

TEST_CASE("tps is invariant under a coherent rescaling of time units") {
    Rng rng(88);
    for (int round = 0; round < 50; ++round) {
        std::vector<std::optional<double>> ms(8);
        ms[0] = 0.0;
        for (std::size_t i = 1; i < ms.size(); ++i) ms[i] = 1.0 + rng.unit() * 900.0;

        auto in_seconds = ms;
        for (auto& t : in_seconds)
            if (t) *t = *t / 1000.0;

        const auto r_ms = tps(trace_with(std::move(ms)), 8e6, 2000.0, 0.8);
        const auto r_s = tps(trace_with(std::move(in_seconds)), 8e6, 2000.0, 0.8);
        REQUIRE(r_ms.tps.has_value());
        REQUIRE(r_s.tps.has_value());
        // Same quantity, the second expressed against seconds-valued stamps.
        CHECK(*r_s.tps / 1000.0 == doctest::Approx(*r_ms.tps).epsilon(1e-12));
    }
}

TEST_CASE("transactions_per_block truncates to whole transactions") {
    CHECK(transactions_per_block(8e6, 2000.0) == 4000);
    CHECK(transactions_per_block(4999.0, 2000.0) == 2);
}
