#include "oracle.hpp"

#include <limits>

namespace cstn::testing {

std::vector<std::optional<double>> dijkstra_arrival(const Network& net, const SimConfig& cfg,
                                                    double msg_size_bits, NodeId origin) {
    const std::uint32_t n = net.size();
    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(n, kInf);
    std::vector<bool> settled(n, false);
    dist[origin] = 0.0;

    for (std::uint32_t round = 0; round < n; ++round) {
        NodeId u = n;
        double best = kInf;
        for (NodeId v = 0; v < n; ++v) {
            if (!settled[v] && dist[v] < best) {
                best = dist[v];
                u = v;
            }
        }
        if (u == n) break;
        settled[u] = true;

        const auto& entries = net.ordinary_lists[u].entries();
        for (std::uint32_t i = 0; i < entries.size(); ++i) {
            const NodeId v = entries[i].peer;
            const double candidate =
                dist[u] + hop_delay(msg_size_bits, cfg.bandwidth_bps, cfg.intrinsic_delay_ms, i + 1);
            if (candidate < dist[v]) dist[v] = candidate;
        }
    }

    std::vector<std::optional<double>> out(n);
    for (NodeId v = 0; v < n; ++v)
        if (dist[v] != kInf) out[v] = dist[v];
    return out;
}

}  // namespace cstn::testing
