#include "cstn/protocol.hpp"

#include <algorithm>
#include <stdexcept>

namespace cstn {

namespace {

// Recency of a gateway entry: the later of last forward / last response,
// absent ordering before everything.
std::optional<double> recency(const NeighborEntry& e) {
    return std::max(e.last_forward_ms, e.last_response_ms);
}

}  // namespace

ForwardPlan miner_plan(Network& net, NodeId miner, double now_ms) {
    if (net.role(miner) != NodeRole::Ordinary)
        throw std::invalid_argument("miner_plan: miner must be an ordinary node");

    ForwardPlan plan;
    plan.sender = miner;

    // Most recently communicated gateway first; on a downed gateway try the
    // next latest until one is up or none remain.
    const auto& gw_entries = net.gateway_lists[miner].entries();
    std::vector<std::size_t> order(gw_entries.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return recency(gw_entries[a]) > recency(gw_entries[b]);
    });
    for (std::size_t idx : order) {
        const NodeId gw = gw_entries[idx].peer;
        if (net.gateway_down[gw]) continue;
        plan.uplink = gw;
        break;
    }

    std::uint32_t slot = 1;
    if (plan.uplink) plan.targets.emplace_back(*plan.uplink, slot++);
    for (const auto& e : net.super_lists[miner].entries())
        plan.targets.emplace_back(e.peer, slot++);
    for (const auto& e : net.ordinary_lists[miner].entries())
        plan.targets.emplace_back(e.peer, slot++);

    for (const auto& [target, unused] : plan.targets)
        net.stamp_forward(miner, target, now_ms);
    return plan;
}

ForwardPlan relay_plan(Network& net, NodeId node, Via /*via*/) {
    ForwardPlan plan;
    plan.sender = node;
    switch (net.role(node)) {
        case NodeRole::Ordinary: {
            std::uint32_t slot = 1;
            for (const auto& e : net.ordinary_lists[node].entries())
                plan.targets.emplace_back(e.peer, slot++);
            break;
        }
        case NodeRole::Super: {
            std::uint32_t slot = 1;
            for (const auto& e : net.member_lists[node].entries())
                plan.targets.emplace_back(e.peer, slot++);
            break;
        }
        case NodeRole::Gateway:
            plan.uplink = node;  // no terrestrial sends, trigger the broadcast
            break;
    }
    return plan;
}

std::vector<std::pair<NodeId, double>> satellite_broadcast(Network& net, double gateway_rx_ms,
                                                           const SimConfig& cfg, Rng& rng) {
    std::vector<std::pair<NodeId, double>> deliveries;
    const double arrival = gateway_rx_ms + cfg.satellite_delay_ms;
    for (NodeId id = 0; id < net.size(); ++id) {
        switch (net.role(id)) {
            case NodeRole::Super:
                if (cfg.satellite_miss_prob > 0.0 && rng.bernoulli(cfg.satellite_miss_prob)) {
                    ++net.satellite_miss_counts[id];
                } else {
                    deliveries.emplace_back(id, arrival);
                }
                break;
            case NodeRole::Gateway:
                deliveries.emplace_back(id, arrival);
                break;
            case NodeRole::Ordinary:
                break;
        }
    }
    return deliveries;
}

}  // namespace cstn
