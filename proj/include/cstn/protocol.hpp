#ifndef CSTN_PROTOCOL_HPP
#define CSTN_PROTOCOL_HPP

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "cstn/engine.hpp"
#include "cstn/model.hpp"
#include "cstn/rng.hpp"
#include "cstn/topology.hpp"

// Forwarding strategies per node role: the miner's gateway-first fan-out, the
// relay rules (ordinary -> ordinary list, super -> member list, gateway ->
// uplink), and the satellite broadcast with its miss accounting.

namespace cstn {

struct ForwardPlan {
    NodeId sender = 0;
    // Serialized unicast targets; slots run 1..targets.size() without gaps.
    std::vector<std::pair<NodeId, std::uint32_t>> targets;
    // Gateway expected to carry this message to the satellite: the miner's
    // chosen gateway, or the gateway itself when it is the one uplinking.
    std::optional<NodeId> uplink;
};

// Plan for the node that mined the block: chosen gateway first (most recently
// communicated with, skipping downed ones), then every super in its super
// list, then its ordinary list. Stamps last_forward on each target's entry.
ForwardPlan miner_plan(Network& net, NodeId miner, double now_ms);

// Plan for a node receiving the message for the first time.
ForwardPlan relay_plan(Network& net, NodeId node, Via via);

// Deliveries produced by one satellite broadcast fired at gateway_rx_ms:
// every super and every gateway at +satellite_delay_ms, except supers
// independently dropped with satellite_miss_prob (their miss counters are
// incremented). Callers must fire at most one broadcast per message.
std::vector<std::pair<NodeId, double>> satellite_broadcast(Network& net, double gateway_rx_ms,
                                                           const SimConfig& cfg, Rng& rng);

}  // namespace cstn

#endif  // CSTN_PROTOCOL_HPP
