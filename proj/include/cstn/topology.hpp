#ifndef CSTN_TOPOLOGY_HPP
#define CSTN_TOPOLOGY_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cstn/model.hpp"
#include "cstn/rng.hpp"

// Overlay construction and neighbor-list maintenance: the seeded random
// topology, the member-list join protocol, the two-level replacement
// priorities, and super-node demotion.

namespace cstn {

// All per-node state of a built overlay. Vectors are indexed by NodeId; lists
// that do not apply to a node's role stay empty. Ordinary nodes own three
// lists (ordinary peers, super nodes, gateways); super nodes own one member
// list of ordinary nodes.
struct Network {
    std::uint32_t list_capacity = 0;
    std::vector<NodeRole> roles;
    std::vector<NeighborList> ordinary_lists;
    std::vector<NeighborList> super_lists;
    std::vector<NeighborList> gateway_lists;
    std::vector<NeighborList> member_lists;
    // Missed-broadcast counters, bumped by satellite_broadcast for super
    // nodes; demote_supers consumes them between propagation runs.
    std::vector<std::uint32_t> satellite_miss_counts;
    // Uplink failure flags for the miner's gateway retry path. Default clear.
    std::vector<std::uint8_t> gateway_down;

    std::uint32_t size() const { return static_cast<std::uint32_t>(roles.size()); }
    NodeRole role(NodeId id) const { return roles[id]; }
    std::vector<NodeId> nodes_with_role(NodeRole role) const;

    // Records a forward from `owner` toward `peer` on whichever of owner's
    // lists holds the peer. Times never decrease.
    void stamp_forward(NodeId owner, NodeId peer, double now_ms);

    bool operator==(const Network&) const = default;
};

enum class JoinVerdict : std::uint8_t { Accept, Reject };

struct JoinResponse {
    JoinVerdict verdict = JoinVerdict::Reject;
    std::optional<NodeId> replaced;  // set only on Accept into a full list

    bool operator==(const JoinResponse&) const = default;
};

// Builds the overlay for a validated config, fully determined by (cfg, seed):
// seeded role shuffle, per-ordinary-node list sampling, then the member-list
// join sequence at time 0.
Network build_network(const ValidatedConfig& cfg, std::uint64_t seed);

// Join protocol for a super node's member list. Already present -> refresh;
// room -> append; full with inactive entries -> replace the inactive entry
// with the earliest response time; otherwise reject.
JoinResponse handle_join(NeighborList& member_list, NodeId requester, double now_ms);

// Replacement priority for a full list of the given kind: evict the entry
// with the earliest last_forward time, ties by earliest last_response, then
// uniformly at random from `rng` (absent times order before all present
// ones). Returns the evicted peer. Consumes randomness only on a final tie.
NodeId replace_entry(NeighborList& list, NeighborEntry newcomer, NodeRole role_of_list,
                     Rng& rng);

// Demotes every super whose missed count reached `threshold`: role becomes
// Ordinary, its member list is dropped, it gains empty lists, and it is
// removed from every ordinary node's super list. Returns demoted ids.
std::vector<NodeId> demote_supers(Network& net,
                                  const std::vector<std::uint32_t>& missed_counts,
                                  std::uint32_t threshold);

// Plain-text edge list, one "src dst listkind" per line.
std::string export_edge_list(const Network& net);

}  // namespace cstn

#endif  // CSTN_TOPOLOGY_HPP
