#ifndef CSTN_TESTS_HELPERS_HPP
#define CSTN_TESTS_HELPERS_HPP

#include <vector>

#include "cstn/model.hpp"
#include "cstn/topology.hpp"

// Hand-built networks for tests that pin exact topologies.

namespace cstn::testing {

inline Network empty_network(std::uint32_t n, std::uint32_t capacity) {
    Network net;
    net.list_capacity = capacity;
    net.roles.assign(n, NodeRole::Ordinary);
    net.ordinary_lists.assign(n, NeighborList(capacity));
    net.super_lists.assign(n, NeighborList(capacity));
    net.gateway_lists.assign(n, NeighborList(capacity));
    net.member_lists.assign(n, NeighborList(capacity));
    net.satellite_miss_counts.assign(n, 0);
    net.gateway_down.assign(n, 0);
    return net;
}

// All-ordinary overlay with the given adjacency (list order = slot order).
inline Network make_terrestrial(std::uint32_t n, std::uint32_t capacity,
                                const std::vector<std::vector<NodeId>>& adjacency) {
    Network net = empty_network(n, capacity);
    for (NodeId u = 0; u < adjacency.size(); ++u)
        for (NodeId peer : adjacency[u])
            net.ordinary_lists[u].append({peer, std::nullopt, std::nullopt, true});
    return net;
}

}  // namespace cstn::testing

#endif  // CSTN_TESTS_HELPERS_HPP
