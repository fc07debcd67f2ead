#include "cstn/topology.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

#include "cstn/textio.hpp"

namespace cstn {

std::vector<NodeId> Network::nodes_with_role(NodeRole wanted) const {
    std::vector<NodeId> out;
    for (NodeId id = 0; id < size(); ++id)
        if (roles[id] == wanted) out.push_back(id);
    return out;
}

void Network::stamp_forward(NodeId owner, NodeId peer, double now_ms) {
    for (auto* list : {&ordinary_lists[owner], &super_lists[owner],
                       &gateway_lists[owner], &member_lists[owner]}) {
        if (NeighborEntry* e = list->find(peer)) {
            if (!e->last_forward_ms || *e->last_forward_ms < now_ms)
                e->last_forward_ms = now_ms;
            return;
        }
    }
}

namespace {

// k distinct uniform draws from pool (excluding `exclude`). Rejection for
// small k, partial Fisher-Yates once k is a large share of the pool.
std::vector<NodeId> sample_distinct(Rng& rng, const std::vector<NodeId>& pool,
                                    std::size_t k, std::optional<NodeId> exclude) {
    std::vector<NodeId> avail_small;
    const std::size_t avail = pool.size() - (exclude && std::find(pool.begin(), pool.end(), *exclude) != pool.end() ? 1 : 0);
    const std::size_t want = std::min(k, avail);
    std::vector<NodeId> out;
    out.reserve(want);
    if (want == 0) return out;

    if (want * 4 < pool.size()) {
        while (out.size() < want) {
            const NodeId cand = pool[rng.below(pool.size())];
            if (exclude && cand == *exclude) continue;
            if (std::find(out.begin(), out.end(), cand) != out.end()) continue;
            out.push_back(cand);
        }
        return out;
    }

    avail_small.reserve(avail);
    for (NodeId id : pool)
        if (!exclude || id != *exclude) avail_small.push_back(id);
    for (std::size_t i = 0; i < want; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(avail_small.size() - i));
        std::swap(avail_small[i], avail_small[j]);
        out.push_back(avail_small[i]);
    }
    return out;
}

}  // namespace

Network build_network(const ValidatedConfig& vcfg, std::uint64_t seed) {
    const SimConfig& cfg = vcfg.get();
    const std::uint32_t n = cfg.n_nodes;
    const std::uint32_t n_super = super_count(cfg);
    const std::uint32_t n_gateway = cfg.gateway_count;
    const std::uint32_t k = cfg.list_capacity;

    Rng rng(seed);

    Network net;
    net.list_capacity = k;
    net.roles.assign(n, NodeRole::Ordinary);
    net.ordinary_lists.assign(n, NeighborList(k));
    net.super_lists.assign(n, NeighborList(k));
    net.gateway_lists.assign(n, NeighborList(k));
    net.member_lists.assign(n, NeighborList(k));
    net.satellite_miss_counts.assign(n, 0);
    net.gateway_down.assign(n, 0);

    std::vector<NodeId> ids(n);
    for (NodeId i = 0; i < n; ++i) ids[i] = i;
    rng.shuffle(ids);
    for (std::uint32_t i = 0; i < n_gateway; ++i) net.roles[ids[i]] = NodeRole::Gateway;
    for (std::uint32_t i = 0; i < n_super; ++i) net.roles[ids[n_gateway + i]] = NodeRole::Super;

    const std::vector<NodeId> ordinary = net.nodes_with_role(NodeRole::Ordinary);
    const std::vector<NodeId> supers = net.nodes_with_role(NodeRole::Super);
    const std::vector<NodeId> gateways = net.nodes_with_role(NodeRole::Gateway);

    for (NodeId u : ordinary) {
        for (NodeId peer : sample_distinct(rng, ordinary, k, u))
            net.ordinary_lists[u].append({peer, std::nullopt, std::nullopt, true});
        for (NodeId peer : sample_distinct(rng, supers, k, std::nullopt))
            net.super_lists[u].append({peer, std::nullopt, std::nullopt, true});
        for (NodeId peer : sample_distinct(rng, gateways, k, std::nullopt))
            net.gateway_lists[u].append({peer, std::nullopt, std::nullopt, true});
    }

    // Member lists fill through the join protocol at time 0, requesters drawn
    // uniformly per super. Overlap across supers is permitted.
    for (NodeId s : supers) {
        for (NodeId requester : sample_distinct(rng, ordinary, k, std::nullopt)) {
            handle_join(net.member_lists[s], requester, 0.0);
            if (net.member_lists[s].full()) break;
        }
    }

    return net;
}

JoinResponse handle_join(NeighborList& member_list, NodeId requester, double now_ms) {
    if (NeighborEntry* present = member_list.find(requester)) {
        if (!present->last_response_ms || *present->last_response_ms < now_ms)
            present->last_response_ms = now_ms;
        present->active = true;
        return {JoinVerdict::Accept, std::nullopt};
    }
    if (!member_list.full()) {
        member_list.append({requester, std::nullopt, now_ms, true});
        return {JoinVerdict::Accept, std::nullopt};
    }
    // Full: only an inactive entry may give way, the one with the earliest
    // response time (absent first; ties resolve to the earliest slot).
    NeighborEntry* victim = nullptr;
    for (auto& e : member_list.entries()) {
        if (e.active) continue;
        if (!victim || e.last_response_ms < victim->last_response_ms) victim = &e;
    }
    if (!victim) return {JoinVerdict::Reject, std::nullopt};
    const NodeId replaced = victim->peer;
    *victim = NeighborEntry{requester, std::nullopt, now_ms, true};
    return {JoinVerdict::Accept, replaced};
}

NodeId replace_entry(NeighborList& list, NeighborEntry newcomer,
                     [[maybe_unused]] NodeRole role_of_list, Rng& rng) {
    if (!list.full())
        throw std::logic_error("replace_entry: list not full, append instead");
    if (list.contains(newcomer.peer))
        throw std::logic_error("replace_entry: newcomer already in list");

    auto& entries = list.entries();
    auto key = [](const NeighborEntry& e) {
        // std::optional orders nullopt before any value, giving absent-first.
        return std::make_pair(e.last_forward_ms, e.last_response_ms);
    };
    auto best = key(entries[0]);
    for (std::size_t i = 1; i < entries.size(); ++i)
        best = std::min(best, key(entries[i]));

    std::vector<std::size_t> tied;
    for (std::size_t i = 0; i < entries.size(); ++i)
        if (key(entries[i]) == best) tied.push_back(i);

    const std::size_t pick =
        tied.size() == 1 ? tied[0] : tied[rng.below(tied.size())];
    const NodeId evicted = entries[pick].peer;
    entries[pick] = std::move(newcomer);
    return evicted;
}

std::vector<NodeId> demote_supers(Network& net,
                                  const std::vector<std::uint32_t>& missed_counts,
                                  std::uint32_t threshold) {
    if (threshold < 1) throw std::invalid_argument("demote_supers: threshold must be >= 1");

    std::vector<NodeId> demoted;
    for (NodeId id = 0; id < net.size(); ++id) {
        if (net.roles[id] != NodeRole::Super) continue;
        if (id < missed_counts.size() && missed_counts[id] >= threshold)
            demoted.push_back(id);
    }

    const std::unordered_set<NodeId> gone(demoted.begin(), demoted.end());
    for (NodeId id : demoted) {
        net.roles[id] = NodeRole::Ordinary;
        net.member_lists[id] = NeighborList(net.list_capacity);
        net.ordinary_lists[id] = NeighborList(net.list_capacity);
        net.super_lists[id] = NeighborList(net.list_capacity);
        net.gateway_lists[id] = NeighborList(net.list_capacity);
        net.satellite_miss_counts[id] = 0;
    }
    if (!gone.empty()) {
        for (NodeId u = 0; u < net.size(); ++u) {
            auto& entries = net.super_lists[u].entries();
            entries.erase(std::remove_if(entries.begin(), entries.end(),
                                         [&](const NeighborEntry& e) { return gone.count(e.peer) > 0; }),
                          entries.end());
        }
    }
    return demoted;
}

std::string export_edge_list(const Network& net) {
    std::string out;
    auto emit = [&](NodeId src, const NeighborList& list, const char* kind) {
        for (const auto& e : list.entries()) {
            out += format_u64(src);
            out += ' ';
            out += format_u64(e.peer);
            out += ' ';
            out += kind;
            out += '\n';
        }
    };
    for (NodeId id = 0; id < net.size(); ++id) {
        emit(id, net.ordinary_lists[id], "ordinary");
        emit(id, net.super_lists[id], "super");
        emit(id, net.gateway_lists[id], "gateway");
        emit(id, net.member_lists[id], "member");
    }
    return out;
}

}  // namespace cstn
