#include "cstn/protocol.hpp"

#include <cmath>
#include <map>

#include "cstn/metrics.hpp"
#include "cstn/rng.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace cstn;
using cstn::testing::empty_network;

namespace {

// Miner with a populated gateway/super/ordinary list for plan-shape tests.
Network miner_fixture() {
    Network net = empty_network(12, 4);
    const NodeId miner = 0;
    net.roles[9] = NodeRole::Gateway;
    net.roles[10] = NodeRole::Gateway;
    net.roles[11] = NodeRole::Gateway;
    for (NodeId s : {5u, 6u, 7u, 8u}) net.roles[s] = NodeRole::Super;
    for (NodeId p : {1u, 2u, 3u, 4u})
        net.ordinary_lists[miner].append({p, std::nullopt, std::nullopt, true});
    for (NodeId s : {5u, 6u, 7u, 8u})
        net.super_lists[miner].append({s, std::nullopt, std::nullopt, true});
    // Gateway 10 is the most recently contacted, then 9, then 11.
    net.gateway_lists[miner].append({9, 50.0, std::nullopt, true});
    net.gateway_lists[miner].append({10, 80.0, 70.0, true});
    net.gateway_lists[miner].append({11, std::nullopt, 20.0, true});
    return net;
}

}  // namespace

TEST_CASE("miner_plan serializes gateway, supers, then ordinaries") {
    Network net = miner_fixture();
    const ForwardPlan plan = miner_plan(net, 0, 100.0);

    REQUIRE(plan.targets.size() == 9);
    CHECK(plan.uplink == 10);
    CHECK(plan.targets[0] == std::pair<NodeId, std::uint32_t>{10, 1});
    for (std::uint32_t i = 0; i < 4; ++i) {
        CHECK(plan.targets[1 + i] == std::pair<NodeId, std::uint32_t>{5 + i, 2 + i});
        CHECK(plan.targets[5 + i] == std::pair<NodeId, std::uint32_t>{1 + i, 6 + i});
    }

    // Every target's entry carries the forward stamp.
    CHECK(net.gateway_lists[0].find(10)->last_forward_ms == 100.0);
    CHECK(net.super_lists[0].find(5)->last_forward_ms == 100.0);
    CHECK(net.ordinary_lists[0].find(4)->last_forward_ms == 100.0);
    // Untried gateways keep their history.
    CHECK(net.gateway_lists[0].find(9)->last_forward_ms == 50.0);
}

TEST_CASE("miner_plan falls back to the next latest gateway when the first is down") {
    Network net = miner_fixture();
    net.gateway_down[10] = 1;
    const ForwardPlan plan = miner_plan(net, 0, 100.0);
    CHECK(plan.uplink == 9);
    CHECK(plan.targets[0] == std::pair<NodeId, std::uint32_t>{9, 1});
    REQUIRE(plan.targets.size() == 9);

    net.gateway_down[9] = 1;
    net.gateway_down[11] = 1;
    const ForwardPlan stranded = miner_plan(net, 0, 200.0);
    CHECK_FALSE(stranded.uplink.has_value());
    CHECK(stranded.targets.size() == 8);  // supers and ordinaries only
}

TEST_CASE("miner_plan degenerates to plain gossip without gateways or supers") {
    Network net = empty_network(5, 4);
    for (NodeId p : {1u, 2u, 3u, 4u})
        net.ordinary_lists[0].append({p, std::nullopt, std::nullopt, true});
    const ForwardPlan plan = miner_plan(net, 0, 0.0);
    CHECK_FALSE(plan.uplink.has_value());
    REQUIRE(plan.targets.size() == 4);
    for (std::uint32_t i = 0; i < 4; ++i)
        CHECK(plan.targets[i] == std::pair<NodeId, std::uint32_t>{1 + i, 1 + i});
}

TEST_CASE("miner_plan requires an ordinary miner") {
    Network net = miner_fixture();
    CHECK_THROWS_AS(miner_plan(net, 9, 0.0), std::invalid_argument);
}

TEST_CASE("relay_plan per role") {
    Network net = empty_network(8, 4);
    net.roles[1] = NodeRole::Super;
    net.roles[2] = NodeRole::Gateway;
    for (NodeId m : {4u, 5u, 6u})
        net.member_lists[1].append({m, std::nullopt, 0.0, true});
    for (NodeId p : {6u, 7u})
        net.ordinary_lists[0].append({p, std::nullopt, std::nullopt, true});

    SUBCASE("super forwards to its member list") {
        const ForwardPlan plan = relay_plan(net, 1, Via::Satellite);
        REQUIRE(plan.targets.size() == 3);
        CHECK(plan.targets[0] == std::pair<NodeId, std::uint32_t>{4, 1});
        CHECK(plan.targets[2] == std::pair<NodeId, std::uint32_t>{6, 3});
        CHECK_FALSE(plan.uplink.has_value());
    }
    SUBCASE("gateway only uplinks") {
        const ForwardPlan plan = relay_plan(net, 2, Via::Terrestrial);
        CHECK(plan.targets.empty());
        CHECK(plan.uplink == 2);
    }
    SUBCASE("ordinary relays its ordinary list") {
        const ForwardPlan plan = relay_plan(net, 0, Via::Terrestrial);
        REQUIRE(plan.targets.size() == 2);
        CHECK(plan.targets[0].first == 6);
        CHECK_FALSE(plan.uplink.has_value());
    }
    SUBCASE("empty list dead-ends the propagation") {
        const ForwardPlan plan = relay_plan(net, 7, Via::Terrestrial);
        CHECK(plan.targets.empty());
        CHECK_FALSE(plan.uplink.has_value());
    }
}

TEST_CASE("relay plans never route supers or gateways terrestrially backwards") {
    SimConfig cfg;
    cfg.n_nodes = 300;
    cfg.super_fraction = 0.2;
    cfg.gateway_count = 3;
    const auto vcfg = validate_config(cfg);
    Network net = build_network(vcfg, 31);

    for (NodeId u = 0; u < net.size(); ++u) {
        const ForwardPlan plan = relay_plan(net, u, Via::Terrestrial);
        switch (net.role(u)) {
            case NodeRole::Super:
                for (const auto& [target, slot] : plan.targets)
                    CHECK(net.role(target) == NodeRole::Ordinary);
                break;
            case NodeRole::Gateway:
                CHECK(plan.targets.empty());
                break;
            case NodeRole::Ordinary:
                for (const auto& [target, slot] : plan.targets)
                    CHECK(net.role(target) == NodeRole::Ordinary);
                CHECK_FALSE(plan.uplink.has_value());
                break;
        }
    }
}

TEST_CASE("satellite_broadcast reaches every super and gateway after the fixed delay") {
    SimConfig cfg;
    cfg.n_nodes = 2500;
    cfg.super_fraction = 0.8;
    cfg.gateway_count = 2;
    const auto vcfg = validate_config(cfg);
    Network net = build_network(vcfg, 17);
    REQUIRE(net.nodes_with_role(NodeRole::Super).size() == 2000);

    Rng rng(7);
    const auto deliveries = satellite_broadcast(net, 100.0, cfg, rng);
    CHECK(deliveries.size() == 2002);
    for (const auto& [node, at] : deliveries) {
        CHECK(at == 400.0);
        CHECK(net.role(node) != NodeRole::Ordinary);
    }
}

TEST_CASE("satellite_broadcast with certain loss delivers nothing to supers") {
    SimConfig cfg;
    cfg.n_nodes = 100;
    cfg.super_fraction = 0.3;
    cfg.gateway_count = 1;
    cfg.satellite_miss_prob = 1.0;
    const auto vcfg = validate_config(cfg);
    Network net = build_network(vcfg, 3);

    Rng rng(9);
    const auto deliveries = satellite_broadcast(net, 50.0, cfg, rng);
    CHECK(deliveries.size() == 1);  // the gateway itself
    for (NodeId s : net.nodes_with_role(NodeRole::Super))
        CHECK(net.satellite_miss_counts[s] == 1);
}

TEST_CASE("satellite_broadcast loss matches the binomial model across seeds") {
    SimConfig cfg;
    cfg.n_nodes = 2500;
    cfg.super_fraction = 0.8;
    cfg.gateway_count = 0;
    cfg.satellite_miss_prob = 0.1;
    const auto vcfg = validate_config(cfg);
    Network net = build_network(vcfg, 17);
    REQUIRE(net.nodes_with_role(NodeRole::Super).size() == 2000);

    const double expected = 2000.0 * 0.9;
    const double sigma = std::sqrt(2000.0 * 0.9 * 0.1);
    const int seeds = 50;
    double sum = 0.0;
    for (int s = 0; s < seeds; ++s) {
        Rng rng(derive_seed(0xABBA, s));
        const auto count = static_cast<double>(satellite_broadcast(net, 0.0, cfg, rng).size());
        CHECK(std::abs(count - expected) <= 4.0 * sigma);
        sum += count;
    }
    const double mean = sum / seeds;
    CHECK(std::abs(mean - expected) <= 3.0 * sigma / std::sqrt(static_cast<double>(seeds)));
}

TEST_CASE("the satellite path upper-bounds every super's receipt time") {
    SimConfig cfg;
    cfg.n_nodes = 400;
    cfg.super_fraction = 0.2;
    cfg.gateway_count = 1;
    cfg.intrinsic_delay_ms = 20.0;
    cfg.block_size_bits = 1e6;
    const auto vcfg = validate_config(cfg);
    Network net = build_network(vcfg, 23);
    const NodeId miner = net.nodes_with_role(NodeRole::Ordinary).front();

    const Message block{MessageKind::Block, cfg.block_size_bits, miner};
    const auto trace = run(net, vcfg, block, miner, 5);

    const double bound = hop_delay(cfg.block_size_bits, cfg.bandwidth_bps,
                                   cfg.intrinsic_delay_ms, 1) +
                         cfg.satellite_delay_ms;
    for (NodeId s : net.nodes_with_role(NodeRole::Super)) {
        REQUIRE(trace.first_receipt_ms[s].has_value());
        CHECK(*trace.first_receipt_ms[s] <= bound);
    }
}

// Hand reconstruction of the paper's mainland spreading figure: miner A with
// neighbors B and C, supers E and H fed by the satellite, members F, G, I,
// node D rescued terrestrially by F, and J never reached. W is the gateway.
namespace fig3 {

constexpr NodeId A = 0, B = 1, C = 2, D = 3, E = 4, F = 5, G = 6, H = 7, I = 8, J = 9, W = 10;

SimConfig config() {
    SimConfig cfg;
    cfg.n_nodes = 11;
    cfg.super_fraction = 0.19;  // floor(0.19 * 11) = 2
    cfg.gateway_count = 1;
    cfg.list_capacity = 4;
    cfg.bandwidth_bps = 1e8;
    cfg.intrinsic_delay_ms = 20.0;
    cfg.block_size_bits = 8e6;
    return cfg;
}

Network network() {
    Network net = empty_network(11, 4);
    net.roles[E] = NodeRole::Super;
    net.roles[H] = NodeRole::Super;
    net.roles[W] = NodeRole::Gateway;
    net.ordinary_lists[A].append({B, std::nullopt, std::nullopt, true});
    net.ordinary_lists[A].append({C, std::nullopt, std::nullopt, true});
    net.gateway_lists[A].append({W, std::nullopt, std::nullopt, true});
    net.member_lists[E].append({F, std::nullopt, 0.0, true});
    net.member_lists[E].append({G, std::nullopt, 0.0, true});
    net.member_lists[H].append({I, std::nullopt, 0.0, true});
    net.ordinary_lists[F].append({D, std::nullopt, std::nullopt, true});
    return net;
}

}  // namespace fig3

TEST_CASE("the five spreading cases of the mainland figure are all witnessed") {
    const SimConfig cfg = fig3::config();
    const auto vcfg = validate_config(cfg);
    Network net = fig3::network();

    const Message block{MessageKind::Block, cfg.block_size_bits, fig3::A};
    const auto trace = run(net, vcfg, block, fig3::A, 1);

    using fig3::A, fig3::B, fig3::C, fig3::D, fig3::E, fig3::F, fig3::G, fig3::H,
        fig3::I, fig3::J, fig3::W;

    // Timeline: 80 ms transmission per slot + 20 ms intrinsic; satellite 300.
    CHECK(*trace.first_receipt_ms[W] == 100.0);   // miner slot 1
    CHECK(*trace.first_receipt_ms[B] == 180.0);   // miner slot 2
    CHECK(*trace.first_receipt_ms[C] == 260.0);   // miner slot 3
    CHECK(*trace.first_receipt_ms[E] == 400.0);   // broadcast at W + 300
    CHECK(*trace.first_receipt_ms[H] == 400.0);
    CHECK(*trace.first_receipt_ms[F] == 500.0);   // super relay slot 1
    CHECK(*trace.first_receipt_ms[G] == 580.0);   // super relay slot 2
    CHECK(*trace.first_receipt_ms[I] == 500.0);
    CHECK(*trace.first_receipt_ms[D] == 600.0);   // rescued by F
    CHECK_FALSE(trace.first_receipt_ms[J].has_value());

    // Case 1: direct from the miner. Case 2: satellite to super. Case 3:
    // super to member. Case 4: terrestrial rescue of an uncovered node.
    // Case 5: a node nobody forwards to.
    CHECK(path_class(trace, B) == PathClass::TerrestrialP2p);
    CHECK(path_class(trace, E) == PathClass::Satellite);
    CHECK(path_class(trace, F) == PathClass::SatelliteDerived);
    CHECK(path_class(trace, D) == PathClass::SatelliteDerived);
    CHECK(path_class(trace, J) == PathClass::Missed);

    // Fractions over the ten lettered nodes: 20% satellite, 40% satellite-
    // derived relays, 20% pure terrestrial, 10% missed (plus the miner).
    std::map<PathClass, int> counts;
    for (NodeId v : {A, B, C, D, E, F, G, H, I, J}) ++counts[path_class(trace, v)];
    CHECK(counts[PathClass::Satellite] == 2);
    CHECK(counts[PathClass::SatelliteDerived] == 4);
    CHECK(counts[PathClass::TerrestrialP2p] == 2);
    CHECK(counts[PathClass::Missed] == 1);
    CHECK(counts[PathClass::Origin] == 1);
}
