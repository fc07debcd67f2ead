#ifndef CSTN_ENGINE_HPP
#define CSTN_ENGINE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cstn/model.hpp"
#include "cstn/topology.hpp"

// Deterministic discrete-event core: the (time, seq)-ordered queue, the hop
// delay model with serialized unicast slots, and the propagation driver that
// turns one message injection into a per-node first-receipt trace.

namespace cstn {

enum class Via : std::uint8_t { Terrestrial, Satellite };

struct Event {
    double time_ms = 0.0;
    std::uint64_t seq = 0;  // assigned at scheduling time; breaks time ties

    enum class Kind : std::uint8_t { Deliver, SatelliteDrop } kind = Kind::Deliver;
    NodeId node = 0;  // Deliver: target; SatelliteDrop: the suppressed gateway
    Via via = Via::Terrestrial;
    // True when the path to this delivery passed through the satellite leg.
    bool satellite_derived = false;
};

// Min-queue over (time_ms, seq). seq increases monotonically with each
// schedule call, so processing order is a total order.
class EventQueue {
public:
    std::uint64_t schedule(Event ev);  // fills ev.seq, returns it
    bool empty() const { return heap_.empty(); }
    std::size_t size() const { return heap_.size(); }
    Event pop();

private:
    static bool later(const Event& a, const Event& b);
    std::vector<Event> heap_;
    std::uint64_t next_seq_ = 0;
};

// Time for a sender's slot-th serialized unicast of one message to land:
// slot * transmission time + intrinsic delay. The slot factor keeps a node's
// concurrent forwards within its bandwidth; the intrinsic part is charged
// once per hop and does not serialize.
double hop_delay(double msg_size_bits, double bandwidth_bps, double intrinsic_delay_ms,
                 std::uint32_t send_slot);

// Per-node first-receipt record of one propagation.
struct PropagationTrace {
    NodeId origin = 0;
    std::uint32_t n_nodes = 0;
    std::vector<std::optional<double>> first_receipt_ms;
    std::vector<Via> via;                        // meaningful where receipt set, node != origin
    std::vector<std::uint8_t> satellite_derived; // likewise
    std::uint64_t suppressed_uplinks = 0;        // SatelliteDrop events seen

    std::size_t received_count() const;

    bool operator==(const PropagationTrace&) const = default;
};

// How a node got the message, for the spreading-case analysis.
enum class PathClass : std::uint8_t {
    Origin,            // mined it
    Missed,            // never received
    Satellite,         // delivered by the broadcast
    SatelliteDerived,  // terrestrial hop, but the path crossed the satellite
    TerrestrialP2p,    // pure terrestrial path from the miner
};

PathClass path_class(const PropagationTrace& trace, NodeId node);

// Propagates one message from `origin` until the event queue drains.
// Identical inputs give identical traces. Mutates `net` only through the
// protocol bookkeeping (forward stamps, miss counters).
PropagationTrace run(Network& net, const ValidatedConfig& cfg, const Message& msg,
                     NodeId origin, std::uint64_t seed);

// One line per node: "node_id first_receipt_ms via", '-' for never-received.
std::string dump_trace(const PropagationTrace& trace);

}  // namespace cstn

#endif  // CSTN_ENGINE_HPP
