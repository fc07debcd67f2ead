#include "cstn/engine.hpp"

#include <algorithm>
#include <stdexcept>

#include "cstn/protocol.hpp"
#include "cstn/rng.hpp"
#include "cstn/textio.hpp"

namespace cstn {

bool EventQueue::later(const Event& a, const Event& b) {
    if (a.time_ms != b.time_ms) return a.time_ms > b.time_ms;
    return a.seq > b.seq;
}

std::uint64_t EventQueue::schedule(Event ev) {
    ev.seq = next_seq_++;
    heap_.push_back(ev);
    std::push_heap(heap_.begin(), heap_.end(), later);
    return ev.seq;
}

Event EventQueue::pop() {
    if (heap_.empty()) throw std::logic_error("EventQueue::pop: empty queue");
    std::pop_heap(heap_.begin(), heap_.end(), later);
    Event ev = heap_.back();
    heap_.pop_back();
    return ev;
}

double hop_delay(double msg_size_bits, double bandwidth_bps, double intrinsic_delay_ms,
                 std::uint32_t send_slot) {
    return static_cast<double>(send_slot) * (msg_size_bits / bandwidth_bps * 1000.0) +
           intrinsic_delay_ms;
}

std::size_t PropagationTrace::received_count() const {
    std::size_t count = 0;
    for (const auto& t : first_receipt_ms)
        if (t) ++count;
    return count;
}

PathClass path_class(const PropagationTrace& trace, NodeId node) {
    if (node == trace.origin) return PathClass::Origin;
    if (!trace.first_receipt_ms[node]) return PathClass::Missed;
    if (trace.via[node] == Via::Satellite) return PathClass::Satellite;
    return trace.satellite_derived[node] ? PathClass::SatelliteDerived
                                         : PathClass::TerrestrialP2p;
}

namespace {

struct RunState {
    PropagationTrace trace;
    EventQueue queue;
    bool broadcast_done = false;
};

void schedule_sends(RunState& st, const SimConfig& cfg, const Message& msg,
                    const ForwardPlan& plan, double now_ms, bool sender_derived) {
    for (const auto& [target, slot] : plan.targets) {
        st.queue.schedule(Event{
            .time_ms = now_ms + hop_delay(msg.size_bits, cfg.bandwidth_bps,
                                          cfg.intrinsic_delay_ms, slot),
            .kind = Event::Kind::Deliver,
            .node = target,
            .via = Via::Terrestrial,
            .satellite_derived = sender_derived,
        });
    }
}

void fire_uplink(RunState& st, Network& net, const SimConfig& cfg, NodeId gateway,
                 double now_ms, Rng& rng) {
    if (st.broadcast_done) {
        // Later uplinks of the same message are no-ops; keep the record.
        st.queue.schedule(Event{.time_ms = now_ms,
                                .kind = Event::Kind::SatelliteDrop,
                                .node = gateway});
        return;
    }
    st.broadcast_done = true;
    for (const auto& [receiver, at_ms] : satellite_broadcast(net, now_ms, cfg, rng)) {
        st.queue.schedule(Event{.time_ms = at_ms,
                                .kind = Event::Kind::Deliver,
                                .node = receiver,
                                .via = Via::Satellite,
                                .satellite_derived = true});
    }
}

}  // namespace

PropagationTrace run(Network& net, const ValidatedConfig& vcfg, const Message& msg,
                     NodeId origin, std::uint64_t seed) {
    const SimConfig& cfg = vcfg.get();
    if (origin >= net.size()) throw std::out_of_range("run: origin out of range");

    RunState st;
    st.trace.origin = origin;
    st.trace.n_nodes = net.size();
    st.trace.first_receipt_ms.assign(net.size(), std::nullopt);
    st.trace.via.assign(net.size(), Via::Terrestrial);
    st.trace.satellite_derived.assign(net.size(), 0);

    Rng rng(seed);

    st.trace.first_receipt_ms[origin] = 0.0;
    schedule_sends(st, cfg, msg, miner_plan(net, origin, 0.0), 0.0, false);

    while (!st.queue.empty()) {
        const Event ev = st.queue.pop();
        if (ev.kind == Event::Kind::SatelliteDrop) {
            ++st.trace.suppressed_uplinks;
            continue;
        }
        if (st.trace.first_receipt_ms[ev.node]) continue;  // first receipt only

        st.trace.first_receipt_ms[ev.node] = ev.time_ms;
        st.trace.via[ev.node] = ev.via;
        const bool derived = ev.via == Via::Satellite || ev.satellite_derived;
        st.trace.satellite_derived[ev.node] = derived;

        const ForwardPlan plan = relay_plan(net, ev.node, ev.via);
        if (plan.uplink && *plan.uplink == ev.node)
            fire_uplink(st, net, cfg, ev.node, ev.time_ms, rng);
        schedule_sends(st, cfg, msg, plan, ev.time_ms, derived);
    }
    return st.trace;
}

std::string dump_trace(const PropagationTrace& trace) {
    std::string out;
    for (NodeId id = 0; id < trace.n_nodes; ++id) {
        out += format_u64(id);
        out += ' ';
        if (const auto& t = trace.first_receipt_ms[id]) {
            out += format_double(*t);
            out += ' ';
            if (id == trace.origin)
                out += "origin";
            else
                out += trace.via[id] == Via::Satellite ? "satellite" : "terrestrial";
        } else {
            out += "- -";
        }
        out += '\n';
    }
    return out;
}

}  // namespace cstn
