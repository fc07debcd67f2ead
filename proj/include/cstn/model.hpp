#ifndef CSTN_MODEL_HPP
#define CSTN_MODEL_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

// Domain types for the satellite-terrestrial block propagation simulator:
// node identities and roles, neighbor-list records, message descriptors and
// the full simulation configuration with validation and a key=value text form.

namespace cstn {

// Dense index in [0, n_nodes); doubles as a vector subscript everywhere.
using NodeId = std::uint32_t;

enum class NodeRole : std::uint8_t { Ordinary, Super, Gateway };

const char* role_name(NodeRole role);

enum class MessageKind : std::uint8_t { Block, Transaction };

struct Message {
    MessageKind kind = MessageKind::Block;
    double size_bits = 0.0;
    NodeId origin = 0;
};

// One slot of a neighbor list. last_forward_ms is the latest time data moved
// to/from this peer on a forward; last_response_ms the latest join response.
// Absent means "never". Times never decrease across updates.
struct NeighborEntry {
    NodeId peer = 0;
    std::optional<double> last_forward_ms;
    std::optional<double> last_response_ms;
    bool active = true;

    bool operator==(const NeighborEntry&) const = default;
};

class NeighborList {
public:
    NeighborList() = default;
    explicit NeighborList(std::uint32_t capacity) : capacity_(capacity) {}

    std::uint32_t capacity() const { return capacity_; }
    bool full() const { return entries_.size() >= capacity_; }
    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }

    const std::vector<NeighborEntry>& entries() const { return entries_; }
    std::vector<NeighborEntry>& entries() { return entries_; }

    NeighborEntry* find(NodeId peer);
    const NeighborEntry* find(NodeId peer) const;
    bool contains(NodeId peer) const { return find(peer) != nullptr; }

    // Appends a new entry; throws on overflow or duplicate peer.
    void append(NeighborEntry entry);

    bool operator==(const NeighborList&) const = default;

private:
    std::uint32_t capacity_ = 0;
    std::vector<NeighborEntry> entries_;
};

// Every knob of the simulated system. Defaults are the evaluated baseline:
// 10^4 nodes, 20% super nodes, K=4, 100 Mbit/s, 2 kbit transactions,
// 8 Mbit blocks, 300 ms satellite path, 80% sync threshold.
struct SimConfig {
    std::uint32_t n_nodes = 10000;
    double super_fraction = 0.2;
    std::uint32_t gateway_count = 10;
    std::uint32_t list_capacity = 4;
    double bandwidth_bps = 100e6;
    double intrinsic_delay_ms = 200.0;
    double satellite_delay_ms = 300.0;
    double tx_size_bits = 2000.0;
    double block_size_bits = 8e6;
    double sync_threshold = 0.8;
    double satellite_miss_prob = 0.0;
    std::uint32_t demotion_interval_count = 3;
    std::uint64_t rng_seed = 1;

    bool operator==(const SimConfig&) const = default;
};

// max(1, n/1000): one gateway per thousand nodes, never zero by default.
std::uint32_t default_gateway_count(std::uint32_t n_nodes);

// floor(super_fraction * n): number of super nodes a config implies.
std::uint32_t super_count(const SimConfig& cfg);

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A SimConfig that passed validate_config. Only obtainable through it.
class ValidatedConfig {
public:
    const SimConfig& get() const { return cfg_; }
    operator const SimConfig&() const { return cfg_; }

private:
    friend ValidatedConfig validate_config(const SimConfig& cfg);
    explicit ValidatedConfig(const SimConfig& cfg) : cfg_(cfg) {}
    SimConfig cfg_;
};

// Throws ConfigError naming the first violated invariant.
ValidatedConfig validate_config(const SimConfig& cfg);

// Aggregate bandwidth implied by a target rate: tps * tx_size_bits, exact.
double bandwidth_for_tps(double tps, double tx_size_bits);

// Text form: one "key = value" per line, keys exactly the SimConfig field
// names, '#' comments. parse(emit(c)) == c bitwise.
std::string emit_config(const SimConfig& cfg);

// Applies the text onto `base`; unknown keys are an error. `keys_seen`, when
// given, collects the keys the text actually set.
SimConfig parse_config(const std::string& text, SimConfig base = SimConfig{},
                       std::vector<std::string>* keys_seen = nullptr);

// Reads and parses a config file; throws ConfigError("config not found: ...")
// when the path does not open.
SimConfig load_config_file(const std::string& path, SimConfig base = SimConfig{},
                           std::vector<std::string>* keys_seen = nullptr);

}  // namespace cstn

#endif  // CSTN_MODEL_HPP
