#include "cstn/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "cstn/textio.hpp"

namespace cstn {

const char* role_name(NodeRole role) {
    switch (role) {
        case NodeRole::Ordinary: return "ordinary";
        case NodeRole::Super: return "super";
        case NodeRole::Gateway: return "gateway";
    }
    return "?";
}

NeighborEntry* NeighborList::find(NodeId peer) {
    for (auto& e : entries_)
        if (e.peer == peer) return &e;
    return nullptr;
}

const NeighborEntry* NeighborList::find(NodeId peer) const {
    for (const auto& e : entries_)
        if (e.peer == peer) return &e;
    return nullptr;
}

void NeighborList::append(NeighborEntry entry) {
    if (full()) throw std::logic_error("NeighborList::append: list is full");
    if (contains(entry.peer)) throw std::logic_error("NeighborList::append: duplicate peer");
    entries_.push_back(std::move(entry));
}

std::uint32_t default_gateway_count(std::uint32_t n_nodes) {
    return std::max<std::uint32_t>(1, n_nodes / 1000);
}

std::uint32_t super_count(const SimConfig& cfg) {
    return static_cast<std::uint32_t>(std::floor(cfg.super_fraction * cfg.n_nodes));
}

ValidatedConfig validate_config(const SimConfig& cfg) {
    if (cfg.n_nodes < 2) throw ConfigError("n_nodes >= 2 violated");
    if (cfg.super_fraction < 0.0 || cfg.super_fraction > 1.0)
        throw ConfigError("super_fraction out of range");
    if (super_count(cfg) + static_cast<std::uint64_t>(cfg.gateway_count) > cfg.n_nodes)
        throw ConfigError("role fractions exceed population");
    if (cfg.list_capacity < 1) throw ConfigError("list_capacity must be positive");
    if (!(cfg.bandwidth_bps > 0.0)) throw ConfigError("bandwidth_bps must be positive");
    if (!(cfg.intrinsic_delay_ms > 0.0)) throw ConfigError("intrinsic_delay_ms must be positive");
    if (!(cfg.satellite_delay_ms > 0.0)) throw ConfigError("satellite_delay_ms must be positive");
    if (!(cfg.tx_size_bits > 0.0)) throw ConfigError("tx_size_bits must be positive");
    if (!(cfg.block_size_bits > 0.0)) throw ConfigError("block_size_bits must be positive");
    if (!(cfg.sync_threshold > 0.0) || cfg.sync_threshold > 1.0)
        throw ConfigError("sync_threshold out of range");
    if (cfg.satellite_miss_prob < 0.0 || cfg.satellite_miss_prob > 1.0)
        throw ConfigError("satellite_miss_prob out of range");
    if (cfg.demotion_interval_count < 1)
        throw ConfigError("demotion_interval_count must be positive");
    return ValidatedConfig(cfg);
}

double bandwidth_for_tps(double tps, double tx_size_bits) {
    return tps * tx_size_bits;
}

namespace {

struct FieldDesc {
    const char* key;
    enum class Type { U32, U64, Double } type;
    void* (*ptr)(SimConfig&);
};

template <auto Member>
void* member_ptr(SimConfig& cfg) {
    return &(cfg.*Member);
}

constexpr auto kU32 = FieldDesc::Type::U32;
constexpr auto kU64 = FieldDesc::Type::U64;
constexpr auto kDouble = FieldDesc::Type::Double;

const FieldDesc kFields[] = {
    {"n_nodes", kU32, member_ptr<&SimConfig::n_nodes>},
    {"super_fraction", kDouble, member_ptr<&SimConfig::super_fraction>},
    {"gateway_count", kU32, member_ptr<&SimConfig::gateway_count>},
    {"list_capacity", kU32, member_ptr<&SimConfig::list_capacity>},
    {"bandwidth_bps", kDouble, member_ptr<&SimConfig::bandwidth_bps>},
    {"intrinsic_delay_ms", kDouble, member_ptr<&SimConfig::intrinsic_delay_ms>},
    {"satellite_delay_ms", kDouble, member_ptr<&SimConfig::satellite_delay_ms>},
    {"tx_size_bits", kDouble, member_ptr<&SimConfig::tx_size_bits>},
    {"block_size_bits", kDouble, member_ptr<&SimConfig::block_size_bits>},
    {"sync_threshold", kDouble, member_ptr<&SimConfig::sync_threshold>},
    {"satellite_miss_prob", kDouble, member_ptr<&SimConfig::satellite_miss_prob>},
    {"demotion_interval_count", kU32, member_ptr<&SimConfig::demotion_interval_count>},
    {"rng_seed", kU64, member_ptr<&SimConfig::rng_seed>},
};

std::string format_field(const SimConfig& cfg, const FieldDesc& f) {
    auto& mutable_cfg = const_cast<SimConfig&>(cfg);
    switch (f.type) {
        case kU32: return format_u64(*static_cast<std::uint32_t*>(f.ptr(mutable_cfg)));
        case kU64: return format_u64(*static_cast<std::uint64_t*>(f.ptr(mutable_cfg)));
        case kDouble: return format_double(*static_cast<double*>(f.ptr(mutable_cfg)));
    }
    return {};
}

void assign_field(SimConfig& cfg, const FieldDesc& f, std::string_view value) {
    switch (f.type) {
        case kU32: {
            const std::uint64_t v = parse_u64(value, f.key);
            if (v > 0xffffffffULL) throw ConfigError(std::string(f.key) + " out of range");
            *static_cast<std::uint32_t*>(f.ptr(cfg)) = static_cast<std::uint32_t>(v);
            break;
        }
        case kU64:
            *static_cast<std::uint64_t*>(f.ptr(cfg)) = parse_u64(value, f.key);
            break;
        case kDouble:
            *static_cast<double*>(f.ptr(cfg)) = parse_double(value, f.key);
            break;
    }
}

}  // namespace

std::string emit_config(const SimConfig& cfg) {
    std::string out;
    for (const auto& f : kFields) {
        out += f.key;
        out += " = ";
        out += format_field(cfg, f);
        out += '\n';
    }
    return out;
}

SimConfig parse_config(const std::string& text, SimConfig base,
                       std::vector<std::string>* keys_seen) {
    SimConfig cfg = base;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view sv = trim(line);
        if (sv.empty() || sv.front() == '#') continue;
        const auto eq = sv.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        const std::string_view key = trim(sv.substr(0, eq));
        const std::string_view value = trim(sv.substr(eq + 1));
        const FieldDesc* found = nullptr;
        for (const auto& f : kFields)
            if (key == f.key) { found = &f; break; }
        if (!found) throw ConfigError("unknown key: " + std::string(key));
        try {
            assign_field(cfg, *found, value);
        } catch (const std::runtime_error& e) {
            throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
        }
        if (keys_seen) keys_seen->emplace_back(key);
    }
    return cfg;
}

SimConfig load_config_file(const std::string& path, SimConfig base,
                           std::vector<std::string>* keys_seen) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config not found: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), base, keys_seen);
}

}  // namespace cstn
