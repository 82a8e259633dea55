#pragma once

#include "bondsim/ledger/types.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <variant>

namespace bondsim {

using TealValue = std::variant<std::uint64_t, Bytes>;

struct StateSchema {
    std::uint32_t global_uints = 0;
    std::uint32_t global_bytes = 0;
    std::uint32_t local_uints = 0;
    std::uint32_t local_bytes = 0;

    friend bool operator==(const StateSchema&, const StateSchema&) = default;
};

inline constexpr std::uint32_t kMaxGlobalPairs = 64;
inline constexpr std::uint32_t kMaxLocalPairs = 16;

// Key-value store of an application (global) or of one opted-in account (local).
// Absent keys read as integer 0.
class KeyValueState {
public:
    std::uint64_t get_uint(const Bytes& key) const;
    std::optional<Bytes> get_bytes(const Bytes& key) const;
    const TealValue* find(const Bytes& key) const;

    void put(const Bytes& key, TealValue value) { entries_[key] = std::move(value); }
    void erase(const Bytes& key) { entries_.erase(key); }

    std::size_t size() const { return entries_.size(); }
    std::size_t uint_count() const;
    std::size_t bytes_count() const;
    const std::map<Bytes, TealValue>& entries() const { return entries_; }

    bool fits(std::uint32_t max_uints, std::uint32_t max_bytes) const
    {
        return uint_count() <= max_uints && bytes_count() <= max_bytes;
    }

    friend bool operator==(const KeyValueState&, const KeyValueState&) = default;

private:
    std::map<Bytes, TealValue> entries_;
};

} // namespace bondsim
