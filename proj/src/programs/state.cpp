#include "bondsim/programs/state.hpp"

#include <algorithm>

namespace bondsim {

std::uint64_t KeyValueState::get_uint(const Bytes& key) const
{
    auto it = entries_.find(key);
    if (it == entries_.end()) {
        return 0;
    }
    const auto* v = std::get_if<std::uint64_t>(&it->second);
    return v ? *v : 0;
}

std::optional<Bytes> KeyValueState::get_bytes(const Bytes& key) const
{
    auto it = entries_.find(key);
    if (it == entries_.end()) {
        return std::nullopt;
    }
    const auto* v = std::get_if<Bytes>(&it->second);
    return v ? std::optional<Bytes>(*v) : std::nullopt;
}

const TealValue* KeyValueState::find(const Bytes& key) const
{
    auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : &it->second;
}

std::size_t KeyValueState::uint_count() const
{
    return static_cast<std::size_t>(std::count_if(entries_.begin(), entries_.end(), [](const auto& kv) {
        return std::holds_alternative<std::uint64_t>(kv.second);
    }));
}

std::size_t KeyValueState::bytes_count() const
{
    return entries_.size() - uint_count();
}

} // namespace bondsim
