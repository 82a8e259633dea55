#include "bondsim/programs/stateful.hpp"

#include "bondsim/ledger/state.hpp"

#include <algorithm>

namespace bondsim {

CallContext::CallContext(LedgerState& state, std::span<const Transaction> group, std::size_t index)
    : state_(state), group_(group), index_(index)
{
}

Timestamp CallContext::now() const
{
    return state_.now;
}

const Bytes& CallContext::arg(std::size_t i) const
{
    if (i >= call().args.size()) {
        throw ProgramFault("missing argument " + std::to_string(i));
    }
    return call().args[i];
}

std::uint64_t CallContext::arg_uint(std::size_t i) const
{
    auto v = decode_uint(arg(i));
    if (!v) {
        throw ProgramFault("argument " + std::to_string(i) + " is not an integer");
    }
    return *v;
}

const Transaction* CallContext::peer(std::ptrdiff_t offset) const
{
    const auto pos = static_cast<std::ptrdiff_t>(index_) + offset;
    if (pos < 0 || pos >= static_cast<std::ptrdiff_t>(group_.size())) {
        return nullptr;
    }
    return &group_[static_cast<std::size_t>(pos)];
}

std::uint64_t CallContext::global_uint(const Bytes& key) const
{
    return state_.apps.at(app_id()).global.get_uint(key);
}

std::optional<Bytes> CallContext::global_bytes(const Bytes& key) const
{
    return state_.apps.at(app_id()).global.get_bytes(key);
}

void CallContext::global_put(const Bytes& key, TealValue value)
{
    state_.apps.at(app_id()).global.put(key, std::move(value));
}

std::uint64_t CallContext::foreign_global_uint(AppId app, const Bytes& key) const
{
    require_app(app);
    auto it = state_.apps.find(app);
    if (it == state_.apps.end()) {
        throw ProgramFault("unknown application " + std::to_string(raw(app)));
    }
    return it->second.global.get_uint(key);
}

std::optional<Bytes> CallContext::foreign_global_bytes(AppId app, const Bytes& key) const
{
    require_app(app);
    auto it = state_.apps.find(app);
    if (it == state_.apps.end()) {
        throw ProgramFault("unknown application " + std::to_string(raw(app)));
    }
    return it->second.global.get_bytes(key);
}

bool CallContext::opted_in(const Address& who) const
{
    require_account(who);
    auto it = state_.accounts.find(who);
    return it != state_.accounts.end() && it->second.local_states.contains(app_id());
}

std::uint64_t CallContext::local_uint(const Address& who, const Bytes& key) const
{
    if (!opted_in(who)) {
        throw ProgramFault(who.str() + " has not opted in");
    }
    return state_.accounts.at(who).local_states.at(app_id()).get_uint(key);
}

void CallContext::local_put(const Address& who, const Bytes& key, TealValue value)
{
    if (!opted_in(who)) {
        throw ProgramFault(who.str() + " has not opted in");
    }
    state_.accounts.at(who).local_states.at(app_id()).put(key, std::move(value));
}

MicroAlgos CallContext::algo_balance(const Address& who) const
{
    require_account(who);
    auto it = state_.accounts.find(who);
    return it == state_.accounts.end() ? 0 : it->second.balance;
}

std::uint64_t CallContext::asset_balance(const Address& who, AssetId asset) const
{
    require_account(who);
    auto it = state_.accounts.find(who);
    if (it == state_.accounts.end()) {
        return 0;
    }
    auto h = it->second.holdings.find(asset);
    return h == it->second.holdings.end() ? 0 : h->second.balance;
}

std::uint64_t CallContext::asset_total(AssetId asset) const
{
    auto it = state_.assets.find(asset);
    if (it == state_.assets.end()) {
        throw ProgramFault("unknown asset " + std::to_string(raw(asset)));
    }
    return it->second.total;
}

const Bytes& CallContext::link_value(std::string_view name) const
{
    const auto& links = state_.apps.at(app_id()).links;
    auto it = links.find(name);
    if (it == links.end()) {
        throw ProgramFault("nothing linked as '" + std::string(name) + "'");
    }
    return it->second;
}

Address CallContext::linked(std::string_view name) const
{
    return Address(link_value(name));
}

AppId CallContext::linked_app(std::string_view name) const
{
    auto v = decode_uint(link_value(name));
    if (!v) {
        throw ProgramFault("link '" + std::string(name) + "' is not an app id");
    }
    return AppId{*v};
}

const Address& CallContext::creator() const
{
    return state_.apps.at(app_id()).creator;
}

void CallContext::require_account(const Address& who) const
{
    const auto& refs = call().accounts;
    if (who != sender() && std::find(refs.begin(), refs.end(), who) == refs.end()) {
        throw ProgramFault("account " + who.str() + " not referenced");
    }
}

void CallContext::require_app(AppId app) const
{
    const auto& refs = call().apps;
    if (app != app_id() && std::find(refs.begin(), refs.end(), app) == refs.end()) {
        throw ProgramFault("application " + std::to_string(raw(app)) + " not referenced");
    }
}

} // namespace bondsim
