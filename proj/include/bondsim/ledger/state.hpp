#pragma once

#include "bondsim/ledger/types.hpp"
#include "bondsim/programs/state.hpp"

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>

namespace bondsim {

class StatefulProgram;

struct AssetParams {
    AssetId id{};
    Address creator;
    std::uint64_t total = 0;
    std::uint32_t decimals = 0;
    bool default_frozen = false;
    std::optional<Address> freeze;
    std::optional<Address> clawback;

    friend bool operator==(const AssetParams&, const AssetParams&) = default;
};

struct AssetHolding {
    std::uint64_t balance = 0;
    bool frozen = false;

    friend bool operator==(const AssetHolding&, const AssetHolding&) = default;
};

struct AccountState {
    MicroAlgos balance = 0;
    std::map<AssetId, AssetHolding> holdings;
    std::map<AppId, KeyValueState> local_states;
    std::set<AppId> created_apps;
    bool contract = false;

    friend bool operator==(const AccountState&, const AccountState&) = default;
};

struct AppState {
    AppId id{};
    Address creator;
    std::shared_ptr<const StatefulProgram> program;
    StateSchema schema;
    KeyValueState global;
    // Values attached after creation via UpdateApplication (escrow addresses,
    // sibling app ids).
    std::map<std::string, Bytes, std::less<>> links;
    bool finalized = false;

    friend bool operator==(const AppState&, const AppState&) = default;
};

// Complete ledger value. Groups are evaluated against a copy and committed by
// replacing the original, so a rejected group cannot leave a trace.
struct LedgerState {
    std::map<Address, AccountState> accounts;
    std::map<AssetId, AssetParams> assets;
    std::map<AppId, AppState> apps;
    std::uint64_t next_asset = 1;
    std::uint64_t next_app = 1;
    Timestamp now = 0;

    friend bool operator==(const LedgerState&, const LedgerState&) = default;

    AccountState& account(const Address& a);
    const AccountState& account(const Address& a) const;
    bool has_account(const Address& a) const { return accounts.contains(a); }
};

} // namespace bondsim
