#pragma once

#include "bondsim/ledger/costs.hpp"
#include "bondsim/ledger/state.hpp"
#include "bondsim/ledger/transaction.hpp"
#include "bondsim/programs/stateful.hpp"

#include <memory>
#include <set>
#include <span>
#include <utility>
#include <vector>

namespace bondsim {

// Minimum-balance increments. Defaults reproduce the published cost tables:
// 100,000 per asset holding, app = 100,000 + 28,000/uint + 50,000/byte slice
// (global schema for the creator, local schema for opted-in accounts).
struct MinBalanceSchedule {
    MicroAlgos account_base = 100'000;
    MicroAlgos asset_holding = 100'000;
    MicroAlgos app_base = 100'000;
    MicroAlgos per_uint = 28'000;
    MicroAlgos per_byte_slice = 50'000;

    MicroAlgos app_creation(const StateSchema& s) const
    {
        return app_base + per_uint * s.global_uints + per_byte_slice * s.global_bytes;
    }
    MicroAlgos app_opt_in(const StateSchema& s) const
    {
        return app_base + per_uint * s.local_uints + per_byte_slice * s.local_bytes;
    }
};

enum class RejectCode {
    None,
    GroupSize,
    FeeTooLow,
    NoteTooLarge,
    ClockWindow,
    UnknownAccount,
    UnknownAsset,
    UnknownApp,
    BadSignature,
    LogicRejected,
    AppRejected,
    InsufficientBalance,
    MinBalanceViolation,
    FrozenHolding,
    NotOptedIn,
    AlreadyOptedIn,
    NotClawback,
};

std::string_view to_string(RejectCode code);

struct GroupResult {
    RejectCode code = RejectCode::None;
    std::size_t txn_index = 0;
    std::string detail;

    bool approved() const { return code == RejectCode::None; }
    explicit operator bool() const { return approved(); }
    // "approved" or "<code> at txn <i>: <detail>"
    std::string describe() const;
};

struct CommittedTxn {
    std::uint64_t round = 0;
    std::size_t position = 0;
    Transaction txn;
};

struct AssetSpec {
    Address creator;
    std::uint64_t total = 0;
    std::uint32_t decimals = 0;
    bool default_frozen = false;
    std::optional<Address> freeze;
    std::optional<Address> clawback;
};

class Ledger {
public:
    explicit Ledger(MinBalanceSchedule schedule = {});

    Address create_account();
    // Dispenser: credits without a fee.
    void fund_algos(const Address& addr, MicroAlgos amount);

    // Direct single-transaction operations; each charges kMinFee to the actor
    // and throws LedgerError (leaving state untouched) if it cannot be paid.
    AssetId create_asset(const AssetSpec& spec, const CostTag& tag = {});
    void reconfigure_asset(AssetId asset, const Address& manager,
                           std::optional<Address> freeze, std::optional<Address> clawback,
                           const CostTag& tag = {});
    AppId register_stateful(std::shared_ptr<const StatefulProgram> program,
                            const Address& creator, const CostTag& tag = {});

    // Registers the program's contract account (idempotent) and returns its address.
    Address contract_account(const std::shared_ptr<const StatelessProgram>& program);
    // Off-ledger act of a key holder signing a program for delegated use.
    LogicSig sign_delegation(const Address& delegator,
                             std::shared_ptr<const StatelessProgram> program);

    GroupResult opt_in_asset(const Address& addr, AssetId asset, const CostTag& tag = {});
    GroupResult submit_group(std::span<const Transaction> group, const CostTag& tag = {});

    struct Simulation {
        GroupResult result;
        LedgerState state; // working state at the end of evaluation (or at the failing txn)
    };
    Simulation simulate(std::span<const Transaction> group) const;

    void advance_time(Timestamp to);
    Timestamp now() const { return state_.now; }

    MicroAlgos min_balance(const Address& addr) const;
    MicroAlgos balance(const Address& addr) const;
    std::uint64_t asset_balance(const Address& addr, AssetId asset) const;
    std::optional<AssetHolding> holding(const Address& addr, AssetId asset) const;
    const AssetParams& asset(AssetId id) const;
    const AppState& app(AppId id) const;
    std::optional<KeyValueState> local_state(const Address& addr, AppId app) const;

    const LedgerState& state() const { return state_; }
    const MinBalanceSchedule& schedule() const { return schedule_; }
    const CostLedger& costs() const { return costs_; }
    const std::vector<CommittedTxn>& history() const { return history_; }

private:
    void charge_direct(const Address& actor, MicroAlgos extra_min, const CostTag& tag,
                       const std::string& what);
    void record_costs(const LedgerState& before, std::span<const Transaction> group,
                      const CostTag& tag);

    MinBalanceSchedule schedule_;
    LedgerState state_;
    CostLedger costs_;
    std::vector<CommittedTxn> history_;
    std::set<std::pair<Address, std::string>> delegations_;
    std::uint64_t next_account_ = 1;
    std::uint64_t round_ = 0;
};

// Minimum balance implied by a state snapshot.
MicroAlgos min_balance_of(const LedgerState& state, const Address& addr,
                          const MinBalanceSchedule& schedule);

} // namespace bondsim
