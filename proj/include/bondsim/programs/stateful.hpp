#pragma once

#include "bondsim/ledger/transaction.hpp"
#include "bondsim/programs/state.hpp"

#include <span>
#include <string>
#include <string_view>

namespace bondsim {

struct LedgerState;

struct Verdict {
    bool approved = false;
    std::string reason;

    static Verdict approve() { return {true, {}}; }
    static Verdict deny(std::string why) { return {false, std::move(why)}; }
    explicit operator bool() const { return approved; }
};

// Raised by CallContext accessors when a program touches something it may not
// (unreferenced account, missing opt-in, schema overflow). Turns into a deny.
class ProgramFault : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// View of the ledger handed to an approval program. Reads go to the group's
// working copy, so effects of earlier transactions in the group are visible;
// writes land in the same working copy and vanish if the group is rejected.
class CallContext {
public:
    CallContext(LedgerState& state, std::span<const Transaction> group, std::size_t index);

    std::span<const Transaction> group() const { return group_; }
    std::size_t index() const { return index_; }
    const Transaction& txn() const { return group_[index_]; }
    const AppCall& call() const { return *txn().app_call(); }
    const Address& sender() const { return txn().sender; }
    AppId app_id() const { return call().app; }
    OnComplete on_complete() const { return call().on_complete; }
    Timestamp now() const;

    // Argument helpers; missing arguments fault.
    const Bytes& arg(std::size_t i) const;
    std::uint64_t arg_uint(std::size_t i) const;
    std::size_t arg_count() const { return call().args.size(); }

    // Transaction at index() + offset, or nullptr when outside the group.
    const Transaction* peer(std::ptrdiff_t offset) const;

    // Own global state.
    std::uint64_t global_uint(const Bytes& key) const;
    std::optional<Bytes> global_bytes(const Bytes& key) const;
    void global_put(const Bytes& key, TealValue value);

    // Global state of this app or an app listed in the call's foreign apps.
    std::uint64_t foreign_global_uint(AppId app, const Bytes& key) const;
    std::optional<Bytes> foreign_global_bytes(AppId app, const Bytes& key) const;

    // Local state of the sender or an account listed in the call. Reading or
    // writing an account that has not opted in faults.
    bool opted_in(const Address& who) const;
    std::uint64_t local_uint(const Address& who, const Bytes& key) const;
    void local_put(const Address& who, const Bytes& key, TealValue value);

    // Balances of the sender or referenced accounts.
    MicroAlgos algo_balance(const Address& who) const;
    std::uint64_t asset_balance(const Address& who, AssetId asset) const;
    std::uint64_t asset_total(AssetId asset) const;

    // Addresses attached to the app after creation (escrow linking).
    Address linked(std::string_view name) const;
    AppId linked_app(std::string_view name) const;
    const Address& creator() const;

private:
    void require_account(const Address& who) const;
    void require_app(AppId app) const;
    const Bytes& link_value(std::string_view name) const;

    LedgerState& state_;
    std::span<const Transaction> group_;
    std::size_t index_;
};

class StatefulProgram {
public:
    virtual ~StatefulProgram() = default;

    virtual std::string_view name() const = 0;
    virtual StateSchema schema() const = 0;
    // Handles every on-completion except ClearState. UpdateApplication is
    // handled by the framework and never reaches the program.
    virtual Verdict approve(CallContext& ctx) const = 0;
    virtual Verdict clear_state(CallContext&) const { return Verdict::approve(); }
};

} // namespace bondsim
