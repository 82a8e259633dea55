#include "bondsim/ledger/ledger.hpp"

#include "bondsim/programs/stateless.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

namespace bondsim {

std::string_view to_string(RejectCode code)
{
    switch (code) {
    case RejectCode::None: return "none";
    case RejectCode::GroupSize: return "group-size";
    case RejectCode::FeeTooLow: return "fee-too-low";
    case RejectCode::NoteTooLarge: return "note-too-large";
    case RejectCode::ClockWindow: return "clock-window";
    case RejectCode::UnknownAccount: return "unknown-account";
    case RejectCode::UnknownAsset: return "unknown-asset";
    case RejectCode::UnknownApp: return "unknown-app";
    case RejectCode::BadSignature: return "bad-signature";
    case RejectCode::LogicRejected: return "logic-rejected";
    case RejectCode::AppRejected: return "app-rejected";
    case RejectCode::InsufficientBalance: return "insufficient-balance";
    case RejectCode::MinBalanceViolation: return "min-balance";
    case RejectCode::FrozenHolding: return "frozen";
    case RejectCode::NotOptedIn: return "not-opted-in";
    case RejectCode::AlreadyOptedIn: return "already-opted-in";
    case RejectCode::NotClawback: return "not-clawback";
    }
    return "unknown";
}

std::string GroupResult::describe() const
{
    if (approved()) {
        return "approved";
    }
    std::string out(to_string(code));
    out += " at txn " + std::to_string(txn_index);
    if (!detail.empty()) {
        out += ": " + detail;
    }
    return out;
}

MicroAlgos min_balance_of(const LedgerState& state, const Address& addr,
                          const MinBalanceSchedule& schedule)
{
    const AccountState& acct = state.account(addr);
    MicroAlgos total = schedule.account_base + schedule.asset_holding * acct.holdings.size();
    for (AppId id : acct.created_apps) {
        total += schedule.app_creation(state.apps.at(id).schema);
    }
    for (const auto& [id, _] : acct.local_states) {
        total += schedule.app_opt_in(state.apps.at(id).schema);
    }
    return total;
}

namespace {

struct Rejection {
    RejectCode code;
    std::string detail;
};

using Delegations = std::set<std::pair<Address, std::string>>;

class GroupEvaluator {
public:
    GroupEvaluator(LedgerState& state, const MinBalanceSchedule& schedule,
                   const Delegations& delegations, std::span<const Transaction> group)
        : state_(state), schedule_(schedule), delegations_(delegations), group_(group)
    {
    }

    GroupResult run()
    {
        if (group_.empty() || group_.size() > kMaxGroupSize) {
            return {RejectCode::GroupSize, 0,
                    "group has " + std::to_string(group_.size()) + " transactions"};
        }
        for (std::size_t i = 0; i < group_.size(); ++i) {
            if (auto r = apply(i)) {
                return {r->code, i, std::move(r->detail)};
            }
        }
        for (const auto& [addr, last] : touched_) {
            auto it = state_.accounts.find(addr);
            if (it == state_.accounts.end()) {
                continue;
            }
            const MicroAlgos required = min_balance_of(state_, addr, schedule_);
            const bool dormant = it->second.balance == 0 && required == schedule_.account_base;
            if (!dormant && it->second.balance < required) {
                return {RejectCode::MinBalanceViolation, last,
                        addr.str() + " balance " + std::to_string(it->second.balance) +
                            " below minimum " + std::to_string(required)};
            }
        }
        return {};
    }

private:
    void touch(const Address& a, std::size_t i) { touched_[a] = i; }

    std::optional<Rejection> apply(std::size_t i)
    {
        const Transaction& txn = group_[i];
        if (txn.fee < kMinFee) {
            return Rejection{RejectCode::FeeTooLow, "fee " + std::to_string(txn.fee)};
        }
        if (txn.note.size() > kMaxNoteBytes) {
            return Rejection{RejectCode::NoteTooLarge,
                             "note of " + std::to_string(txn.note.size()) + " bytes"};
        }
        if (txn.valid_before && state_.now >= *txn.valid_before) {
            return Rejection{RejectCode::ClockWindow,
                             "expired at " + std::to_string(*txn.valid_before)};
        }
        auto sender_it = state_.accounts.find(txn.sender);
        if (sender_it == state_.accounts.end()) {
            return Rejection{RejectCode::UnknownAccount, txn.sender.str()};
        }
        if (auto r = authorize(i)) {
            return r;
        }
        AccountState& sender = sender_it->second;
        if (sender.balance < txn.fee) {
            return Rejection{RejectCode::InsufficientBalance, txn.sender.str() + " cannot pay fee"};
        }
        sender.balance -= txn.fee;
        touch(txn.sender, i);

        if (const auto* pay = txn.payment()) {
            return apply_payment(i, *pay);
        }
        if (const auto* xfer = txn.asset_transfer()) {
            return apply_asset_transfer(i, *xfer);
        }
        return apply_app_call(i, *txn.app_call());
    }

    std::optional<Rejection> authorize(std::size_t i)
    {
        const Transaction& txn = group_[i];
        if (const auto* key = std::get_if<SecretKey>(&txn.signature)) {
            if (key->signer != txn.sender || state_.accounts.at(txn.sender).contract) {
                return Rejection{RejectCode::BadSignature,
                                 "key of " + key->signer.str() + " cannot sign for " +
                                     txn.sender.str()};
            }
            return std::nullopt;
        }
        const LogicSig& sig = *txn.logic_sig();
        if (!sig.program) {
            return Rejection{RejectCode::BadSignature, "empty logic signature"};
        }
        if (sig.delegator) {
            if (*sig.delegator != txn.sender ||
                !delegations_.contains({*sig.delegator, sig.program->identity()})) {
                return Rejection{RejectCode::BadSignature,
                                 "delegation not signed by " + txn.sender.str()};
            }
        } else if (contract_account_address(*sig.program) != txn.sender) {
            return Rejection{RejectCode::BadSignature,
                             "program does not control " + txn.sender.str()};
        }
        if (!eval_logic_signature(sig, group_, i)) {
            return Rejection{RejectCode::LogicRejected, sig.program->identity()};
        }
        return std::nullopt;
    }

    std::optional<Rejection> apply_payment(std::size_t i, const Payment& pay)
    {
        const Transaction& txn = group_[i];
        auto recv = state_.accounts.find(pay.receiver);
        if (recv == state_.accounts.end()) {
            return Rejection{RejectCode::UnknownAccount, pay.receiver.str()};
        }
        AccountState& sender = state_.accounts.at(txn.sender);
        if (sender.balance < pay.amount) {
            return Rejection{RejectCode::InsufficientBalance,
                             txn.sender.str() + " has " + std::to_string(sender.balance) +
                                 ", needs " + std::to_string(pay.amount)};
        }
        sender.balance -= pay.amount;
        recv->second.balance += pay.amount;
        touch(pay.receiver, i);
        return std::nullopt;
    }

    std::optional<Rejection> apply_asset_transfer(std::size_t i, const AssetTransfer& xfer)
    {
        const Transaction& txn = group_[i];
        auto asset_it = state_.assets.find(xfer.asset);
        if (asset_it == state_.assets.end()) {
            return Rejection{RejectCode::UnknownAsset, std::to_string(raw(xfer.asset))};
        }
        const AssetParams& asset = asset_it->second;
        AccountState& sender = state_.accounts.at(txn.sender);

        const bool opt_in = xfer.amount == 0 && xfer.receiver == txn.sender &&
                            !xfer.revoke_target && !sender.holdings.contains(xfer.asset);
        if (opt_in) {
            sender.holdings.emplace(xfer.asset, AssetHolding{0, asset.default_frozen});
            return std::nullopt;
        }

        const Address& source_addr = xfer.revoke_target ? *xfer.revoke_target : txn.sender;
        if (xfer.revoke_target && asset.clawback != txn.sender) {
            return Rejection{RejectCode::NotClawback,
                             txn.sender.str() + " is not the clawback of asset " +
                                 std::to_string(raw(xfer.asset))};
        }
        auto source_acct = state_.accounts.find(source_addr);
        if (source_acct == state_.accounts.end()) {
            return Rejection{RejectCode::UnknownAccount, source_addr.str()};
        }
        auto source = source_acct->second.holdings.find(xfer.asset);
        if (source == source_acct->second.holdings.end()) {
            return Rejection{RejectCode::NotOptedIn, source_addr.str()};
        }
        if (!xfer.revoke_target && source->second.frozen) {
            return Rejection{RejectCode::FrozenHolding,
                             source_addr.str() + " holding of asset " +
                                 std::to_string(raw(xfer.asset)) + " is frozen"};
        }
        auto recv_acct = state_.accounts.find(xfer.receiver);
        if (recv_acct == state_.accounts.end()) {
            return Rejection{RejectCode::UnknownAccount, xfer.receiver.str()};
        }
        auto dest = recv_acct->second.holdings.find(xfer.asset);
        if (dest == recv_acct->second.holdings.end()) {
            return Rejection{RejectCode::NotOptedIn,
                             xfer.receiver.str() + " has not opted into asset " +
                                 std::to_string(raw(xfer.asset))};
        }
        if (source->second.balance < xfer.amount) {
            return Rejection{RejectCode::InsufficientBalance,
                             source_addr.str() + " holds " +
                                 std::to_string(source->second.balance) + " of asset " +
                                 std::to_string(raw(xfer.asset)) + ", needs " +
                                 std::to_string(xfer.amount)};
        }
        source->second.balance -= xfer.amount;
        dest->second.balance += xfer.amount;
        touch(source_addr, i);
        touch(xfer.receiver, i);
        return std::nullopt;
    }

    Verdict run_program(std::size_t i, const AppState& app, bool clear)
    {
        CallContext ctx(state_, group_, i);
        try {
            return clear ? app.program->clear_state(ctx) : app.program->approve(ctx);
        } catch (const ProgramFault& f) {
            return Verdict::deny(f.what());
        } catch (const std::exception& e) {
            // Any runtime error inside a program rejects the call, as a failed
            // assertion would on chain.
            return Verdict::deny(std::string("program error: ") + e.what());
        }
    }

    std::optional<std::string> schema_violation(AppId id) const
    {
        const AppState& app = state_.apps.at(id);
        const StateSchema& s = app.schema;
        if (!app.global.fits(s.global_uints, s.global_bytes) || app.global.size() > kMaxGlobalPairs) {
            return "global state exceeds schema";
        }
        for (const auto& [addr, acct] : state_.accounts) {
            auto it = acct.local_states.find(id);
            if (it != acct.local_states.end() &&
                (!it->second.fits(s.local_uints, s.local_bytes) ||
                 it->second.size() > kMaxLocalPairs)) {
                return "local state of " + addr.str() + " exceeds schema";
            }
        }
        return std::nullopt;
    }

    std::optional<Rejection> apply_app_call(std::size_t i, const AppCall& call)
    {
        const Transaction& txn = group_[i];
        auto app_it = state_.apps.find(call.app);
        if (app_it == state_.apps.end()) {
            return Rejection{RejectCode::UnknownApp, std::to_string(raw(call.app))};
        }
        const std::string app_name(app_it->second.program->name());
        AccountState& sender = state_.accounts.at(txn.sender);
        const bool was_opted_in = sender.local_states.contains(call.app);

        switch (call.on_complete) {
        case OnComplete::UpdateApplication:
            return apply_update(i, app_it->second);
        case OnComplete::ClearState: {
            if (!was_opted_in) {
                return Rejection{RejectCode::NotOptedIn, txn.sender.str()};
            }
            // The clear program's writes survive only if it approves; the
            // opt-out happens either way.
            LedgerState scratch = state_;
            GroupEvaluator inner(scratch, schedule_, delegations_, group_);
            const Verdict v = inner.run_program(i, scratch.apps.at(call.app), true);
            if (v && !inner.schema_violation(call.app)) {
                state_ = std::move(scratch);
            }
            state_.accounts.at(txn.sender).local_states.erase(call.app);
            return std::nullopt;
        }
        case OnComplete::OptIn:
            if (was_opted_in) {
                return Rejection{RejectCode::AlreadyOptedIn,
                                 txn.sender.str() + " already opted into app " +
                                     std::to_string(raw(call.app))};
            }
            sender.local_states.emplace(call.app, KeyValueState{});
            break;
        case OnComplete::CloseOut:
            if (!was_opted_in) {
                return Rejection{RejectCode::NotOptedIn, txn.sender.str()};
            }
            break;
        case OnComplete::DeleteApplication:
            if (app_it->second.finalized) {
                return Rejection{RejectCode::AppRejected, app_name + ": application is finalized"};
            }
            break;
        case OnComplete::NoOp:
            break;
        }

        const Verdict v = run_program(i, app_it->second, false);
        if (!v) {
            return Rejection{RejectCode::AppRejected, app_name + ": " + v.reason};
        }
        if (auto bad = schema_violation(call.app)) {
            return Rejection{RejectCode::AppRejected, app_name + ": " + *bad};
        }

        if (call.on_complete == OnComplete::CloseOut) {
            state_.accounts.at(txn.sender).local_states.erase(call.app);
        } else if (call.on_complete == OnComplete::DeleteApplication) {
            const Address creator = app_it->second.creator;
            for (auto& [addr, acct] : state_.accounts) {
                if (acct.local_states.erase(call.app) > 0) {
                    touch(addr, i);
                }
            }
            state_.accounts.at(creator).created_apps.erase(call.app);
            touch(creator, i);
            state_.apps.erase(call.app);
        }
        return std::nullopt;
    }

    // Escrow linking: args are a sequence of `link <name> <address>` triples
    // optionally followed by `finalize`. Only the creator may update, and only
    // before finalization.
    std::optional<Rejection> apply_update(std::size_t i, AppState& app)
    {
        const Transaction& txn = group_[i];
        const std::string name(app.program->name());
        if (app.finalized) {
            return Rejection{RejectCode::AppRejected, name + ": application is finalized"};
        }
        if (txn.sender != app.creator) {
            return Rejection{RejectCode::AppRejected, name + ": only the creator may update"};
        }
        const auto& args = txn.app_call()->args;
        std::map<std::string, Bytes, std::less<>> links = app.links;
        bool finalize = false;
        for (std::size_t k = 0; k < args.size();) {
            if (args[k] == "link" && k + 2 < args.size() && !finalize) {
                links[args[k + 1]] = args[k + 2];
                k += 3;
            } else if (args[k] == "finalize" && k + 1 == args.size()) {
                finalize = true;
                ++k;
            } else {
                return Rejection{RejectCode::AppRejected, name + ": malformed update arguments"};
            }
        }
        app.links = std::move(links);
        app.finalized = finalize;
        return std::nullopt;
    }

    LedgerState& state_;
    const MinBalanceSchedule& schedule_;
    const Delegations& delegations_;
    std::span<const Transaction> group_;
    std::map<Address, std::size_t> touched_;
};

} // namespace

Ledger::Ledger(MinBalanceSchedule schedule) : schedule_(schedule) {}

Address Ledger::create_account()
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "ACCT%06llu", static_cast<unsigned long long>(next_account_++));
    Address addr(buf);
    state_.accounts.emplace(addr, AccountState{});
    return addr;
}

void Ledger::fund_algos(const Address& addr, MicroAlgos amount)
{
    state_.account(addr).balance += amount;
}

void Ledger::charge_direct(const Address& actor, MicroAlgos extra_min, const CostTag& tag,
                           const std::string& what)
{
    AccountState& acct = state_.account(actor);
    const MicroAlgos required = min_balance_of(state_, actor, schedule_) + extra_min;
    if (acct.balance < kMinFee || acct.balance - kMinFee < required) {
        throw LedgerError(what + ": " + actor.str() + " balance " + std::to_string(acct.balance) +
                          " cannot cover fee " + std::to_string(kMinFee) + " and minimum " +
                          std::to_string(required));
    }
    acct.balance -= kMinFee;
    costs_.record(CostEntry{actor, tag.scope, tag.label, 0, static_cast<std::int64_t>(extra_min),
                            kMinFee});
    ++round_;
}

AssetId Ledger::create_asset(const AssetSpec& spec, const CostTag& tag)
{
    charge_direct(spec.creator, schedule_.asset_holding, tag, "create asset");
    const AssetId id{state_.next_asset++};
    state_.assets.emplace(id, AssetParams{id, spec.creator, spec.total, spec.decimals,
                                          spec.default_frozen, spec.freeze, spec.clawback});
    state_.account(spec.creator).holdings.emplace(id, AssetHolding{spec.total, false});
    return id;
}

void Ledger::reconfigure_asset(AssetId asset, const Address& manager,
                               std::optional<Address> freeze, std::optional<Address> clawback,
                               const CostTag& tag)
{
    auto it = state_.assets.find(asset);
    if (it == state_.assets.end()) {
        throw LedgerError("unknown asset " + std::to_string(raw(asset)));
    }
    if (it->second.creator != manager) {
        throw LedgerError("only the creator may reconfigure asset " + std::to_string(raw(asset)));
    }
    charge_direct(manager, 0, tag, "reconfigure asset");
    it->second.freeze = std::move(freeze);
    it->second.clawback = std::move(clawback);
}

AppId Ledger::register_stateful(std::shared_ptr<const StatefulProgram> program,
                                const Address& creator, const CostTag& tag)
{
    if (!program) {
        throw LedgerError("no program");
    }
    const StateSchema schema = program->schema();
    if (schema.global_uints + schema.global_bytes > kMaxGlobalPairs ||
        schema.local_uints + schema.local_bytes > kMaxLocalPairs) {
        throw LedgerError("schema exceeds 64 global / 16 local pairs");
    }
    charge_direct(creator, schedule_.app_creation(schema), tag, "create application");
    const AppId id{state_.next_app++};
    AppState app;
    app.id = id;
    app.creator = creator;
    app.program = std::move(program);
    app.schema = schema;
    state_.apps.emplace(id, std::move(app));
    state_.account(creator).created_apps.insert(id);
    return id;
}

Address Ledger::contract_account(const std::shared_ptr<const StatelessProgram>& program)
{
    if (!program) {
        throw LedgerError("no program");
    }
    Address addr = contract_account_address(*program);
    state_.accounts[addr].contract = true;
    return addr;
}

LogicSig Ledger::sign_delegation(const Address& delegator,
                                 std::shared_ptr<const StatelessProgram> program)
{
    if (!program) {
        throw LedgerError("no program");
    }
    if (state_.account(delegator).contract) {
        throw LedgerError("contract accounts hold no key");
    }
    delegations_.emplace(delegator, program->identity());
    return LogicSig{std::move(program), delegator, {}};
}

GroupResult Ledger::opt_in_asset(const Address& addr, AssetId asset, const CostTag& tag)
{
    if (state_.account(addr).holdings.contains(asset)) {
        return {RejectCode::AlreadyOptedIn, 0,
                addr.str() + " already opted into asset " + std::to_string(raw(asset))};
    }
    const Transaction txn = make_asset_transfer(addr, addr, asset, 0);
    return submit_group(std::span(&txn, 1), tag);
}

GroupResult Ledger::submit_group(std::span<const Transaction> group, const CostTag& tag)
{
    LedgerState working = state_;
    GroupEvaluator eval(working, schedule_, delegations_, group);
    GroupResult result = eval.run();
    if (!result) {
        return result;
    }
    record_costs(working, group, tag);
    state_ = std::move(working);
    ++round_;
    for (std::size_t i = 0; i < group.size(); ++i) {
        history_.push_back(CommittedTxn{round_, i, group[i]});
    }
    return result;
}

Ledger::Simulation Ledger::simulate(std::span<const Transaction> group) const
{
    Simulation sim{{}, state_};
    GroupEvaluator eval(sim.state, schedule_, delegations_, group);
    sim.result = eval.run();
    return sim;
}

void Ledger::record_costs(const LedgerState& after, std::span<const Transaction> group,
                          const CostTag& tag)
{
    std::vector<Address> order;
    std::map<Address, CostEntry> by_actor;
    auto entry = [&](const Address& a) -> CostEntry& {
        auto [it, inserted] = by_actor.try_emplace(a);
        if (inserted) {
            it->second.actor = a;
            it->second.scope = tag.scope;
            it->second.label = tag.label_for(a);
            order.push_back(a);
        }
        return it->second;
    };
    for (const auto& txn : group) {
        CostEntry& e = entry(txn.sender);
        e.fees += txn.fee;
        if (const auto* pay = txn.payment(); pay && pay->receiver != txn.sender) {
            auto it = after.accounts.find(pay->receiver);
            if (it != after.accounts.end() && it->second.contract) {
                e.amount += pay->amount;
            }
        }
    }
    for (const auto& [addr, _] : after.accounts) {
        const MicroAlgos now_min = min_balance_of(after, addr, schedule_);
        const MicroAlgos was_min = state_.accounts.contains(addr)
                                       ? min_balance_of(state_, addr, schedule_)
                                       : schedule_.account_base;
        if (now_min != was_min) {
            entry(addr).min_balance +=
                static_cast<std::int64_t>(now_min) - static_cast<std::int64_t>(was_min);
        }
    }
    for (const auto& a : order) {
        costs_.record(by_actor.at(a));
    }
}

void Ledger::advance_time(Timestamp to)
{
    if (to < state_.now) {
        throw LedgerError("cannot move time backwards from " + std::to_string(state_.now) +
                          " to " + std::to_string(to));
    }
    state_.now = to;
}

MicroAlgos Ledger::min_balance(const Address& addr) const
{
    return min_balance_of(state_, addr, schedule_);
}

MicroAlgos Ledger::balance(const Address& addr) const
{
    return state_.account(addr).balance;
}

std::uint64_t Ledger::asset_balance(const Address& addr, AssetId asset) const
{
    auto h = holding(addr, asset);
    return h ? h->balance : 0;
}

std::optional<AssetHolding> Ledger::holding(const Address& addr, AssetId asset) const
{
    const auto& holdings = state_.account(addr).holdings;
    auto it = holdings.find(asset);
    return it == holdings.end() ? std::nullopt : std::optional<AssetHolding>(it->second);
}

const AssetParams& Ledger::asset(AssetId id) const
{
    auto it = state_.assets.find(id);
    if (it == state_.assets.end()) {
        throw LedgerError("unknown asset " + std::to_string(raw(id)));
    }
    return it->second;
}

const AppState& Ledger::app(AppId id) const
{
    auto it = state_.apps.find(id);
    if (it == state_.apps.end()) {
        throw LedgerError("unknown application " + std::to_string(raw(id)));
    }
    return it->second;
}

std::optional<KeyValueState> Ledger::local_state(const Address& addr, AppId app) const
{
    const auto& locals = state_.account(addr).local_states;
    auto it = locals.find(app);
    return it == locals.end() ? std::nullopt : std::optional<KeyValueState>(it->second);
}

} // namespace bondsim
