#pragma once

#include "bondsim/ledger/transaction.hpp"

#include <functional>
#include <span>
#include <string>

namespace bondsim {

// Everything a stateless program can see: the group being submitted, the
// position of the transaction it signs, and its own arguments. No ledger state.
struct LogicContext {
    std::span<const Transaction> group;
    std::size_t index = 0;
    std::span<const Bytes> args;

    const Transaction& txn() const { return group[index]; }
};

class StatelessProgram {
public:
    using Predicate = std::function<bool(const LogicContext&)>;

    // identity must capture every parameter baked into the predicate; the
    // contract-account address is derived from it.
    StatelessProgram(std::string identity, Predicate predicate)
        : identity_(std::move(identity)), predicate_(std::move(predicate))
    {
    }

    const std::string& identity() const { return identity_; }
    bool evaluate(const LogicContext& ctx) const { return predicate_ && predicate_(ctx); }

private:
    std::string identity_;
    Predicate predicate_;
};

Address contract_account_address(const StatelessProgram& program);

// Checks authorization scope (sender must be the contract address, or the
// delegator for delegated signatures) and the predicate. Whether the delegator
// actually signed the program is ledger bookkeeping, not checked here.
bool eval_logic_signature(const LogicSig& sig, std::span<const Transaction> group,
                          std::size_t index);

} // namespace bondsim
