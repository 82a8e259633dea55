#pragma once

#include "bondsim/ledger/types.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace bondsim {

// Attribution for cost accounting: scope groups entries by instrument (a bond
// name, or empty for wallet setup) and label names the action.
struct CostTag {
    std::string scope;
    std::string label;
    // Per-actor label overrides, for groups where parties play different roles.
    std::map<Address, std::string> actor_labels = {};

    const std::string& label_for(const Address& a) const
    {
        auto it = actor_labels.find(a);
        return it == actor_labels.end() ? label : it->second;
    }
};

// One actor's share of one approved action. amount is Algos paid to contract
// accounts (escrow funding and fee reimbursements).
struct CostEntry {
    Address actor;
    std::string scope;
    std::string label;
    MicroAlgos amount = 0;
    std::int64_t min_balance = 0;
    MicroAlgos fees = 0;

    std::int64_t total() const
    {
        return static_cast<std::int64_t>(amount) + min_balance + static_cast<std::int64_t>(fees);
    }
};

class CostLedger {
public:
    void record(CostEntry entry);

    MicroAlgos fees_paid(const Address& a) const;
    // Current sum of min-balance increments above the account base.
    MicroAlgos min_balance_locked(const Address& a) const;
    MicroAlgos contract_payments(const Address& a) const;

    // Sum of entry totals for an actor; an empty scope matches every entry.
    std::int64_t total(const Address& a, const std::string& scope = {}) const;

    // Entries merged by (actor, scope, label) in first-seen order.
    std::vector<CostEntry> rows() const;
    const std::vector<CostEntry>& entries() const { return entries_; }

private:
    std::vector<CostEntry> entries_;
    std::map<Address, MicroAlgos> fees_;
    std::map<Address, std::int64_t> locked_;
    std::map<Address, MicroAlgos> amounts_;
};

} // namespace bondsim
