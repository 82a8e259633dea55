#include "bondsim/ledger/costs.hpp"

#include <algorithm>
#include <tuple>

namespace bondsim {

void CostLedger::record(CostEntry entry)
{
    fees_[entry.actor] += entry.fees;
    locked_[entry.actor] += entry.min_balance;
    amounts_[entry.actor] += entry.amount;
    entries_.push_back(std::move(entry));
}

MicroAlgos CostLedger::fees_paid(const Address& a) const
{
    auto it = fees_.find(a);
    return it == fees_.end() ? 0 : it->second;
}

MicroAlgos CostLedger::min_balance_locked(const Address& a) const
{
    auto it = locked_.find(a);
    return it == locked_.end() ? 0 : static_cast<MicroAlgos>(std::max<std::int64_t>(0, it->second));
}

MicroAlgos CostLedger::contract_payments(const Address& a) const
{
    auto it = amounts_.find(a);
    return it == amounts_.end() ? 0 : it->second;
}

std::int64_t CostLedger::total(const Address& a, const std::string& scope) const
{
    std::int64_t sum = 0;
    for (const auto& e : entries_) {
        if (e.actor == a && (scope.empty() || e.scope == scope)) {
            sum += e.total();
        }
    }
    return sum;
}

std::vector<CostEntry> CostLedger::rows() const
{
    std::vector<CostEntry> out;
    for (const auto& e : entries_) {
        auto it = std::find_if(out.begin(), out.end(), [&](const CostEntry& r) {
            return std::tie(r.actor, r.scope, r.label) == std::tie(e.actor, e.scope, e.label);
        });
        if (it == out.end()) {
            out.push_back(e);
        } else {
            it->amount += e.amount;
            it->min_balance += e.min_balance;
            it->fees += e.fees;
        }
    }
    return out;
}

} // namespace bondsim
