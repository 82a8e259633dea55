#include "bondsim/ledger/state.hpp"

namespace bondsim {

AccountState& LedgerState::account(const Address& a)
{
    auto it = accounts.find(a);
    if (it == accounts.end()) {
        throw LedgerError("unknown address " + a.str());
    }
    return it->second;
}

const AccountState& LedgerState::account(const Address& a) const
{
    auto it = accounts.find(a);
    if (it == accounts.end()) {
        throw LedgerError("unknown address " + a.str());
    }
    return it->second;
}

} // namespace bondsim
