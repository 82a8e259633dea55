#include "bondsim/programs/stateless.hpp"

#include "bondsim/util/sha256.hpp"

namespace bondsim {

Address contract_account_address(const StatelessProgram& program)
{
    // Prefixed so contract addresses never collide with key-account addresses.
    return Address("LSIG" + sha256_hex("program:" + program.identity()).substr(0, 28));
}

bool eval_logic_signature(const LogicSig& sig, std::span<const Transaction> group,
                          std::size_t index)
{
    if (!sig.program || index >= group.size()) {
        return false;
    }
    const Address& sender = group[index].sender;
    const Address expected =
        sig.delegator ? *sig.delegator : contract_account_address(*sig.program);
    if (sender != expected) {
        return false;
    }
    return sig.program->evaluate(LogicContext{group, index, sig.args});
}

} // namespace bondsim
