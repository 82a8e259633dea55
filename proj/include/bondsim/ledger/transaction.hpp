#pragma once

#include "bondsim/ledger/types.hpp"

#include <memory>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace bondsim {

class StatelessProgram;

enum class OnComplete { NoOp, OptIn, CloseOut, ClearState, UpdateApplication, DeleteApplication };

std::string_view to_string(OnComplete oc);

struct Payment {
    Address receiver;
    MicroAlgos amount = 0;
};

// A zero-amount transfer to oneself is an opt-in. With revoke_target set the
// sender must be the asset's clawback authority and the units move out of
// revoke_target regardless of its frozen flag.
struct AssetTransfer {
    AssetId asset{};
    Address receiver;
    std::uint64_t amount = 0;
    std::optional<Address> revoke_target;
};

struct AppCall {
    AppId app{};
    OnComplete on_complete = OnComplete::NoOp;
    std::vector<Bytes> args;
    std::vector<Address> accounts;
    std::vector<AppId> apps;
};

struct SecretKey {
    Address signer;
};

// Without a delegator the program authorizes its own contract-account address;
// with one it authorizes transactions whose sender is the delegator.
struct LogicSig {
    std::shared_ptr<const StatelessProgram> program;
    std::optional<Address> delegator;
    std::vector<Bytes> args;
};

using Signature = std::variant<SecretKey, LogicSig>;

struct Transaction {
    Address sender;
    Signature signature;
    MicroAlgos fee = kMinFee;
    std::variant<Payment, AssetTransfer, AppCall> body;
    // Rejected by the ledger once now >= valid_before.
    std::optional<Timestamp> valid_before;
    Bytes note;

    const Payment* payment() const { return std::get_if<Payment>(&body); }
    const AssetTransfer* asset_transfer() const { return std::get_if<AssetTransfer>(&body); }
    const AppCall* app_call() const { return std::get_if<AppCall>(&body); }
    const LogicSig* logic_sig() const { return std::get_if<LogicSig>(&signature); }
};

using TransactionGroup = std::vector<Transaction>;

Transaction make_payment(const Address& from, const Address& to, MicroAlgos amount);
Transaction make_asset_transfer(const Address& from, const Address& to, AssetId asset,
                                std::uint64_t amount);
Transaction make_clawback(const Address& clawback, const Address& from, const Address& to,
                          AssetId asset, std::uint64_t amount);
Transaction make_app_call(const Address& from, AppId app, std::vector<Bytes> args,
                          OnComplete oc = OnComplete::NoOp);

// Re-signs a transaction with a logic signature (contract account or delegated).
Transaction with_signature(Transaction txn, Signature sig);

// TEAL-style argument encoding: 8-byte big-endian integers.
Bytes encode_uint(std::uint64_t v);
std::optional<std::uint64_t> decode_uint(std::string_view b);

} // namespace bondsim
