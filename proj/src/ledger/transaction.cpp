#include "bondsim/ledger/transaction.hpp"

namespace bondsim {

std::string_view to_string(OnComplete oc)
{
    switch (oc) {
    case OnComplete::NoOp: return "NoOp";
    case OnComplete::OptIn: return "OptIn";
    case OnComplete::CloseOut: return "CloseOut";
    case OnComplete::ClearState: return "ClearState";
    case OnComplete::UpdateApplication: return "UpdateApplication";
    case OnComplete::DeleteApplication: return "DeleteApplication";
    }
    return "?";
}

Transaction make_payment(const Address& from, const Address& to, MicroAlgos amount)
{
    Transaction t;
    t.sender = from;
    t.signature = SecretKey{from};
    t.body = Payment{to, amount};
    return t;
}

Transaction make_asset_transfer(const Address& from, const Address& to, AssetId asset,
                                std::uint64_t amount)
{
    Transaction t;
    t.sender = from;
    t.signature = SecretKey{from};
    t.body = AssetTransfer{asset, to, amount, std::nullopt};
    return t;
}

Transaction make_clawback(const Address& clawback, const Address& from, const Address& to,
                          AssetId asset, std::uint64_t amount)
{
    Transaction t;
    t.sender = clawback;
    t.signature = SecretKey{clawback};
    t.body = AssetTransfer{asset, to, amount, from};
    return t;
}

Transaction make_app_call(const Address& from, AppId app, std::vector<Bytes> args, OnComplete oc)
{
    Transaction t;
    t.sender = from;
    t.signature = SecretKey{from};
    AppCall call;
    call.app = app;
    call.on_complete = oc;
    call.args = std::move(args);
    t.body = std::move(call);
    return t;
}

Transaction with_signature(Transaction txn, Signature sig)
{
    txn.signature = std::move(sig);
    return txn;
}

Bytes encode_uint(std::uint64_t v)
{
    Bytes out(8, '\0');
    for (int i = 7; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = static_cast<char>(v & 0xff);
        v >>= 8;
    }
    return out;
}

std::optional<std::uint64_t> decode_uint(std::string_view b)
{
    if (b.size() != 8) {
        return std::nullopt;
    }
    std::uint64_t v = 0;
    for (char c : b) {
        v = (v << 8) | static_cast<unsigned char>(c);
    }
    return v;
}

} // namespace bondsim
