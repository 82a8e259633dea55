#pragma once

#include "bondsim/greenbond/params.hpp"
#include "bondsim/greenbond/programs.hpp"
#include "bondsim/ledger/ledger.hpp"

#include <memory>
#include <string>

namespace bondsim::greenbond {

struct BondDeployment {
    BondParams params;
    AssetId bond_asset{};
    AppId main_app{};
    AppId manage_app{};
    Address bond_escrow;
    Address stablecoin_escrow;
    std::shared_ptr<const StatelessProgram> bond_escrow_program;
    std::shared_ptr<const StatelessProgram> stablecoin_escrow_program;
    // Cost-ledger scope for everything done on behalf of this bond.
    std::string scope;

    LogicSig bond_escrow_sig() const { return {bond_escrow_program, std::nullopt, {}}; }
    LogicSig stablecoin_escrow_sig() const { return {stablecoin_escrow_program, std::nullopt, {}}; }
};

struct TradeOffer {
    Address seller;
    std::uint64_t price_per_bond = 0;
    Timestamp expiry = 0;
    LogicSig lsig;
};

// Cost-ledger labels. Issuance labels follow the rows of the issuance cost
// table; the rest name investor, verifier and regulator actions.
namespace labels {
inline const std::string kCreateAsa = "Create new ASA";
inline const std::string kFundContracts = "Fund contract accounts";
inline const std::string kFundStablecoinEscrow = "Fund stablecoin escrow";
inline const std::string kSendAndConfigure = "Send green bond to escrow and configure";
inline const std::string kDeployMain = "Deploy Main App";
inline const std::string kDeployManage = "Deploy Manage App";
inline const std::string kUpdateApps = "Update Apps";
inline const std::string kUploadReport = "Upload Report";
inline const std::string kEscrowOptIn = "Escrow opt-in";
inline const std::string kOptIntoAsa = "Opt into ASA";
inline const std::string kOptIntoApp = "Opt into App";
inline const std::string kBuy = "Buy";
inline const std::string kSetTrade = "Set Trade";
inline const std::string kTradeSell = "Trade Sell";
inline const std::string kTradeBuy = "Trade Buy";
inline const std::string kClaimCoupon = "Claim Coupon";
inline const std::string kClaimPrincipal = "Claim Principal";
inline const std::string kClaimDefault = "Claim Default";
inline const std::string kRate = "Rate";
inline const std::string kFreezeAll = "Freeze All";
inline const std::string kFreeze = "Freeze";
inline const std::string kFundEscrow = "Fund Escrow";
} // namespace labels

// Algos sent to each escrow at issuance: base + one holding + its opt-in fee,
// with one fee of headroom for the bond escrow.
inline constexpr MicroAlgos kBondEscrowFunding = 202'000;
inline constexpr MicroAlgos kStablecoinEscrowFunding = 201'000;

// Algos the operator spends on issuance (fees, escrow funding and the
// minimum-balance increments of the asset and both apps), not counting the
// operator's own base reserve.
MicroAlgos issuance_cost(const BondParams& params, const MinBalanceSchedule& schedule);

// Mints the bond, deploys and cross-links both apps and escrows, and parks the
// whole supply in the bond escrow. The bond starts globally frozen. Throws
// std::invalid_argument on bad params and LedgerError if the operator cannot
// pay for every step (checked before anything is submitted).
BondDeployment issue(Ledger& ledger, const BondParams& params, const Address& operator_account,
                     std::string scope = "bond");

// Group builders. Amounts that depend on ledger state (coupon, principal and
// default payouts) are read from `ledger`; nothing is submitted.
TransactionGroup build_freeze_all(const BondDeployment& d, const Address& regulator,
                                  std::uint64_t value);
TransactionGroup build_freeze_account(const BondDeployment& d, const Address& regulator,
                                      const Address& target, std::uint64_t value);
TransactionGroup build_app_opt_in(const BondDeployment& d, const Address& investor);
TransactionGroup build_buy_group(const BondDeployment& d, const Address& investor,
                                 std::uint64_t amount);
TransactionGroup build_set_trade(const BondDeployment& d, const Address& seller,
                                 std::uint64_t amount);
TradeOffer make_trade_offer(Ledger& ledger, const BondDeployment& d, const Address& seller,
                            std::uint64_t price_per_bond, Timestamp expiry);
TransactionGroup build_trade_group(const BondDeployment& d, const TradeOffer& offer,
                                   const Address& buyer, std::uint64_t amount);
TransactionGroup build_fund_escrow(const BondDeployment& d, const Address& funder,
                                   std::uint64_t amount);
TransactionGroup build_rate(const BondDeployment& d, const Address& verifier,
                            std::uint64_t rating);
TransactionGroup build_coupon_group(const Ledger& ledger, const BondDeployment& d,
                                    const Address& investor);
TransactionGroup build_principal_group(const Ledger& ledger, const BondDeployment& d,
                                       const Address& investor);
TransactionGroup build_default_group(const Ledger& ledger, const BondDeployment& d,
                                     const Address& investor);

// Throws std::out_of_range for index > coupon_rounds.
std::uint8_t get_rating(const Ledger& ledger, const BondDeployment& d, std::uint64_t index);

// State readers.
std::uint64_t global_value(const Ledger& ledger, const BondDeployment& d, const Bytes& key);
std::uint64_t local_value(const Ledger& ledger, const BondDeployment& d, const Address& who,
                          const Bytes& key);
std::uint64_t circulation(const Ledger& ledger, const BondDeployment& d);
SolvencyView solvency_of(const Ledger& ledger, const BondDeployment& d);

// Convenience wrapper that builds, submits and tags each action for cost
// accounting.
class GreenBond {
public:
    GreenBond(Ledger& ledger, BondDeployment deployment)
        : ledger_(ledger), d_(std::move(deployment))
    {
    }

    const BondDeployment& deployment() const { return d_; }
    Ledger& ledger() { return ledger_; }

    // Opts the account into the bond asset and the Main app.
    GroupResult register_holder(const Address& who);
    GroupResult freeze_all(const Address& regulator, std::uint64_t value);
    GroupResult freeze_account(const Address& regulator, const Address& target,
                               std::uint64_t value);
    GroupResult buy(const Address& investor, std::uint64_t amount);
    GroupResult set_trade(const Address& seller, std::uint64_t amount);
    TradeOffer offer(const Address& seller, std::uint64_t price_per_bond, Timestamp expiry);
    GroupResult trade(const TradeOffer& offer, const Address& buyer, std::uint64_t amount);
    GroupResult fund_escrow(const Address& funder, std::uint64_t amount);
    GroupResult rate(const Address& verifier, std::uint64_t rating);
    GroupResult claim_coupon(const Address& investor);
    GroupResult claim_principal(const Address& investor);
    GroupResult claim_default(const Address& investor);

private:
    GroupResult submit(const TransactionGroup& g, const std::string& label);

    Ledger& ledger_;
    BondDeployment d_;
};

} // namespace bondsim::greenbond
