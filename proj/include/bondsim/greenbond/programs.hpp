#pragma once

#include "bondsim/greenbond/params.hpp"
#include "bondsim/programs/stateful.hpp"
#include "bondsim/programs/stateless.hpp"

#include <memory>

namespace bondsim::greenbond {

// Names under which escrows and the sibling app are linked into each app
// after deployment.
namespace links {
inline constexpr std::string_view kBondEscrow = "bond_escrow";
inline constexpr std::string_view kStablecoinEscrow = "stablecoin_escrow";
inline constexpr std::string_view kManageApp = "manage_app";
} // namespace links

// Bond lifecycle bookkeeping: regulator gating, buy/trade allowances, coupon
// counters and the reserve of stablecoin owed for unlocked rounds.
//
// Global: CouponsPaid, Reserve, Frozen. Local: CouponsPaid, Trade, Frozen.
// A Frozen value of 0 blocks the holder (or everybody, for the global flag).
class MainApp final : public StatefulProgram {
public:
    MainApp(BondParams params, AssetId bond);

    std::string_view name() const override { return "green-bond-main"; }
    StateSchema schema() const override { return {3, 0, 3, 0}; }
    Verdict approve(CallContext& ctx) const override;

private:
    Verdict on_opt_in(CallContext& ctx) const;
    Verdict freeze_all(CallContext& ctx) const;
    Verdict freeze(CallContext& ctx) const;
    Verdict buy(CallContext& ctx) const;
    Verdict set_trade(CallContext& ctx) const;
    Verdict trade(CallContext& ctx) const;
    Verdict coupon(CallContext& ctx) const;
    Verdict sell(CallContext& ctx) const;
    Verdict claim_default(CallContext& ctx) const;

    BondParams params_;
    AssetId bond_;
};

// Ratings store and solvency checks. The solvency actions only approve when
// grouped directly after the matching Main call.
class ManageApp final : public StatefulProgram {
public:
    ManageApp(BondParams params, AssetId bond, AppId main);

    std::string_view name() const override { return "green-bond-manage"; }
    StateSchema schema() const override;
    Verdict approve(CallContext& ctx) const override;

private:
    Verdict rate(CallContext& ctx) const;
    Verdict not_defaulted(CallContext& ctx) const;
    Verdict claim_default(CallContext& ctx) const;

    BondParams params_;
    AssetId bond_;
    AppId main_;
};

// Snapshot of the figures the default test depends on.
struct SolvencyView {
    std::uint64_t escrow_balance = 0;
    std::uint64_t reserve = 0;
    std::uint64_t coupons_paid = 0;
    std::uint64_t circulation = 0;
    std::uint64_t next_obligation = 0;

    bool in_default() const { return escrow_balance < reserve + next_obligation; }
};

// Owes nothing more once every bond is back in the escrow.
SolvencyView solvency(const BondParams& p, std::uint64_t escrow_balance, std::uint64_t reserve,
                      std::uint64_t coupons_paid, std::uint64_t circulation,
                      std::uint64_t next_rating);

std::shared_ptr<const StatelessProgram> make_bond_escrow_program(AppId main, AssetId bond);
std::shared_ptr<const StatelessProgram> make_stablecoin_escrow_program(AppId main, AppId manage,
                                                                       AssetId stablecoin);

struct TradeTerms {
    AppId main{};
    AssetId bond{};
    AssetId stablecoin{};
    Address bond_escrow;
    Address seller;
    std::uint64_t price_per_bond = 0;
    Timestamp expiry = 0;
};

// Program a seller signs for delegated use. It authorizes the seller's Main
// "trade" call and fee payment inside a four-transaction group whose buyer leg
// pays amount * price / 10^6 to the seller, and nothing after expiry.
std::shared_ptr<const StatelessProgram> make_trade_offer_program(const TradeTerms& terms);

} // namespace bondsim::greenbond
