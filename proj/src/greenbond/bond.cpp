#include "bondsim/greenbond/bond.hpp"

#include <stdexcept>

namespace bondsim::greenbond {

namespace {

TransactionGroup one(Transaction t)
{
    TransactionGroup g;
    g.push_back(std::move(t));
    return g;
}

Transaction main_call(const BondDeployment& d, const Address& from, std::vector<Bytes> args)
{
    return make_app_call(from, d.main_app, std::move(args));
}

Transaction manage_call(const BondDeployment& d, const Address& from, std::vector<Bytes> args)
{
    return make_app_call(from, d.manage_app, std::move(args));
}

void reference(Transaction& t, std::vector<Address> accounts, std::vector<AppId> apps = {})
{
    auto& call = std::get<AppCall>(t.body);
    call.accounts = std::move(accounts);
    call.apps = std::move(apps);
}

std::uint64_t holdings_of(const Ledger& ledger, const BondDeployment& d, const Address& who)
{
    return ledger.state().has_account(who) ? ledger.asset_balance(who, d.bond_asset) : 0;
}

} // namespace

MicroAlgos issuance_cost(const BondParams& params, const MinBalanceSchedule& schedule)
{
    const MicroAlgos asset = schedule.asset_holding + kMinFee;
    const MicroAlgos main = schedule.app_creation(MainApp(params, {}).schema()) + kMinFee;
    const MicroAlgos manage = schedule.app_creation(ManageApp(params, {}, {}).schema()) + kMinFee;
    const MicroAlgos funding = kBondEscrowFunding + kStablecoinEscrowFunding + 2 * kMinFee;
    const MicroAlgos send_and_configure = 2 * kMinFee;
    const MicroAlgos update_apps = 2 * kMinFee;
    return asset + main + manage + funding + send_and_configure + update_apps;
}

BondDeployment issue(Ledger& ledger, const BondParams& params, const Address& operator_account,
                     std::string scope)
{
    params.validate();
    const MicroAlgos needed = issuance_cost(params, ledger.schedule());
    const MicroAlgos have = ledger.balance(operator_account);
    if (have < ledger.min_balance(operator_account) + needed) {
        throw LedgerError("operator " + operator_account.str() + " needs " +
                          std::to_string(needed) + " microAlgos above its minimum balance, has " +
                          std::to_string(have));
    }

    BondDeployment d;
    d.params = params;
    d.scope = std::move(scope);
    auto tag = [&](const std::string& label) { return CostTag{d.scope, label}; };
    auto must = [&](const TransactionGroup& g, const std::string& label) {
        const GroupResult r = ledger.submit_group(g, tag(label));
        if (!r) {
            throw LedgerError("issuance step '" + label + "' rejected: " + r.describe());
        }
    };

    d.bond_asset = ledger.create_asset(
        AssetSpec{operator_account, params.supply(), kBondDecimals, true, std::nullopt, std::nullopt},
        tag(labels::kCreateAsa));
    d.main_app = ledger.register_stateful(std::make_shared<MainApp>(params, d.bond_asset),
                                          operator_account, tag(labels::kDeployMain));
    d.manage_app = ledger.register_stateful(
        std::make_shared<ManageApp>(params, d.bond_asset, d.main_app), operator_account,
        tag(labels::kDeployManage));

    d.bond_escrow_program = make_bond_escrow_program(d.main_app, d.bond_asset);
    d.stablecoin_escrow_program =
        make_stablecoin_escrow_program(d.main_app, d.manage_app, params.stablecoin);
    d.bond_escrow = ledger.contract_account(d.bond_escrow_program);
    d.stablecoin_escrow = ledger.contract_account(d.stablecoin_escrow_program);

    must(one(make_payment(operator_account, d.bond_escrow, kBondEscrowFunding)),
         labels::kFundContracts);
    must(one(with_signature(make_asset_transfer(d.bond_escrow, d.bond_escrow, d.bond_asset, 0),
                            d.bond_escrow_sig())),
         labels::kEscrowOptIn);
    must(one(make_payment(operator_account, d.stablecoin_escrow, kStablecoinEscrowFunding)),
         labels::kFundStablecoinEscrow);
    must(one(with_signature(
             make_asset_transfer(d.stablecoin_escrow, d.stablecoin_escrow, params.stablecoin, 0),
             d.stablecoin_escrow_sig())),
         labels::kEscrowOptIn);

    must(one(make_asset_transfer(operator_account, d.bond_escrow, d.bond_asset, params.supply())),
         labels::kSendAndConfigure);
    ledger.reconfigure_asset(d.bond_asset, operator_account, std::nullopt, d.bond_escrow,
                             tag(labels::kSendAndConfigure));

    const Bytes link = "link";
    must(one(make_app_call(operator_account, d.main_app,
                           {link, Bytes(links::kBondEscrow), d.bond_escrow.str(),
                            link, Bytes(links::kStablecoinEscrow), d.stablecoin_escrow.str(),
                            link, Bytes(links::kManageApp), encode_uint(raw(d.manage_app)),
                            "finalize"},
                           OnComplete::UpdateApplication)),
         labels::kUpdateApps);
    must(one(make_app_call(operator_account, d.manage_app,
                           {link, Bytes(links::kBondEscrow), d.bond_escrow.str(),
                            link, Bytes(links::kStablecoinEscrow), d.stablecoin_escrow.str(),
                            "finalize"},
                           OnComplete::UpdateApplication)),
         labels::kUpdateApps);
    return d;
}

TransactionGroup build_freeze_all(const BondDeployment& d, const Address& regulator,
                                  std::uint64_t value)
{
    return one(main_call(d, regulator, {actions::kFreezeAll, encode_uint(value)}));
}

TransactionGroup build_freeze_account(const BondDeployment& d, const Address& regulator,
                                      const Address& target, std::uint64_t value)
{
    Transaction t = main_call(d, regulator, {actions::kFreeze, encode_uint(value)});
    reference(t, {target});
    return one(std::move(t));
}

TransactionGroup build_app_opt_in(const BondDeployment& d, const Address& investor)
{
    return one(make_app_call(investor, d.main_app, {}, OnComplete::OptIn));
}

TransactionGroup build_buy_group(const BondDeployment& d, const Address& investor,
                                 std::uint64_t amount)
{
    TransactionGroup g;
    Transaction call = main_call(d, investor, {actions::kBuy});
    reference(call, {d.bond_escrow});
    g.push_back(std::move(call));
    g.push_back(make_payment(investor, d.bond_escrow, kMinFee));
    g.push_back(with_signature(
        make_clawback(d.bond_escrow, d.bond_escrow, investor, d.bond_asset, amount),
        d.bond_escrow_sig()));
    g.push_back(make_asset_transfer(investor, d.params.issuer, d.params.stablecoin,
                                    mul_div(amount, d.params.bond_cost, kBondUnit)));
    return g;
}

TransactionGroup build_set_trade(const BondDeployment& d, const Address& seller,
                                 std::uint64_t amount)
{
    return one(main_call(d, seller, {actions::kSetTrade, encode_uint(amount)}));
}

TradeOffer make_trade_offer(Ledger& ledger, const BondDeployment& d, const Address& seller,
                            std::uint64_t price_per_bond, Timestamp expiry)
{
    TradeTerms terms{d.main_app, d.bond_asset, d.params.stablecoin, d.bond_escrow,
                     seller,     price_per_bond, expiry};
    return TradeOffer{seller, price_per_bond, expiry,
                      ledger.sign_delegation(seller, make_trade_offer_program(terms))};
}

TransactionGroup build_trade_group(const BondDeployment& d, const TradeOffer& offer,
                                   const Address& buyer, std::uint64_t amount)
{
    TransactionGroup g;
    Transaction call = main_call(d, offer.seller, {actions::kTrade});
    reference(call, {buyer, d.bond_escrow});
    call = with_signature(std::move(call), offer.lsig);
    call.valid_before = offer.expiry;
    g.push_back(std::move(call));

    Transaction fee = with_signature(make_payment(offer.seller, d.bond_escrow, kMinFee), offer.lsig);
    fee.valid_before = offer.expiry;
    g.push_back(std::move(fee));

    g.push_back(with_signature(
        make_clawback(d.bond_escrow, offer.seller, buyer, d.bond_asset, amount),
        d.bond_escrow_sig()));
    g.push_back(make_asset_transfer(buyer, offer.seller, d.params.stablecoin,
                                    mul_div(amount, offer.price_per_bond, kBondUnit)));
    return g;
}

TransactionGroup build_fund_escrow(const BondDeployment& d, const Address& funder,
                                   std::uint64_t amount)
{
    return one(make_asset_transfer(funder, d.stablecoin_escrow, d.params.stablecoin, amount));
}

TransactionGroup build_rate(const BondDeployment& d, const Address& verifier,
                            std::uint64_t rating)
{
    return one(manage_call(d, verifier, {actions::kRate, encode_uint(rating)}));
}

TransactionGroup build_coupon_group(const Ledger& ledger, const BondDeployment& d,
                                    const Address& investor)
{
    const std::uint64_t holdings = holdings_of(ledger, d, investor);
    const std::uint64_t round = local_value(ledger, d, investor, keys::kCouponsPaid) + 1;
    const std::uint64_t rating =
        round <= d.params.coupon_rounds ? get_rating(ledger, d, round) : 0;
    const std::uint64_t payout =
        mul_div(holdings, effective_coupon(d.params.coupon_base, rating), kBondUnit);

    TransactionGroup g;
    Transaction call = main_call(d, investor, {actions::kCoupon});
    reference(call, {d.bond_escrow}, {d.manage_app});
    g.push_back(std::move(call));
    Transaction check = manage_call(d, investor, {actions::kNotDefaulted});
    reference(check, {d.stablecoin_escrow, d.bond_escrow}, {d.main_app});
    g.push_back(std::move(check));
    g.push_back(make_payment(investor, d.stablecoin_escrow, kMinFee));
    g.push_back(with_signature(
        make_asset_transfer(d.stablecoin_escrow, investor, d.params.stablecoin, payout),
        d.stablecoin_escrow_sig()));
    return g;
}

namespace {

TransactionGroup surrender_group(const BondDeployment& d, const Address& investor,
                                 const Bytes& main_action, const Bytes& manage_action,
                                 std::uint64_t holdings, std::uint64_t payout)
{
    TransactionGroup g;
    Transaction call = main_call(d, investor, {main_action});
    reference(call, {d.bond_escrow, d.stablecoin_escrow}, {d.manage_app});
    g.push_back(std::move(call));
    Transaction check = manage_call(d, investor, {manage_action});
    reference(check, {d.stablecoin_escrow, d.bond_escrow}, {d.main_app});
    g.push_back(std::move(check));
    g.push_back(with_signature(
        make_clawback(d.bond_escrow, investor, d.bond_escrow, d.bond_asset, holdings),
        d.bond_escrow_sig()));
    g.push_back(with_signature(
        make_asset_transfer(d.stablecoin_escrow, investor, d.params.stablecoin, payout),
        d.stablecoin_escrow_sig()));
    g.push_back(make_payment(investor, d.bond_escrow, kMinFee));
    g.push_back(make_payment(investor, d.stablecoin_escrow, kMinFee));
    return g;
}

} // namespace

TransactionGroup build_principal_group(const Ledger& ledger, const BondDeployment& d,
                                       const Address& investor)
{
    const std::uint64_t holdings = holdings_of(ledger, d, investor);
    return surrender_group(d, investor, actions::kSell, actions::kNotDefaulted, holdings,
                           mul_div(holdings, d.params.principal, kBondUnit));
}

TransactionGroup build_default_group(const Ledger& ledger, const BondDeployment& d,
                                     const Address& investor)
{
    const std::uint64_t holdings = holdings_of(ledger, d, investor);
    const SolvencyView v = solvency_of(ledger, d);
    const std::uint64_t available =
        v.escrow_balance > v.reserve ? v.escrow_balance - v.reserve : 0;
    const std::uint64_t payout =
        v.circulation == 0 ? 0 : mul_div(available, holdings, v.circulation);
    return surrender_group(d, investor, actions::kDefault, actions::kClaimDefault, holdings,
                           payout);
}

std::uint8_t get_rating(const Ledger& ledger, const BondDeployment& d, std::uint64_t index)
{
    if (index > d.params.coupon_rounds) {
        throw std::out_of_range("rating index " + std::to_string(index) + " beyond round " +
                                std::to_string(d.params.coupon_rounds));
    }
    return rating_in(ledger.app(d.manage_app).global.get_bytes(Bytes(rating_key(index))), index);
}

std::uint64_t global_value(const Ledger& ledger, const BondDeployment& d, const Bytes& key)
{
    return ledger.app(d.main_app).global.get_uint(key);
}

std::uint64_t local_value(const Ledger& ledger, const BondDeployment& d, const Address& who,
                          const Bytes& key)
{
    if (!ledger.state().has_account(who)) {
        return 0;
    }
    auto local = ledger.local_state(who, d.main_app);
    return local ? local->get_uint(key) : 0;
}

std::uint64_t circulation(const Ledger& ledger, const BondDeployment& d)
{
    return d.params.supply() - ledger.asset_balance(d.bond_escrow, d.bond_asset);
}

SolvencyView solvency_of(const Ledger& ledger, const BondDeployment& d)
{
    const std::uint64_t paid = global_value(ledger, d, keys::kCouponsPaid);
    const std::uint64_t next = paid + 1;
    const std::uint64_t rating = next <= d.params.coupon_rounds ? get_rating(ledger, d, next) : 0;
    return solvency(d.params, ledger.asset_balance(d.stablecoin_escrow, d.params.stablecoin),
                    global_value(ledger, d, keys::kReserve), paid, circulation(ledger, d), rating);
}

// ---------------------------------------------------------------------------

GroupResult GreenBond::submit(const TransactionGroup& g, const std::string& label)
{
    return ledger_.submit_group(g, CostTag{d_.scope, label});
}

GroupResult GreenBond::register_holder(const Address& who)
{
    if (GroupResult r = ledger_.opt_in_asset(who, d_.bond_asset, {d_.scope, labels::kOptIntoAsa});
        !r) {
        return r;
    }
    return submit(build_app_opt_in(d_, who), labels::kOptIntoApp);
}

GroupResult GreenBond::freeze_all(const Address& regulator, std::uint64_t value)
{
    return submit(build_freeze_all(d_, regulator, value), labels::kFreezeAll);
}

GroupResult GreenBond::freeze_account(const Address& regulator, const Address& target,
                                      std::uint64_t value)
{
    return submit(build_freeze_account(d_, regulator, target, value), labels::kFreeze);
}

GroupResult GreenBond::buy(const Address& investor, std::uint64_t amount)
{
    return submit(build_buy_group(d_, investor, amount), labels::kBuy);
}

GroupResult GreenBond::set_trade(const Address& seller, std::uint64_t amount)
{
    return submit(build_set_trade(d_, seller, amount), labels::kSetTrade);
}

TradeOffer GreenBond::offer(const Address& seller, std::uint64_t price_per_bond, Timestamp expiry)
{
    return make_trade_offer(ledger_, d_, seller, price_per_bond, expiry);
}

GroupResult GreenBond::trade(const TradeOffer& offer, const Address& buyer, std::uint64_t amount)
{
    CostTag tag{d_.scope, labels::kTradeSell, {{buyer, labels::kTradeBuy}}};
    return ledger_.submit_group(build_trade_group(d_, offer, buyer, amount), tag);
}

GroupResult GreenBond::fund_escrow(const Address& funder, std::uint64_t amount)
{
    return submit(build_fund_escrow(d_, funder, amount), labels::kFundEscrow);
}

GroupResult GreenBond::rate(const Address& verifier, std::uint64_t rating)
{
    return submit(build_rate(d_, verifier, rating), labels::kRate);
}

GroupResult GreenBond::claim_coupon(const Address& investor)
{
    return submit(build_coupon_group(ledger_, d_, investor), labels::kClaimCoupon);
}

GroupResult GreenBond::claim_principal(const Address& investor)
{
    return submit(build_principal_group(ledger_, d_, investor), labels::kClaimPrincipal);
}

GroupResult GreenBond::claim_default(const Address& investor)
{
    return submit(build_default_group(ledger_, d_, investor), labels::kClaimDefault);
}

} // namespace bondsim::greenbond
