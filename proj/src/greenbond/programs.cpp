#include "bondsim/greenbond/programs.hpp"

#include <algorithm>
#include <initializer_list>

namespace bondsim::greenbond {

namespace {

bool has_action(const Transaction* t, AppId app, const Bytes& action)
{
    if (t == nullptr) {
        return false;
    }
    const AppCall* call = t->app_call();
    return call != nullptr && call->app == app && call->on_complete == OnComplete::NoOp &&
           !call->args.empty() && call->args[0] == action;
}

bool action_in(const Transaction& t, AppId app, std::initializer_list<const Bytes*> allowed)
{
    return std::any_of(allowed.begin(), allowed.end(),
                       [&](const Bytes* a) { return has_action(&t, app, *a); });
}

const AssetTransfer* transfer_of(const Transaction* t, AssetId asset)
{
    if (t == nullptr) {
        return nullptr;
    }
    const AssetTransfer* x = t->asset_transfer();
    return x != nullptr && x->asset == asset ? x : nullptr;
}

// Fee reimbursement leg: payer -> escrow, exactly the fee of `covered`.
bool reimburses(const Transaction* t, const Address& payer, const Address& escrow,
                const Transaction* covered)
{
    if (t == nullptr || covered == nullptr || t->sender != payer) {
        return false;
    }
    const Payment* p = t->payment();
    return p != nullptr && p->receiver == escrow && p->amount == covered->fee;
}

std::string units(std::uint64_t v)
{
    return std::to_string(v);
}

} // namespace

// ---------------------------------------------------------------------------
// Main

MainApp::MainApp(BondParams params, AssetId bond) : params_(std::move(params)), bond_(bond) {}

namespace {

std::optional<Verdict> gate(const CallContext& ctx, const Address& who)
{
    if (ctx.global_uint(keys::kFrozen) == 0) {
        return Verdict::deny("bond is frozen");
    }
    if (ctx.local_uint(who, keys::kFrozen) == 0) {
        return Verdict::deny("account " + who.str() + " is frozen");
    }
    return std::nullopt;
}

bool group_shape(const CallContext& ctx, std::size_t size)
{
    return ctx.index() == 0 && ctx.group().size() == size;
}

} // namespace

Verdict MainApp::approve(CallContext& ctx) const
{
    switch (ctx.on_complete()) {
    case OnComplete::OptIn:
        return on_opt_in(ctx);
    case OnComplete::CloseOut:
        if (ctx.asset_balance(ctx.sender(), bond_) > 0) {
            return Verdict::deny("cannot close out while holding bonds");
        }
        return Verdict::approve();
    case OnComplete::NoOp:
        break;
    default:
        return Verdict::deny("unsupported on-completion " + std::string(to_string(ctx.on_complete())));
    }
    if (ctx.arg_count() == 0) {
        return Verdict::deny("missing action");
    }
    const Bytes& action = ctx.arg(0);
    if (action == actions::kFreezeAll) return freeze_all(ctx);
    if (action == actions::kFreeze) return freeze(ctx);
    if (action == actions::kBuy) return buy(ctx);
    if (action == actions::kSetTrade) return set_trade(ctx);
    if (action == actions::kTrade) return trade(ctx);
    if (action == actions::kCoupon) return coupon(ctx);
    if (action == actions::kSell) return sell(ctx);
    if (action == actions::kDefault) return claim_default(ctx);
    return Verdict::deny("unknown action '" + action + "'");
}

// New holders start at the current global round: coupons for earlier rounds
// belong to whoever held the bonds then. An account re-registering while still
// holding bonds therefore cannot claim the same round twice.
Verdict MainApp::on_opt_in(CallContext& ctx) const
{
    const Address& who = ctx.sender();
    ctx.local_put(who, keys::kCouponsPaid, ctx.global_uint(keys::kCouponsPaid));
    ctx.local_put(who, keys::kTrade, std::uint64_t{0});
    ctx.local_put(who, keys::kFrozen, std::uint64_t{0});
    return Verdict::approve();
}

Verdict MainApp::freeze_all(CallContext& ctx) const
{
    if (ctx.sender() != params_.financial_regulator) {
        return Verdict::deny("only the financial regulator may freeze");
    }
    ctx.global_put(keys::kFrozen, ctx.arg_uint(1));
    return Verdict::approve();
}

Verdict MainApp::freeze(CallContext& ctx) const
{
    if (ctx.sender() != params_.financial_regulator) {
        return Verdict::deny("only the financial regulator may freeze");
    }
    if (ctx.call().accounts.empty()) {
        return Verdict::deny("freeze needs a target account");
    }
    ctx.local_put(ctx.call().accounts.front(), keys::kFrozen, ctx.arg_uint(1));
    return Verdict::approve();
}

Verdict MainApp::buy(CallContext& ctx) const
{
    const Timestamp now = ctx.now();
    if (now < params_.start_buy || now >= params_.end_buy) {
        return Verdict::deny("outside the sale window");
    }
    if (auto v = gate(ctx, ctx.sender())) {
        return *v;
    }
    if (!group_shape(ctx, 4)) {
        return Verdict::deny("buy expects a group of 4");
    }
    const Address& investor = ctx.sender();
    const Address escrow = ctx.linked(links::kBondEscrow);
    const Transaction* claw_txn = ctx.peer(2);
    const AssetTransfer* claw = transfer_of(claw_txn, bond_);
    if (claw == nullptr || claw_txn->sender != escrow || claw->revoke_target != escrow ||
        claw->receiver != investor || claw->amount == 0) {
        return Verdict::deny("txn 2 must move bonds from the escrow to the buyer");
    }
    if (!reimburses(ctx.peer(1), investor, escrow, claw_txn)) {
        return Verdict::deny("txn 1 must reimburse the escrow fee");
    }
    const Transaction* pay_txn = ctx.peer(3);
    const AssetTransfer* pay = transfer_of(pay_txn, params_.stablecoin);
    const std::uint64_t due = mul_div(claw->amount, params_.bond_cost, kBondUnit);
    if (pay == nullptr || pay_txn->sender != investor || pay->revoke_target ||
        pay->receiver != params_.issuer || pay->amount != due) {
        return Verdict::deny("txn 3 must pay " + units(due) + " stablecoin to the issuer");
    }
    return Verdict::approve();
}

Verdict MainApp::set_trade(CallContext& ctx) const
{
    if (auto v = gate(ctx, ctx.sender())) {
        return *v;
    }
    ctx.local_put(ctx.sender(), keys::kTrade, ctx.arg_uint(1));
    return Verdict::approve();
}

Verdict MainApp::trade(CallContext& ctx) const
{
    const Address& seller = ctx.sender();
    if (auto v = gate(ctx, seller)) {
        return *v;
    }
    if (ctx.index() != 0 || ctx.group().size() < 3) {
        return Verdict::deny("trade must lead a group of at least 3");
    }
    const Address escrow = ctx.linked(links::kBondEscrow);
    const Transaction* claw_txn = ctx.peer(2);
    const AssetTransfer* claw = transfer_of(claw_txn, bond_);
    if (claw == nullptr || claw_txn->sender != escrow || claw->revoke_target != seller ||
        claw->receiver == seller || claw->amount == 0) {
        return Verdict::deny("txn 2 must move bonds from the seller to a buyer");
    }
    if (!reimburses(ctx.peer(1), seller, escrow, claw_txn)) {
        return Verdict::deny("txn 1 must reimburse the escrow fee");
    }
    const Address& buyer = claw->receiver;
    if (auto v = gate(ctx, buyer)) {
        return *v;
    }
    const std::uint64_t allowance = ctx.local_uint(seller, keys::kTrade);
    if (claw->amount > allowance) {
        return Verdict::deny("trade of " + units(claw->amount) + " exceeds allowance " +
                             units(allowance));
    }
    // Bonds carry their coupon position with them.
    const std::uint64_t seller_paid = ctx.local_uint(seller, keys::kCouponsPaid);
    if (ctx.asset_balance(buyer, bond_) == 0) {
        ctx.local_put(buyer, keys::kCouponsPaid, seller_paid);
    } else if (ctx.local_uint(buyer, keys::kCouponsPaid) != seller_paid) {
        return Verdict::deny("buyer and seller are at different coupon rounds");
    }
    ctx.local_put(seller, keys::kTrade, allowance - claw->amount);
    return Verdict::approve();
}

Verdict MainApp::coupon(CallContext& ctx) const
{
    const Address& investor = ctx.sender();
    if (auto v = gate(ctx, investor)) {
        return *v;
    }
    if (!group_shape(ctx, 4)) {
        return Verdict::deny("coupon expects a group of 4");
    }
    const std::uint64_t holdings = ctx.asset_balance(investor, bond_);
    if (holdings == 0) {
        return Verdict::deny("no bonds held");
    }
    const std::uint64_t due_round = coupon_round_at(params_, ctx.now());
    const std::uint64_t paid = ctx.local_uint(investor, keys::kCouponsPaid);
    if (paid >= due_round) {
        return Verdict::deny("no coupon claimable: paid " + units(paid) + " of " +
                             units(due_round));
    }
    const AppId manage = ctx.linked_app(links::kManageApp);
    if (!has_action(ctx.peer(1), manage, actions::kNotDefaulted) ||
        ctx.peer(1)->sender != investor) {
        return Verdict::deny("txn 1 must be the solvency check");
    }

    const std::uint64_t round = paid + 1;
    const std::uint8_t rating =
        rating_in(ctx.foreign_global_bytes(manage, Bytes(rating_key(round))), round);
    const std::uint64_t per_bond = effective_coupon(params_.coupon_base, rating);
    const std::uint64_t payout = mul_div(holdings, per_bond, kBondUnit);

    std::uint64_t global_paid = ctx.global_uint(keys::kCouponsPaid);
    std::uint64_t reserve = ctx.global_uint(keys::kReserve);
    if (round > global_paid) {
        // First claim of this round locks the whole round's coupons.
        const Address bond_escrow = ctx.linked(links::kBondEscrow);
        const std::uint64_t circulation =
            ctx.asset_total(bond_) - ctx.asset_balance(bond_escrow, bond_);
        global_paid = round;
        reserve += mul_div(circulation, per_bond, kBondUnit);
    }
    if (payout > reserve) {
        return Verdict::deny("payout " + units(payout) + " exceeds reserve " + units(reserve));
    }

    const Address escrow = ctx.linked(links::kStablecoinEscrow);
    const Transaction* pay_txn = ctx.peer(3);
    const AssetTransfer* pay = transfer_of(pay_txn, params_.stablecoin);
    if (pay == nullptr || pay_txn->sender != escrow || pay->revoke_target ||
        pay->receiver != investor || pay->amount != payout) {
        return Verdict::deny("txn 3 must pay coupon " + units(payout));
    }
    if (!reimburses(ctx.peer(2), investor, escrow, pay_txn)) {
        return Verdict::deny("txn 2 must reimburse the escrow fee");
    }

    ctx.local_put(investor, keys::kCouponsPaid, round);
    ctx.global_put(keys::kCouponsPaid, global_paid);
    ctx.global_put(keys::kReserve, reserve - payout);
    return Verdict::approve();
}

namespace {

// Shared shape of the principal and default groups: surrender every bond and
// receive stablecoin, reimbursing both escrow fees.
std::optional<Verdict> check_surrender(const CallContext& ctx, AssetId bond, AssetId stablecoin,
                                       AppId manage, const Bytes& manage_action,
                                       std::uint64_t holdings,
                                       std::optional<std::uint64_t> expected_payout)
{
    if (!group_shape(ctx, 6)) {
        return Verdict::deny("expected a group of 6");
    }
    const Address& investor = ctx.sender();
    if (!has_action(ctx.peer(1), manage, manage_action) || ctx.peer(1)->sender != investor) {
        return Verdict::deny("txn 1 must be the manage check '" + manage_action + "'");
    }
    const Address bond_escrow = ctx.linked(links::kBondEscrow);
    const Address stable_escrow = ctx.linked(links::kStablecoinEscrow);
    const Transaction* claw_txn = ctx.peer(2);
    const AssetTransfer* claw = transfer_of(claw_txn, bond);
    if (claw == nullptr || claw_txn->sender != bond_escrow || claw->revoke_target != investor ||
        claw->receiver != bond_escrow || claw->amount != holdings) {
        return Verdict::deny("txn 2 must return all " + units(holdings) + " bond units");
    }
    const Transaction* pay_txn = ctx.peer(3);
    const AssetTransfer* pay = transfer_of(pay_txn, stablecoin);
    if (pay == nullptr || pay_txn->sender != stable_escrow || pay->revoke_target ||
        pay->receiver != investor ||
        (expected_payout && pay->amount != *expected_payout)) {
        return Verdict::deny("txn 3 must pay the investor from the stablecoin escrow");
    }
    if (!reimburses(ctx.peer(4), investor, bond_escrow, claw_txn) ||
        !reimburses(ctx.peer(5), investor, stable_escrow, pay_txn)) {
        return Verdict::deny("txns 4 and 5 must reimburse escrow fees");
    }
    return std::nullopt;
}

} // namespace

Verdict MainApp::sell(CallContext& ctx) const
{
    const Address& investor = ctx.sender();
    if (auto v = gate(ctx, investor)) {
        return *v;
    }
    if (ctx.now() < params_.maturity) {
        return Verdict::deny("bond has not matured");
    }
    if (ctx.local_uint(investor, keys::kCouponsPaid) != params_.coupon_rounds) {
        return Verdict::deny("unclaimed coupons remain");
    }
    const std::uint64_t holdings = ctx.asset_balance(investor, bond_);
    if (holdings == 0) {
        return Verdict::deny("no bonds held");
    }
    const std::uint64_t principal = mul_div(holdings, params_.principal, kBondUnit);
    if (auto v = check_surrender(ctx, bond_, params_.stablecoin,
                                 ctx.linked_app(links::kManageApp), actions::kNotDefaulted,
                                 holdings, principal)) {
        return *v;
    }
    return Verdict::approve();
}

Verdict MainApp::claim_default(CallContext& ctx) const
{
    const Address& investor = ctx.sender();
    if (auto v = gate(ctx, investor)) {
        return *v;
    }
    if (ctx.local_uint(investor, keys::kCouponsPaid) != ctx.global_uint(keys::kCouponsPaid)) {
        return Verdict::deny("claim outstanding coupons first");
    }
    const std::uint64_t holdings = ctx.asset_balance(investor, bond_);
    if (holdings == 0) {
        return Verdict::deny("no bonds held");
    }
    // The payout amount is checked by the manage app.
    if (auto v = check_surrender(ctx, bond_, params_.stablecoin,
                                 ctx.linked_app(links::kManageApp), actions::kClaimDefault,
                                 holdings, std::nullopt)) {
        return *v;
    }
    return Verdict::approve();
}

// ---------------------------------------------------------------------------
// Manage

ManageApp::ManageApp(BondParams params, AssetId bond, AppId main)
    : params_(std::move(params)), bond_(bond), main_(main)
{
}

StateSchema ManageApp::schema() const
{
    return {0, static_cast<std::uint32_t>(rating_keys(params_.coupon_rounds)), 0, 0};
}

SolvencyView solvency(const BondParams& p, std::uint64_t escrow_balance, std::uint64_t reserve,
                      std::uint64_t coupons_paid, std::uint64_t circulation,
                      std::uint64_t next_rating)
{
    SolvencyView v{escrow_balance, reserve, coupons_paid, circulation, 0};
    if (circulation > 0) {
        v.next_obligation =
            coupons_paid < p.coupon_rounds
                ? mul_div(circulation, effective_coupon(p.coupon_base, next_rating), kBondUnit)
                : mul_div(circulation, p.principal, kBondUnit);
    }
    return v;
}

namespace {

SolvencyView read_solvency(const CallContext& ctx, const BondParams& p, AssetId bond,
                           AppId main)
{
    const std::uint64_t escrow_balance =
        ctx.asset_balance(ctx.linked(links::kStablecoinEscrow), p.stablecoin);
    const std::uint64_t circulation =
        ctx.asset_total(bond) - ctx.asset_balance(ctx.linked(links::kBondEscrow), bond);
    const std::uint64_t paid = ctx.foreign_global_uint(main, keys::kCouponsPaid);
    const std::uint64_t next = paid + 1;
    const std::uint8_t rating = rating_in(ctx.global_bytes(Bytes(rating_key(next))), next);
    return solvency(p, escrow_balance, ctx.foreign_global_uint(main, keys::kReserve), paid,
                    circulation, rating);
}

} // namespace

Verdict ManageApp::approve(CallContext& ctx) const
{
    if (ctx.on_complete() != OnComplete::NoOp) {
        return Verdict::deny("unsupported on-completion " + std::string(to_string(ctx.on_complete())));
    }
    if (ctx.arg_count() == 0) {
        return Verdict::deny("missing action");
    }
    const Bytes& action = ctx.arg(0);
    if (action == actions::kRate) return rate(ctx);
    if (action == actions::kNotDefaulted) return not_defaulted(ctx);
    if (action == actions::kClaimDefault) return claim_default(ctx);
    if (action == actions::kDefaulted) {
        return read_solvency(ctx, params_, bond_, main_).in_default()
                   ? Verdict::approve()
                   : Verdict::deny("bond is not in default");
    }
    return Verdict::deny("unknown action '" + action + "'");
}

Verdict ManageApp::rate(CallContext& ctx) const
{
    if (ctx.sender() != params_.green_verifier) {
        return Verdict::deny("only the green verifier may rate");
    }
    const std::uint64_t rating = ctx.arg_uint(1);
    if (rating < 1 || rating > kMaxRating) {
        return Verdict::deny("rating " + units(rating) + " outside 1..5");
    }
    const auto slot = rating_slot_at(params_, ctx.now());
    if (!slot) {
        return Verdict::deny("no rating period open at " + std::to_string(ctx.now()));
    }
    const Bytes key(rating_key(*slot));
    ctx.global_put(key, with_rating(ctx.global_bytes(key), *slot, static_cast<std::uint8_t>(rating)));
    return Verdict::approve();
}

Verdict ManageApp::not_defaulted(CallContext& ctx) const
{
    const Transaction* main_txn = ctx.peer(-1);
    const bool coupon = has_action(main_txn, main_, actions::kCoupon);
    const bool sell = has_action(main_txn, main_, actions::kSell);
    if (ctx.index() != 1 || !(coupon || sell) || main_txn->sender != ctx.sender()) {
        return Verdict::deny("must follow a main coupon or sell call");
    }
    const SolvencyView v = read_solvency(ctx, params_, bond_, main_);
    std::uint64_t required = v.reserve;
    if (coupon) {
        // Main has already deducted this payout from the reserve.
        const AssetTransfer* pay = transfer_of(ctx.peer(2), params_.stablecoin);
        required += pay != nullptr ? pay->amount : 0;
    } else {
        required += mul_div(v.circulation, params_.principal, kBondUnit);
    }
    if (v.escrow_balance < required) {
        return Verdict::deny("reserve " + units(required) + " exceeds escrow balance " +
                             units(v.escrow_balance));
    }
    return Verdict::approve();
}

Verdict ManageApp::claim_default(CallContext& ctx) const
{
    const Transaction* main_txn = ctx.peer(-1);
    if (ctx.index() != 1 || !has_action(main_txn, main_, actions::kDefault) ||
        main_txn->sender != ctx.sender()) {
        return Verdict::deny("must follow a main default call");
    }
    const SolvencyView v = read_solvency(ctx, params_, bond_, main_);
    if (!v.in_default()) {
        return Verdict::deny("bond is not in default");
    }
    const std::uint64_t holdings = ctx.asset_balance(ctx.sender(), bond_);
    const std::uint64_t available = v.escrow_balance > v.reserve ? v.escrow_balance - v.reserve : 0;
    const std::uint64_t share = v.circulation == 0 ? 0 : mul_div(available, holdings, v.circulation);
    const AssetTransfer* pay = transfer_of(ctx.peer(2), params_.stablecoin);
    if (pay == nullptr || pay->amount != share) {
        return Verdict::deny("default payout must be " + units(share));
    }
    return Verdict::approve();
}

// ---------------------------------------------------------------------------
// Stateless programs

std::shared_ptr<const StatelessProgram> make_bond_escrow_program(AppId main, AssetId bond)
{
    std::string identity = "bond-escrow/main=" + std::to_string(raw(main)) +
                           "/asset=" + std::to_string(raw(bond));
    return std::make_shared<const StatelessProgram>(
        std::move(identity), [main, bond](const LogicContext& c) {
            const Transaction& t = c.txn();
            const AssetTransfer* x = transfer_of(&t, bond);
            if (x == nullptr || t.fee != kMinFee) {
                return false;
            }
            if (!x->revoke_target) {
                return c.group.size() == 1 && x->amount == 0 && x->receiver == t.sender;
            }
            return c.index == 2 &&
                   action_in(c.group[0], main, {&actions::kBuy, &actions::kTrade,
                                                &actions::kSell, &actions::kDefault});
        });
}

std::shared_ptr<const StatelessProgram> make_stablecoin_escrow_program(AppId main, AppId manage,
                                                                       AssetId stablecoin)
{
    std::string identity = "stablecoin-escrow/main=" + std::to_string(raw(main)) +
                           "/manage=" + std::to_string(raw(manage)) +
                           "/asset=" + std::to_string(raw(stablecoin));
    return std::make_shared<const StatelessProgram>(
        std::move(identity), [main, manage, stablecoin](const LogicContext& c) {
            const Transaction& t = c.txn();
            const AssetTransfer* x = transfer_of(&t, stablecoin);
            if (x == nullptr || t.fee != kMinFee || x->revoke_target) {
                return false;
            }
            if (c.group.size() == 1) {
                return x->amount == 0 && x->receiver == t.sender;
            }
            if (c.index != 3) {
                return false;
            }
            const Transaction& check = c.group[1];
            if (has_action(&c.group[0], main, actions::kCoupon) ||
                has_action(&c.group[0], main, actions::kSell)) {
                return has_action(&check, manage, actions::kNotDefaulted);
            }
            return has_action(&c.group[0], main, actions::kDefault) &&
                   has_action(&check, manage, actions::kClaimDefault);
        });
}

std::shared_ptr<const StatelessProgram> make_trade_offer_program(const TradeTerms& terms)
{
    std::string identity = "trade-offer/main=" + std::to_string(raw(terms.main)) +
                           "/bond=" + std::to_string(raw(terms.bond)) +
                           "/stablecoin=" + std::to_string(raw(terms.stablecoin)) +
                           "/escrow=" + terms.bond_escrow.str() +
                           "/seller=" + terms.seller.str() +
                           "/price=" + std::to_string(terms.price_per_bond) +
                           "/expiry=" + std::to_string(terms.expiry);
    return std::make_shared<const StatelessProgram>(std::move(identity), [terms](const LogicContext& c) {
        const Transaction& t = c.txn();
        if (t.fee != kMinFee || !t.valid_before || *t.valid_before > terms.expiry) {
            return false;
        }
        if (c.group.size() != 4 || c.index > 1) {
            return false;
        }
        const Transaction& call = c.group[0];
        const Transaction& fee = c.group[1];
        const Transaction& claw_txn = c.group[2];
        const Transaction& pay_txn = c.group[3];
        if (call.sender != terms.seller || !has_action(&call, terms.main, actions::kTrade)) {
            return false;
        }
        const AssetTransfer* claw = transfer_of(&claw_txn, terms.bond);
        if (claw == nullptr || claw_txn.sender != terms.bond_escrow ||
            claw->revoke_target != terms.seller) {
            return false;
        }
        if (!reimburses(&fee, terms.seller, terms.bond_escrow, &claw_txn)) {
            return false;
        }
        const AssetTransfer* pay = transfer_of(&pay_txn, terms.stablecoin);
        return pay != nullptr && pay_txn.sender == claw->receiver && !pay->revoke_target &&
               pay->receiver == terms.seller &&
               pay->amount == mul_div(claw->amount, terms.price_per_bond, kBondUnit);
    });
}

} // namespace bondsim::greenbond
