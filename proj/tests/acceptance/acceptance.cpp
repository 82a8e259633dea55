// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
// Pass criterion numbers as arguments to run a subset.

#include "../support/world.hpp"

#include "bondsim/cli/runner.hpp"
#include "bondsim/cli/scenario.hpp"
#include "bondsim/pricing/pricing.hpp"
#include "bondsim/reports/reports.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <set>
#include <sstream>

using namespace bondsim;
using namespace bondsim::greenbond;
using bondsim::testing::kDollar;
using bondsim::testing::World;

namespace {

__extension__ using u128 = unsigned __int128;

const std::string kScenarioDir = BONDSIM_SCENARIO_DIR;

class Check {
public:
    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            failures.push_back(what);
        }
    }

    template <class A, class B>
    void equal(const A& actual, const B& expected, const std::string& what)
    {
        if (!(actual == expected)) {
            std::ostringstream s;
            s << what << ": expected " << expected << ", got " << actual;
            failures.push_back(s.str());
        }
    }

    std::vector<std::string> failures;
};

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot read " + path);
    }
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

// ---------------------------------------------------------------------------
// 1

void penalty_table(Check& c)
{
    const std::uint64_t base = 5 * kDollar;
    c.equal(effective_coupon(base, 5), 5'000'000ULL, "rating 5");
    c.equal(effective_coupon(base, 4), 5'500'000ULL, "rating 4");
    c.equal(effective_coupon(base, 3), 6'050'000ULL, "rating 3");
    c.equal(format_dollars(effective_coupon(base, 2)), std::string("$6.66"), "rating 2 display");
    c.equal(format_dollars(effective_coupon(base, 1)), std::string("$7.32"), "rating 1 display");
    // $6.655 and $7.3205 are whole base units, so the exact values must match too.
    c.equal(effective_coupon(base, 2), 6'655'000ULL, "rating 2 exact");
    c.equal(effective_coupon(base, 1), 7'320'500ULL, "rating 1 exact");
}

// ---------------------------------------------------------------------------
// 2

struct Row {
    std::uint64_t circulation_bonds;
    std::uint64_t local1;
    std::uint64_t local2;
    std::uint64_t global;
    std::uint64_t reserve_dollars;
    std::uint64_t escrow_dollars;
    bool approved;

    friend bool operator==(const Row&, const Row&) = default;
    friend std::ostream& operator<<(std::ostream& o, const Row& r)
    {
        return o << "{" << r.circulation_bonds << ", " << r.local1 << ", " << r.local2 << ", "
                 << r.global << ", $" << r.reserve_dollars << ", $" << r.escrow_dollars << ", "
                 << (r.approved ? "yes" : "no") << "}";
    }
};

void default_run_through(Check& c)
{
    World w;
    BondParams p = w.params(100, 3);
    p.coupon_base = 100 * kDollar;
    GreenBond bond = w.issue(p);
    const BondDeployment& d = bond.deployment();
    World::expect(bond.freeze_all(w.regulator, 1));
    w.ledger.advance_time(p.start_buy);
    w.pay_stable(w.issuer, 10'000 * kDollar);

    auto row = [&](bool approved) {
        return Row{circulation(w.ledger, d) / kBondUnit,
                   0,
                   0,
                   global_value(w.ledger, d, keys::kCouponsPaid),
                   global_value(w.ledger, d, keys::kReserve) / kDollar,
                   w.stable(d.stablecoin_escrow) / kDollar,
                   approved};
    };
    Address inv1, inv2;
    auto full_row = [&](bool approved) {
        Row r = row(approved);
        r.local1 = inv1.empty() ? 0 : local_value(w.ledger, d, inv1, keys::kCouponsPaid);
        r.local2 = inv2.empty() ? 0 : local_value(w.ledger, d, inv2, keys::kCouponsPaid);
        return r;
    };

    inv1 = w.investor(bond, 0);
    inv2 = w.investor(bond, 0);
    const std::vector<Row> expected{
        {5, 0, 0, 0, 0, 0, true},      {15, 0, 0, 0, 0, 0, true},     {15, 0, 0, 0, 0, 1500, true},
        {15, 0, 1, 1, 500, 500, true}, {15, 1, 1, 1, 0, 0, true},     {15, 1, 1, 1, 0, 1000, true},
        {15, 2, 1, 2, 1500, 1000, false},
    };
    std::vector<Row> actual;
    actual.push_back(full_row(bool(bond.buy(inv1, 5 * kBondUnit))));
    actual.push_back(full_row(bool(bond.buy(inv2, 10 * kBondUnit))));
    actual.push_back(full_row(bool(bond.fund_escrow(w.issuer, 1'500 * kDollar))));
    w.ledger.advance_time(p.end_buy + 100); // coupon round 1 due
    actual.push_back(full_row(bool(bond.claim_coupon(inv2))));
    actual.push_back(full_row(bool(bond.claim_coupon(inv1))));
    actual.push_back(full_row(bool(bond.fund_escrow(w.issuer, 1'000 * kDollar))));
    w.ledger.advance_time(p.end_buy + 200); // round 2 due

    // The last row shows the state as evaluated when the solvency check
    // refuses the claim: counters already advanced and the reserve required.
    const TransactionGroup last = build_coupon_group(w.ledger, d, inv1);
    const auto sim = w.ledger.simulate(last);
    const LedgerState& s = sim.state;
    const std::uint64_t payout = last[3].asset_transfer()->amount;
    actual.push_back(Row{circulation(w.ledger, d) / kBondUnit,
                         s.account(inv1).local_states.at(d.main_app).get_uint(keys::kCouponsPaid),
                         s.account(inv2).local_states.at(d.main_app).get_uint(keys::kCouponsPaid),
                         s.apps.at(d.main_app).global.get_uint(keys::kCouponsPaid),
                         (s.apps.at(d.main_app).global.get_uint(keys::kReserve) + payout) / kDollar,
                         s.account(d.stablecoin_escrow).holdings.at(p.stablecoin).balance / kDollar,
                         sim.result.approved()});

    const LedgerState before = w.ledger.state();
    const GroupResult r = bond.claim_coupon(inv1);
    c.require(!r && r.txn_index == 1 &&
                  r.detail.find("reserve 1500000000 exceeds escrow balance 1000000000") !=
                      std::string::npos,
              "final claim must be refused by the solvency check, got " + r.describe());
    c.require(w.ledger.state() == before, "refused claim changed the ledger");

    for (std::size_t i = 0; i < expected.size(); ++i) {
        c.equal(actual.at(i), expected[i], "row " + std::to_string(i + 1));
    }

    cli::Session session;
    const auto run = session.run(cli::parse_scenario(read_file(kScenarioDir + "/coupon_default_check.scn")));
    c.require(run.exit_code == 0, "coupon_default_check.scn: " + run.error);
}

// ---------------------------------------------------------------------------
// 3

void cost_aggregates(Check& c)
{
    cli::Session session;
    const auto run = session.run(cli::parse_scenario(read_file(kScenarioDir + "/annual_lifecycle.scn")));
    c.require(run.exit_code == 0, "annual_lifecycle.scn: " + run.error);
    if (run.exit_code != 0) {
        return;
    }
    const CostLedger& costs = session.ledger().costs();
    const Address& issuer = session.account("issuer");
    const Address& investor = session.account("inv");
    const Address& verifier = session.account("verifier");
    c.equal(costs.total(investor, "gb"), std::int64_t{336'000}, "investor total");
    c.equal(costs.total(verifier, "gb"), std::int64_t{11'000}, "verifier total");

    const std::int64_t rounds_c = 2; // rating keys for ten coupon rounds
    const std::int64_t reports_n = 11;
    const std::vector<std::pair<std::string, std::int64_t>> issuance{
        {labels::kCreateAsa, 101'000},
        {labels::kFundContracts, 203'000},
        {labels::kSendAndConfigure, 2'000},
        {labels::kDeployMain, 185'000},
        {labels::kDeployManage, 101'000 + 50'000 * rounds_c},
        {labels::kUpdateApps, 2'000},
        {labels::kUploadReport, 1'000 * reports_n},
    };
    std::int64_t table_total = 0;
    for (const auto& [label, want] : issuance) {
        std::int64_t got = -1;
        for (const CostEntry& row : costs.rows()) {
            if (row.actor == issuer && row.scope == "gb" && row.label == label) {
                got = row.total();
            }
        }
        c.equal(got, want, "issuance row '" + label + "'");
        table_total += got;
    }
    c.equal(table_total, 594'000 + 50'000 * rounds_c + 1'000 * reports_n, "issuance table total");
}

// ---------------------------------------------------------------------------
// 4

void rating_packing(Check& c)
{
    World w;
    const BondParams p = w.params(100, 8);
    GreenBond bond = w.issue(p);
    const BondDeployment& d = bond.deployment();
    const int ratings[] = {5, 3, 4, 5, 5, 5, 5, 4, 3};
    for (int slot = 0; slot < 9; ++slot) {
        w.ledger.advance_time(slot == 0 ? p.start_buy - 1 : p.end_buy + 100 * (slot - 1) + 50);
        const GroupResult r = bond.rate(w.verifier, static_cast<std::uint64_t>(ratings[slot]));
        c.require(bool(r), "rating for period " + std::to_string(slot) + ": " + r.describe());
    }
    const KeyValueState& g = w.ledger.app(d.manage_app).global;
    const auto key0 = g.get_bytes("0");
    const auto key1 = g.get_bytes("1");
    c.require(key0 == Bytes("\x05\x03\x04\x05\x05\x05\x05\x04", 8), "key 0 != 0x0503040505050504");
    c.require(key1 == Bytes("\x03\x00\x00\x00\x00\x00\x00\x00", 8), "key 1 != 0x0300000000000000");
    for (int slot = 0; slot < 9; ++slot) {
        c.equal(static_cast<int>(get_rating(w.ledger, d, static_cast<std::uint64_t>(slot))),
                ratings[slot], "get_rating(" + std::to_string(slot) + ")");
    }
}

// ---------------------------------------------------------------------------
// 5

void default_payout(Check& c)
{
    {
        World w;
        BondParams p = w.params(1'000, 1);
        p.coupon_base = 10 * kDollar;
        GreenBond bond = w.issue(p);
        const BondDeployment& d = bond.deployment();
        World::expect(bond.freeze_all(w.regulator, 1));
        w.ledger.advance_time(p.start_buy);
        const Address small = w.investor(bond, 5 * kBondUnit);
        w.investor(bond, 995 * kBondUnit);
        w.pay_stable(w.issuer, 3'000 * kDollar);
        World::expect(bond.fund_escrow(w.issuer, 3'000 * kDollar));
        w.ledger.advance_time(p.end_buy + 10);
        const SolvencyView v = solvency_of(w.ledger, d);
        c.equal(v.next_obligation, 10'000 * kDollar, "amount owed");
        c.require(v.in_default(), "worked example should be in default");
        const std::uint64_t before = w.stable(small);
        const GroupResult r = bond.claim_default(small);
        c.require(bool(r), "worked example claim: " + r.describe());
        c.equal(w.stable(small) - before, 15 * kDollar, "worked example payout");
    }

    std::mt19937_64 rng(0x5eed);
    int violations = 0;
    int paid_claims = 0;
    for (int trial = 0; trial < 1'000; ++trial) {
        World w;
        BondParams p = w.params(10 + rng() % 90, 1 + rng() % 4);
        p.coupon_base = (1 + rng() % 20) * kDollar;
        GreenBond bond = w.issue(p);
        const BondDeployment& d = bond.deployment();
        World::expect(bond.freeze_all(w.regulator, 1));
        w.ledger.advance_time(p.start_buy);

        std::vector<Address> holders;
        const std::size_t count = 1 + rng() % 4;
        for (std::size_t i = 0; i < count; ++i) {
            holders.push_back(w.investor(bond, 1 + rng() % (p.supply() / 4)));
        }
        const std::uint64_t obligations =
            mul_div(circulation(w.ledger, d), p.coupon_rounds * p.coupon_base * 2 + p.principal,
                    kBondUnit);
        const std::uint64_t funding = rng() % (obligations + 1);
        w.pay_stable(w.issuer, funding);
        bond.fund_escrow(w.issuer, funding);

        const auto span = static_cast<std::uint64_t>(p.maturity + 50 - p.end_buy);
        w.ledger.advance_time(p.end_buy + static_cast<Timestamp>(rng() % span));
        for (int i = 0; i < 6; ++i) {
            bond.claim_coupon(holders[rng() % holders.size()]);
        }

        std::shuffle(holders.begin(), holders.end(), rng);
        for (const Address& h : holders) {
            const std::uint64_t escrow = w.stable(d.stablecoin_escrow);
            const std::uint64_t reserve = global_value(w.ledger, d, keys::kReserve);
            const std::uint64_t circ = circulation(w.ledger, d);
            const std::uint64_t held = w.ledger.asset_balance(h, d.bond_asset);
            const std::uint64_t before = w.stable(h);
            if (!bond.claim_default(h)) {
                continue;
            }
            ++paid_claims;
            const std::uint64_t payout = w.stable(h) - before;
            const std::uint64_t free = escrow > reserve ? escrow - reserve : 0;
            const auto oracle = static_cast<std::uint64_t>(u128(free) * held / circ);
            if (payout > free || payout != oracle ||
                w.stable(d.stablecoin_escrow) < global_value(w.ledger, d, keys::kReserve)) {
                ++violations;
            }
        }
    }
    c.equal(violations, 0, "default payout violations");
    c.require(paid_claims >= 200, "too few paid default claims to be meaningful: " +
                                      std::to_string(paid_claims));
}

// ---------------------------------------------------------------------------
// 6

void trade_replay(Check& c)
{
    {
        World w;
        BondParams p = w.params(10, 2);
        p.bond_cost = 1'000 * kDollar;
        GreenBond bond = w.issue(p);
        World::expect(bond.freeze_all(w.regulator, 1));
        w.ledger.advance_time(p.start_buy);
        const Address seller = w.investor(bond, 3 * kBondUnit);
        const Address b1 = w.investor(bond, 0);
        const Address b2 = w.investor(bond, 0);
        World::expect(bond.set_trade(seller, 2 * kBondUnit));
        const TradeOffer offer = bond.offer(seller, 1'000 * kDollar, p.maturity);
        const std::uint64_t paid1 = w.stable(b1);
        c.require(bool(bond.trade(offer, b1, kBondUnit / 2)), "0.5 bond trade should approve");
        c.equal(paid1 - w.stable(b1), 500 * kDollar, "price of 0.5 bond");
        c.require(bool(bond.trade(offer, b2, 3 * kBondUnit / 2)), "1.5 bond trade should approve");
        c.require(!bond.trade(offer, b1, 1), "trade past the allowance should reject");
        c.require(!bond.trade(offer, b2, kBondUnit), "whole-bond trade past the allowance should reject");
    }

    std::mt19937_64 rng(0xbeef);
    int violations = 0;
    for (int trial = 0; trial < 1'000; ++trial) {
        World w;
        BondParams p = w.params(20, 2);
        GreenBond bond = w.issue(p);
        const BondDeployment& d = bond.deployment();
        World::expect(bond.freeze_all(w.regulator, 1));
        w.ledger.advance_time(p.start_buy);
        const std::uint64_t owned = 1 + rng() % (5 * kBondUnit);
        const Address seller = w.investor(bond, owned);
        const Address buyers[] = {w.investor(bond, 0), w.investor(bond, 0)};
        const std::uint64_t allowance = rng() % (owned + owned / 2 + 1);
        World::expect(bond.set_trade(seller, allowance));
        const TradeOffer offer = bond.offer(seller, rng() % (50 * kDollar), p.maturity);

        std::uint64_t moved = 0;
        const int attempts = 1 + static_cast<int>(rng() % 6);
        for (int i = 0; i < attempts; ++i) {
            const std::uint64_t n = 1 + rng() % (allowance / 2 + 2);
            const std::uint64_t remaining = allowance - moved;
            const std::uint64_t held = w.ledger.asset_balance(seller, d.bond_asset);
            const bool ok = bool(bond.trade(offer, buyers[rng() % 2], n));
            if (ok) {
                moved += n;
            }
            if (ok != (n <= remaining && n <= held)) {
                ++violations;
            }
            if (moved > allowance ||
                local_value(w.ledger, d, seller, keys::kTrade) != allowance - moved) {
                ++violations;
            }
        }
    }
    c.equal(violations, 0, "allowance violations");
}

// ---------------------------------------------------------------------------
// 7

void pricing_properties(Check& c)
{
    using namespace bondsim::pricing;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> coupon(0, 20), rate(0.0001, 0.2), face(1, 1'000);
    int mismatches = 0;
    int par_mismatches = 0;
    for (int i = 0; i < 10'000; ++i) {
        const double C = coupon(rng), r = rate(rng), F = face(rng);
        const auto T = static_cast<unsigned>(rng() % 61);
        double summed = 0;
        for (unsigned t = 1; t <= T; ++t) {
            summed += C / std::pow(1.0 + r, t);
        }
        summed += F / std::pow(1.0 + r, T);
        if (!(std::abs(price(C, r, F, T) - summed) < 1e-9)) {
            ++mismatches;
        }
        if (!(std::abs(price(r * F, r, F, T) - F) < 1e-9)) {
            ++par_mismatches;
        }
        for (int rating = 1; rating <= 4; ++rating) {
            if (rated_price(0, rating, r, F, T) != rated_price(0, 5, r, F, T)) {
                c.require(false, "zero-coupon price depends on the rating");
            }
        }
    }
    c.equal(mismatches, 0, "closed form vs summation mismatches");
    c.equal(par_mismatches, 0, "par-bond mismatches");

    double previous = -1;
    for (unsigned T : {5u, 10u, 15u, 20u}) {
        const double gap = rated_price(5, 1, 0.05, 100, T) - rated_price(5, 5, 0.05, 100, T);
        c.require(gap > previous, "rating gap not increasing at T=" + std::to_string(T));
        previous = gap;
    }
}

// ---------------------------------------------------------------------------
// 8

void atomicity(Check& c)
{
    World w;
    BondParams p = w.params(100, 4);
    GreenBond bond = w.issue(p);
    const BondDeployment& d = bond.deployment();
    World::expect(bond.freeze_all(w.regulator, 1));
    w.ledger.advance_time(p.start_buy);
    std::vector<Address> people;
    for (int i = 0; i < 4; ++i) {
        people.push_back(w.investor(bond, 5 * kBondUnit, 1'000 * kDollar));
        w.ledger.fund_algos(people.back(), 50 * kMicroAlgosPerAlgo);
    }
    const Address outsider = w.funded(kMicroAlgosPerAlgo);

    std::mt19937_64 rng(8);
    auto pick = [&]() -> const Address& { return people[rng() % people.size()]; };
    auto valid_txn = [&]() {
        switch (rng() % 4) {
        case 0: return make_payment(pick(), pick(), 1 + rng() % 1'000);
        case 1: return make_asset_transfer(pick(), pick(), p.stablecoin, rng() % (10 * kDollar));
        case 2: return build_set_trade(d, pick(), rng() % kBondUnit)[0];
        default: {
            Transaction t = make_payment(pick(), pick(), 0);
            t.note = "memo " + std::to_string(rng());
            return t;
        }
        }
    };
    auto failing_txn = [&]() {
        switch (rng() % 8) {
        case 0: return make_payment(pick(), pick(), 1'000'000 * kMicroAlgosPerAlgo);
        case 1: return make_asset_transfer(pick(), outsider, p.stablecoin, 1);
        case 2: return make_asset_transfer(pick(), pick(), d.bond_asset, 1);
        case 3: return make_app_call(pick(), d.main_app, {Bytes("no-such-action")});
        case 4: {
            Transaction t = make_payment(pick(), pick(), 1);
            t.fee = 0;
            return t;
        }
        case 5: {
            Transaction t = make_payment(pick(), pick(), 1);
            t.note = Bytes(kMaxNoteBytes + 1, 'x');
            return t;
        }
        case 6: {
            Transaction t = make_payment(pick(), pick(), 1);
            t.valid_before = w.ledger.now();
            return t;
        }
        default: {
            Transaction t = make_payment(pick(), pick(), 1);
            t.signature = SecretKey{outsider};
            return t;
        }
        }
    };

    int checked = 0;
    while (checked < 1'000) {
        TransactionGroup group;
        const std::size_t size = 1 + rng() % (kMaxGroupSize - 1);
        for (std::size_t i = 0; i < size; ++i) {
            group.push_back(valid_txn());
        }
        if (!w.ledger.simulate(group).result) {
            continue;
        }
        if (rng() % 4 == 0) {
            // Let the state drift so later cases start from different places.
            World::expect(w.ledger.submit_group(group));
        }
        const std::size_t pos = rng() % (group.size() + 1);
        group.insert(group.begin() + static_cast<std::ptrdiff_t>(pos), failing_txn());

        const LedgerState before = w.ledger.state();
        const std::size_t history = w.ledger.history().size();
        const std::size_t entries = w.ledger.costs().entries().size();
        const GroupResult r = w.ledger.submit_group(group);
        ++checked;
        if (r) {
            c.require(false, "group with injected failure was approved");
            continue;
        }
        if (r.txn_index != pos) {
            c.require(false, "failure reported at txn " + std::to_string(r.txn_index) +
                                 ", injected at " + std::to_string(pos) + ": " + r.describe());
        }
        if (!(w.ledger.state() == before) || w.ledger.history().size() != history ||
            w.ledger.costs().entries().size() != entries) {
            c.require(false, "rejected group changed the ledger: " + r.describe());
        }
    }
}

// ---------------------------------------------------------------------------
// 9

void report_anchoring(Check& c)
{
    World w;
    w.ledger.fund_algos(w.operator_account, 10 * kMicroAlgosPerAlgo);
    GreenBond x = w.issue(w.params(), "x");
    GreenBond z = w.issue(w.params(), "z");
    BondParams other = w.params();
    other.issuer = w.holder(0);
    GreenBond y = w.issue(other, "y");
    const Address stranger = w.funded(kMicroAlgosPerAlgo);

    struct Channel {
        Address issuer;
        AppId app;
        std::vector<reports::ContentId> anchored;
    };
    std::vector<Channel> channels{
        {w.issuer, x.deployment().manage_app, {}},
        {w.issuer, z.deployment().manage_app, {}},
        {other.issuer, y.deployment().manage_app, {}},
    };

    reports::ReportStore store;
    std::mt19937_64 rng(9);
    std::vector<std::pair<reports::ContentId, std::string>> blobs;
    for (int i = 0; i < 100; ++i) {
        std::string bytes(rng() % 2'048, '\0');
        for (char& ch : bytes) {
            ch = static_cast<char>(rng() & 0xff);
        }
        const reports::ContentId cid = store.store(bytes);
        blobs.emplace_back(cid, bytes);
        Channel& ch = channels[rng() % channels.size()];
        const GroupResult r = w.ledger.submit_group(reports::anchor(ch.issuer, ch.app, cid));
        c.require(bool(r), "anchor " + std::to_string(i) + ": " + r.describe());
        ch.anchored.push_back(cid);
        if (rng() % 3 == 0) {
            // Same note from a non-issuer must not show up.
            w.ledger.submit_group(reports::anchor(stranger, ch.app, cid));
        }
    }

    for (const auto& [cid, bytes] : blobs) {
        c.require(store.fetch(cid) == bytes, "fetch mismatch for " + cid.hex());
    }
    for (std::size_t i = 0; i < channels.size(); ++i) {
        const Channel& ch = channels[i];
        c.require(reports::list_reports(w.ledger, ch.issuer, ch.app) == ch.anchored,
                  "channel " + std::to_string(i) + " lists the wrong reports or order");
    }
    c.require(reports::list_reports(w.ledger, w.issuer, y.deployment().manage_app).empty(),
              "issuer sees reports anchored by another issuer");
    c.require(reports::list_reports(w.ledger, other.issuer, x.deployment().manage_app).empty(),
              "second issuer sees the first issuer's reports");
}

struct Criterion {
    int id;
    const char* name;
    double limit_seconds;
    std::function<void(Check&)> body;
};

} // namespace

int main(int argc, char** argv)
{
    const std::vector<Criterion> criteria{
        {1, "penalty table", 1, penalty_table},
        {2, "default run-through", 1, default_run_through},
        {3, "cost aggregates", 5, cost_aggregates},
        {4, "rating packing", 1, rating_packing},
        {5, "default payout", 10, default_payout},
        {6, "trade replay protection", 10, trade_replay},
        {7, "pricing", 5, pricing_properties},
        {8, "atomicity", 10, atomicity},
        {9, "report anchoring", 5, report_anchoring},
    };
    std::set<int> only;
    for (int i = 1; i < argc; ++i) {
        only.insert(std::atoi(argv[i]));
    }

    int failed = 0;
    for (const Criterion& k : criteria) {
        if (!only.empty() && !only.contains(k.id)) {
            continue;
        }
        Check check;
        const auto start = std::chrono::steady_clock::now();
        try {
            k.body(check);
        } catch (const std::exception& e) {
            check.failures.push_back(std::string("exception: ") + e.what());
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (seconds >= k.limit_seconds) {
            check.failures.push_back("took " + std::to_string(seconds) + " s, limit " +
                                     std::to_string(k.limit_seconds) + " s");
        }
        const bool pass = check.failures.empty();
        failed += pass ? 0 : 1;
        std::printf("%s criterion %d: %s (%.3f s)\n", pass ? "PASS" : "FAIL", k.id, k.name, seconds);
        for (std::size_t i = 0; i < check.failures.size() && i < 10; ++i) {
            std::printf("    %s\n", check.failures[i].c_str());
        }
    }
    return failed == 0 ? 0 : 1;
}
