#include "doctest.h"

#include "bondsim/ledger/ledger.hpp"
#include "bondsim/programs/stateless.hpp"

#include <numeric>
#include <random>

using namespace bondsim;

namespace {

MicroAlgos total_algos(const Ledger& l)
{
    MicroAlgos sum = 0;
    for (const auto& [_, acct] : l.state().accounts) {
        sum += acct.balance;
    }
    return sum;
}

struct Fixture {
    Ledger ledger;
    Address alice = ledger.create_account();
    Address bob = ledger.create_account();

    Fixture()
    {
        ledger.fund_algos(alice, 5 * kMicroAlgosPerAlgo);
        ledger.fund_algos(bob, 5 * kMicroAlgosPerAlgo);
    }

    AssetId token(bool frozen = false, std::optional<Address> clawback = std::nullopt)
    {
        return ledger.create_asset(AssetSpec{alice, 1'000'000, 2, frozen, std::nullopt, clawback});
    }
};

} // namespace

TEST_CASE("accounts start empty with the base minimum balance")
{
    Ledger ledger;
    const Address a = ledger.create_account();
    const Address b = ledger.create_account();
    CHECK(a != b);
    CHECK(ledger.balance(a) == 0);
    CHECK(ledger.min_balance(a) == 100'000);
    ledger.fund_algos(a, 250'000);
    CHECK(ledger.balance(a) == 250'000);
    CHECK_THROWS_AS(ledger.fund_algos(Address("nobody"), 1), LedgerError);
}

TEST_CASE("payments move algos and burn exactly the fee")
{
    Fixture f;
    const MicroAlgos before = total_algos(f.ledger);
    TransactionGroup g{make_payment(f.alice, f.bob, 123'456)};
    REQUIRE(f.ledger.submit_group(g));
    CHECK(f.ledger.balance(f.alice) == 5 * kMicroAlgosPerAlgo - 123'456 - kMinFee);
    CHECK(f.ledger.balance(f.bob) == 5 * kMicroAlgosPerAlgo + 123'456);
    CHECK(total_algos(f.ledger) == before - kMinFee);
    CHECK(f.ledger.costs().fees_paid(f.alice) == kMinFee);
    CHECK(f.ledger.history().size() == 1);
}

TEST_CASE("minimum balance is enforced at group end")
{
    Fixture f;
    const MicroAlgos spendable = f.ledger.balance(f.alice) - kMinFee - 100'000;

    SUBCASE("one microAlgo below the floor is rejected")
    {
        TransactionGroup g{make_payment(f.alice, f.bob, spendable + 1)};
        const GroupResult r = f.ledger.submit_group(g);
        CHECK(r.code == RejectCode::MinBalanceViolation);
    }
    SUBCASE("landing exactly on the floor is fine")
    {
        TransactionGroup g{make_payment(f.alice, f.bob, spendable)};
        CHECK(f.ledger.submit_group(g));
        CHECK(f.ledger.balance(f.alice) == 100'000);
    }
    SUBCASE("a temporary dip inside the group is fine")
    {
        TransactionGroup g{make_payment(f.alice, f.bob, spendable + 50'000),
                           make_payment(f.bob, f.alice, 50'000)};
        CHECK(f.ledger.submit_group(g));
    }
    SUBCASE("an account may be emptied completely only if it has no obligations")
    {
        const Address c = f.ledger.create_account();
        f.ledger.fund_algos(c, 101'000);
        TransactionGroup g{make_payment(c, f.bob, 100'000)};
        CHECK(f.ledger.submit_group(g));
        CHECK(f.ledger.balance(c) == 0);
    }
}

TEST_CASE("asset holdings and creations raise the minimum balance")
{
    Fixture f;
    const AssetId t = f.token();
    CHECK(f.ledger.min_balance(f.alice) == 200'000);
    CHECK(f.ledger.asset_balance(f.alice, t) == 1'000'000);
    CHECK(f.ledger.opt_in_asset(f.bob, t));
    CHECK(f.ledger.min_balance(f.bob) == 200'000);
    CHECK(f.ledger.opt_in_asset(f.bob, t).code == RejectCode::AlreadyOptedIn);

    const auto& entries = f.ledger.costs().entries();
    REQUIRE(entries.size() >= 2);
    CHECK(entries.front().min_balance == 100'000);
    CHECK(entries.front().fees == kMinFee);
}

TEST_CASE("asset transfers need an opted-in receiver")
{
    Fixture f;
    const AssetId t = f.token();
    TransactionGroup g{make_asset_transfer(f.alice, f.bob, t, 10)};
    CHECK(f.ledger.submit_group(g).code == RejectCode::NotOptedIn);
    REQUIRE(f.ledger.opt_in_asset(f.bob, t));
    CHECK(f.ledger.submit_group(g));
    CHECK(f.ledger.asset_balance(f.bob, t) == 10);

    TransactionGroup too_much{make_asset_transfer(f.bob, f.alice, t, 11)};
    CHECK(f.ledger.submit_group(too_much).code == RejectCode::InsufficientBalance);
}

TEST_CASE("frozen holdings can only leave through clawback")
{
    Fixture f;
    const Address cop = f.ledger.create_account();
    f.ledger.fund_algos(cop, kMicroAlgosPerAlgo);
    const AssetId t = f.token(true, cop);
    REQUIRE(f.ledger.opt_in_asset(f.bob, t));
    CHECK(f.ledger.holding(f.bob, t)->frozen);
    CHECK_FALSE(f.ledger.holding(f.alice, t)->frozen);

    TransactionGroup in{make_asset_transfer(f.alice, f.bob, t, 500)};
    REQUIRE(f.ledger.submit_group(in));

    TransactionGroup out{make_asset_transfer(f.bob, f.alice, t, 1)};
    CHECK(f.ledger.submit_group(out).code == RejectCode::FrozenHolding);

    TransactionGroup not_authority{make_clawback(f.alice, f.bob, f.alice, t, 1)};
    CHECK(f.ledger.submit_group(not_authority).code == RejectCode::NotClawback);

    TransactionGroup revoke{make_clawback(cop, f.bob, f.alice, t, 200)};
    CHECK(f.ledger.submit_group(revoke));
    CHECK(f.ledger.asset_balance(f.bob, t) == 300);
}

TEST_CASE("structural rejections")
{
    Fixture f;
    SUBCASE("empty and oversized groups")
    {
        CHECK(f.ledger.submit_group(TransactionGroup{}).code == RejectCode::GroupSize);
        TransactionGroup big(17, make_payment(f.alice, f.bob, 1));
        CHECK(f.ledger.submit_group(big).code == RejectCode::GroupSize);
        TransactionGroup sixteen(16, make_payment(f.alice, f.bob, 1));
        CHECK(f.ledger.submit_group(sixteen));
    }
    SUBCASE("fee below the minimum")
    {
        Transaction t = make_payment(f.alice, f.bob, 1);
        t.fee = kMinFee - 1;
        CHECK(f.ledger.submit_group(TransactionGroup{t}).code == RejectCode::FeeTooLow);
    }
    SUBCASE("note limit")
    {
        Transaction t = make_payment(f.alice, f.alice, 0);
        t.note = Bytes(kMaxNoteBytes, 'x');
        CHECK(f.ledger.submit_group(TransactionGroup{t}));
        t.note.push_back('x');
        CHECK(f.ledger.submit_group(TransactionGroup{t}).code == RejectCode::NoteTooLarge);
    }
    SUBCASE("validity window")
    {
        f.ledger.advance_time(50);
        Transaction t = make_payment(f.alice, f.bob, 1);
        t.valid_before = 51;
        CHECK(f.ledger.submit_group(TransactionGroup{t}));
        f.ledger.advance_time(51);
        CHECK(f.ledger.submit_group(TransactionGroup{t}).code == RejectCode::ClockWindow);
        CHECK_THROWS_AS(f.ledger.advance_time(10), LedgerError);
    }
    SUBCASE("signing for someone else")
    {
        Transaction t = with_signature(make_payment(f.alice, f.bob, 1), SecretKey{f.bob});
        CHECK(f.ledger.submit_group(TransactionGroup{t}).code == RejectCode::BadSignature);
    }
    SUBCASE("unknown parties")
    {
        TransactionGroup g{make_payment(f.alice, Address("ghost"), 1)};
        CHECK(f.ledger.submit_group(g).code == RejectCode::UnknownAccount);
        TransactionGroup h{make_asset_transfer(f.alice, f.alice, AssetId{999}, 0)};
        CHECK(f.ledger.submit_group(h).code == RejectCode::UnknownAsset);
    }
}

TEST_CASE("a failing transaction anywhere leaves no trace")
{
    Fixture f;
    const AssetId t = f.token();
    REQUIRE(f.ledger.opt_in_asset(f.bob, t));
    const LedgerState before = f.ledger.state();
    const auto history = f.ledger.history().size();
    const auto entries = f.ledger.costs().entries().size();

    TransactionGroup g{make_payment(f.alice, f.bob, 1'000), make_asset_transfer(f.alice, f.bob, t, 5),
                       make_payment(f.bob, f.alice, 10 * kMicroAlgosPerAlgo)};
    const GroupResult r = f.ledger.submit_group(g);
    CHECK(r.code == RejectCode::InsufficientBalance);
    CHECK(r.txn_index == 2);
    CHECK(f.ledger.state() == before);
    CHECK(f.ledger.history().size() == history);
    CHECK(f.ledger.costs().entries().size() == entries);
    CHECK(r.describe().find("insufficient-balance at txn 2") == 0);
}

TEST_CASE("simulate evaluates without committing")
{
    Fixture f;
    const LedgerState before = f.ledger.state();
    TransactionGroup g{make_payment(f.alice, f.bob, 77)};
    const auto sim = f.ledger.simulate(g);
    CHECK(sim.result);
    CHECK(sim.state.account(f.bob).balance == f.ledger.balance(f.bob) + 77);
    CHECK(f.ledger.state() == before);
}

TEST_CASE("random payment groups conserve algos minus fees")
{
    Fixture f;
    std::vector<Address> people{f.alice, f.bob};
    for (int i = 0; i < 4; ++i) {
        people.push_back(f.ledger.create_account());
        f.ledger.fund_algos(people.back(), kMicroAlgosPerAlgo);
    }
    std::mt19937_64 rng(7);
    for (int round = 0; round < 300; ++round) {
        const MicroAlgos before = total_algos(f.ledger);
        const std::size_t n = 1 + rng() % 6;
        TransactionGroup g;
        for (std::size_t k = 0; k < n; ++k) {
            g.push_back(make_payment(people[rng() % people.size()], people[rng() % people.size()],
                                     rng() % 400'000));
        }
        const GroupResult r = f.ledger.submit_group(g);
        const MicroAlgos fees = r ? n * kMinFee : 0;
        CHECK(total_algos(f.ledger) == before - fees);
        for (const auto& p : people) {
            const MicroAlgos bal = f.ledger.balance(p);
            CHECK((bal == 0 || bal >= f.ledger.min_balance(p)));
        }
    }
}

TEST_CASE("contract accounts are controlled by their program")
{
    Fixture f;
    auto open_purse = std::make_shared<const StatelessProgram>(
        "purse/max=5000", [](const LogicContext& c) {
            const Payment* p = c.txn().payment();
            return p != nullptr && p->amount <= 5'000;
        });
    const Address purse = f.ledger.contract_account(open_purse);
    CHECK(purse == contract_account_address(*open_purse));
    CHECK(f.ledger.contract_account(open_purse) == purse);
    f.ledger.fund_algos(purse, kMicroAlgosPerAlgo);

    const LogicSig sig{open_purse, std::nullopt, {}};
    TransactionGroup ok{with_signature(make_payment(purse, f.bob, 5'000), sig)};
    CHECK(f.ledger.submit_group(ok));
    TransactionGroup greedy{with_signature(make_payment(purse, f.bob, 5'001), sig)};
    CHECK(f.ledger.submit_group(greedy).code == RejectCode::LogicRejected);
    TransactionGroup keyed{make_payment(purse, f.bob, 1)};
    CHECK(f.ledger.submit_group(keyed).code == RejectCode::BadSignature);
    TransactionGroup wrong_sender{with_signature(make_payment(f.alice, f.bob, 1), sig)};
    CHECK(f.ledger.submit_group(wrong_sender).code == RejectCode::BadSignature);
}

TEST_CASE("delegated signatures need the delegator's signing")
{
    Fixture f;
    auto tip = std::make_shared<const StatelessProgram>("tip/100", [](const LogicContext& c) {
        const Payment* p = c.txn().payment();
        return p != nullptr && p->amount == 100;
    });
    Transaction t = make_payment(f.alice, f.bob, 100);
    const LogicSig forged{tip, f.alice, {}};
    CHECK(f.ledger.submit_group(TransactionGroup{with_signature(t, forged)}).code ==
          RejectCode::BadSignature);

    const LogicSig signed_sig = f.ledger.sign_delegation(f.alice, tip);
    CHECK(f.ledger.submit_group(TransactionGroup{with_signature(t, signed_sig)}));
    Transaction more = make_payment(f.alice, f.bob, 101);
    CHECK(f.ledger.submit_group(TransactionGroup{with_signature(more, signed_sig)}).code ==
          RejectCode::LogicRejected);
    // The signature only speaks for its delegator.
    Transaction bobs = make_payment(f.bob, f.alice, 100);
    CHECK(f.ledger.submit_group(TransactionGroup{with_signature(bobs, signed_sig)}).code ==
          RejectCode::BadSignature);
}

TEST_CASE("direct operations fail cleanly when the actor cannot pay")
{
    Ledger ledger;
    const Address poor = ledger.create_account();
    ledger.fund_algos(poor, 150'000);
    const LedgerState before = ledger.state();
    CHECK_THROWS_AS(ledger.create_asset(AssetSpec{poor, 10, 0, false, {}, {}}), LedgerError);
    CHECK(ledger.state() == before);
}

TEST_CASE("argument encoding round-trips")
{
    for (std::uint64_t v : {0ULL, 1ULL, 255ULL, 256ULL, 0x0102030405060708ULL, ~0ULL}) {
        const Bytes b = encode_uint(v);
        CHECK(b.size() == 8);
        CHECK(decode_uint(b) == v);
    }
    CHECK(encode_uint(0x0503040505050504ULL) == Bytes("\x05\x03\x04\x05\x05\x05\x05\x04", 8));
    CHECK_FALSE(decode_uint("abc").has_value());
}
