#include "bondsim/cli/runner.hpp"

#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

namespace bondsim::cli {

namespace {

class AssertionFailed : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

constexpr std::uint64_t kStablecoinSupply = 1'000'000'000'000'000'000ULL;

std::string hex(const Bytes& b)
{
    static constexpr char digits[] = "0123456789abcdef";
    std::string out = "0x";
    for (unsigned char c : b) {
        out += digits[c >> 4];
        out += digits[c & 0xf];
    }
    return out;
}

std::string show(const TealValue* v)
{
    if (v == nullptr) {
        return "-";
    }
    if (const auto* u = std::get_if<std::uint64_t>(v)) {
        return std::to_string(*u);
    }
    return hex(std::get<Bytes>(*v));
}

std::string printable_key(const Bytes& key)
{
    for (unsigned char c : key) {
        if (c < 0x21 || c > 0x7e) {
            return hex(key);
        }
    }
    return key;
}

std::uint64_t read_uint(const KeyValueState& kv, const std::string& key, const std::string& where)
{
    const TealValue* v = kv.find(key);
    if (v == nullptr) {
        return 0;
    }
    if (const auto* u = std::get_if<std::uint64_t>(v)) {
        return *u;
    }
    // Packed byte values (ratings) compare as big-endian integers.
    const Bytes& b = std::get<Bytes>(*v);
    if (b.size() > 8) {
        throw AssertionFailed(where + " key '" + key + "' holds " + std::to_string(b.size()) +
                              " bytes " + hex(b));
    }
    std::uint64_t out = 0;
    for (unsigned char c : b) {
        out = (out << 8) | c;
    }
    return out;
}

template <class T>
void expect(const Step& step, const std::string& what, T actual, Comparison op, T expected)
{
    if (!compare(actual, op, expected)) {
        std::ostringstream msg;
        msg << "assertion failed: " << what << " " << to_string(op) << " " << expected
            << ", actual " << actual;
        throw AssertionFailed(msg.str());
    }
    (void)step;
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot read " + path.string());
    }
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

} // namespace

Session::Session(RunOptions options)
    : options_(std::move(options)),
      store_(options_.store_dir ? reports::ReportStore(*options_.store_dir) : reports::ReportStore())
{
    mint_ = ledger_.create_account();
    ledger_.fund_algos(mint_, 1'000 * kMicroAlgosPerAlgo);
    names_[mint_] = "mint";
    stablecoin_ = ledger_.create_asset(
        AssetSpec{mint_, kStablecoinSupply, 6, false, std::nullopt, std::nullopt},
        CostTag{"", "Create stablecoin"});
}

const Address& Session::account(const std::string& name) const
{
    auto it = accounts_.find(name);
    if (it == accounts_.end()) {
        throw UnknownName("no account named '" + name + "'");
    }
    return it->second;
}

const greenbond::GreenBond& Session::bond(const std::string& name) const
{
    auto it = bonds_.find(name);
    if (it == bonds_.end()) {
        throw UnknownName("bond '" + name + "' was not issued");
    }
    return *it->second;
}

greenbond::GreenBond& Session::bond_mut(const std::string& name)
{
    return const_cast<greenbond::GreenBond&>(std::as_const(*this).bond(name));
}

std::string Session::name_of(const Address& addr) const
{
    auto it = names_.find(addr);
    return it == names_.end() ? addr.str() : it->second;
}

std::string Session::asset_name(AssetId id) const
{
    if (id == stablecoin_) {
        return "stablecoin";
    }
    for (const auto& [name, b] : bonds_) {
        if (b->deployment().bond_asset == id) {
            return name;
        }
    }
    return "asset#" + std::to_string(raw(id));
}

std::string Session::app_name(AppId id) const
{
    for (const auto& [name, b] : bonds_) {
        if (b->deployment().main_app == id) {
            return name + ".main";
        }
        if (b->deployment().manage_app == id) {
            return name + ".manage";
        }
    }
    return "app#" + std::to_string(raw(id));
}

RunResult Session::run(const Scenario& scenario)
{
    RunResult result;
    std::size_t n = 0;
    for (const Step& step : scenario.steps) {
        ++n;
        const std::string head = "STEP " + std::to_string(n) + " " + step.action + " -> ";
        std::optional<LedgerState> before;
        if (options_.deltas) {
            before = ledger_.state();
        }
        try {
            const auto outcome = execute(step);
            if (outcome) {
                last_ = outcome;
            }
            result.transcript.push_back(
                head + (!outcome || outcome->approved ? "APPROVED" : "REJECTED(" + outcome->reason + ")"));
        } catch (const AssertionFailed& e) {
            result.transcript.push_back(head + "REJECTED(" + e.what() + ")");
            result.exit_code = 1;
            result.error = "line " + std::to_string(step.line) + ": " + e.what();
            return result;
        } catch (const std::exception& e) {
            result.transcript.push_back(head + "REJECTED(error: " + e.what() + ")");
            result.exit_code = 1;
            result.error = "line " + std::to_string(step.line) + ": " + e.what();
            return result;
        }
        if (options_.deltas) {
            for (std::string& line : deltas(*before)) {
                result.transcript.push_back("  " + std::move(line));
            }
        }
    }
    return result;
}

std::optional<Session::Outcome> Session::execute(const Step& step)
{
    const std::string& a = step.action;
    auto arg = [&](std::size_t i) -> const std::string& { return step.args.at(i); };
    auto acct = [&](std::size_t i) -> const Address& { return account(arg(i)); };
    auto group = [](const GroupResult& r) {
        return Outcome{r.approved(), r.approved() ? std::string{} : r.describe()};
    };
    // Builders refuse some requests outright (for example a claim by an
    // account with no local state); that is reported like a rejection.
    auto attempt = [&](auto&& fn) -> Outcome {
        try {
            return group(fn());
        } catch (const UnknownName&) {
            throw;
        } catch (const std::exception& e) {
            return Outcome{false, e.what()};
        }
    };

    if (a == "assert") {
        check_assert(step);
        return std::nullopt;
    }
    if (a == "create-account") {
        const Address addr = ledger_.create_account();
        accounts_[arg(0)] = addr;
        names_[addr] = arg(0);
        if (step.has("algos")) {
            ledger_.fund_algos(addr, parse_uint(step.option("algos")));
        }
        return std::nullopt;
    }
    if (a == "fund-algos") {
        ledger_.fund_algos(acct(0), parse_uint(arg(1)));
        return std::nullopt;
    }
    if (a == "fund-stablecoin") {
        const Address& to = acct(0);
        const std::uint64_t amount = parse_stable(arg(1));
        return attempt([&] {
            if (!ledger_.holding(to, stablecoin_)) {
                GroupResult r = ledger_.opt_in_asset(to, stablecoin_, CostTag{"", "Opt into stablecoin"});
                if (!r) {
                    return r;
                }
            }
            TransactionGroup g{make_asset_transfer(mint_, to, stablecoin_, amount)};
            return ledger_.submit_group(g, CostTag{"", "Dispense stablecoin"});
        });
    }
    if (a == "advance-time") {
        ledger_.advance_time(parse_time(arg(0)));
        return std::nullopt;
    }
    if (a == "issue") {
        greenbond::BondParams p;
        p.total_bonds = parse_uint(step.option("bonds"));
        p.coupon_rounds = parse_uint(step.option("rounds"));
        p.start_buy = parse_time(step.option("start-buy"));
        p.end_buy = parse_time(step.option("end-buy"));
        p.maturity = parse_time(step.option("maturity"));
        p.bond_cost = parse_stable(step.option("cost"));
        p.coupon_base = parse_stable(step.option("coupon"));
        p.principal = parse_stable(step.option("principal"));
        p.issuer = account(step.option("issuer"));
        p.green_verifier = account(step.option("verifier"));
        p.financial_regulator = account(step.option("regulator"));
        p.stablecoin = stablecoin_;
        const Address& op = account(step.option("operator"));
        try {
            auto d = greenbond::issue(ledger_, p, op, arg(0));
            const std::string bond_escrow = bond_escrow_name(arg(0));
            const std::string stable_escrow = stablecoin_escrow_name(arg(0));
            accounts_[bond_escrow] = d.bond_escrow;
            accounts_[stable_escrow] = d.stablecoin_escrow;
            names_[d.bond_escrow] = bond_escrow;
            names_[d.stablecoin_escrow] = stable_escrow;
            bonds_[arg(0)] = std::make_unique<greenbond::GreenBond>(ledger_, std::move(d));
            return Outcome{};
        } catch (const UnknownName&) {
            throw;
        } catch (const std::exception& e) {
            return Outcome{false, e.what()};
        }
    }
    if (a == "report-put") {
        const std::string bytes = step.has("text")
                                      ? step.option("text")
                                      : read_file(options_.base_dir / step.option("file"));
        reports_.insert_or_assign(arg(0), store_.store(bytes));
        return std::nullopt;
    }

    greenbond::GreenBond& b = bond_mut(arg(0));
    if (a == "approve-bond") {
        return attempt([&] { return b.freeze_all(acct(1), 1); });
    }
    if (a == "approve-account") {
        return attempt([&] { return b.freeze_account(acct(1), acct(2), 1); });
    }
    if (a == "freeze") {
        if (step.args.size() == 2) {
            return attempt([&] { return b.freeze_all(acct(1), 0); });
        }
        return attempt([&] { return b.freeze_account(acct(1), acct(2), 0); });
    }
    if (a == "register") {
        return attempt([&] { return b.register_holder(acct(1)); });
    }
    if (a == "buy") {
        return attempt([&] { return b.buy(acct(1), parse_bonds(arg(2))); });
    }
    if (a == "set-trade") {
        return attempt([&] { return b.set_trade(acct(1), parse_bonds(arg(2))); });
    }
    if (a == "offer") {
        const Address& seller = acct(2);
        auto offer = b.offer(seller, parse_stable(step.option("price")),
                             parse_time(step.option("expiry")));
        offers_.insert_or_assign(arg(1), std::pair{arg(0), std::move(offer)});
        return std::nullopt;
    }
    if (a == "trade") {
        auto found = offers_.find(arg(1));
        if (found == offers_.end()) {
            throw UnknownName("offer '" + arg(1) + "' was not made");
        }
        const auto& [bond_name, offer] = found->second;
        if (bond_name != arg(0)) {
            throw UnknownName("offer '" + arg(1) + "' belongs to bond '" + bond_name + "'");
        }
        return attempt([&] { return b.trade(offer, acct(2), parse_bonds(arg(3))); });
    }
    if (a == "fund-escrow") {
        return attempt([&] { return b.fund_escrow(acct(1), parse_stable(arg(2))); });
    }
    if (a == "rate") {
        return attempt([&] { return b.rate(acct(1), parse_uint(arg(2))); });
    }
    if (a == "claim-coupon") {
        return attempt([&] { return b.claim_coupon(acct(1)); });
    }
    if (a == "claim-principal") {
        return attempt([&] { return b.claim_principal(acct(1)); });
    }
    if (a == "claim-default") {
        return attempt([&] { return b.claim_default(acct(1)); });
    }
    if (a == "report-anchor") {
        auto found = reports_.find(arg(2));
        if (found == reports_.end()) {
            throw UnknownName("report '" + arg(2) + "' was not stored");
        }
        const reports::ContentId& cid = found->second;
        return attempt([&] {
            return ledger_.submit_group(
                reports::anchor(acct(1), b.deployment().manage_app, cid),
                CostTag{b.deployment().scope, greenbond::labels::kUploadReport});
        });
    }
    throw std::logic_error("unhandled action '" + a + "'");
}

void Session::check_assert(const Step& step) const
{
    if (step.args.empty()) {
        if (!last_) {
            throw AssertionFailed("assertion failed: no transaction has been submitted yet");
        }
        const bool want = step.option("rejected") == "true";
        if (want == last_->approved) {
            throw AssertionFailed(std::string("assertion failed: expected ") +
                                  (want ? "rejection, last step was approved"
                                        : "approval, last step was rejected: " + last_->reason));
        }
        if (step.has("reason") && last_->reason.find(step.option("reason")) == std::string::npos) {
            throw AssertionFailed("assertion failed: rejection reason '" + last_->reason +
                                  "' does not mention '" + step.option("reason") + "'");
        }
        return;
    }

    const auto& args = step.args;
    const std::string& target = args[0];
    const Comparison op = parse_comparison(args[args.size() - 2]);
    const std::string& expected = args.back();

    if (target == "algo-balance") {
        expect(step, "algo-balance " + args[1], ledger_.balance(account(args[1])), op,
               parse_uint(expected));
    } else if (target == "stablecoin-balance") {
        expect(step, "stablecoin-balance " + args[1],
               ledger_.asset_balance(account(args[1]), stablecoin_), op, parse_stable(expected));
    } else if (target == "bond-balance") {
        const auto& d = bond(args[1]).deployment();
        expect(step, "bond-balance " + args[1] + " " + args[2],
               ledger_.asset_balance(account(args[2]), d.bond_asset), op, parse_bonds(expected));
    } else if (target == "global-state") {
        const auto& d = bond(args[1]).deployment();
        const AppId app = args[2] == "main" ? d.main_app : d.manage_app;
        const std::string where = args[1] + "." + args[2];
        expect(step, "global-state " + where + " " + args[3],
               read_uint(ledger_.app(app).global, args[3], where), op, parse_stable(expected));
    } else if (target == "local-state") {
        const auto& d = bond(args[1]).deployment();
        const auto local = ledger_.local_state(account(args[2]), d.main_app);
        if (!local) {
            throw AssertionFailed("assertion failed: " + args[2] + " is not opted into " +
                                  args[1] + ".main");
        }
        expect(step, "local-state " + args[1] + " " + args[2] + " " + args[3],
               read_uint(*local, args[3], args[2]), op, parse_stable(expected));
    } else if (target == "rating") {
        const auto& d = bond(args[1]).deployment();
        const std::uint64_t index = parse_uint(args[2]);
        std::uint64_t rating = 0;
        try {
            rating = greenbond::get_rating(ledger_, d, index);
        } catch (const std::out_of_range& e) {
            throw AssertionFailed(std::string("assertion failed: ") + e.what());
        }
        expect(step, "rating " + args[1] + " " + args[2], rating, op, parse_uint(expected));
    } else if (target == "cost-total") {
        const std::string scope = step.has("scope") ? step.option("scope") : std::string{};
        const std::uint64_t want = parse_uint(expected);
        if (want > static_cast<std::uint64_t>(INT64_MAX)) {
            throw AssertionFailed("assertion failed: cost-total expectation out of range");
        }
        expect(step, "cost-total " + args[1] + (scope.empty() ? "" : " scope=" + scope),
               ledger_.costs().total(account(args[1]), scope), op, static_cast<std::int64_t>(want));
    } else {
        throw std::logic_error("unhandled assert target '" + target + "'");
    }
}

std::vector<std::string> Session::deltas(const LedgerState& before) const
{
    const LedgerState& after = ledger_.state();
    std::vector<std::string> out;

    for (const auto& [id, asset] : after.assets) {
        if (!before.assets.contains(id)) {
            out.push_back("asset " + asset_name(id) + " created");
        }
    }
    for (const auto& [id, app] : after.apps) {
        auto it = before.apps.find(id);
        if (it == before.apps.end()) {
            out.push_back("app " + app_name(id) + " created");
        }
        const KeyValueState empty;
        const KeyValueState& old = it == before.apps.end() ? empty : it->second.global;
        std::set<Bytes> keys;
        for (const auto& [k, v] : old.entries()) {
            keys.insert(k);
        }
        for (const auto& [k, v] : app.global.entries()) {
            keys.insert(k);
        }
        for (const Bytes& k : keys) {
            const TealValue* was = old.find(k);
            const TealValue* now = app.global.find(k);
            if (show(was) != show(now)) {
                out.push_back("global " + app_name(id) + " " + printable_key(k) + ": " + show(was) +
                              " -> " + show(now));
            }
        }
    }

    static const AccountState kNone;
    std::set<Address> addrs;
    for (const auto& [addr, acct] : before.accounts) {
        addrs.insert(addr);
    }
    for (const auto& [addr, acct] : after.accounts) {
        addrs.insert(addr);
    }
    for (const Address& addr : addrs) {
        auto bi = before.accounts.find(addr);
        auto ai = after.accounts.find(addr);
        const AccountState& was = bi == before.accounts.end() ? kNone : bi->second;
        const AccountState& now = ai == after.accounts.end() ? kNone : ai->second;
        if (was == now) {
            continue;
        }
        const std::string who = name_of(addr);
        if (was.balance != now.balance) {
            out.push_back("algos " + who + ": " + std::to_string(was.balance) + " -> " +
                          std::to_string(now.balance));
        }
        std::set<AssetId> assets;
        for (const auto& [id, h] : was.holdings) {
            assets.insert(id);
        }
        for (const auto& [id, h] : now.holdings) {
            assets.insert(id);
        }
        for (AssetId id : assets) {
            auto wh = was.holdings.find(id);
            auto nh = now.holdings.find(id);
            auto amount = [](auto it, const auto& m) {
                return it == m.end() ? std::string("-") : std::to_string(it->second.balance);
            };
            auto frozen = [](auto it, const auto& m) {
                return it == m.end() ? std::string("-") : it->second.frozen ? "true" : "false";
            };
            const std::string wa = amount(wh, was.holdings), na = amount(nh, now.holdings);
            if (wa != na) {
                out.push_back("asset " + asset_name(id) + " " + who + ": " + wa + " -> " + na);
            }
            const std::string wf = frozen(wh, was.holdings), nf = frozen(nh, now.holdings);
            if (wf != nf && wh != was.holdings.end() && nh != now.holdings.end()) {
                out.push_back("frozen " + asset_name(id) + " " + who + ": " + wf + " -> " + nf);
            }
        }
        std::set<AppId> apps;
        for (const auto& [id, kv] : was.local_states) {
            apps.insert(id);
        }
        for (const auto& [id, kv] : now.local_states) {
            apps.insert(id);
        }
        for (AppId id : apps) {
            auto wl = was.local_states.find(id);
            auto nl = now.local_states.find(id);
            if (wl == was.local_states.end()) {
                out.push_back("local " + app_name(id) + " " + who + ": opted in");
            } else if (nl == now.local_states.end()) {
                out.push_back("local " + app_name(id) + " " + who + ": closed out");
                continue;
            }
            const KeyValueState empty;
            const KeyValueState& old = wl == was.local_states.end() ? empty : wl->second;
            std::set<Bytes> keys;
            for (const auto& [k, v] : old.entries()) {
                keys.insert(k);
            }
            for (const auto& [k, v] : nl->second.entries()) {
                keys.insert(k);
            }
            for (const Bytes& k : keys) {
                const TealValue* wv = old.find(k);
                const TealValue* nv = nl->second.find(k);
                if (show(wv) != show(nv)) {
                    out.push_back("local " + app_name(id) + " " + who + " " + printable_key(k) +
                                  ": " + show(wv) + " -> " + show(nv));
                }
            }
        }
    }
    if (before.now != after.now) {
        out.push_back("time: " + std::to_string(before.now) + " -> " + std::to_string(after.now));
    }
    return out;
}

std::string Session::cost_report() const
{
    std::ostringstream out;
    out << "actor,scope,label,amount,min_balance,fees,total\n";
    std::vector<Address> actors;
    std::set<Address> seen;
    for (const CostEntry& row : ledger_.costs().rows()) {
        if (seen.insert(row.actor).second) {
            actors.push_back(row.actor);
        }
        out << name_of(row.actor) << ',' << row.scope << ',' << row.label << ',' << row.amount << ','
            << row.min_balance << ',' << row.fees << ',' << row.total() << '\n';
    }
    out << "\nactor,fees_paid,min_balance_locked,contract_payments,total\n";
    for (const Address& a : actors) {
        const CostLedger& c = ledger_.costs();
        out << name_of(a) << ',' << c.fees_paid(a) << ',' << c.min_balance_locked(a) << ','
            << c.contract_payments(a) << ',' << c.total(a) << '\n';
    }
    return out.str();
}

} // namespace bondsim::cli
