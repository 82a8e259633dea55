#pragma once

#include "bondsim/cli/scenario.hpp"
#include "bondsim/greenbond/bond.hpp"
#include "bondsim/ledger/ledger.hpp"
#include "bondsim/reports/reports.hpp"

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace bondsim::cli {

class UnknownName : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

struct RunOptions {
    // Report blobs go here when set; otherwise they live only for the run.
    std::optional<std::filesystem::path> store_dir;
    // Relative report-put file= paths resolve against this directory.
    std::filesystem::path base_dir;
    // Adds indented state-delta lines after each step.
    bool deltas = false;
};

struct RunResult {
    // 0 when every step ran and every assert held, 1 otherwise.
    int exit_code = 0;
    std::vector<std::string> transcript;
    std::string error;
};

// Executes scenarios against a fresh ledger. The ledger starts with a
// stablecoin (6 decimals) minted by an internal account; fund-stablecoin
// draws from it.
class Session {
public:
    explicit Session(RunOptions options = {});
    Session(const Session&) = delete;
    Session& operator=(const Session&) = delete;

    RunResult run(const Scenario& scenario);

    const Ledger& ledger() const { return ledger_; }
    AssetId stablecoin() const { return stablecoin_; }
    const reports::ReportStore& store() const { return store_; }

    // Throw UnknownName for names that were never bound.
    const Address& account(const std::string& name) const;
    const greenbond::GreenBond& bond(const std::string& name) const;

    // Scenario name for an address, or the raw address if it has none.
    std::string name_of(const Address& addr) const;

    // Cost ledger as CSV: per-action rows, then per-actor totals.
    std::string cost_report() const;

private:
    struct Outcome {
        bool approved = true;
        std::string reason;
    };

    // Runs one step. Returns the group outcome for steps that submit to the
    // ledger, nothing for setup steps and passing asserts. Throws
    // AssertionFailed, or UnknownName.
    std::optional<Outcome> execute(const Step& step);
    void check_assert(const Step& step) const;
    greenbond::GreenBond& bond_mut(const std::string& name);
    std::vector<std::string> deltas(const LedgerState& before) const;
    std::string asset_name(AssetId id) const;
    std::string app_name(AppId id) const;

    RunOptions options_;
    Ledger ledger_;
    Address mint_;
    AssetId stablecoin_{};
    reports::ReportStore store_;
    std::map<std::string, Address> accounts_;
    std::map<Address, std::string> names_;
    std::map<std::string, std::unique_ptr<greenbond::GreenBond>> bonds_;
    std::map<std::string, std::pair<std::string, greenbond::TradeOffer>> offers_; // bond, offer
    std::map<std::string, reports::ContentId> reports_;
    std::optional<Outcome> last_;
};

} // namespace bondsim::cli
