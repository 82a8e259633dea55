#include "bondsim/cli/app.hpp"

#include "bondsim/cli/runner.hpp"
#include "bondsim/cli/scenario.hpp"
#include "bondsim/pricing/pricing.hpp"
#include "bondsim/reports/reports.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>

namespace bondsim::cli {

namespace {

struct Usage : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Usage("cannot read " + path);
    }
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, const std::string& bytes)
{
    std::ofstream out(path, std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
}

Scenario load(const std::string& path)
{
    try {
        return parse_scenario(slurp(path));
    } catch (const ParseError& e) {
        throw Usage(path + ": " + e.what());
    }
}

RunOptions options_for(const std::string& path, const std::string& store, bool deltas)
{
    RunOptions o;
    o.base_dir = std::filesystem::path(path).parent_path();
    if (!store.empty()) {
        o.store_dir = store;
    }
    o.deltas = deltas;
    return o;
}

std::string join_lines(const std::vector<std::string>& lines)
{
    std::string out;
    for (const auto& l : lines) {
        out += l;
        out += '\n';
    }
    return out;
}

} // namespace

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Green bond ledger simulator", "bondsim"};
    app.require_subcommand(1);

    std::string scenario_path, transcript_path, store_dir;
    bool deltas = false;

    auto* run = app.add_subcommand("run", "Replay a scenario and print its transcript");
    run->add_option("scenario", scenario_path, "Scenario file")->required()->check(CLI::ExistingFile);
    run->add_option("--transcript", transcript_path, "Write the transcript here instead of stdout");
    run->add_flag("--deltas", deltas, "List state changes under each step");
    run->add_option("--store", store_dir, "Directory for report contents");

    auto* costs = app.add_subcommand("costs", "Replay a scenario and print the cost ledger as CSV");
    costs->add_option("scenario", scenario_path, "Scenario file")->required()->check(CLI::ExistingFile);
    costs->add_option("--store", store_dir, "Directory for report contents");

    pricing::CurveSpec spec;
    std::string sweep, out_path;
    std::vector<double> values, coupon_rates;
    auto* curve = app.add_subcommand("price-curve", "Price against rating, as CSV");
    curve->add_option("--face", spec.face, "Face value")->capture_default_str();
    curve->add_option("--rate", spec.rate, "Discount rate per period")->capture_default_str();
    auto* sweep_opt = curve->add_option("--sweep", sweep, "Swept variable")->check(CLI::IsMember({"T"}));
    auto* values_opt = curve->add_option("--values", values, "Period counts to sweep")->delimiter(',');
    auto* rates_opt =
        curve->add_option("--coupon-rates", coupon_rates, "Coupon rates to sweep")->delimiter(',');
    auto* fixed_rate = curve->add_option("--coupon-rate", spec.coupon_rate,
                                         "Coupon rate when sweeping periods")
                           ->capture_default_str();
    auto* fixed_periods =
        curve->add_option("--periods", spec.periods, "Periods when sweeping coupon rates")
            ->capture_default_str();
    curve->add_option("--out", out_path, "CSV destination (default stdout)");
    sweep_opt->needs(values_opt);
    values_opt->needs(sweep_opt);
    rates_opt->excludes(sweep_opt)->excludes(fixed_rate);
    fixed_periods->excludes(sweep_opt);

    auto* report = app.add_subcommand("report", "Content store for impact reports");
    report->require_subcommand(1);
    std::string file, cid_text, bond_name, issuer_name;
    auto* put = report->add_subcommand("put", "Store a file and print its content id");
    put->add_option("file", file, "File to store")->required()->check(CLI::ExistingFile);
    put->add_option("--store", store_dir, "Store directory")->required();
    auto* get = report->add_subcommand("get", "Write stored content to stdout or --out");
    get->add_option("cid", cid_text, "Content id")->required();
    get->add_option("--store", store_dir, "Store directory")->required();
    get->add_option("--out", out_path, "Destination file");
    auto* list = report->add_subcommand("list", "Replay a scenario and list anchored reports");
    list->add_option("--scenario", scenario_path, "Scenario file")->required()->check(CLI::ExistingFile);
    list->add_option("--bond", bond_name, "Bond name in the scenario")->required();
    list->add_option("--issuer", issuer_name, "Issuer account name in the scenario")->required();
    list->add_option("--store", store_dir, "Directory for report contents");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (run->parsed()) {
            Session session(options_for(scenario_path, store_dir, deltas));
            const RunResult r = session.run(load(scenario_path));
            const std::string text = join_lines(r.transcript);
            if (transcript_path.empty()) {
                out << text;
            } else {
                write_file(transcript_path, text);
            }
            if (r.exit_code != kExitOk) {
                err << scenario_path << ":" << r.error << '\n';
            }
            return r.exit_code;
        }
        if (costs->parsed()) {
            Session session(options_for(scenario_path, store_dir, false));
            const RunResult r = session.run(load(scenario_path));
            if (r.exit_code != kExitOk) {
                err << scenario_path << ":" << r.error << '\n';
                return r.exit_code;
            }
            out << session.cost_report();
            return kExitOk;
        }
        if (curve->parsed()) {
            if (sweep_opt->count() == 0 && rates_opt->count() == 0) {
                throw Usage("price-curve needs --sweep T --values ... or --coupon-rates ...");
            }
            if (rates_opt->count() > 0) {
                spec.sweep = pricing::Sweep::CouponRate;
                spec.values = coupon_rates;
            } else {
                spec.sweep = pricing::Sweep::Periods;
                spec.values = values;
            }
            std::string csv;
            try {
                csv = pricing::to_csv(pricing::curve(spec));
            } catch (const std::invalid_argument& e) {
                throw Usage(e.what());
            }
            if (out_path.empty()) {
                out << csv;
            } else {
                write_file(out_path, csv);
            }
            return kExitOk;
        }
        if (put->parsed()) {
            reports::ReportStore store(store_dir);
            out << store.store(slurp(file)).hex() << '\n';
            return kExitOk;
        }
        if (get->parsed()) {
            const auto cid = reports::ContentId::parse(cid_text);
            if (!cid) {
                throw reports::UnknownContent("'" + cid_text + "' is not a content id");
            }
            const reports::ReportStore store(store_dir);
            const std::string bytes = store.fetch(*cid);
            if (out_path.empty()) {
                out << bytes;
            } else {
                write_file(out_path, bytes);
            }
            return kExitOk;
        }
        if (list->parsed()) {
            Session session(options_for(scenario_path, store_dir, false));
            const RunResult r = session.run(load(scenario_path));
            if (r.exit_code != kExitOk) {
                err << scenario_path << ":" << r.error << '\n';
                return r.exit_code;
            }
            const auto& d = session.bond(bond_name).deployment();
            for (const auto& cid :
                 reports::list_reports(session.ledger(), session.account(issuer_name), d.manage_app)) {
                out << cid.hex() << '\n';
            }
            return kExitOk;
        }
    } catch (const Usage& e) {
        err << "bondsim: " << e.what() << '\n';
        return kExitUsage;
    } catch (const UnknownName& e) {
        err << "bondsim: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "bondsim: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitUsage;
}

} // namespace bondsim::cli
