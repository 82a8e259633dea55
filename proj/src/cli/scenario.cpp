#include "bondsim/cli/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <optional>
#include <set>

namespace bondsim::cli {

ParseError::ParseError(std::size_t line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line)
{
}

const std::string& Step::option(std::string_view key) const
{
    auto it = options.find(key);
    if (it == options.end()) {
        throw std::out_of_range("step '" + action + "' has no option " + std::string(key));
    }
    return it->second;
}

namespace {

bool all_digits(std::string_view s)
{
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::uint64_t digits_value(std::string_view s, int base = 10)
{
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v, base);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
        throw std::invalid_argument("bad number '" + std::string(s) + "'");
    }
    return v;
}

// "12.5" with up to six decimals, scaled by 10^6.
std::uint64_t parse_fixed6(std::string_view text)
{
    const auto dot = text.find('.');
    const std::string_view whole = text.substr(0, dot);
    std::string_view frac = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
    if (!all_digits(whole) || (dot != std::string_view::npos && !all_digits(frac)) ||
        frac.size() > 6) {
        throw std::invalid_argument("bad amount '" + std::string(text) + "'");
    }
    std::string padded(frac);
    padded.resize(6, '0');
    const std::uint64_t w = digits_value(whole);
    if (w > UINT64_MAX / 1'000'000) {
        throw std::invalid_argument("amount out of range '" + std::string(text) + "'");
    }
    return w * 1'000'000 + digits_value(padded);
}

std::vector<std::string> tokenize(std::string_view line, std::size_t lineno)
{
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < line.size()) {
        const char c = line[i];
        if (c == ' ' || c == '\t' || c == '\r') {
            ++i;
            continue;
        }
        if (c == '#') {
            break;
        }
        std::string tok;
        bool quoted = false;
        while (i < line.size()) {
            const char d = line[i];
            if (!quoted && (d == ' ' || d == '\t' || d == '\r')) {
                break;
            }
            if (d == '"') {
                quoted = !quoted;
                ++i;
                continue;
            }
            if (quoted && d == '\\' && i + 1 < line.size()) {
                tok += line[i + 1];
                i += 2;
                continue;
            }
            tok += d;
            ++i;
        }
        if (quoted) {
            throw ParseError(lineno, "unterminated quote");
        }
        out.push_back(std::move(tok));
    }
    return out;
}

std::optional<std::pair<std::string, std::string>> split_option(const std::string& tok)
{
    const auto eq = tok.find('=');
    if (eq == std::string::npos || eq == 0) {
        return std::nullopt;
    }
    const std::string key = tok.substr(0, eq);
    const bool word = std::all_of(key.begin(), key.end(), [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-';
    });
    if (!word || !(key[0] >= 'a' && key[0] <= 'z')) {
        return std::nullopt;
    }
    return std::pair{key, tok.substr(eq + 1)};
}

enum class Kind {
    Account,
    NewAccount,
    Bond,
    NewBond,
    Offer,
    NewOffer,
    Report,
    NewReport,
    Algos,
    Stable,
    Bonds,
    Uint,
    Time,
    Op,
    AppSide,
    Text,
    Bool,
};

struct Shape {
    std::vector<Kind> args;
    std::size_t optional_tail = 0; // trailing args that may be omitted
    std::vector<std::pair<std::string, Kind>> required = {};
    std::vector<std::pair<std::string, Kind>> optional = {};
};

const std::map<std::string, Shape, std::less<>>& action_shapes()
{
    using K = Kind;
    static const std::map<std::string, Shape, std::less<>> shapes{
        {"create-account", {{K::NewAccount}, 0, {}, {{"algos", K::Algos}}}},
        {"fund-algos", {{K::Account, K::Algos}}},
        {"fund-stablecoin", {{K::Account, K::Stable}}},
        {"issue",
         {{K::NewBond},
          0,
          {{"operator", K::Account},
           {"issuer", K::Account},
           {"verifier", K::Account},
           {"regulator", K::Account},
           {"bonds", K::Uint},
           {"rounds", K::Uint},
           {"start-buy", K::Time},
           {"end-buy", K::Time},
           {"maturity", K::Time},
           {"cost", K::Stable},
           {"coupon", K::Stable},
           {"principal", K::Stable}}}},
        {"approve-bond", {{K::Bond, K::Account}}},
        {"approve-account", {{K::Bond, K::Account, K::Account}}},
        {"freeze", {{K::Bond, K::Account, K::Account}, 1}},
        {"register", {{K::Bond, K::Account}}},
        {"buy", {{K::Bond, K::Account, K::Bonds}}},
        {"set-trade", {{K::Bond, K::Account, K::Bonds}}},
        {"offer",
         {{K::Bond, K::NewOffer, K::Account}, 0, {{"price", K::Stable}, {"expiry", K::Time}}}},
        {"trade", {{K::Bond, K::Offer, K::Account, K::Bonds}}},
        {"fund-escrow", {{K::Bond, K::Account, K::Stable}}},
        {"rate", {{K::Bond, K::Account, K::Uint}}},
        {"claim-coupon", {{K::Bond, K::Account}}},
        {"claim-principal", {{K::Bond, K::Account}}},
        {"claim-default", {{K::Bond, K::Account}}},
        {"report-put", {{K::NewReport}, 0, {}, {{"file", K::Text}, {"text", K::Text}}}},
        {"report-anchor", {{K::Bond, K::Account, K::Report}}},
        {"advance-time", {{K::Time}}},
    };
    return shapes;
}

const std::map<std::string, Shape, std::less<>>& assert_shapes()
{
    using K = Kind;
    static const std::map<std::string, Shape, std::less<>> shapes{
        {"algo-balance", {{K::Text, K::Account, K::Op, K::Algos}}},
        {"stablecoin-balance", {{K::Text, K::Account, K::Op, K::Stable}}},
        {"bond-balance", {{K::Text, K::Bond, K::Account, K::Op, K::Bonds}}},
        {"global-state", {{K::Text, K::Bond, K::AppSide, K::Text, K::Op, K::Stable}}},
        {"local-state", {{K::Text, K::Bond, K::Account, K::Text, K::Op, K::Stable}}},
        {"rating", {{K::Text, K::Bond, K::Uint, K::Op, K::Uint}}},
        {"cost-total", {{K::Text, K::Account, K::Op, K::Algos}, 0, {}, {{"scope", K::Text}}}},
    };
    return shapes;
}

class Validator {
public:
    void check(const Step& step)
    {
        const Shape* shape = nullptr;
        if (step.action == "assert") {
            if (step.args.empty()) {
                // "assert rejected=true" carries its target as an option.
                if (!step.has("rejected")) {
                    throw ParseError(step.line, "assert needs a target");
                }
                check_value(step, Kind::Bool, step.option("rejected"));
                for (const auto& [key, value] : step.options) {
                    if (key != "rejected" && key != "reason") {
                        throw ParseError(step.line, "unknown option '" + key + "'");
                    }
                }
                return;
            }
            auto it = assert_shapes().find(step.args[0]);
            if (it == assert_shapes().end()) {
                throw ParseError(step.line, "unknown assert target '" + step.args[0] + "'");
            }
            shape = &it->second;
        } else {
            auto it = action_shapes().find(step.action);
            if (it == action_shapes().end()) {
                throw ParseError(step.line, "unknown action '" + step.action + "'");
            }
            shape = &it->second;
        }

        const std::size_t max = shape->args.size();
        const std::size_t min = max - shape->optional_tail;
        if (step.args.size() < min || step.args.size() > max) {
            throw ParseError(step.line, "'" + step.action + "' takes " + std::to_string(min) +
                                            (min == max ? "" : "-" + std::to_string(max)) +
                                            " arguments, got " + std::to_string(step.args.size()));
        }
        for (std::size_t i = 0; i < step.args.size(); ++i) {
            check_value(step, shape->args[i], step.args[i]);
        }
        for (const auto& [key, kind] : shape->required) {
            if (!step.has(key)) {
                throw ParseError(step.line, "'" + step.action + "' needs " + key + "=");
            }
        }
        for (const auto& [key, value] : step.options) {
            auto find = [&](const auto& list) -> std::optional<Kind> {
                for (const auto& [k, kind] : list) {
                    if (k == key) {
                        return kind;
                    }
                }
                return std::nullopt;
            };
            auto kind = find(shape->required);
            if (!kind) {
                kind = find(shape->optional);
            }
            if (!kind) {
                throw ParseError(step.line, "unknown option '" + key + "' for '" + step.action + "'");
            }
            check_value(step, *kind, value);
        }

        if (step.action == "report-put" && step.has("file") == step.has("text")) {
            throw ParseError(step.line, "report-put needs exactly one of file= or text=");
        }
        if (step.action == "issue") {
            define(step, accounts_, bond_escrow_name(step.args[0]));
            define(step, accounts_, stablecoin_escrow_name(step.args[0]));
        }
        if (step.action == "advance-time") {
            const auto t = parse_time(step.args[0]);
            if (t < last_time_) {
                throw ParseError(step.line, "advance-time goes backwards (" + std::to_string(t) +
                                                " < " + std::to_string(last_time_) + ")");
            }
            last_time_ = t;
        }
    }

private:
    void define(const Step& step, std::set<std::string>& names, const std::string& name)
    {
        if (!names.insert(name).second) {
            throw ParseError(step.line, "'" + name + "' is already defined");
        }
    }

    void use(const Step& step, const std::set<std::string>& names, const std::string& name,
             const char* what)
    {
        if (!names.contains(name)) {
            throw ParseError(step.line, std::string("undefined ") + what + " '" + name + "'");
        }
    }

    void check_value(const Step& step, Kind kind, const std::string& value)
    {
        try {
            switch (kind) {
            case Kind::Account: use(step, accounts_, value, "account"); break;
            case Kind::NewAccount: define(step, accounts_, value); break;
            case Kind::Bond: use(step, bonds_, value, "bond"); break;
            case Kind::NewBond: define(step, bonds_, value); break;
            case Kind::Offer: use(step, offers_, value, "offer"); break;
            case Kind::NewOffer: define(step, offers_, value); break;
            case Kind::Report: use(step, reports_, value, "report"); break;
            case Kind::NewReport: define(step, reports_, value); break;
            case Kind::Algos:
            case Kind::Uint: parse_uint(value); break;
            case Kind::Stable: parse_stable(value); break;
            case Kind::Bonds: parse_bonds(value); break;
            case Kind::Time: parse_time(value); break;
            case Kind::Op: parse_comparison(value); break;
            case Kind::AppSide:
                if (value != "main" && value != "manage") {
                    throw std::invalid_argument("expected main or manage, got '" + value + "'");
                }
                break;
            case Kind::Bool:
                if (value != "true" && value != "false") {
                    throw std::invalid_argument("expected true or false, got '" + value + "'");
                }
                break;
            case Kind::Text: break;
            }
        } catch (const std::invalid_argument& e) {
            throw ParseError(step.line, e.what());
        }
    }

    std::set<std::string> accounts_, bonds_, offers_, reports_;
    std::int64_t last_time_ = 0;
};

} // namespace

Scenario parse_scenario(std::string_view text)
{
    Scenario scenario;
    Validator validator;
    std::size_t lineno = 0;
    while (!text.empty()) {
        ++lineno;
        const auto eol = text.find('\n');
        const std::string_view line = text.substr(0, eol);
        text.remove_prefix(eol == std::string_view::npos ? text.size() : eol + 1);

        auto tokens = tokenize(line, lineno);
        if (tokens.empty()) {
            continue;
        }
        Step step;
        step.line = lineno;
        step.action = tokens[0];
        for (std::size_t i = 1; i < tokens.size(); ++i) {
            if (auto opt = split_option(tokens[i])) {
                if (!step.options.emplace(opt->first, opt->second).second) {
                    throw ParseError(lineno, "option '" + opt->first + "' given twice");
                }
            } else {
                step.args.push_back(std::move(tokens[i]));
            }
        }
        validator.check(step);
        scenario.steps.push_back(std::move(step));
    }
    return scenario;
}

std::uint64_t parse_uint(std::string_view text)
{
    if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
        return digits_value(text.substr(2), 16);
    }
    if (!all_digits(text)) {
        throw std::invalid_argument("bad number '" + std::string(text) + "'");
    }
    return digits_value(text);
}

std::uint64_t parse_stable(std::string_view text)
{
    if (!text.empty() && text[0] == '$') {
        return parse_fixed6(text.substr(1));
    }
    return parse_uint(text);
}

std::uint64_t parse_bonds(std::string_view text)
{
    return parse_fixed6(text);
}

std::int64_t parse_time(std::string_view text)
{
    const std::uint64_t v = parse_uint(text);
    if (v > static_cast<std::uint64_t>(INT64_MAX)) {
        throw std::invalid_argument("timestamp out of range '" + std::string(text) + "'");
    }
    return static_cast<std::int64_t>(v);
}

Comparison parse_comparison(std::string_view text)
{
    static const std::map<std::string_view, Comparison> ops{
        {"==", Comparison::Eq}, {"!=", Comparison::Ne}, {"<", Comparison::Lt},
        {"<=", Comparison::Le}, {">", Comparison::Gt},  {">=", Comparison::Ge},
    };
    auto it = ops.find(text);
    if (it == ops.end()) {
        throw std::invalid_argument("bad comparison '" + std::string(text) + "'");
    }
    return it->second;
}

std::string_view to_string(Comparison c)
{
    switch (c) {
    case Comparison::Eq: return "==";
    case Comparison::Ne: return "!=";
    case Comparison::Lt: return "<";
    case Comparison::Le: return "<=";
    case Comparison::Gt: return ">";
    case Comparison::Ge: return ">=";
    }
    return "?";
}

std::string bond_escrow_name(std::string_view bond)
{
    return std::string(bond) + ".bond-escrow";
}

std::string stablecoin_escrow_name(std::string_view bond)
{
    return std::string(bond) + ".stablecoin-escrow";
}

} // namespace bondsim::cli
