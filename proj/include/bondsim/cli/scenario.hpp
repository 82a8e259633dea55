#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bondsim::cli {

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& message);
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

struct Step {
    std::size_t line = 0;
    std::string action;
    std::vector<std::string> args;
    std::map<std::string, std::string, std::less<>> options;

    bool has(std::string_view key) const { return options.find(key) != options.end(); }
    const std::string& option(std::string_view key) const;
};

struct Scenario {
    std::vector<Step> steps;
};

// Parses and validates a scenario: known actions, argument counts and number
// formats, names defined before use, non-decreasing advance-time.
// Throws ParseError.
Scenario parse_scenario(std::string_view text);

// Number forms shared by scenarios and the command line. Each throws
// std::invalid_argument on malformed input.
//   parse_uint:   decimal or 0x-prefixed hex
//   parse_stable: base units, or "$D[.dddddd]" dollars at 6 decimals
//   parse_bonds:  whole bonds with up to 6 decimals, returned in base units
std::uint64_t parse_uint(std::string_view text);
std::uint64_t parse_stable(std::string_view text);
std::uint64_t parse_bonds(std::string_view text);
std::int64_t parse_time(std::string_view text);

enum class Comparison { Eq, Ne, Lt, Le, Gt, Ge };
Comparison parse_comparison(std::string_view text);
std::string_view to_string(Comparison c);

template <class T>
bool compare(const T& lhs, Comparison c, const T& rhs)
{
    switch (c) {
    case Comparison::Eq: return lhs == rhs;
    case Comparison::Ne: return lhs != rhs;
    case Comparison::Lt: return lhs < rhs;
    case Comparison::Le: return lhs <= rhs;
    case Comparison::Gt: return lhs > rhs;
    case Comparison::Ge: return lhs >= rhs;
    }
    return false;
}

// "base.bond-escrow" and "base.stablecoin-escrow": account names bound by an
// issue step.
std::string bond_escrow_name(std::string_view bond);
std::string stablecoin_escrow_name(std::string_view bond);

} // namespace bondsim::cli
