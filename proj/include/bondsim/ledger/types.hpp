#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace bondsim {

// Byte strings (app args, notes, state values) are carried in std::string.
using Bytes = std::string;

// Balances are integral microAlgos; 1 Algo = 1,000,000 microAlgos.
using MicroAlgos = std::uint64_t;

// Ledger clock, in seconds.
using Timestamp = std::int64_t;

inline constexpr MicroAlgos kMicroAlgosPerAlgo = 1'000'000;
inline constexpr MicroAlgos kMinFee = 1'000;
inline constexpr std::size_t kMaxGroupSize = 16;
inline constexpr std::size_t kMaxNoteBytes = 1'024;

enum class AssetId : std::uint64_t {};
enum class AppId : std::uint64_t {};

constexpr std::uint64_t raw(AssetId id) { return static_cast<std::uint64_t>(id); }
constexpr std::uint64_t raw(AppId id) { return static_cast<std::uint64_t>(id); }

class Address {
public:
    Address() = default;
    explicit Address(std::string value) : value_(std::move(value)) {}

    const std::string& str() const { return value_; }
    bool empty() const { return value_.empty(); }

    friend auto operator<=>(const Address&, const Address&) = default;
    friend bool operator==(const Address&, const Address&) = default;

private:
    std::string value_;
};

// Thrown by direct ledger operations whose preconditions do not hold.
class LedgerError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace bondsim

template <>
struct std::hash<bondsim::Address> {
    std::size_t operator()(const bondsim::Address& a) const noexcept
    {
        return std::hash<std::string>{}(a.str());
    }
};
