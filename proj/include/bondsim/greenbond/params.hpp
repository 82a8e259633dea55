#pragma once

#include "bondsim/ledger/types.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace bondsim::greenbond {

// Bond amounts are held in base units with six decimals.
inline constexpr std::uint64_t kBondUnit = 1'000'000;
inline constexpr std::uint32_t kBondDecimals = 6;
inline constexpr std::uint64_t kMaxRating = 5;
inline constexpr std::uint64_t kRatingsPerKey = 8;

struct BondParams {
    std::uint64_t total_bonds = 0;
    std::uint64_t coupon_rounds = 0;
    Timestamp start_buy = 0;
    Timestamp end_buy = 0;
    Timestamp maturity = 0;
    std::uint64_t bond_cost = 0;   // stablecoin base units per whole bond
    std::uint64_t coupon_base = 0; // per whole bond per round, at rating 5
    std::uint64_t principal = 0;   // per whole bond
    Address issuer;
    Address green_verifier;
    Address financial_regulator;
    AssetId stablecoin{};

    std::uint64_t supply() const { return total_bonds * kBondUnit; }

    // Throws std::invalid_argument naming the first bad field.
    void validate() const;
};

// floor(a * b / c) without intermediate overflow. c must be non-zero and the
// quotient must fit in 64 bits.
std::uint64_t mul_div(std::uint64_t a, std::uint64_t b, std::uint64_t c);

// floor(base * 11^(5-r) / 10^(5-r)). Rating 0 (unrated) pays the base coupon.
// Throws std::invalid_argument for ratings above 5.
std::uint64_t effective_coupon(std::uint64_t coupon_base, std::uint64_t rating);

// Latest coupon round that has become claimable at `now` (0 before end_buy).
std::uint64_t coupon_round_at(const BondParams& p, Timestamp now);

// Rating slot a verifier submission at `now` writes to: 0 before start_buy,
// round i+1 while round i+1 is running, nothing during the sale window or
// after maturity.
std::optional<std::uint64_t> rating_slot_at(const BondParams& p, Timestamp now);

// Number of 8-byte global values needed to hold ratings 0..coupon_rounds.
std::uint64_t rating_keys(std::uint64_t coupon_rounds);

// Packed rating layout: slot i lives in key to_string(i / 8) at byte i % 8.
std::string rating_key(std::uint64_t slot);
Bytes with_rating(std::optional<Bytes> packed, std::uint64_t slot, std::uint8_t rating);
std::uint8_t rating_in(const std::optional<Bytes>& packed, std::uint64_t slot);

// Money display: base units to dollars, rounded half-up to cents.
std::string format_dollars(std::uint64_t base_units);

namespace keys {
inline const Bytes kCouponsPaid = "CouponsPaid";
inline const Bytes kReserve = "Reserve";
inline const Bytes kFrozen = "Frozen";
inline const Bytes kTrade = "Trade";
} // namespace keys

namespace actions {
inline const Bytes kFreezeAll = "freeze_all";
inline const Bytes kFreeze = "freeze";
inline const Bytes kBuy = "buy";
inline const Bytes kSetTrade = "set_trade";
inline const Bytes kTrade = "trade";
inline const Bytes kCoupon = "coupon";
inline const Bytes kSell = "sell";
inline const Bytes kDefault = "default";
inline const Bytes kRate = "rate";
inline const Bytes kNotDefaulted = "not_defaulted";
inline const Bytes kClaimDefault = "claim_default";
inline const Bytes kDefaulted = "defaulted";
} // namespace actions

} // namespace bondsim::greenbond
