#include "bondsim/greenbond/params.hpp"

#include "bondsim/programs/state.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace bondsim::greenbond {

void BondParams::validate() const
{
    auto fail = [](const std::string& what) { throw std::invalid_argument("bond params: " + what); };
    if (total_bonds == 0) {
        fail("total_bonds must be positive");
    }
    if (total_bonds > std::numeric_limits<std::uint64_t>::max() / kBondUnit) {
        fail("total_bonds too large");
    }
    if (!(start_buy < end_buy && end_buy < maturity)) {
        fail("require start_buy < end_buy < maturity");
    }
    if (principal == 0) {
        fail("principal must be positive");
    }
    if (coupon_rounds > 0 &&
        static_cast<std::uint64_t>(maturity - end_buy) < coupon_rounds) {
        fail("coupon period shorter than one second");
    }
    if (rating_keys(coupon_rounds) > kMaxGlobalPairs) {
        fail("too many coupon rounds for the ratings table");
    }
    if (issuer.empty() || green_verifier.empty() || financial_regulator.empty()) {
        fail("issuer, verifier and regulator must be set");
    }
}

std::uint64_t mul_div(std::uint64_t a, std::uint64_t b, std::uint64_t c)
{
    if (c == 0) {
        throw std::invalid_argument("mul_div by zero");
    }
    __extension__ using u128 = unsigned __int128;
    const u128 q = static_cast<u128>(a) * b / c;
    if (q > std::numeric_limits<std::uint64_t>::max()) {
        throw std::overflow_error("mul_div result exceeds 64 bits");
    }
    return static_cast<std::uint64_t>(q);
}

std::uint64_t effective_coupon(std::uint64_t coupon_base, std::uint64_t rating)
{
    if (rating > kMaxRating) {
        throw std::invalid_argument("rating " + std::to_string(rating) + " out of range");
    }
    if (rating == 0) {
        rating = kMaxRating;
    }
    static constexpr std::array<std::uint64_t, 5> pow11{1, 11, 121, 1'331, 14'641};
    static constexpr std::array<std::uint64_t, 5> pow10{1, 10, 100, 1'000, 10'000};
    const auto k = kMaxRating - rating;
    return mul_div(coupon_base, pow11[k], pow10[k]);
}

std::uint64_t coupon_round_at(const BondParams& p, Timestamp now)
{
    if (p.coupon_rounds == 0 || now < p.end_buy) {
        return 0;
    }
    const auto period = static_cast<std::uint64_t>(p.maturity - p.end_buy) / p.coupon_rounds;
    if (period == 0) {
        return p.coupon_rounds;
    }
    const auto elapsed = static_cast<std::uint64_t>(now - p.end_buy);
    return std::min(p.coupon_rounds, elapsed / period);
}

std::optional<std::uint64_t> rating_slot_at(const BondParams& p, Timestamp now)
{
    if (now < p.start_buy) {
        return 0;
    }
    if (p.coupon_rounds == 0 || now < p.end_buy || now >= p.maturity) {
        return std::nullopt;
    }
    return std::min(p.coupon_rounds, coupon_round_at(p, now) + 1);
}

std::uint64_t rating_keys(std::uint64_t coupon_rounds)
{
    return (coupon_rounds + kRatingsPerKey) / kRatingsPerKey;
}

std::string rating_key(std::uint64_t slot)
{
    return std::to_string(slot / kRatingsPerKey);
}

Bytes with_rating(std::optional<Bytes> packed, std::uint64_t slot, std::uint8_t rating)
{
    Bytes value = packed.value_or(Bytes(kRatingsPerKey, '\0'));
    value.resize(kRatingsPerKey, '\0');
    value[slot % kRatingsPerKey] = static_cast<char>(rating);
    return value;
}

std::uint8_t rating_in(const std::optional<Bytes>& packed, std::uint64_t slot)
{
    const auto pos = slot % kRatingsPerKey;
    if (!packed || packed->size() <= pos) {
        return 0;
    }
    return static_cast<std::uint8_t>((*packed)[pos]);
}

std::string format_dollars(std::uint64_t base_units)
{
    const std::uint64_t cents = (base_units + 5'000) / 10'000;
    char buf[48];
    std::snprintf(buf, sizeof buf, "$%llu.%02llu", static_cast<unsigned long long>(cents / 100),
                  static_cast<unsigned long long>(cents % 100));
    return buf;
}

} // namespace bondsim::greenbond
