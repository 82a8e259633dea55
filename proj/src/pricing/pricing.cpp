#include "bondsim/pricing/pricing.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace bondsim::pricing {

double price(double coupon, double rate, double face, unsigned periods)
{
    if (!(rate > -1.0)) {
        throw std::invalid_argument("discount rate must exceed -1");
    }
    const double T = periods;
    if (rate == 0.0) {
        return coupon * T + face;
    }
    // expm1/log1p keep the annuity factor accurate for rates close to zero.
    const double annuity = -std::expm1(-T * std::log1p(rate)) / rate;
    return coupon * annuity + face / std::pow(1.0 + rate, T);
}

double rating_multiplier(int rating)
{
    if (rating < 1 || rating > 5) {
        throw std::invalid_argument("rating " + std::to_string(rating) + " outside 1..5");
    }
    static constexpr std::array<double, 5> pow11{1, 11, 121, 1331, 14641};
    static constexpr std::array<double, 5> pow10{1, 10, 100, 1000, 10000};
    const auto k = static_cast<std::size_t>(5 - rating);
    return pow11[k] / pow10[k];
}

double rated_price(double coupon_base, int rating, double rate, double face, unsigned periods)
{
    return price(coupon_base * rating_multiplier(rating), rate, face, periods);
}

std::vector<CurvePoint> curve(const CurveSpec& spec)
{
    if (spec.values.empty()) {
        throw std::invalid_argument("curve needs at least one sweep value");
    }
    std::vector<CurvePoint> out;
    out.reserve(spec.values.size() * 5);
    for (double v : spec.values) {
        double coupon_rate = spec.coupon_rate;
        unsigned periods = spec.periods;
        if (spec.sweep == Sweep::Periods) {
            if (!(v >= 0) || v != std::floor(v) || v > 1e6) {
                throw std::invalid_argument("period count must be a non-negative integer");
            }
            periods = static_cast<unsigned>(v);
        } else {
            coupon_rate = v;
        }
        for (int rating = 1; rating <= 5; ++rating) {
            out.push_back({rating, v,
                           rated_price(coupon_rate * spec.face, rating, spec.rate, spec.face,
                                       periods)});
        }
    }
    return out;
}

std::string format_double(double v)
{
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc{}) {
        throw std::runtime_error("cannot format double");
    }
    return std::string(buf.data(), end);
}

std::string to_csv(const std::vector<CurvePoint>& points)
{
    std::string out = "rating,sweep_value,price\n";
    for (const auto& p : points) {
        out += std::to_string(p.rating);
        out += ',';
        out += format_double(p.value);
        out += ',';
        out += format_double(p.price);
        out += '\n';
    }
    return out;
}

namespace {

template <class T>
T parse_field(std::string_view field)
{
    T value{};
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        throw std::invalid_argument("bad CSV field '" + std::string(field) + "'");
    }
    return value;
}

} // namespace

std::vector<CurvePoint> parse_csv(std::string_view csv)
{
    constexpr std::string_view header = "rating,sweep_value,price\n";
    if (csv.substr(0, header.size()) != header) {
        throw std::invalid_argument("missing CSV header");
    }
    csv.remove_prefix(header.size());
    std::vector<CurvePoint> out;
    while (!csv.empty()) {
        const auto eol = csv.find('\n');
        if (eol == std::string_view::npos) {
            throw std::invalid_argument("unterminated CSV row");
        }
        const std::string_view line = csv.substr(0, eol);
        csv.remove_prefix(eol + 1);
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 == std::string_view::npos ? c1 : c1 + 1);
        if (c1 == std::string_view::npos || c2 == std::string_view::npos) {
            throw std::invalid_argument("CSV row needs three fields");
        }
        out.push_back({parse_field<int>(line.substr(0, c1)),
                       parse_field<double>(line.substr(c1 + 1, c2 - c1 - 1)),
                       parse_field<double>(line.substr(c2 + 1))});
    }
    return out;
}

} // namespace bondsim::pricing
