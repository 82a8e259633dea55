#pragma once

#include <string>
#include <string_view>
#include <vector>

// Present-value bond pricing. Plain doubles: this is analytics and never
// feeds ledger balances.
namespace bondsim::pricing {

// Price of a bond paying coupon C per period for T periods plus face F at
// maturity, discounted at rate r per period. r == 0 gives C*T + F.
// Throws std::invalid_argument if r <= -1.
double price(double coupon, double rate, double face, unsigned periods);

// 1.1^(5 - rating), built from exact integer powers. Throws for ratings
// outside 1..5.
double rating_multiplier(int rating);

// Price when every coupon carries the penalty for `rating`.
double rated_price(double coupon_base, int rating, double rate, double face, unsigned periods);

enum class Sweep { Periods, CouponRate };

struct CurveSpec {
    Sweep sweep = Sweep::Periods;
    std::vector<double> values;
    double face = 100.0;
    double rate = 0.05;
    double coupon_rate = 0.05; // fixed when sweeping periods
    unsigned periods = 10;     // fixed when sweeping the coupon rate
};

struct CurvePoint {
    int rating = 0;
    double value = 0;
    double price = 0;

    friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

// One row per (sweep value, rating 1..5), sweep values in the given order.
// Throws std::invalid_argument for an empty sweep or non-integral periods.
std::vector<CurvePoint> curve(const CurveSpec& spec);

// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

// "rating,sweep_value,price" header then one LF-terminated row per point.
std::string to_csv(const std::vector<CurvePoint>& points);
// Inverse of to_csv. Throws std::invalid_argument on malformed input.
std::vector<CurvePoint> parse_csv(std::string_view csv);

} // namespace bondsim::pricing
