#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace airdrop {

/// Exact decimal with 18 fractional digits on a 128-bit integer.
/// Token amounts and fee differentials stay exact; conversion to double
/// happens only at the boundary to the numeric modules.
class Decimal {
public:
    using rep = __int128;
    static constexpr int kFracDigits = 18;
    static rep scale();

    Decimal() = default;

    static Decimal parse(std::string_view text); // throws Error(DomainError) on malformed input
    static Decimal from_raw(rep raw);
    static Decimal from_int(std::int64_t whole);
    /// whole + micro/1e6, exact (micro in [0, 1e6)).
    static Decimal from_micro(std::int64_t micro_units);

    rep raw() const { return raw_; }
    bool is_zero() const { return raw_ == 0; }
    bool is_negative() const { return raw_ < 0; }
    bool is_positive() const { return raw_ > 0; }

    Decimal operator+(Decimal other) const;
    Decimal operator-(Decimal other) const;
    Decimal operator-() const { return from_raw(-raw_); }

    std::strong_ordering operator<=>(const Decimal& other) const = default;

    double to_double() const;
    std::string to_string() const; // canonical: no trailing fractional zeros

private:
    rep raw_ = 0;
};

} // namespace airdrop
