#include "airdrop/decimal.hpp"

#include "airdrop/errors.hpp"

#include <cctype>
#include <cstdlib>

namespace airdrop {

Decimal::rep Decimal::scale() {
    rep s = 1;
    for (int i = 0; i < kFracDigits; ++i) s *= 10;
    return s;
}

Decimal Decimal::from_raw(rep raw) {
    Decimal d;
    d.raw_ = raw;
    return d;
}

Decimal Decimal::from_int(std::int64_t whole) {
    return from_raw(static_cast<rep>(whole) * scale());
}

Decimal Decimal::from_micro(std::int64_t micro_units) {
    rep per_micro = scale() / 1000000;
    return from_raw(static_cast<rep>(micro_units) * per_micro);
}

Decimal Decimal::parse(std::string_view text) {
    if (text.empty()) throw Error(ErrorCode::DomainError, "empty decimal");
    std::size_t i = 0;
    bool negative = false;
    if (text[i] == '+' || text[i] == '-') {
        negative = text[i] == '-';
        ++i;
    }
    rep value = 0;
    std::size_t int_digits = 0;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        value = value * 10 + (text[i] - '0');
        ++int_digits;
        ++i;
        if (int_digits > 20) throw Error(ErrorCode::DomainError, "decimal too large: " + std::string(text));
    }
    if (int_digits == 0) throw Error(ErrorCode::DomainError, "malformed decimal: " + std::string(text));
    value *= scale();
    if (i < text.size() && text[i] == '.') {
        ++i;
        rep frac = 0;
        int frac_digits = 0;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
            if (frac_digits >= kFracDigits)
                throw Error(ErrorCode::DomainError, "more than 18 fractional digits: " + std::string(text));
            frac = frac * 10 + (text[i] - '0');
            ++frac_digits;
            ++i;
        }
        if (frac_digits == 0) throw Error(ErrorCode::DomainError, "malformed decimal: " + std::string(text));
        for (int k = frac_digits; k < kFracDigits; ++k) frac *= 10;
        value += frac;
    }
    if (i != text.size()) throw Error(ErrorCode::DomainError, "malformed decimal: " + std::string(text));
    return from_raw(negative ? -value : value);
}

Decimal Decimal::operator+(Decimal other) const { return from_raw(raw_ + other.raw_); }
Decimal Decimal::operator-(Decimal other) const { return from_raw(raw_ - other.raw_); }

double Decimal::to_double() const {
    return static_cast<double>(static_cast<long double>(raw_) / static_cast<long double>(scale()));
}

std::string Decimal::to_string() const {
    rep v = raw_;
    bool negative = v < 0;
    if (negative) v = -v;
    rep whole = v / scale();
    rep frac = v % scale();

    std::string whole_str;
    if (whole == 0) whole_str = "0";
    while (whole > 0) {
        whole_str.insert(whole_str.begin(), static_cast<char>('0' + static_cast<int>(whole % 10)));
        whole /= 10;
    }
    std::string out = (negative ? "-" : "") + whole_str;
    if (frac != 0) {
        std::string frac_str(kFracDigits, '0');
        for (int k = kFracDigits - 1; k >= 0; --k) {
            frac_str[static_cast<std::size_t>(k)] = static_cast<char>('0' + static_cast<int>(frac % 10));
            frac /= 10;
        }
        while (!frac_str.empty() && frac_str.back() == '0') frac_str.pop_back();
        out += "." + frac_str;
    }
    return out;
}

} // namespace airdrop
