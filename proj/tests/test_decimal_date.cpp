#include <doctest.h>

#include "airdrop/date.hpp"
#include "airdrop/decimal.hpp"
#include "airdrop/errors.hpp"

using namespace airdrop;

TEST_CASE("decimal parse and canonical printing") {
    CHECK(Decimal::parse("0").to_string() == "0");
    CHECK(Decimal::parse("100").to_string() == "100");
    CHECK(Decimal::parse("99.500000").to_string() == "99.5");
    CHECK(Decimal::parse("-3.25").to_string() == "-3.25");
    CHECK(Decimal::parse("0.000000000000000001").to_string() == "0.000000000000000001");
    CHECK(Decimal::parse("12.3400").raw() == Decimal::parse("12.34").raw());
}

TEST_CASE("decimal rejects malformed input") {
    CHECK_THROWS_AS(Decimal::parse(""), Error);
    CHECK_THROWS_AS(Decimal::parse("abc"), Error);
    CHECK_THROWS_AS(Decimal::parse("1.2.3"), Error);
    CHECK_THROWS_AS(Decimal::parse("1.0000000000000000001"), Error); // 19 fractional digits
}

TEST_CASE("decimal arithmetic is exact") {
    const Decimal sent = Decimal::parse("100");
    const Decimal received = Decimal::parse("99.9");
    CHECK((sent - received).to_string() == "0.1");
    CHECK((received + Decimal::parse("0.1")) == sent);
    CHECK((received - sent).is_negative());
    CHECK(Decimal::from_micro(1500000).to_string() == "1.5");
    CHECK(Decimal::from_int(7).to_string() == "7");
}

TEST_CASE("decimal ordering") {
    CHECK(Decimal::parse("1.5") < Decimal::parse("2"));
    CHECK(Decimal::parse("-1") < Decimal::parse("0"));
}

TEST_CASE("date conversions") {
    CHECK(to_string(date_from_unix(0)) == "1970-01-01");
    CHECK(to_string(date_from_unix(86399)) == "1970-01-01");
    CHECK(to_string(date_from_unix(86400)) == "1970-01-02");
    CHECK(to_string(date_from_unix(-1)) == "1969-12-31");
    CHECK(parse_date("2022-01-15") == Date{2022, 1, 15});
    CHECK_THROWS_AS(parse_date("2022-13-01"), Error);
    CHECK_THROWS_AS(parse_date("20220101"), Error);
}

TEST_CASE("date arithmetic") {
    CHECK(diff_days(Date{2022, 4, 1}, Date{2021, 6, 17}) == 288);
    CHECK(add_days(Date{2021, 6, 17}, 288) == Date{2022, 4, 1});
    CHECK(diff_days(Date{2021, 11, 8}, Date{2021, 6, 17}) == 144); // window midpoint
}
