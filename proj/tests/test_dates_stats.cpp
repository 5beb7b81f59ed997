#include <doctest.h>

#include <cmath>

#include "icapm/dates.hpp"
#include "icapm/error.hpp"
#include "icapm/stats.hpp"

using namespace icapm;

TEST_CASE("year-month parse and format round trip") {
    YearMonth d = YearMonth::parse("1990-01");
    CHECK(d.year == 1990);
    CHECK(d.month == 1);
    CHECK(d.str() == "1990-01");
    CHECK(YearMonth::parse("2003-12").next() == YearMonth{2004, 1});
    CHECK(YearMonth{2004, 1}.prev() == YearMonth{2003, 12});
    CHECK(YearMonth{1990, 6}.index() - YearMonth{1989, 12}.index() == 6);

    CHECK_THROWS_AS(YearMonth::parse("1990-13"), Error);
    CHECK_THROWS_AS(YearMonth::parse("1990-00"), Error);
    CHECK_THROWS_AS(YearMonth::parse("199001"), Error);
    CHECK_THROWS_AS(YearMonth::parse("1990-1"), Error);
    CHECK_THROWS_AS(YearMonth::parse("abcd-ef"), Error);
}

TEST_CASE("chi-square tail against closed forms") {
    // df = 1: survival(x) = erfc(sqrt(x/2)); df = 2: exp(-x/2);
    // df = 4: (1 + x/2) exp(-x/2). All independent of the gamma code path.
    for (double x : {0.01, 0.1, 0.5, 1.0, 2.0, 3.8415, 5.0, 10.0, 25.0, 60.0}) {
        CHECK(stats::chi2_survival(x, 1.0) ==
              doctest::Approx(std::erfc(std::sqrt(x / 2.0))).epsilon(1e-12));
        CHECK(stats::chi2_survival(x, 2.0) ==
              doctest::Approx(std::exp(-x / 2.0)).epsilon(1e-12));
        CHECK(stats::chi2_survival(x, 4.0) ==
              doctest::Approx((1.0 + x / 2.0) * std::exp(-x / 2.0)).epsilon(1e-12));
    }
    // Tabulated 5% quantile of chi-square(1).
    CHECK(std::fabs(stats::chi2_survival(3.841458820694124, 1.0) - 0.05) < 1e-10);
    CHECK(stats::chi2_survival(0.0, 3.0) == 1.0);
    CHECK(stats::chi2_survival(-1.0, 3.0) == 1.0);
}

TEST_CASE("regularized gamma complements") {
    for (double a : {0.5, 1.0, 2.5, 7.0})
        for (double x : {0.1, 1.0, 3.0, 12.0})
            CHECK(stats::gamma_p(a, x) + stats::gamma_q(a, x) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("significance stars conventions") {
    CHECK(stats::stars_from_pvalue(0.005) == "*");
    CHECK(stats::stars_from_pvalue(0.03) == "**");
    CHECK(stats::stars_from_pvalue(0.2) == "");
    CHECK(stats::stars_from_zscore(3.0) == "*");
    CHECK(stats::stars_from_zscore(2.0) == "**");
    CHECK(stats::stars_from_zscore(1.0) == "");
}
