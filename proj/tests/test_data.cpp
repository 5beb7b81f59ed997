#include <doctest.h>

#include <cmath>
#include <sstream>

#include "icapm/data.hpp"
#include "icapm/error.hpp"
#include "icapm/rng.hpp"

using namespace icapm;

namespace {

const std::map<std::string, SeriesRole> kRoles = {{"US", SeriesRole::asset},
                                                  {"WORLD", SeriesRole::market}};

ReturnsPanel panel_from(const std::string& csv,
                        const std::map<std::string, SeriesRole>& roles = kRoles) {
    std::istringstream in(csv);
    return load_panel(in, roles);
}

}  // namespace

TEST_CASE("load_panel passes values through unchanged") {
    ReturnsPanel p = panel_from(
        "date,US,WORLD\n1990-01,0.01,0.02\n1990-02,-0.004,0.001\n1990-03,0,0.0056\n");
    CHECK(p.n_series() == 2);
    CHECK(p.n_obs() == 3);
    CHECK(p.n_assets() == 1);
    CHECK(p.market_index() == 1);
    CHECK(p.series[0].name == "US");
    CHECK(p.series[0].values[0] == 0.01);
    CHECK(p.series[1].values[2] == 0.0056);
}

TEST_CASE("load_panel rejects malformed panels") {
    CHECK_THROWS_WITH_AS(
        panel_from("date,US,WORLD\n1990-01,0.01,0.02\n1990-03,0.01,0.02\n"),
        doctest::Contains("non-consecutive dates"), Error);
    CHECK_THROWS_WITH_AS(
        panel_from("date,US,WORLD\n1990-01,0.01,0.02\n1990-01,0.01,0.02\n"),
        doctest::Contains("duplicate date"), Error);
    CHECK_THROWS_WITH_AS(
        panel_from("date,US,WORLD\n1990-01,0.01,0.02\n",
                   {{"US", SeriesRole::market}, {"WORLD", SeriesRole::market}}),
        doctest::Contains("exactly one market"), Error);
    CHECK_THROWS_WITH_AS(
        panel_from("date,US,WORLD\n1990-01,0.01,0.02\n",
                   {{"US", SeriesRole::asset}, {"WORLD", SeriesRole::asset}}),
        doctest::Contains("exactly one market"), Error);
    CHECK_THROWS_WITH_AS(panel_from("date,US,WORLD\n1990-01,,0.02\n"),
                         doctest::Contains("missing cell"), Error);
    CHECK_THROWS_WITH_AS(panel_from("date,US,WORLD\n1990-01,abc,0.02\n"),
                         doctest::Contains("unparseable numeric"), Error);
    CHECK_THROWS_WITH_AS(panel_from("date,US,SA\n1990-01,0.01,0.02\n"),
                         doctest::Contains("no role assigned"), Error);
}

TEST_CASE("panel serialize/load round trip is the identity") {
    Rng rng(77);
    std::string csv = "date,US,FX,WORLD\n";
    YearMonth d{1985, 7};
    for (int t = 0; t < 40; ++t, d = d.next()) {
        std::ostringstream row;
        row << d.str() << ',' << rng.gaussian() * 0.05 << ',' << rng.gaussian() * 0.01 << ','
            << rng.gaussian() * 0.04;
        csv += row.str() + "\n";
    }
    std::map<std::string, SeriesRole> roles = {{"US", SeriesRole::asset},
                                               {"FX", SeriesRole::currency},
                                               {"WORLD", SeriesRole::market}};
    ReturnsPanel p = panel_from(csv, roles);
    std::ostringstream out;
    serialize_panel(p, out);
    std::istringstream in(out.str());
    ReturnsPanel q = load_panel(in, roles);
    REQUIRE(q.n_series() == p.n_series());
    REQUIRE(q.n_obs() == p.n_obs());
    for (int s = 0; s < p.n_series(); ++s) {
        CHECK(q.series[s].name == p.series[s].name);
        for (int t = 0; t < p.n_obs(); ++t)
            CHECK(q.series[s].values[t] == p.series[s].values[t]);  // bit-exact
    }
}

TEST_CASE("excess returns arithmetic and linearity") {
    CHECK(excess_returns({0.010}, {0.004})[0] == doctest::Approx(0.006).epsilon(1e-15));
    std::vector<double> total = {0.01, -0.02, 0.03};
    std::vector<double> zero(3, 0.0);
    CHECK(excess_returns(total, zero) == total);
    auto self = excess_returns(total, total);
    for (double v : self) CHECK(v == 0.0);
    CHECK_THROWS_WITH_AS(excess_returns({0.1}, {0.1, 0.2}),
                         doctest::Contains("length mismatch"), Error);

    // Linearity: excess(a + b, rf) = excess(a, rf) + b.
    std::vector<double> rf = {0.001, 0.002, 0.003};
    std::vector<double> b = {0.5, -0.25, 0.125};
    std::vector<double> apb(3);
    for (int i = 0; i < 3; ++i) apb[i] = total[i] + b[i];
    auto lhs = excess_returns(apb, rf);
    auto rhs = excess_returns(total, rf);
    for (int i = 0; i < 3; ++i) CHECK(lhs[i] == doctest::Approx(rhs[i] + b[i]).epsilon(1e-15));
}

TEST_CASE("real exchange-rate returns") {
    RealFXInputs flat{{2.0, 2.0, 2.0}, {100.0, 100.0, 100.0}, {50.0, 50.0, 50.0}};
    for (double v : real_fx_returns(flat)) CHECK(v == doctest::Approx(0.0));

    // Both price indices grow 2%: the real rate is unchanged.
    RealFXInputs ppp{{2.0, 2.0}, {100.0, 102.0}, {50.0, 51.0}};
    CHECK(real_fx_returns(ppp)[0] == doctest::Approx(0.0).epsilon(1e-15));

    RealFXInputs doubling{{1.0, 2.0}, {100.0, 100.0}, {50.0, 50.0}};
    CHECK(real_fx_returns(doubling)[0] == doctest::Approx(std::log(2.0)).epsilon(1e-12));

    RealFXInputs bad{{1.0, -2.0}, {100.0, 100.0}, {50.0, 50.0}};
    CHECK_THROWS_WITH_AS(real_fx_returns(bad), doctest::Contains("non-positive level"), Error);
    RealFXInputs one{{1.0}, {100.0}, {50.0}};
    CHECK_THROWS_AS(real_fx_returns(one), Error);

    // Invariance under a common positive rescaling of both CPI indices.
    Rng rng(5);
    RealFXInputs base;
    for (int i = 0; i < 24; ++i) {
        base.nominal_rate.push_back(std::exp(0.1 * rng.gaussian()));
        base.cpi_local.push_back(100.0 * std::exp(0.02 * rng.gaussian()));
        base.cpi_reference.push_back(80.0 * std::exp(0.02 * rng.gaussian()));
    }
    RealFXInputs scaled = base;
    for (auto& v : scaled.cpi_local) v *= 7.5;
    for (auto& v : scaled.cpi_reference) v *= 7.5;
    auto r0 = real_fx_returns(base);
    auto r1 = real_fx_returns(scaled);
    for (size_t i = 0; i < r0.size(); ++i) CHECK(r1[i] == doctest::Approx(r0[i]).epsilon(1e-12));
}

namespace {

ReturnsPanel monthly_returns(YearMonth start, int t_obs) {
    ReturnsPanel p;
    YearMonth d = start;
    for (int t = 0; t < t_obs; ++t, d = d.next()) p.dates.push_back(d);
    std::vector<double> v(t_obs, 0.01);
    p.series.push_back({"US", SeriesRole::asset, v});
    p.series.push_back({"WORLD", SeriesRole::market, v});
    return p;
}

InstrumentPanel monthly_instruments(YearMonth start, int t_obs) {
    InstrumentPanel z;
    YearMonth d = start;
    for (int t = 0; t < t_obs; ++t, d = d.next()) z.dates.push_back(d);
    z.variables.push_back({"const", std::vector<double>(t_obs, 1.0)});
    std::vector<double> x(t_obs);
    for (int t = 0; t < t_obs; ++t) x[t] = 0.1 * t;
    z.variables.push_back({"z1", x});
    return z;
}

}  // namespace

TEST_CASE("alignment lags instruments by one month") {
    SUBCASE("exact lag cover") {
        AlignedDataset d = align(monthly_returns({1990, 1}, 12), monthly_instruments({1989, 12}, 12));
        CHECK(d.n_obs() == 12);
        CHECK(d.dates.front() == YearMonth{1990, 1});
        CHECK(d.dates.back() == YearMonth{1990, 12});
    }
    SUBCASE("late instruments trim the front") {
        AlignedDataset d = align(monthly_returns({1990, 1}, 12), monthly_instruments({1990, 6}, 12));
        CHECK(d.n_obs() == 6);
        CHECK(d.dates.front() == YearMonth{1990, 7});
        CHECK(d.dates.back() == YearMonth{1990, 12});
        // Instrument row t is the observation dated one month before return t.
        CHECK(d.instruments(0, 1) == doctest::Approx(0.0));  // 1990-06 value
        CHECK(d.instruments(5, 1) == doctest::Approx(0.5));  // 1990-11 value
    }
    SUBCASE("disjoint ranges") {
        CHECK_THROWS_WITH_AS(
            align(monthly_returns({1990, 1}, 6), monthly_instruments({2000, 1}, 6)),
            doctest::Contains("empty intersection"), Error);
    }
}
