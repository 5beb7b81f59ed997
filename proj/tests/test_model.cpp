#include <doctest.h>

#include <cmath>

#include "icapm/error.hpp"
#include "icapm/model.hpp"
#include "icapm/rng.hpp"

using namespace icapm;

namespace {

ModelSpec spec_311(Variant v = Variant::integrated,
                   PriceForm f = PriceForm::exponential) {
    ModelSpec s;
    s.variant = v;
    s.price_form = f;
    s.n_assets = 1;
    s.n_currencies = 1;
    s.n_instruments = 2;
    return s;
}

}  // namespace

TEST_CASE("market price forms") {
    Eigen::VectorXd z(2);
    z << 1.0, 0.7;
    Eigen::VectorXd kappa(2);
    kappa << std::log(2.0), 0.0;
    CHECK(market_price(kappa, z, PriceForm::exponential) == doctest::Approx(2.0).epsilon(1e-14));

    kappa << 0.0, 0.0;
    CHECK(market_price(kappa, z, PriceForm::linear) == 0.0);

    Eigen::VectorXd z2(2);
    z2 << 1.0, 0.5;
    kappa << 0.1, 0.2;
    CHECK(market_price(kappa, z2, PriceForm::exponential) ==
          doctest::Approx(std::exp(0.2)).epsilon(1e-12));
    CHECK(market_price(kappa, z2, PriceForm::exponential) ==
          doctest::Approx(1.22140).epsilon(1e-5));

    // Clamp at +-30 keeps the exponential finite and flags the event.
    bool clamped = false;
    Eigen::VectorXd huge(2);
    huge << 100.0, 0.0;
    CHECK(market_price(huge, z, PriceForm::exponential, &clamped) ==
          doctest::Approx(std::exp(30.0)));
    CHECK(clamped);

    Eigen::VectorXd wrong(3);
    wrong.setZero();
    CHECK_THROWS_AS(market_price(wrong, z, PriceForm::linear), Error);
}

TEST_CASE("exponential market price is positive for any draw") {
    Rng rng(17);
    for (int i = 0; i < 200; ++i) {
        Eigen::VectorXd kappa(3), z(3);
        z << 1.0, rng.gaussian(), rng.gaussian();
        kappa << 3.0 * rng.gaussian(), 3.0 * rng.gaussian(), 3.0 * rng.gaussian();
        CHECK(market_price(kappa, z, PriceForm::exponential) > 0.0);
    }
}

TEST_CASE("currency prices are linear and unconstrained") {
    Eigen::VectorXd z(2);
    z << 1.0, 0.5;
    Eigen::MatrixXd kappa(2, 2);
    kappa.setZero();
    Eigen::VectorXd d = currency_prices(kappa, z);
    CHECK(d(0) == 0.0);
    CHECK(d(1) == 0.0);

    kappa.row(0) << 1.0, -2.0;  // 1 - 2*0.5 = 0
    kappa.row(1) << 0.4, 0.0;   // constant-only price
    d = currency_prices(kappa, z);
    CHECK(d(0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(d(1) == doctest::Approx(0.4));
}

TEST_CASE("residual domestic risk") {
    Eigen::MatrixXd h(2, 2);
    h << 4.0, 2.0, 2.0, 2.0;
    Eigen::VectorXd q = residual_risk(h, 1);
    CHECK(q(0) == doctest::Approx(2.0).epsilon(1e-14));  // 4 - 4/2
    CHECK(q(1) == 0.0);                                  // exact, by construction

    Eigen::MatrixXd diag = Eigen::MatrixXd::Zero(3, 3);
    diag.diagonal() << 0.5, 0.7, 0.9;
    q = residual_risk(diag, 2);
    CHECK(q(0) == doctest::Approx(0.5));
    CHECK(q(1) == doctest::Approx(0.7));
    CHECK(q(2) == 0.0);

    Eigen::MatrixXd bad = Eigen::MatrixXd::Zero(2, 2);
    CHECK_THROWS_WITH_AS(residual_risk(bad, 1), doctest::Contains("market variance"), Error);
}

TEST_CASE("conditional mean of the pricing system") {
    ModelSpec spec = spec_311();
    Eigen::VectorXd z(2);
    z << 1.0, 0.3;
    Eigen::MatrixXd h(3, 3);
    h << 0.010, 0.002, 0.004,
         0.002, 0.008, 0.001,
         0.004, 0.001, 0.006;

    SUBCASE("zero prices give zero mean under the integrated variant") {
        ModelSpec lin = spec_311(Variant::integrated, PriceForm::linear);
        Parameters p;
        p.kappa_market = Eigen::VectorXd::Zero(2);
        p.kappa_currency = Eigen::MatrixXd::Zero(1, 2);
        p.a = Eigen::VectorXd::Zero(3);
        p.b = Eigen::VectorXd::Zero(3);
        Eigen::VectorXd mu = conditional_mean(lin, p, h, z);
        for (int i = 0; i < 3; ++i) CHECK(mu(i) == 0.0);
    }

    SUBCASE("market-only scalar system") {
        ModelSpec tiny;
        tiny.variant = Variant::integrated;
        tiny.price_form = PriceForm::linear;
        tiny.n_assets = 0;
        tiny.n_currencies = 0;
        tiny.n_instruments = 1;
        Parameters p;
        p.kappa_market = Eigen::VectorXd::Constant(1, 2.0);
        p.kappa_currency.resize(0, 1);
        p.a = Eigen::VectorXd::Zero(1);
        p.b = Eigen::VectorXd::Zero(1);
        Eigen::MatrixXd hm = Eigen::MatrixXd::Constant(1, 1, 0.01);
        Eigen::VectorXd one = Eigen::VectorXd::Ones(1);
        Eigen::VectorXd mu = conditional_mean(tiny, p, hm, one);
        CHECK(mu(0) == doctest::Approx(0.02).epsilon(1e-14));  // delta_m * h_mm
    }

    SUBCASE("segmented with zero domestic price nests the integrated mean") {
        Parameters p;
        p.kappa_market = (Eigen::VectorXd(2) << 0.5, -0.2).finished();
        p.kappa_currency = (Eigen::MatrixXd(1, 2) << 1.5, 0.7).finished();
        p.a = Eigen::VectorXd::Zero(3);
        p.b = Eigen::VectorXd::Zero(3);
        Eigen::VectorXd mu_int = conditional_mean(spec_311(Variant::integrated), p, h, z);
        Parameters pseg = p;
        pseg.domestic_price = Eigen::VectorXd::Zero(1);
        Eigen::VectorXd mu_seg = conditional_mean(spec_311(Variant::segmented), pseg, h, z);
        for (int i = 0; i < 3; ++i) CHECK(mu_seg(i) == mu_int(i));

        Parameters paug = pseg;
        paug.alpha = Eigen::VectorXd::Zero(1);
        paug.phi = Eigen::VectorXd::Zero(1);
        Eigen::VectorXd mu_aug = conditional_mean(spec_311(Variant::augmented), paug, h, z);
        for (int i = 0; i < 3; ++i) CHECK(mu_aug(i) == mu_int(i));
    }

    SUBCASE("linear in each price of risk holding H fixed") {
        ModelSpec lin = spec_311(Variant::integrated, PriceForm::linear);
        Parameters p;
        p.kappa_market = (Eigen::VectorXd(2) << 1.0, 0.0).finished();
        p.kappa_currency = Eigen::MatrixXd::Zero(1, 2);
        p.a = Eigen::VectorXd::Zero(3);
        p.b = Eigen::VectorXd::Zero(3);
        Eigen::VectorXd mu1 = conditional_mean(lin, p, h, z);
        p.kappa_market(0) = 2.0;
        Eigen::VectorXd mu2 = conditional_mean(lin, p, h, z);
        for (int i = 0; i < 3; ++i) CHECK(mu2(i) == doctest::Approx(2.0 * mu1(i)).epsilon(1e-13));
    }
}

TEST_CASE("parameter vector flattening round trip and fixed order") {
    ModelSpec spec;
    spec.variant = Variant::augmented;
    spec.price_form = PriceForm::exponential;
    spec.n_assets = 2;
    spec.n_currencies = 2;
    spec.n_instruments = 3;
    const int n = spec.n_series();
    CHECK(n == 5);
    // kappa_m (3) + kappa_k (6) + delta_d (2) + alpha (2) + phi (2) + a (5) + b (5).
    CHECK(spec.param_count() == 25);

    Rng rng(31);
    Eigen::VectorXd psi(spec.param_count());
    for (int i = 0; i < psi.size(); ++i) psi(i) = rng.gaussian();
    Parameters p = Parameters::unflatten(spec, psi);
    CHECK(p.kappa_market(0) == psi(0));
    CHECK(p.kappa_currency(0, 0) == psi(3));
    CHECK(p.kappa_currency(1, 2) == psi(8));
    CHECK(p.domestic_price(1) == psi(10));
    CHECK(p.alpha(0) == psi(11));
    CHECK(p.phi(1) == psi(14));
    CHECK(p.a(0) == psi(15));
    CHECK(p.b(4) == psi(24));
    Eigen::VectorXd back = p.flatten(spec);
    for (int i = 0; i < psi.size(); ++i) CHECK(back(i) == psi(i));

    auto names = spec.param_names();
    REQUIRE(static_cast<int>(names.size()) == spec.param_count());
    CHECK(names[0] == "kappa_mkt[const]");
    CHECK(names[15] == "a[asset1]");

    CHECK_THROWS_AS(Parameters::unflatten(spec, Eigen::VectorXd::Zero(3)), Error);
}
