#include <doctest.h>

#include "icapm/config.hpp"
#include "icapm/error.hpp"
#include "icapm/json_io.hpp"
#include "icapm/optimizer.hpp"
#include "support.hpp"

using namespace icapm;

TEST_CASE("run config parsing") {
    std::string text = R"(# demo configuration
[model]
variant = segmented
price_form = linear

[roles]
US = asset
FX_FR = currency
WORLD = market

[instruments]
add_constant = true

[optimizer]
nm_max_evals = 4000
bhhh_tol_grad = 1e-6
two_step_h0 = false

[premia]
breaks = 1989-12 1996-06
hac = true
hp_lambda = 129600

[simulate]
t = 240
seed = 42
n_assets = 1
n_currencies = 1
n_instruments = 2
kappa_w = 0.5 0.1
kappa_1 = 0.3 -0.2
a = 0.3 0.3 0.3
b = 0.6 0.6 0.6
delta_d = 0.5

[mc]
reps = 25
threads = 2
)";
    RunConfig cfg = parse_run_config(text);
    CHECK(cfg.variant == Variant::segmented);
    CHECK(cfg.price_form == PriceForm::linear);
    CHECK(cfg.roles.at("US") == SeriesRole::asset);
    CHECK(cfg.roles.at("FX_FR") == SeriesRole::currency);
    CHECK(cfg.estimate.nm_max_evals == 4000);
    CHECK(cfg.estimate.bhhh_tol_grad == doctest::Approx(1e-6));
    CHECK(cfg.breaks.size() == 2);
    CHECK(cfg.breaks[1] == YearMonth{1996, 6});
    CHECK(cfg.hac);
    CHECK(cfg.hp_lambda == doctest::Approx(129600.0));
    CHECK(cfg.mc_reps == 25);

    sim::SimulationConfig sc = cfg.simulation_config();
    CHECK(sc.spec.variant == Variant::segmented);
    CHECK(sc.t_obs == 240);
    CHECK(sc.seed == 42);
    CHECK(sc.params.kappa_market(1) == doctest::Approx(0.1));
    CHECK(sc.params.kappa_currency(0, 1) == doctest::Approx(-0.2));
    CHECK(sc.params.domestic_price(0) == doctest::Approx(0.5));
    CHECK(sc.h0.rows() == 3);
}

TEST_CASE("unknown keys and sections are hard errors") {
    CHECK_THROWS_WITH_AS(parse_run_config("[model]\nvariannt = integrated\n"),
                         doctest::Contains("unknown key"), Error);
    CHECK_THROWS_WITH_AS(parse_run_config("[mdoel]\nvariant = integrated\n"),
                         doctest::Contains("unknown config section"), Error);
    CHECK_THROWS_WITH_AS(parse_run_config("variant = integrated\n"),
                         doctest::Contains("outside any section"), Error);
    CHECK_THROWS_WITH_AS(parse_run_config("[model]\nvariant integrated\n"),
                         doctest::Contains("key = value"), Error);
    CHECK_THROWS_WITH_AS(parse_run_config("[model]\nvariant = sideways\n"),
                         doctest::Contains("unknown variant"), Error);
}

TEST_CASE("estimation result JSON round trip") {
    ModelSpec spec = test_support::spec311();
    spec.series_names = {"A1", "FX1", "M"};
    spec.instrument_names = {"const", "z1"};
    sim::SimulationConfig config = test_support::dgp_config(spec, 260, 77);
    config.spec = spec;
    AlignedDataset data = test_support::simulated_dataset(config);

    opt::EstimateOptions options;
    options.nm_max_evals = 1500;
    opt::EstimationResult est = opt::estimate(spec, data, options);

    std::string json = result_to_json(est, data.dates, data.instruments, "echo me");
    LoadedResult back = result_from_json(json);
    CHECK(back.spec.variant == spec.variant);
    CHECK(back.spec.n_assets == spec.n_assets);
    CHECK(back.spec.series_names == spec.series_names);
    CHECK(back.psi.size() == est.psi.size());
    for (int i = 0; i < est.psi.size(); ++i) {
        CHECK(back.psi(i) == est.psi(i));  // lossless numeric round trip
        CHECK(back.se(i) == est.se(i));
    }
    CHECK(back.loglik == est.loglik);
    CHECK((back.vcov - est.vcov).cwiseAbs().maxCoeff() == 0.0);
    REQUIRE(back.h.size() == est.h.size());
    CHECK((back.h[5] - est.h[5]).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.mu - est.mu).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.delta_market - est.delta_market).cwiseAbs().maxCoeff() == 0.0);
    CHECK(back.dates.size() == data.dates.size());
    CHECK(back.dates.front() == data.dates.front());

    CHECK_THROWS_AS(result_from_json("{not json"), Error);
    CHECK_THROWS_AS(result_from_json("{\"schema_version\": 1}"), Error);
}
