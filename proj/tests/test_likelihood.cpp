#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "icapm/error.hpp"
#include "icapm/likelihood.hpp"
#include "icapm/rng.hpp"
#include "support.hpp"

using namespace icapm;
using test_support::dataset_from;
using test_support::spec311;
using test_support::zero_params;

namespace {

// Degenerate model that pins eps_t = r_t and H_t = H0: zero prices, zero
// recursion loadings.
ModelSpec fixed_spec(int n_series) {
    ModelSpec s;
    s.variant = Variant::integrated;
    s.price_form = PriceForm::linear;
    s.n_assets = std::max(0, n_series - 1);
    s.n_currencies = 0;
    s.n_instruments = 1;
    return s;
}

Parameters fixed_params(const ModelSpec& s) {
    Parameters p;
    p.kappa_market = Eigen::VectorXd::Zero(1);
    p.kappa_currency.resize(0, 1);
    p.a = Eigen::VectorXd::Zero(s.n_series());
    p.b = Eigen::VectorXd::Zero(s.n_series());
    return p;
}

}  // namespace

TEST_CASE("gaussian log-likelihood analytic values") {
    SUBCASE("standard normal at the mode") {
        ModelSpec s = fixed_spec(1);
        Eigen::MatrixXd r = Eigen::MatrixXd::Zero(1, 1);
        Eigen::MatrixXd z = Eigen::MatrixXd::Ones(1, 1);
        AlignedDataset d = dataset_from(r, z, 0, 0);
        Eigen::MatrixXd h0 = Eigen::MatrixXd::Identity(1, 1);
        likelihood::Loglik ll = likelihood::loglik(s, fixed_params(s), d, &h0);
        CHECK(ll.total == doctest::Approx(-0.918938533204672).epsilon(1e-9));
    }
    SUBCASE("standard normal one sigma out") {
        ModelSpec s = fixed_spec(1);
        Eigen::MatrixXd r = Eigen::MatrixXd::Ones(1, 1);
        Eigen::MatrixXd z = Eigen::MatrixXd::Ones(1, 1);
        AlignedDataset d = dataset_from(r, z, 0, 0);
        Eigen::MatrixXd h0 = Eigen::MatrixXd::Identity(1, 1);
        likelihood::Loglik ll = likelihood::loglik(s, fixed_params(s), d, &h0);
        CHECK(ll.total == doctest::Approx(-1.418938533204672).epsilon(1e-9));
    }
    SUBCASE("bivariate identity covariance") {
        ModelSpec s = fixed_spec(2);
        Eigen::MatrixXd r = Eigen::MatrixXd::Ones(1, 2);
        Eigen::MatrixXd z = Eigen::MatrixXd::Ones(1, 1);
        AlignedDataset d = dataset_from(r, z, 1, 0);
        Eigen::MatrixXd h0 = Eigen::MatrixXd::Identity(2, 2);
        likelihood::Loglik ll = likelihood::loglik(s, fixed_params(s), d, &h0);
        CHECK(ll.total == doctest::Approx(-2.837877066409345).epsilon(1e-9));
    }
}

TEST_CASE("contributions sum to the total and survive reordering") {
    ModelSpec spec = spec311();
    sim::SimulationConfig config = test_support::dgp_config(spec, 200, 4);
    AlignedDataset data = test_support::simulated_dataset(config);
    Parameters p = test_support::dgp_params(spec);

    likelihood::Loglik ll = likelihood::loglik(spec, p, data);
    double direct = 0.0;
    for (double c : ll.contributions) direct += c;
    CHECK(std::fabs(direct - ll.total) < 1e-9);

    std::vector<double> shuffled = ll.contributions;
    std::mt19937 gen(7);
    std::shuffle(shuffled.begin(), shuffled.end(), gen);
    double resum = 0.0;
    for (double c : shuffled) resum += c;
    CHECK(std::fabs(resum - ll.total) < 1e-9);
}

TEST_CASE("scores of the scalar gaussian location model match the analytic oracle") {
    Rng rng(14);
    std::vector<double> x(40);
    for (auto& v : x) v = 2.0 + rng.gaussian();

    likelihood::ContributionFn fn = [&](const Eigen::VectorXd& psi) {
        std::vector<double> c(x.size());
        for (size_t t = 0; t < x.size(); ++t) {
            double d = x[t] - psi(0);
            c[t] = -0.5 * std::log(2.0 * 3.14159265358979323846) - 0.5 * d * d;
        }
        return c;
    };
    Eigen::VectorXd mu = Eigen::VectorXd::Constant(1, 1.7);
    Eigen::MatrixXd s = likelihood::per_observation_scores(fn, mu);
    for (size_t t = 0; t < x.size(); ++t)
        CHECK(s(static_cast<int>(t), 0) == doctest::Approx(x[t] - 1.7).epsilon(1e-8));

    // At the optimum (sample mean) the column sum vanishes.
    double xbar = 0.0;
    for (double v : x) xbar += v;
    xbar /= static_cast<double>(x.size());
    Eigen::MatrixXd s_opt =
        likelihood::per_observation_scores(fn, Eigen::VectorXd::Constant(1, xbar));
    CHECK(std::fabs(s_opt.col(0).sum()) < 1e-4);
}

TEST_CASE("stacking the sample doubles the total score") {
    Rng rng(15);
    std::vector<double> x(30);
    for (auto& v : x) v = rng.gaussian();
    auto make_fn = [](const std::vector<double>& sample) {
        return [sample](const Eigen::VectorXd& psi) {
            std::vector<double> c(sample.size());
            for (size_t t = 0; t < sample.size(); ++t) {
                double d = sample[t] - psi(0);
                c[t] = -0.5 * d * d;
            }
            return c;
        };
    };
    std::vector<double> x2 = x;
    x2.insert(x2.end(), x.begin(), x.end());
    Eigen::VectorXd at = Eigen::VectorXd::Constant(1, 0.3);
    double g1 = likelihood::per_observation_scores(make_fn(x), at).col(0).sum();
    double g2 = likelihood::per_observation_scores(make_fn(x2), at).col(0).sum();
    CHECK(g2 == doctest::Approx(2.0 * g1).epsilon(1e-10));
}

TEST_CASE("score column sums equal the finite-difference gradient of the total") {
    ModelSpec spec = spec311();
    sim::SimulationConfig config = test_support::dgp_config(spec, 150, 6);
    AlignedDataset data = test_support::simulated_dataset(config);
    Eigen::VectorXd psi = test_support::dgp_params(spec).flatten(spec);

    Eigen::MatrixXd s = likelihood::per_observation_scores(spec, psi, data);
    Eigen::VectorXd column_sums = s.colwise().sum().transpose();
    for (int i = 0; i < psi.size(); ++i) {
        double h = 1e-5 * std::max(1.0, std::fabs(psi(i)));
        Eigen::VectorXd up = psi, down = psi;
        up(i) += h;
        down(i) -= h;
        double g = (likelihood::loglik(spec, Parameters::unflatten(spec, up), data).total -
                    likelihood::loglik(spec, Parameters::unflatten(spec, down), data).total) /
                   (2.0 * h);
        CHECK(column_sums(i) == doctest::Approx(g).epsilon(1e-6));
    }
}

TEST_CASE("average score at the truth is centered in simulation") {
    ModelSpec spec = spec311();
    Eigen::VectorXd psi_true = test_support::dgp_params(spec).flatten(spec);
    const int reps = 24;
    const int t_obs = 300;
    Eigen::MatrixXd mean_scores(reps, psi_true.size());
    for (int rep = 0; rep < reps; ++rep) {
        sim::SimulationConfig config = test_support::dgp_config(spec, t_obs, 100 + rep);
        AlignedDataset data = test_support::simulated_dataset(config);
        Eigen::MatrixXd s = likelihood::per_observation_scores(spec, psi_true, data);
        mean_scores.row(rep) = s.colwise().sum() / static_cast<double>(t_obs);
    }
    for (int i = 0; i < psi_true.size(); ++i) {
        double mean = mean_scores.col(i).mean();
        double sd = std::sqrt((mean_scores.col(i).array() - mean).square().sum() / (reps - 1));
        double se = sd / std::sqrt(static_cast<double>(reps));
        CHECK(std::fabs(mean) < 3.0 * se + 1e-12);
    }
}

TEST_CASE("sandwich covariance") {
    SUBCASE("information equality collapses to the inverse") {
        Eigen::MatrixXd a(2, 2);
        a << 2.0, 0.3, 0.3, 1.0;
        Eigen::MatrixXd v = likelihood::robust_covariance(a, a, 50);
        Eigen::MatrixXd expect = a.inverse() / 50.0;
        CHECK((v - expect).cwiseAbs().maxCoeff() < 1e-12);
    }
    SUBCASE("scalar direct arithmetic") {
        Eigen::MatrixXd a = Eigen::MatrixXd::Constant(1, 1, 2.0);
        Eigen::MatrixXd b = Eigen::MatrixXd::Constant(1, 1, 8.0);
        CHECK(likelihood::robust_covariance(a, b, 1)(0, 0) == doctest::Approx(2.0));
    }
    SUBCASE("singular curvature is an error") {
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2, 2);
        Eigen::MatrixXd b = Eigen::MatrixXd::Identity(2, 2);
        CHECK_THROWS_WITH_AS(likelihood::robust_covariance(a, b, 10),
                             doctest::Contains("singular"), Error);
    }
}

TEST_CASE("perturbation failures name the parameter") {
    likelihood::ContributionFn fn = [](const Eigen::VectorXd& psi) {
        if (psi(0) > 1.0) throw_numeric("E_TEST", "out of bounds");
        return std::vector<double>{psi(0)};
    };
    std::vector<std::string> names = {"kappa_mkt[const]"};
    CHECK_THROWS_WITH_AS(
        likelihood::per_observation_scores(fn, Eigen::VectorXd::Ones(1), 1e-5, &names),
        doctest::Contains("kappa_mkt[const]"), Error);
}
