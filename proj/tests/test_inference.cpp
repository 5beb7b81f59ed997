#include <doctest.h>

#include <cmath>

#include "icapm/error.hpp"
#include "icapm/inference.hpp"
#include "icapm/rng.hpp"

using namespace icapm;
using inference::Restriction;

TEST_CASE("wald statistic basics") {
    SUBCASE("satisfied restriction scores zero") {
        Restriction r;
        r.r_matrix = Eigen::MatrixXd::Identity(2, 3);
        r.r_value = (Eigen::VectorXd(2) << 1.0, 2.0).finished();
        r.label = "match";
        Eigen::VectorXd psi(3);
        psi << 1.0, 2.0, 9.0;
        inference::WaldResult w = inference::wald(r, psi, Eigen::MatrixXd::Identity(3, 3));
        CHECK(w.stat == 0.0);
        CHECK(w.p_value == 1.0);
        CHECK(w.df == 2);
    }
    SUBCASE("scalar squared t-statistic") {
        Restriction r;
        r.r_matrix = Eigen::MatrixXd::Identity(1, 1);
        r.label = "zero";
        inference::WaldResult w = inference::wald(r, Eigen::VectorXd::Constant(1, 2.0),
                                                  Eigen::MatrixXd::Identity(1, 1));
        CHECK(w.stat == doctest::Approx(4.0).epsilon(1e-14));
        CHECK(w.df == 1);
        CHECK(w.p_value == doctest::Approx(0.0455).epsilon(1e-3));
        CHECK(w.p_value == doctest::Approx(0.04550026389635842).epsilon(1e-10));
    }
    SUBCASE("duplicated restriction rows are singular") {
        Restriction r;
        r.r_matrix = Eigen::MatrixXd::Zero(2, 3);
        r.r_matrix(0, 1) = 1.0;
        r.r_matrix(1, 1) = 1.0;
        r.label = "dup";
        CHECK_THROWS_WITH_AS(inference::wald(r, Eigen::VectorXd::Ones(3),
                                             Eigen::MatrixXd::Identity(3, 3)),
                             doctest::Contains("singular"), Error);
    }
}

TEST_CASE("wald is invariant to row reparameterization") {
    Rng rng(13);
    const int p = 6, q = 3;
    Eigen::MatrixXd g(p, p);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) g(i, j) = rng.gaussian();
    Eigen::MatrixXd vcov = g * g.transpose() + 0.5 * Eigen::MatrixXd::Identity(p, p);
    Eigen::VectorXd psi(p);
    for (int i = 0; i < p; ++i) psi(i) = rng.gaussian();

    Restriction r;
    r.r_matrix = Eigen::MatrixXd::Zero(q, p);
    r.r_matrix(0, 0) = 1.0;
    r.r_matrix(1, 2) = 1.0;
    r.r_matrix(2, 4) = 2.0;
    r.r_value = (Eigen::VectorXd(q) << 0.1, -0.2, 0.3).finished();
    r.label = "base";
    double base = inference::wald(r, psi, vcov).stat;

    Eigen::MatrixXd m(q, q);
    m << 2.0, 1.0, 0.0,
         0.0, 1.0, -1.0,
         1.0, 0.0, 3.0;
    Restriction rm;
    rm.r_matrix = m * r.r_matrix;
    rm.r_value = m * r.r_value;
    rm.label = "reparameterized";
    CHECK(inference::wald(rm, psi, vcov).stat == doctest::Approx(base).epsilon(1e-8));
}

namespace {

ModelSpec paper_layout(Variant v) {
    // Eight equations: four assets, three currencies, market; five instruments.
    ModelSpec s;
    s.variant = v;
    s.n_assets = 4;
    s.n_currencies = 3;
    s.n_instruments = 5;
    return s;
}

std::vector<int> battery_dfs(const ModelSpec& spec) {
    std::vector<int> dfs;
    for (const auto& r : inference::standard_restrictions(spec))
        dfs.push_back(static_cast<int>(r.r_matrix.rows()));
    return dfs;
}

}  // namespace

TEST_CASE("battery degrees of freedom reproduce the 8-equation layout") {
    SUBCASE("integrated") {
        std::vector<int> expect = {4, 5, 4, 5, 4, 5, 4, 15, 12};
        CHECK(battery_dfs(paper_layout(Variant::integrated)) == expect);
    }
    SUBCASE("segmented adds the domestic joint test") {
        std::vector<int> expect = {4, 5, 4, 5, 4, 5, 4, 15, 12, 4};
        CHECK(battery_dfs(paper_layout(Variant::segmented)) == expect);
    }
    SUBCASE("augmented adds intercept and orthogonality tests") {
        std::vector<int> expect = {4, 5, 4, 5, 4, 5, 4, 15, 12, 4, 4, 4};
        CHECK(battery_dfs(paper_layout(Variant::augmented)) == expect);
    }
}

TEST_CASE("battery runs and skips inapplicable hypotheses") {
    ModelSpec spec = paper_layout(Variant::integrated);
    const int p = spec.param_count();
    Rng rng(19);
    Eigen::VectorXd psi(p);
    for (int i = 0; i < p; ++i) psi(i) = 0.1 * rng.gaussian();
    Eigen::MatrixXd vcov = Eigen::MatrixXd::Identity(p, p) * 0.01;

    auto rows = inference::standard_battery(spec, psi, vcov);
    int ran = 0, skipped = 0;
    for (const auto& row : rows) {
        if (row.skipped) {
            ++skipped;
            CHECK(row.note.find("skipped") != std::string::npos);
        } else {
            ++ran;
            CHECK(row.stat >= 0.0);
            CHECK(row.p_value >= 0.0);
            CHECK(row.p_value <= 1.0);
        }
    }
    CHECK(ran == 9);
    CHECK(skipped == 2);  // domestic and intercept hypotheses do not apply

    // Constant-only instruments leave no constancy hypotheses to test.
    ModelSpec tiny;
    tiny.n_assets = 1;
    tiny.n_currencies = 1;
    tiny.n_instruments = 1;
    auto tiny_rows =
        inference::standard_battery(tiny, Eigen::VectorXd::Zero(tiny.param_count()),
                                    Eigen::MatrixXd::Identity(tiny.param_count(),
                                                              tiny.param_count()));
    bool note_found = false;
    for (const auto& row : tiny_rows)
        if (row.skipped && row.note.find("non-constant instrument") != std::string::npos)
            note_found = true;
    CHECK(note_found);
}
