#pragma once

#include <string>
#include <vector>

#include "icapm/dates.hpp"
#include "icapm/optimizer.hpp"

namespace icapm {

/// Serializes an estimation result (schema_version 1) with everything the
/// `test` and `premia` subcommands need downstream: model layout, estimates,
/// sandwich covariance, filtered paths, fitted price paths and the lagged
/// instrument rows.
std::string result_to_json(const opt::EstimationResult& result,
                           const std::vector<YearMonth>& dates,
                           const Eigen::MatrixXd& instruments,
                           const std::string& config_echo);

/// The subset read back from a result file.
struct LoadedResult {
    ModelSpec spec;
    Eigen::VectorXd psi;
    Eigen::VectorXd se;
    Eigen::MatrixXd vcov;
    double loglik = 0.0;
    std::vector<YearMonth> dates;
    std::vector<Eigen::MatrixXd> h;
    Eigen::MatrixXd mu, eps;
    Eigen::VectorXd delta_market;
    Eigen::MatrixXd delta_currency;
    Eigen::MatrixXd instruments;
};

LoadedResult result_from_json(const std::string& text);
LoadedResult load_result(const std::string& path);

}  // namespace icapm
