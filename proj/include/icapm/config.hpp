#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "icapm/data.hpp"
#include "icapm/model.hpp"
#include "icapm/optimizer.hpp"
#include "icapm/simulate.hpp"

namespace icapm {

/// Parsed run configuration. The file format is INI-style sections of
/// key = value lines; '#' starts a comment; unknown sections or keys are
/// hard errors. The raw text is kept for provenance echoes.
struct RunConfig {
    std::string text;  // verbatim file content

    // [model]
    Variant variant = Variant::integrated;
    PriceForm price_form = PriceForm::exponential;

    // [roles]
    std::map<std::string, SeriesRole> roles;

    // [instruments]
    bool add_constant = true;

    // [optimizer]
    opt::EstimateOptions estimate;

    // [premia]
    std::vector<YearMonth> breaks = {YearMonth{1989, 12}};
    bool hac = false;
    double hp_lambda = 14400.0;

    // [simulate]
    struct Simulate {
        int t_obs = 480;
        std::uint64_t seed = 12345;
        int n_assets = 1;
        int n_currencies = 1;
        int n_instruments = 2;
        sim::InstrumentProcess process = sim::InstrumentProcess::gaussian_ar1;
        double ar_rho = 0.9;
        double ar_scale = 0.1;
        YearMonth start = {1990, 1};
        std::vector<std::string> names;  // optional series names
        std::optional<Eigen::VectorXd> kappa_market;
        std::vector<Eigen::VectorXd> kappa_currency;  // index k-1 from kappa_<k>
        std::optional<Eigen::VectorXd> domestic_price;
        std::optional<Eigen::VectorXd> alpha;
        std::optional<Eigen::VectorXd> phi;
        std::optional<Eigen::VectorXd> a;
        std::optional<Eigen::VectorXd> b;
        std::optional<Eigen::VectorXd> h0_rowmajor;  // N*N values
    } simulate;

    // [mc]
    int mc_reps = 100;
    int mc_threads = 0;

    /// Builds the simulation inputs declared in [model]/[simulate].
    sim::SimulationConfig simulation_config() const;
};

RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::string& path);

}  // namespace icapm
