#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "icapm/dates.hpp"

namespace icapm {

enum class SeriesRole { asset, currency, market };

SeriesRole role_from_string(const std::string& s);
std::string role_to_string(SeriesRole r);

/// Balanced monthly panel of decimal returns. Construction validates and
/// canonicalizes series order: assets first, currencies next, market last
/// (file order preserved within each group).
struct ReturnsPanel {
    struct Series {
        std::string name;
        SeriesRole role;
        std::vector<double> values;
    };

    std::vector<YearMonth> dates;  // strictly increasing, consecutive months
    std::vector<Series> series;    // canonical order

    int n_obs() const { return static_cast<int>(dates.size()); }
    int n_series() const { return static_cast<int>(series.size()); }
    int n_assets() const;
    int n_currencies() const;
    int market_index() const;  // always n_series() - 1 after validation

    /// Checks all invariants; throws an input error describing the first
    /// violation. Called by the factory functions below.
    void validate() const;
};

/// Lagged information variables. The first variable is always the constant
/// column of ones (prepended at load when add_constant is set).
struct InstrumentPanel {
    struct Variable {
        std::string name;
        std::vector<double> values;
    };

    std::vector<YearMonth> dates;
    std::vector<Variable> variables;

    int n_obs() const { return static_cast<int>(dates.size()); }
    int n_variables() const { return static_cast<int>(variables.size()); }

    void validate() const;
};

/// Level inputs for a real exchange-rate series. nominal_rate is the
/// reference-currency price of one unit of local currency, so that
/// real rate = nominal_rate * cpi_local / cpi_reference and the log change
/// of the real rate approximates local inflation in reference currency.
struct RealFXInputs {
    std::vector<double> nominal_rate;
    std::vector<double> cpi_local;
    std::vector<double> cpi_reference;
};

/// Date-matched estimation sample: row t of `instruments` holds the
/// information set dated one month before return row t.
struct AlignedDataset {
    std::vector<YearMonth> dates;            // return dates, length T
    Eigen::MatrixXd returns;                 // T x N, canonical series order
    Eigen::MatrixXd instruments;             // T x J, lagged one month
    std::vector<std::string> series_names;   // N
    std::vector<SeriesRole> roles;           // N
    std::vector<std::string> instrument_names;  // J
    Eigen::MatrixXd h0;                      // sample covariance of demeaned returns

    int n_obs() const { return static_cast<int>(returns.rows()); }
    int n_series() const { return static_cast<int>(returns.cols()); }
    int n_assets() const;
    int n_currencies() const;
};

/// Parses a delimited panel (header row; column 1 "date" as YYYY-MM; the
/// remaining columns decimal returns). Every data column must appear in the
/// role map. Values pass through unchanged.
ReturnsPanel load_panel(std::istream& source, const std::map<std::string, SeriesRole>& roles);

/// Writes the panel back in the same format using shortest round-trip
/// number formatting, so load_panel(serialize(p)) == p.
void serialize_panel(const ReturnsPanel& panel, std::ostream& out);

/// Parses an instrument table (same layout). With add_constant, a leading
/// "const" column of ones is prepended; otherwise the first column must
/// already be all ones.
InstrumentPanel load_instruments(std::istream& source, bool add_constant);

void serialize_instruments(const InstrumentPanel& panel, std::ostream& out);

/// Elementwise total - riskfree.
std::vector<double> excess_returns(const std::vector<double>& total,
                                   const std::vector<double>& riskfree);

/// Log changes of the real exchange rate built from the level inputs;
/// output has length(input) - 1.
std::vector<double> real_fx_returns(const RealFXInputs& inputs);

/// Trims both panels to the dates where the return at t has an instrument
/// observation at t-1, and precomputes the covariance-targeting matrix.
AlignedDataset align(const ReturnsPanel& returns, const InstrumentPanel& instruments);

}  // namespace icapm
