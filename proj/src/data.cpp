#include "icapm/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "icapm/error.hpp"

namespace icapm {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_row(const std::string& line, char delim) {
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, delim)) out.push_back(trim(cell));
    if (!line.empty() && line.back() == delim) out.push_back("");
    return out;
}

double parse_number(const std::string& cell, const std::string& where) {
    if (cell.empty())
        throw_input("E_DATA", "missing cell at " + where);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc() || ptr != cell.data() + cell.size())
        throw_input("E_DATA", "unparseable numeric '" + cell + "' at " + where);
    if (!std::isfinite(v))
        throw_input("E_DATA", "non-finite value at " + where);
    return v;
}

std::string format_number(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

struct RawTable {
    std::vector<YearMonth> dates;
    std::vector<std::string> names;           // data columns (date excluded)
    std::vector<std::vector<double>> columns; // one vector per data column
};

RawTable read_table(std::istream& source) {
    RawTable t;
    std::string line;
    if (!std::getline(source, line))
        throw_input("E_DATA", "empty input: missing header row");
    auto header = split_row(line, ',');
    if (header.size() < 2)
        throw_input("E_DATA", "header must have a date column and at least one series");
    t.names.assign(header.begin() + 1, header.end());
    for (const auto& n : t.names)
        if (n.empty()) throw_input("E_DATA", "empty column name in header");
    for (size_t i = 0; i < t.names.size(); ++i)
        for (size_t j = i + 1; j < t.names.size(); ++j)
            if (t.names[i] == t.names[j])
                throw_input("E_DATA", "duplicate column name '" + t.names[i] + "'");
    t.columns.resize(t.names.size());

    size_t row = 1;
    while (std::getline(source, line)) {
        ++row;
        if (trim(line).empty()) continue;
        auto cells = split_row(line, ',');
        if (cells.size() != header.size())
            throw_input("E_DATA", "row " + std::to_string(row) + " has " +
                                      std::to_string(cells.size()) + " cells, expected " +
                                      std::to_string(header.size()));
        YearMonth d = YearMonth::parse(cells[0]);
        if (!t.dates.empty()) {
            if (d == t.dates.back())
                throw_input("E_DATA", "duplicate date " + d.str());
            if (d < t.dates.back())
                throw_input("E_DATA", "dates not increasing at " + d.str());
            if (t.dates.back().next() != d)
                throw_input("E_DATA", "non-consecutive dates: " + t.dates.back().str() +
                                          " followed by " + d.str());
        }
        t.dates.push_back(d);
        for (size_t c = 0; c < t.names.size(); ++c)
            t.columns[c].push_back(
                parse_number(cells[c + 1], t.names[c] + " " + d.str()));
    }
    if (t.dates.empty()) throw_input("E_DATA", "no data rows");
    return t;
}

}  // namespace

SeriesRole role_from_string(const std::string& s) {
    if (s == "asset") return SeriesRole::asset;
    if (s == "currency") return SeriesRole::currency;
    if (s == "market") return SeriesRole::market;
    throw_input("E_CONFIG", "unknown series role '" + s + "' (asset|currency|market)");
}

std::string role_to_string(SeriesRole r) {
    switch (r) {
        case SeriesRole::asset: return "asset";
        case SeriesRole::currency: return "currency";
        case SeriesRole::market: return "market";
    }
    return "?";
}

int ReturnsPanel::n_assets() const {
    return static_cast<int>(std::count_if(series.begin(), series.end(), [](const Series& s) {
        return s.role == SeriesRole::asset;
    }));
}

int ReturnsPanel::n_currencies() const {
    return static_cast<int>(std::count_if(series.begin(), series.end(), [](const Series& s) {
        return s.role == SeriesRole::currency;
    }));
}

int ReturnsPanel::market_index() const {
    for (int i = 0; i < n_series(); ++i)
        if (series[i].role == SeriesRole::market) return i;
    return -1;
}

void ReturnsPanel::validate() const {
    if (dates.empty()) throw_input("E_DATA", "panel has no observations");
    for (size_t i = 1; i < dates.size(); ++i)
        if (dates[i - 1].next() != dates[i])
            throw_input("E_DATA", "non-consecutive dates: " + dates[i - 1].str() +
                                      " followed by " + dates[i].str());
    int markets = 0;
    for (const auto& s : series) {
        if (s.values.size() != dates.size())
            throw_input("E_DATA", "series '" + s.name + "' length " +
                                      std::to_string(s.values.size()) + " != " +
                                      std::to_string(dates.size()) + " dates");
        for (double v : s.values)
            if (!std::isfinite(v))
                throw_input("E_DATA", "missing or non-finite value in series '" + s.name + "'");
        if (s.role == SeriesRole::market) ++markets;
    }
    if (markets != 1)
        throw_input("E_DATA", "exactly one market series required, found " +
                                  std::to_string(markets));
    if (n_assets() < 1) throw_input("E_DATA", "at least one asset series required");
    if (series.back().role != SeriesRole::market)
        throw_input("E_DATA", "series not in canonical order (market must be last)");
    for (int i = 0; i < n_assets(); ++i)
        if (series[i].role != SeriesRole::asset)
            throw_input("E_DATA", "series not in canonical order (assets first)");
}

void InstrumentPanel::validate() const {
    if (dates.empty()) throw_input("E_DATA", "instrument panel has no observations");
    for (size_t i = 1; i < dates.size(); ++i)
        if (dates[i - 1].next() != dates[i])
            throw_input("E_DATA", "non-consecutive dates: " + dates[i - 1].str() +
                                      " followed by " + dates[i].str());
    if (variables.empty()) throw_input("E_DATA", "instrument panel has no variables");
    for (const auto& v : variables) {
        if (v.values.size() != dates.size())
            throw_input("E_DATA", "instrument '" + v.name + "' length mismatch");
        for (double x : v.values)
            if (!std::isfinite(x))
                throw_input("E_DATA", "missing or non-finite value in instrument '" + v.name + "'");
    }
    for (double x : variables.front().values)
        if (x != 1.0)
            throw_input("E_DATA", "first instrument must be the constant column of ones");
}

ReturnsPanel load_panel(std::istream& source, const std::map<std::string, SeriesRole>& roles) {
    RawTable t = read_table(source);
    for (const auto& n : t.names)
        if (!roles.count(n))
            throw_input("E_CONFIG", "series '" + n + "' has no role assigned");

    ReturnsPanel panel;
    panel.dates = t.dates;
    // Canonical order: assets, currencies, market.
    for (SeriesRole want : {SeriesRole::asset, SeriesRole::currency, SeriesRole::market})
        for (size_t c = 0; c < t.names.size(); ++c)
            if (roles.at(t.names[c]) == want)
                panel.series.push_back({t.names[c], want, t.columns[c]});
    panel.validate();
    return panel;
}

void serialize_panel(const ReturnsPanel& panel, std::ostream& out) {
    out << "date";
    for (const auto& s : panel.series) out << ',' << s.name;
    out << '\n';
    for (int t = 0; t < panel.n_obs(); ++t) {
        out << panel.dates[t].str();
        for (const auto& s : panel.series) out << ',' << format_number(s.values[t]);
        out << '\n';
    }
}

InstrumentPanel load_instruments(std::istream& source, bool add_constant) {
    RawTable t = read_table(source);
    InstrumentPanel panel;
    panel.dates = t.dates;
    // Only prepend when the file does not already lead with a ones column,
    // so round-tripping a serialized instrument panel never duplicates it.
    bool has_constant =
        std::all_of(t.columns[0].begin(), t.columns[0].end(), [](double v) { return v == 1.0; });
    if (add_constant && !has_constant)
        panel.variables.push_back({"const", std::vector<double>(t.dates.size(), 1.0)});
    for (size_t c = 0; c < t.names.size(); ++c)
        panel.variables.push_back({t.names[c], t.columns[c]});
    panel.validate();
    return panel;
}

void serialize_instruments(const InstrumentPanel& panel, std::ostream& out) {
    out << "date";
    for (const auto& v : panel.variables) out << ',' << v.name;
    out << '\n';
    for (int t = 0; t < panel.n_obs(); ++t) {
        out << panel.dates[t].str();
        for (const auto& v : panel.variables) out << ',' << format_number(v.values[t]);
        out << '\n';
    }
}

std::vector<double> excess_returns(const std::vector<double>& total,
                                   const std::vector<double>& riskfree) {
    if (total.size() != riskfree.size())
        throw_input("E_DATA", "excess_returns: length mismatch (" +
                                  std::to_string(total.size()) + " vs " +
                                  std::to_string(riskfree.size()) + ")");
    std::vector<double> out(total.size());
    for (size_t i = 0; i < total.size(); ++i) out[i] = total[i] - riskfree[i];
    return out;
}

std::vector<double> real_fx_returns(const RealFXInputs& inputs) {
    size_t n = inputs.nominal_rate.size();
    if (inputs.cpi_local.size() != n || inputs.cpi_reference.size() != n)
        throw_input("E_DATA", "real_fx_returns: input lengths differ");
    if (n < 2) throw_input("E_DATA", "real_fx_returns: need at least 2 observations");
    for (size_t i = 0; i < n; ++i)
        if (inputs.nominal_rate[i] <= 0.0 || inputs.cpi_local[i] <= 0.0 ||
            inputs.cpi_reference[i] <= 0.0)
            throw_input("E_DATA", "real_fx_returns: non-positive level at index " +
                                      std::to_string(i));
    std::vector<double> out(n - 1);
    auto log_real = [&](size_t i) {
        return std::log(inputs.nominal_rate[i] * inputs.cpi_local[i] / inputs.cpi_reference[i]);
    };
    for (size_t i = 1; i < n; ++i) out[i - 1] = log_real(i) - log_real(i - 1);
    return out;
}

int AlignedDataset::n_assets() const {
    return static_cast<int>(std::count(roles.begin(), roles.end(), SeriesRole::asset));
}

int AlignedDataset::n_currencies() const {
    return static_cast<int>(std::count(roles.begin(), roles.end(), SeriesRole::currency));
}

AlignedDataset align(const ReturnsPanel& returns, const InstrumentPanel& instruments) {
    returns.validate();
    instruments.validate();

    // Return date t is usable when the instruments cover t-1.
    YearMonth first_usable = std::max(returns.dates.front(), instruments.dates.front().next());
    YearMonth last_usable = std::min(returns.dates.back(), instruments.dates.back().next());
    if (last_usable < first_usable)
        throw_input("E_DATA", "empty intersection between return and instrument dates");

    int r_off = first_usable.index() - returns.dates.front().index();
    int z_off = first_usable.prev().index() - instruments.dates.front().index();
    int t_obs = last_usable.index() - first_usable.index() + 1;

    AlignedDataset d;
    d.dates.assign(returns.dates.begin() + r_off, returns.dates.begin() + r_off + t_obs);
    int n = returns.n_series();
    int j = instruments.n_variables();
    d.returns.resize(t_obs, n);
    d.instruments.resize(t_obs, j);
    for (int c = 0; c < n; ++c) {
        d.series_names.push_back(returns.series[c].name);
        d.roles.push_back(returns.series[c].role);
        for (int t = 0; t < t_obs; ++t) d.returns(t, c) = returns.series[c].values[r_off + t];
    }
    for (int c = 0; c < j; ++c) {
        d.instrument_names.push_back(instruments.variables[c].name);
        for (int t = 0; t < t_obs; ++t)
            d.instruments(t, c) = instruments.variables[c].values[z_off + t];
    }

    // Covariance target: 1/T second moment of demeaned returns.
    Eigen::RowVectorXd mean = d.returns.colwise().mean();
    Eigen::MatrixXd centered = d.returns.rowwise() - mean;
    d.h0 = (centered.transpose() * centered) / static_cast<double>(t_obs);
    return d;
}

}  // namespace icapm
