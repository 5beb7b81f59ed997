#pragma once

// Output helpers for the command-line tool: text tables, delimited exports,
// JSON reports and the run manifest.

#include <json.hpp>
#include <string>
#include <vector>

#include "icapm/data.hpp"
#include "icapm/inference.hpp"
#include "icapm/json_io.hpp"
#include "icapm/optimizer.hpp"
#include "icapm/premia.hpp"
#include "icapm/simulate.hpp"

namespace icapm::cli {

using ordered_json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "0.1.0";

/// Shortest round-trip decimal text for a double (what every CSV uses).
std::string num(double v);

/// FNV-1a 64-bit digest of a file's bytes, hex-encoded.
std::string file_digest(const std::string& path);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

/// Every run writes out/manifest.json: command, inputs with digests, config
/// echo, seed and tool version. The timestamp lives only here.
void write_manifest(const std::string& out_dir, const std::string& command,
                    const std::vector<std::string>& input_paths,
                    const std::vector<std::string>& outputs, const std::string& config_echo,
                    std::uint64_t seed, bool has_seed);

struct DescribeReport {
    std::string text;
    ordered_json json;
};

/// Table-shaped diagnostic battery over every series of a raw table:
/// moments and normality/autocorrelation tests, correlations,
/// autocorrelations of levels and squares, and (when a market column is
/// named) cross-correlations of squares against it.
DescribeReport describe_report(const std::vector<std::string>& names,
                               const std::vector<std::vector<double>>& columns,
                               const std::string& market_name);

std::string estimate_text(const opt::EstimationResult& result);
std::string trace_csv(const opt::EstimationResult& result);
std::string filtered_h_csv(const opt::EstimationResult& result,
                           const std::vector<YearMonth>& dates);

std::string battery_text(const std::vector<inference::BatteryRow>& rows);
ordered_json battery_json(const std::vector<inference::BatteryRow>& rows);

struct PremiaOutputs {
    std::string long_csv;      // date, series, component, value
    std::string prices_csv;    // market price with trend/cycle, currency prices
    std::string summary_text;  // annualized subperiod means with errors
    ordered_json summary_json;
};

PremiaOutputs premia_outputs(const LoadedResult& result, const premia::Decomposition& d,
                             const std::vector<YearMonth>& breaks, bool hac, double hp_lambda);

std::string mc_text(const sim::McReport& report);
ordered_json mc_json(const sim::McReport& report);

}  // namespace icapm::cli
