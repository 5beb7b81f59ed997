// Command-line front end: describe / estimate / test / premia / simulate / mc.
// Exit codes: 0 success, 1 usage or input problem, 2 numerical failure.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "icapm/config.hpp"
#include "icapm/data.hpp"
#include "icapm/error.hpp"
#include "icapm/garch.hpp"
#include "icapm/inference.hpp"
#include "icapm/json_io.hpp"
#include "icapm/optimizer.hpp"
#include "icapm/premia.hpp"
#include "icapm/simulate.hpp"
#include "report.hpp"

namespace fs = std::filesystem;
using namespace icapm;
using icapm::cli::ordered_json;

namespace {

void ensure_out_dir(const std::string& out_dir) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw_input("E_IO", "cannot create output directory '" + out_dir + "'");
}

struct TableFile {
    std::vector<std::string> names;
    std::vector<std::vector<double>> columns;
};

// Raw numeric table (role-free), for `describe`.
TableFile load_table(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw_input("E_IO", "cannot read data file '" + path + "'");
    // Reuse the panel reader by assigning every column a provisional role.
    std::string header;
    std::getline(in, header);
    in.seekg(0);
    TableFile t;
    std::stringstream hs(header);
    std::string cell;
    bool first = true;
    std::map<std::string, SeriesRole> roles;
    while (std::getline(hs, cell, ',')) {
        while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
        if (first) {
            first = false;
            continue;
        }
        roles[cell] = SeriesRole::asset;
    }
    if (roles.empty()) throw_input("E_DATA", "no data columns in '" + path + "'");
    roles.begin()->second = SeriesRole::market;  // satisfies the panel invariant
    ReturnsPanel p = load_panel(in, roles);
    // Restore the header order (the panel reorders by role).
    std::map<std::string, const std::vector<double>*> by_name;
    for (const auto& s : p.series) by_name[s.name] = &s.values;
    std::stringstream hs2(header);
    first = true;
    while (std::getline(hs2, cell, ',')) {
        while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
        if (first) {
            first = false;
            continue;
        }
        t.names.push_back(cell);
        t.columns.push_back(*by_name.at(cell));
    }
    return t;
}

ReturnsPanel load_panel_file(const std::string& path,
                             const std::map<std::string, SeriesRole>& roles) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw_input("E_IO", "cannot read data file '" + path + "'");
    return load_panel(in, roles);
}

InstrumentPanel load_instruments_file(const std::string& path, bool add_constant) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw_input("E_IO", "cannot read instruments file '" + path + "'");
    return load_instruments(in, add_constant);
}

ModelSpec spec_from(const RunConfig& config, const AlignedDataset& data) {
    ModelSpec spec;
    spec.variant = config.variant;
    spec.price_form = config.price_form;
    spec.n_assets = data.n_assets();
    spec.n_currencies = data.n_currencies();
    spec.n_instruments = static_cast<int>(data.instruments.cols());
    spec.series_names = data.series_names;
    spec.instrument_names = data.instrument_names;
    spec.validate();
    return spec;
}

void check_roles_cover_data(const RunConfig& config, const ReturnsPanel& panel) {
    for (const auto& [name, role] : config.roles) {
        bool found = false;
        for (const auto& s : panel.series)
            if (s.name == name) found = true;
        if (!found)
            throw_input("E_CONFIG",
                        "role declared for '" + name + "' but the series is absent from data");
    }
}

int cmd_describe(const std::string& data_path, const std::string& market,
                 const std::string& out_dir) {
    TableFile t = load_table(data_path);
    cli::DescribeReport report = cli::describe_report(t.names, t.columns, market);
    std::cout << report.text;
    if (!out_dir.empty()) {
        ensure_out_dir(out_dir);
        cli::write_file((fs::path(out_dir) / "describe.txt").string(), report.text);
        cli::write_file((fs::path(out_dir) / "describe.json").string(),
                        report.json.dump(1) + "\n");
        cli::write_manifest(out_dir, "describe", {data_path},
                            {"describe.txt", "describe.json"}, "", 0, false);
    }
    return 0;
}

int cmd_estimate(const std::string& config_path, const std::string& data_path,
                 const std::string& instruments_path, const std::string& out_dir) {
    RunConfig config = load_run_config(config_path);
    if (config.roles.empty())
        throw_input("E_CONFIG", "estimate needs a [roles] section in the config");
    ReturnsPanel panel = load_panel_file(data_path, config.roles);
    check_roles_cover_data(config, panel);
    InstrumentPanel instruments = load_instruments_file(instruments_path, config.add_constant);
    AlignedDataset data = align(panel, instruments);
    ModelSpec spec = spec_from(config, data);

    opt::EstimationResult result = opt::estimate(spec, data, config.estimate);
    std::cout << cli::estimate_text(result);

    ensure_out_dir(out_dir);
    cli::write_file((fs::path(out_dir) / "estimate.json").string(),
                    result_to_json(result, data.dates, data.instruments, config.text) + "\n");
    cli::write_file((fs::path(out_dir) / "trace.csv").string(), cli::trace_csv(result));
    cli::write_file((fs::path(out_dir) / "filtered_h.csv").string(),
                    cli::filtered_h_csv(result, data.dates));
    cli::write_manifest(out_dir, "estimate", {config_path, data_path, instruments_path},
                        {"estimate.json", "trace.csv", "filtered_h.csv"}, config.text, 0,
                        false);
    return 0;
}

int cmd_test(const std::string& result_path, const std::string& out_dir) {
    LoadedResult result = load_result(result_path);
    auto rows = inference::standard_battery(result.spec, result.psi, result.vcov);
    std::string text = cli::battery_text(rows);
    std::cout << text;
    if (!out_dir.empty()) {
        ensure_out_dir(out_dir);
        ordered_json j;
        j["schema_version"] = 1;
        j["tests"] = cli::battery_json(rows);
        cli::write_file((fs::path(out_dir) / "tests.txt").string(), text);
        cli::write_file((fs::path(out_dir) / "tests.json").string(), j.dump(1) + "\n");
        cli::write_manifest(out_dir, "test", {result_path}, {"tests.txt", "tests.json"}, "",
                            0, false);
    }
    return 0;
}

int cmd_premia(const std::string& result_path, const std::string& config_path,
               const std::string& out_dir) {
    LoadedResult result = load_result(result_path);
    // Reporting options come from --config when given, else the defaults.
    RunConfig config;
    if (!config_path.empty()) config = load_run_config(config_path);

    Parameters params = Parameters::unflatten(result.spec, result.psi);
    premia::Decomposition d = premia::decompose(result.spec, params, result.h,
                                                result.delta_market, result.delta_currency);
    // Drop breakpoints outside the sample (short synthetic runs).
    std::vector<YearMonth> breaks;
    for (const YearMonth& b : config.breaks)
        if (result.dates.front() <= b && b < result.dates.back()) breaks.push_back(b);
    cli::PremiaOutputs out =
        cli::premia_outputs(result, d, breaks, config.hac, config.hp_lambda);
    std::cout << out.summary_text;
    if (!out_dir.empty()) {
        ensure_out_dir(out_dir);
        cli::write_file((fs::path(out_dir) / "premia.csv").string(), out.long_csv);
        cli::write_file((fs::path(out_dir) / "risk_prices.csv").string(), out.prices_csv);
        cli::write_file((fs::path(out_dir) / "premia_summary.txt").string(), out.summary_text);
        cli::write_file((fs::path(out_dir) / "premia_summary.json").string(),
                        out.summary_json.dump(1) + "\n");
        std::vector<std::string> inputs = {result_path};
        if (!config_path.empty()) inputs.push_back(config_path);
        cli::write_manifest(out_dir, "premia", inputs,
                            {"premia.csv", "risk_prices.csv", "premia_summary.txt",
                             "premia_summary.json"},
                            config.text, 0, false);
    }
    return 0;
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir) {
    RunConfig config = load_run_config(config_path);
    sim::SimulationConfig sc = config.simulation_config();
    sim::SimulationResult s = sim::simulate(sc);

    ensure_out_dir(out_dir);
    std::ostringstream panel;
    serialize_panel(s.returns, panel);
    cli::write_file((fs::path(out_dir) / "panel.csv").string(), panel.str());
    std::ostringstream instruments;
    serialize_instruments(s.instruments, instruments);
    cli::write_file((fs::path(out_dir) / "instruments.csv").string(), instruments.str());

    ordered_json latent;
    latent["schema_version"] = 1;
    latent["seed"] = sc.seed;
    latent["truth"] = ordered_json::object();
    auto names = sc.spec.param_names();
    Eigen::VectorXd psi = sc.params.flatten(sc.spec);
    for (int i = 0; i < psi.size(); ++i) latent["truth"][names[i]] = psi(i);
    auto matrix_json = [](const Eigen::MatrixXd& m) {
        ordered_json rows = ordered_json::array();
        for (int r = 0; r < m.rows(); ++r) {
            ordered_json row = ordered_json::array();
            for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
            rows.push_back(std::move(row));
        }
        return rows;
    };
    latent["h0"] = matrix_json(sc.h0);
    ordered_json h_path = ordered_json::array();
    for (const auto& h : s.h) h_path.push_back(matrix_json(h));
    latent["h"] = std::move(h_path);
    latent["mu"] = matrix_json(s.mu);
    latent["eps"] = matrix_json(s.eps);
    cli::write_file((fs::path(out_dir) / "latent.json").string(), latent.dump(1) + "\n");
    cli::write_manifest(out_dir, "simulate", {config_path},
                        {"panel.csv", "instruments.csv", "latent.json"}, config.text,
                        sc.seed, true);
    std::cout << "simulated T=" << sc.t_obs << " N=" << sc.spec.n_series()
              << " J=" << sc.spec.n_instruments << " seed=" << sc.seed << "\n";
    return 0;
}

int cmd_mc(const std::string& config_path, const std::string& out_dir) {
    RunConfig config = load_run_config(config_path);
    sim::SimulationConfig sc = config.simulation_config();
    sim::McOptions options;
    options.reps = config.mc_reps;
    options.threads = config.mc_threads;
    options.estimate = config.estimate;
    sim::McReport report = sim::monte_carlo(sc, options);
    std::string text = cli::mc_text(report);
    std::cout << text;
    if (!out_dir.empty()) {
        ensure_out_dir(out_dir);
        // Timing is environment noise; keep it out of the deterministic report.
        ordered_json j = cli::mc_json(report);
        j.erase("wall_seconds");
        cli::write_file((fs::path(out_dir) / "mc_report.json").string(), j.dump(1) + "\n");
        cli::write_file((fs::path(out_dir) / "mc_report.txt").string(),
                        cli::mc_text(report));
        cli::write_manifest(out_dir, "mc", {config_path}, {"mc_report.json", "mc_report.txt"},
                            config.text, sc.seed, true);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Conditional international asset pricing with currency risk"};
    app.require_subcommand(1);

    std::string data_path, instruments_path, config_path, result_path, out_dir, market;

    CLI::App* describe = app.add_subcommand("describe", "Diagnostic statistics for a panel");
    describe->add_option("--data", data_path, "panel CSV")->required();
    describe->add_option("--market", market, "series name for cross-correlation panel");
    describe->add_option("--out", out_dir, "output directory");

    CLI::App* estimate = app.add_subcommand("estimate", "Fit the pricing model");
    estimate->add_option("--config", config_path, "run configuration")->required();
    estimate->add_option("--data", data_path, "panel CSV")->required();
    estimate->add_option("--instruments", instruments_path, "instrument CSV")->required();
    estimate->add_option("--out", out_dir, "output directory")->required();

    CLI::App* test = app.add_subcommand("test", "Hypothesis battery on an estimate");
    test->add_option("--result", result_path, "estimate.json")->required();
    test->add_option("--out", out_dir, "output directory");

    CLI::App* premia_cmd = app.add_subcommand("premia", "Premium decomposition and summaries");
    premia_cmd->add_option("--result", result_path, "estimate.json")->required();
    premia_cmd->add_option("--config", config_path, "run configuration (reporting options)");
    premia_cmd->add_option("--out", out_dir, "output directory");

    CLI::App* simulate = app.add_subcommand("simulate", "Generate a synthetic panel");
    simulate->add_option("--config", config_path, "run configuration")->required();
    simulate->add_option("--out", out_dir, "output directory")->required();

    CLI::App* mc = app.add_subcommand("mc", "Monte Carlo recovery/size experiment");
    mc->add_option("--config", config_path, "run configuration")->required();
    mc->add_option("--out", out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand(describe)) return cmd_describe(data_path, market, out_dir);
        if (app.got_subcommand(estimate))
            return cmd_estimate(config_path, data_path, instruments_path, out_dir);
        if (app.got_subcommand(test)) return cmd_test(result_path, out_dir);
        if (app.got_subcommand(premia_cmd))
            return cmd_premia(result_path, config_path, out_dir);
        if (app.got_subcommand(simulate)) return cmd_simulate(config_path, out_dir);
        if (app.got_subcommand(mc)) return cmd_mc(config_path, out_dir);
    } catch (const Error& e) {
        std::cerr << e.line() << "\n";
        return e.kind() == ErrorKind::input ? 1 : 2;
    } catch (const std::exception& e) {
        std::cerr << "E_INTERNAL: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
