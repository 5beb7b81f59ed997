#include "icapm/json_io.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "icapm/error.hpp"

namespace icapm {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json matrix_to_json(const Eigen::MatrixXd& m) {
    ordered_json rows = ordered_json::array();
    for (int r = 0; r < m.rows(); ++r) {
        ordered_json row = ordered_json::array();
        for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const ordered_json& j) {
    int rows = static_cast<int>(j.size());
    int cols = rows > 0 ? static_cast<int>(j.at(0).size()) : 0;
    Eigen::MatrixXd m(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) m(r, c) = j.at(r).at(c).get<double>();
    return m;
}

ordered_json vector_to_json(const Eigen::VectorXd& v) {
    ordered_json out = ordered_json::array();
    for (int i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

Eigen::VectorXd vector_from_json(const ordered_json& j) {
    Eigen::VectorXd v(static_cast<int>(j.size()));
    for (int i = 0; i < v.size(); ++i) v(i) = j.at(i).get<double>();
    return v;
}

}  // namespace

std::string result_to_json(const opt::EstimationResult& result,
                           const std::vector<YearMonth>& dates,
                           const Eigen::MatrixXd& instruments,
                           const std::string& config_echo) {
    const ModelSpec& spec = result.spec;
    ordered_json j;
    j["schema_version"] = 1;
    j["model"] = {{"variant", variant_to_string(spec.variant)},
                  {"price_form", price_form_to_string(spec.price_form)},
                  {"n_assets", spec.n_assets},
                  {"n_currencies", spec.n_currencies},
                  {"n_instruments", spec.n_instruments},
                  {"series_names", spec.series_names},
                  {"instrument_names", spec.instrument_names}};
    j["config_echo"] = config_echo;

    ordered_json date_list = ordered_json::array();
    for (const YearMonth& d : dates) date_list.push_back(d.str());
    j["sample"] = {{"T", result.t_obs}, {"dates", std::move(date_list)}};

    ordered_json params = ordered_json::array();
    auto names = spec.param_names();
    for (int i = 0; i < result.psi.size(); ++i)
        params.push_back({{"name", names[i]}, {"value", result.psi(i)}, {"se", result.se(i)}});
    j["parameters"] = std::move(params);
    j["vcov"] = matrix_to_json(result.vcov);
    j["loglik"] = result.loglik;
    j["penalty"] = result.penalty;
    j["h0"] = matrix_to_json(result.h0);

    j["convergence"] = {{"nm_evals", result.nm_evals},
                        {"nm_objective", result.nm_objective},
                        {"warnings", result.warnings}};
    ordered_json trace = ordered_json::array();
    for (const auto& row : result.trace)
        trace.push_back({{"iter", row.iter},
                         {"loglik", row.loglik},
                         {"step", row.step},
                         {"grad_inf", row.grad_inf}});
    j["convergence"]["trace"] = std::move(trace);

    j["prices"] = {{"market", vector_to_json(result.delta_market)},
                   {"currency", matrix_to_json(result.delta_currency)}};
    ordered_json h_list = ordered_json::array();
    for (const Eigen::MatrixXd& h : result.h) h_list.push_back(matrix_to_json(h));
    j["filtered"] = {{"mu", matrix_to_json(result.mu)},
                     {"eps", matrix_to_json(result.eps)},
                     {"h", std::move(h_list)}};
    j["instruments"] = matrix_to_json(instruments);
    return j.dump(1);
}

LoadedResult result_from_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw_input("E_RESULT", std::string("cannot parse result JSON: ") + e.what());
    }
    try {
        if (j.at("schema_version").get<int>() != 1)
            throw_input("E_RESULT", "unsupported result schema_version");
        LoadedResult out;
        const auto& m = j.at("model");
        out.spec.variant = variant_from_string(m.at("variant").get<std::string>());
        out.spec.price_form = price_form_from_string(m.at("price_form").get<std::string>());
        out.spec.n_assets = m.at("n_assets").get<int>();
        out.spec.n_currencies = m.at("n_currencies").get<int>();
        out.spec.n_instruments = m.at("n_instruments").get<int>();
        out.spec.series_names = m.at("series_names").get<std::vector<std::string>>();
        out.spec.instrument_names = m.at("instrument_names").get<std::vector<std::string>>();
        out.spec.validate();

        for (const auto& d : j.at("sample").at("dates"))
            out.dates.push_back(YearMonth::parse(d.get<std::string>()));

        const auto& params = j.at("parameters");
        out.psi.resize(static_cast<int>(params.size()));
        out.se.resize(static_cast<int>(params.size()));
        for (size_t i = 0; i < params.size(); ++i) {
            out.psi(static_cast<int>(i)) = params.at(i).at("value").get<double>();
            out.se(static_cast<int>(i)) = params.at(i).at("se").get<double>();
        }
        if (out.psi.size() != out.spec.param_count())
            throw_input("E_RESULT", "parameter count does not match the model layout");
        out.vcov = matrix_from_json(j.at("vcov"));
        out.loglik = j.at("loglik").get<double>();
        out.delta_market = vector_from_json(j.at("prices").at("market"));
        out.delta_currency = matrix_from_json(j.at("prices").at("currency"));
        out.mu = matrix_from_json(j.at("filtered").at("mu"));
        out.eps = matrix_from_json(j.at("filtered").at("eps"));
        for (const auto& h : j.at("filtered").at("h")) out.h.push_back(matrix_from_json(h));
        out.instruments = matrix_from_json(j.at("instruments"));
        return out;
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw_input("E_RESULT", std::string("result JSON missing fields: ") + e.what());
    }
}

LoadedResult load_result(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw_input("E_RESULT", "cannot read result file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return result_from_json(ss.str());
}

}  // namespace icapm
