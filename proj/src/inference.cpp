#include "icapm/inference.hpp"

#include <cmath>
#include <sstream>

#include "icapm/error.hpp"
#include "icapm/stats.hpp"

namespace icapm::inference {

WaldResult wald(const Restriction& restriction, const Eigen::VectorXd& psi,
                const Eigen::MatrixXd& vcov) {
    const Eigen::MatrixXd& r = restriction.r_matrix;
    const int q = static_cast<int>(r.rows());
    const int p = static_cast<int>(r.cols());
    if (q < 1) throw_input("E_INFERENCE", "restriction has no rows");
    if (psi.size() != p || vcov.rows() != p || vcov.cols() != p)
        throw_input("E_INFERENCE", "restriction dimensions do not match the parameter vector");
    Eigen::VectorXd rv = restriction.r_value.size() == 0
                             ? Eigen::VectorXd::Zero(q).eval()
                             : restriction.r_value;
    if (rv.size() != q) throw_input("E_INFERENCE", "restriction value length mismatch");

    Eigen::VectorXd gap = r * psi - rv;
    Eigen::MatrixXd rvr = r * vcov * r.transpose();
    rvr = 0.5 * (rvr + rvr.transpose());

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(rvr);
    qr.setThreshold(1e-12);
    if (qr.rank() < q) {
        std::ostringstream os;
        os << "singular R V R' in '" << restriction.label << "': redundant restriction row(s)";
        for (int i = qr.rank(); i < q; ++i) os << ' ' << qr.colsPermutation().indices()(i);
        throw_numeric("E_INFERENCE", os.str());
    }
    WaldResult out;
    out.stat = gap.dot(qr.solve(gap));
    out.df = q;
    out.p_value = stats::chi2_survival(out.stat, static_cast<double>(q));
    return out;
}

namespace {

Restriction select_rows(const std::string& label, int p, const std::vector<int>& indices) {
    Restriction r;
    r.label = label;
    r.r_matrix = Eigen::MatrixXd::Zero(static_cast<int>(indices.size()), p);
    for (size_t i = 0; i < indices.size(); ++i) r.r_matrix(static_cast<int>(i), indices[i]) = 1.0;
    return r;
}

}  // namespace

std::vector<Restriction> standard_restrictions(const ModelSpec& spec) {
    spec.validate();
    const int p = spec.param_count();
    const int j = spec.n_instruments;
    const int l = spec.n_currencies;
    std::vector<Restriction> out;

    auto range = [](int begin, int count) {
        std::vector<int> idx(count);
        for (int i = 0; i < count; ++i) idx[i] = begin + i;
        return idx;
    };

    if (j > 1)
        out.push_back(select_rows("Is the world market risk price constant?", p,
                                  range(spec.kappa_market_offset() + 1, j - 1)));
    for (int k = 0; k < l; ++k) {
        std::string name = spec.currency_label(k);
        out.push_back(select_rows("Is the " + name + " risk price zero?", p,
                                  range(spec.kappa_currency_offset(k), j)));
        if (j > 1)
            out.push_back(select_rows("Is the " + name + " risk price constant?", p,
                                      range(spec.kappa_currency_offset(k) + 1, j - 1)));
    }
    if (l > 0) {
        std::vector<int> all_zero, all_const;
        for (int k = 0; k < l; ++k) {
            for (int c = 0; c < j; ++c) all_zero.push_back(spec.kappa_currency_offset(k) + c);
            for (int c = 1; c < j; ++c) all_const.push_back(spec.kappa_currency_offset(k) + c);
        }
        out.push_back(select_rows("Are the currency risk prices jointly zero?", p, all_zero));
        if (j > 1)
            out.push_back(
                select_rows("Are the currency risk prices jointly constant?", p, all_const));
    }
    if (spec.has_domestic())
        out.push_back(select_rows("Are the domestic risk prices jointly zero?", p,
                                  range(spec.domestic_offset(), spec.n_assets)));
    if (spec.has_augmented_terms()) {
        out.push_back(select_rows("Are the asset intercepts jointly zero?", p,
                                  range(spec.alpha_offset(), spec.n_assets)));
        if (spec.phi_size() > 0)
            out.push_back(
                select_rows("Are the information variables orthogonal to returns?", p,
                            range(spec.phi_offset(), spec.phi_size())));
    }
    return out;
}

std::vector<BatteryRow> standard_battery(const ModelSpec& spec, const Eigen::VectorXd& psi,
                                         const Eigen::MatrixXd& vcov) {
    std::vector<BatteryRow> rows;
    for (const Restriction& r : standard_restrictions(spec)) {
        BatteryRow row;
        row.label = r.label;
        WaldResult w = wald(r, psi, vcov);
        row.stat = w.stat;
        row.df = w.df;
        row.p_value = w.p_value;
        rows.push_back(std::move(row));
    }
    if (spec.n_instruments == 1) {
        BatteryRow note;
        note.label = "constant-price hypotheses";
        note.skipped = true;
        note.note = "skipped: needs at least one non-constant instrument";
        rows.push_back(std::move(note));
    }
    if (!spec.has_domestic()) {
        BatteryRow note;
        note.label = "Are the domestic risk prices jointly zero?";
        note.skipped = true;
        note.note = "skipped: not applicable to the integrated variant";
        rows.push_back(std::move(note));
    }
    if (!spec.has_augmented_terms()) {
        BatteryRow note;
        note.label = "Are the asset intercepts jointly zero?";
        note.skipped = true;
        note.note = "skipped: applicable to the augmented variant only";
        rows.push_back(std::move(note));
    }
    return rows;
}

}  // namespace icapm::inference
