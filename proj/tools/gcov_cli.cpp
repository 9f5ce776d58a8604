// Command-line front end: estimation, white-noise tests, simulation and the
// Monte Carlo grid harness, with JSON/CSV/text reports.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gcov/csv.hpp"
#include "gcov/diagnostics.hpp"
#include "gcov/estimator.hpp"
#include "gcov/simulation.hpp"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitNoConvergence = 2;

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

std::vector<double> parse_doubles(const std::string& s, char sep = ',') {
    std::vector<double> out;
    for (const auto& tok : split(s, sep))
        if (!tok.empty()) out.push_back(std::stod(tok));
    return out;
}

std::vector<gcov::TransformTag> parse_transforms(const std::string& spec) {
    std::vector<gcov::TransformTag> tags;
    for (const auto& tok : split(spec, ',')) {
        if (tok.empty()) continue;
        const auto paren = tok.find('(');
        const std::string name = tok.substr(0, paren);
        std::string arg;
        if (paren != std::string::npos) {
            const auto close = tok.find(')', paren);
            arg = tok.substr(paren + 1, close - paren - 1);
        }
        if (name == "identity") tags.push_back(gcov::TransformTag::identity());
        else if (name == "abs") tags.push_back(gcov::TransformTag::abs());
        else if (name == "square") tags.push_back(gcov::TransformTag::square());
        else if (name == "cube") tags.push_back(gcov::TransformTag::cube());
        else if (name == "sign") tags.push_back(gcov::TransformTag::sign());
        else if (name == "power")
            tags.push_back(gcov::TransformTag::power(std::stod(arg)));
        else if (name == "indicator")
            tags.push_back(gcov::TransformTag::indicator(parse_doubles(arg, ':')));
        else
            throw gcov::DomainError("unknown transform '" + name + "'");
    }
    return tags;
}

// Grid dimension syntax: "a=0:0.1:0.9" (start:step:stop) or "a=0.5".
std::vector<double> parse_grid_axis(const std::string& spec) {
    const auto vals = parse_doubles(spec, ':');
    if (vals.size() == 1) return vals;
    if (vals.size() != 3)
        throw gcov::DomainError("grid axis must be value or start:step:stop");
    std::vector<double> out;
    const double start = vals[0], step = vals[1], stop = vals[2];
    if (step <= 0) throw gcov::DomainError("grid step must be positive");
    for (double v = start; v <= stop + 1e-12; v += step) out.push_back(v);
    return out;
}

struct Centering {
    std::string mode = "mean";  // none | mean | median | value
    double value = 0.0;
};

Centering parse_center(const std::string& s) {
    Centering c;
    if (s == "none" || s == "mean" || s == "median") {
        c.mode = s;
        return c;
    }
    c.mode = "value";
    c.value = std::stod(s);
    return c;
}

double column_median(Eigen::RowVectorXd row) {
    std::vector<double> v(row.data(), row.data() + row.size());
    std::sort(v.begin(), v.end());
    const size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

gcov::SeriesMatrix center_series(const gcov::SeriesMatrix& s, const Centering& c,
                                 std::vector<double>* applied) {
    Eigen::MatrixXd v = s.values();
    for (Eigen::Index k = 0; k < v.rows(); ++k) {
        double offset = 0.0;
        if (c.mode == "mean") offset = v.row(k).mean();
        else if (c.mode == "median") offset = column_median(v.row(k));
        else if (c.mode == "value") offset = c.value;
        v.row(k).array() -= offset;
        if (applied) applied->push_back(offset);
    }
    return gcov::SeriesMatrix(std::move(v));
}

// ---------------------------------------------------------------------------
// Report rendering: text output is a rendering of the JSON document.

void render_json_text(const json& j, std::ostream& os, int indent = 0) {
    const std::string pad(indent, ' ');
    if (j.is_object()) {
        for (const auto& [key, value] : j.items()) {
            if (value.is_object() || value.is_array()) {
                os << pad << key << ":\n";
                render_json_text(value, os, indent + 2);
            } else {
                os << pad << key << ": " << value.dump() << "\n";
            }
        }
    } else if (j.is_array()) {
        const bool scalars = std::all_of(j.begin(), j.end(), [](const json& e) {
            return !e.is_object() && !e.is_array();
        });
        if (scalars) {
            os << pad << "[";
            for (size_t i = 0; i < j.size(); ++i)
                os << (i ? ", " : "") << j[i].dump();
            os << "]\n";
        } else {
            for (const auto& e : j) render_json_text(e, os, indent + 2);
        }
    } else {
        os << pad << j.dump() << "\n";
    }
}

void emit_report(const json& report, const std::string& out_path,
                 const std::string& format) {
    std::ostringstream body;
    if (format == "text")
        render_json_text(report, body);
    else
        body << report.dump(2) << "\n";

    if (out_path.empty()) {
        std::cout << body.str();
    } else {
        std::ofstream f(out_path);
        if (!f) throw gcov::EmptyInput("cannot write '" + out_path + "'");
        f << body.str();
    }
}

json json_vector(const Eigen::VectorXd& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

json json_matrix(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

json json_p_value(double p) {
    return std::isnan(p) ? json(nullptr) : json(p);
}

json test_report_json(const gcov::TestReport& rep) {
    json j{{"statistic", rep.statistic},
           {"df", rep.df},
           {"p_value", json_p_value(rep.p_value)},
           {"H", rep.H},
           {"K", static_cast<int>(rep.K)}};
    switch (rep.kind) {
        case gcov::TestKind::weak_wn: j["kind"] = "weak_wn"; break;
        case gcov::TestKind::sur: j["kind"] = "sur"; break;
        case gcov::TestKind::residual_based: j["kind"] = "residual_based"; break;
    }
    if (rep.has_alt_df) {
        j["df_alt"] = rep.df_alt;
        j["p_value_alt"] = rep.p_value_alt;
    }
    if (rep.df_exhausted) j["df_exhausted"] = true;
    return j;
}

// ---------------------------------------------------------------------------

struct CommonArgs {
    std::string data_path;
    std::string columns;
    std::string center = "mean";
    std::string out;
    std::string format = "json";
    int H = 3;
};

gcov::SeriesMatrix load_input(const CommonArgs& args,
                              std::vector<double>* centers_applied,
                              Centering* centering_out) {
    std::vector<std::string> cols;
    if (!args.columns.empty()) cols = split(args.columns, ',');
    const gcov::SeriesMatrix raw = gcov::load_csv(args.data_path, cols);
    const Centering c = parse_center(args.center);
    if (centering_out) *centering_out = c;
    return center_series(raw, c, centers_applied);
}

struct ModelArgs {
    std::string model = "mar";
    int var_order = 1;
    int phi_order = 1;
    int psi_order = 1;
    std::string transforms;
};

gcov::ModelSpec build_model(const ModelArgs& m, Eigen::Index K) {
    const auto tags = parse_transforms(m.transforms);
    switch (gcov::ModelSpec::family_by_name(m.model)) {
        case gcov::ModelFamily::causal_var:
            return gcov::ModelSpec::causal_var(K, m.var_order, tags);
        case gcov::ModelFamily::mar:
            if (K != 1)
                throw gcov::ShapeMismatch("mar expects a single data column");
            return gcov::ModelSpec::mar(m.phi_order, m.psi_order, tags);
        case gcov::ModelFamily::ar_arch:
            if (K != 1)
                throw gcov::ShapeMismatch("ar_arch expects a single data column");
            if (!tags.empty())
                throw gcov::DomainError(
                    "ar_arch has a fixed (u, |u|) stack; --transforms does not apply");
            return gcov::ModelSpec::ar_arch();
    }
    throw gcov::UnknownModel("unreachable");
}

int cmd_estimate(const CommonArgs& common, const ModelArgs& margs,
                 const gcov::GcovOptions& opts) {
    std::vector<double> centers;
    Centering centering;
    const gcov::SeriesMatrix data = load_input(common, &centers, &centering);
    const gcov::ModelSpec model = build_model(margs, data.components());

    const Eigen::Index J = model.param_template().dim();
    const Eigen::Index K = model.residual_dim();
    if (K * K * opts.H < J) {
        std::cerr << "error: under-identified configuration: K^2 H = "
                  << K * K * opts.H << " < dim(theta) = " << J
                  << "; raise --H or reduce the parameter count\n";
        return kExitInput;
    }

    const gcov::EstimationResult res = gcov::gcov_estimate(model, data, opts);

    json report;
    report["command"] = "estimate";
    report["model"] = model.name();
    report["H"] = opts.H;
    report["K"] = static_cast<int>(K);
    report["n_obs_used"] = static_cast<long>(res.n_obs_used);
    report["theta"] = {{"names", res.theta_hat.names},
                       {"values", json_vector(res.theta_hat.values)}};
    report["se_corollary1"] =
        json_vector(res.cov_corollary1.diagonal().cwiseMax(0.0).cwiseSqrt());
    report["se_hessian"] =
        json_vector(res.cov_hessian.diagonal().cwiseMax(0.0).cwiseSqrt());
    report["objective"] = res.objective;
    report["statistic"] = res.statistic;
    report["df"] = res.df;
    report["p_value"] = json_p_value(res.p_value);
    report["jacobian_rank"] = res.jacobian_rank;
    report["converged"] = res.converged;
    report["iterations"] = res.iterations;
    report["singular_omega"] = res.singular_omega;
    report["centering"] = {{"mode", centering.mode}, {"applied", centers}};

    if (res.converged)
        report["residual_test"] = test_report_json(gcov::residual_based_test(res));

    // Residual ACF up to lag 20 (or as much as the sample allows).
    const gcov::SeriesMatrix resid =
        model.residuals(res.theta_hat, data).series;
    const int max_lag =
        std::min<int>(20, static_cast<int>(resid.length()) - 2);
    json acf_arr = json::array();
    for (const auto& mat : gcov::acf(resid, max_lag))
        acf_arr.push_back(json_matrix(mat));
    report["acf"] = {{"max_lag", max_lag}, {"matrices", acf_arr}};

    emit_report(report, common.out, common.format);
    return res.converged ? kExitOk : kExitNoConvergence;
}

int cmd_test(const CommonArgs& common) {
    std::vector<double> centers;
    Centering centering;
    const gcov::SeriesMatrix data = load_input(common, &centers, &centering);

    const gcov::TestReport wn = gcov::weak_wn_test(data, common.H);
    const gcov::TestReport sur = gcov::sur_xi(data, common.H);

    const gcov::AutocovMatrix g0 = gcov::sample_autocov(data, 0);
    json per_lag = json::array();
    for (int h = 1; h <= common.H; ++h) {
        const gcov::AutocovMatrix gh = gcov::sample_autocov(data, h);
        per_lag.push_back(
            {{"h", h},
             {"trace_r2", gcov::trace_r2(gh, g0)},
             {"canonical_correlations_sq",
              json_vector(gcov::canonical_correlations_sq(gh, g0))}});
    }

    json report;
    report["command"] = "test";
    report["H"] = common.H;
    report["K"] = static_cast<int>(data.components());
    report["n_obs_used"] = static_cast<long>(data.length());
    report["weak_wn"] = test_report_json(wn);
    report["sur"] = test_report_json(sur);
    report["per_lag"] = per_lag;
    report["centering"] = {{"mode", centering.mode}, {"applied", centers}};

    emit_report(report, common.out, common.format);
    return kExitOk;
}

struct SimArgs {
    std::string model = "mar";
    std::string phi;
    std::string psi;
    double a1 = 0.0;
    double alpha1 = 0.0;
    long T = 400;
    double nu = 6.0;
    std::uint64_t seed = 0;
    std::string out;
};

int cmd_simulate(const SimArgs& args) {
    gcov::RngStream rng(args.seed, 0);
    gcov::SeriesMatrix series = [&] {
        if (args.model == "ar_arch")
            return gcov::simulate_ar_arch(args.a1, args.alpha1, args.T, rng).series;
        if (args.model == "mar") {
            const auto phi = parse_doubles(args.phi);
            const auto psi = parse_doubles(args.psi);
            return gcov::simulate_mar(
                Eigen::Map<const Eigen::VectorXd>(phi.data(), phi.size()),
                Eigen::Map<const Eigen::VectorXd>(psi.data(), psi.size()), args.T,
                args.nu, rng);
        }
        throw gcov::UnknownModel("simulate supports 'mar' and 'ar_arch'");
    }();
    gcov::save_csv(args.out, series);
    std::cout << "wrote " << series.length() << " points to " << args.out << "\n";
    return kExitOk;
}

struct McArgs {
    std::string family = "ar_arch";
    std::string grid;
    long T = 400;
    int replications = 100;
    double nu = 6.0;
    std::uint64_t seed = 0;
    int H = 3;
    std::string out;
};

int cmd_montecarlo(const McArgs& args) {
    const auto axes = split(args.grid, ',');
    if (axes.size() != 2)
        throw gcov::DomainError(
            "grid must have two axes, e.g. a=0.3:0.1:0.5,alpha=0.5");
    std::vector<std::string> names;
    std::vector<std::vector<double>> values;
    for (const auto& axis : axes) {
        const auto eq = axis.find('=');
        if (eq == std::string::npos)
            throw gcov::DomainError("grid axis needs name=range");
        names.push_back(axis.substr(0, eq));
        values.push_back(parse_grid_axis(axis.substr(eq + 1)));
    }

    std::vector<gcov::GridCell> grid;
    for (double a : values[0])
        for (double b : values[1]) grid.push_back({a, b});

    gcov::MonteCarloOptions opts;
    opts.T = args.T;
    opts.replications = args.replications;
    opts.nu = args.nu;
    opts.estimation.H = args.H;
    opts.estimation.seed = args.seed;

    const gcov::SimFamily family = args.family == "mar"
                                       ? gcov::SimFamily::mar
                                       : gcov::SimFamily::ar_arch;
    if (args.family != "mar" && args.family != "ar_arch")
        throw gcov::UnknownModel("montecarlo supports 'mar' and 'ar_arch'");

    const gcov::MonteCarloTable table = gcov::run_monte_carlo(family, grid, opts);

    // CSV: one row per cell.
    const std::string csv_path = args.out + ".csv";
    std::ofstream csv(csv_path);
    if (!csv) throw gcov::EmptyInput("cannot write '" + csv_path + "'");
    csv << names[0] << "," << names[1];
    for (const auto& pn : table.param_names) csv << ",mean_" << pn;
    for (const auto& pn : table.param_names) csv << ",q5_" << pn;
    for (const auto& pn : table.param_names) csv << ",q95_" << pn;
    csv << ",failures\n";
    csv.precision(10);
    for (const auto& cell : table.cells) {
        csv << cell.cell.first << "," << cell.cell.second;
        for (Eigen::Index j = 0; j < cell.mean.size(); ++j)
            csv << "," << cell.mean(j);
        for (Eigen::Index j = 0; j < cell.quantile_5.size(); ++j)
            csv << "," << cell.quantile_5(j);
        for (Eigen::Index j = 0; j < cell.quantile_95.size(); ++j)
            csv << "," << cell.quantile_95(j);
        csv << "," << cell.failures << "\n";
    }

    json jtable;
    jtable["command"] = "montecarlo";
    jtable["family"] = args.family;
    jtable["T"] = args.T;
    jtable["replications"] = args.replications;
    jtable["seed"] = args.seed;
    jtable["param_names"] = table.param_names;
    json cells = json::array();
    for (const auto& cell : table.cells)
        cells.push_back({{names[0], cell.cell.first},
                         {names[1], cell.cell.second},
                         {"mean", json_vector(cell.mean)},
                         {"q5", json_vector(cell.quantile_5)},
                         {"q95", json_vector(cell.quantile_95)},
                         {"replications", cell.replications},
                         {"failures", cell.failures},
                         {"flagged", cell.flagged}});
    jtable["cells"] = cells;
    std::ofstream jf(args.out + ".json");
    jf << jtable.dump(2) << "\n";

    std::cout << "wrote " << table.cells.size() << " cells to " << csv_path
              << " and " << args.out << ".json\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"GCov estimation and residual-based portmanteau testing"};
    app.require_subcommand(1);

    CommonArgs common;
    ModelArgs margs;
    gcov::GcovOptions opts;
    SimArgs sim;
    McArgs mc;

    auto* est = app.add_subcommand("estimate", "fit a model by GCov");
    est->add_option("data", common.data_path, "input CSV")->required();
    est->add_option("--columns", common.columns, "columns (names or indices)");
    est->add_option("--model", margs.model, "var | mar | ar_arch")->required();
    est->add_option("--var-order", margs.var_order, "VAR order p");
    est->add_option("--phi-order", margs.phi_order, "MAR causal order r");
    est->add_option("--psi-order", margs.psi_order, "MAR noncausal order s");
    est->add_option("--transforms", margs.transforms,
                    "e.g. identity,square,cube or indicator(-1:0:1)");
    est->add_option("--H", opts.H, "number of lags in the criterion");
    est->add_option("--center", common.center, "none | mean | median | <value>");
    est->add_option("--seed", opts.seed, "seed for multistart draws");
    est->add_option("--multistart", opts.multistart, "random starts");
    est->add_option("--max-iter", opts.max_iter, "simplex iterations per start");
    est->add_option("--out", common.out, "report path (default stdout)");
    est->add_option("--format", common.format, "json | text");

    auto* tst = app.add_subcommand("test", "weak white noise tests");
    tst->add_option("data", common.data_path, "input CSV")->required();
    tst->add_option("--columns", common.columns, "columns (names or indices)");
    tst->add_option("--H", common.H, "number of lags");
    tst->add_option("--center", common.center, "none | mean | median | <value>");
    tst->add_option("--out", common.out, "report path (default stdout)");
    tst->add_option("--format", common.format, "json | text");

    auto* simc = app.add_subcommand("simulate", "simulate one path to CSV");
    simc->add_option("--model", sim.model, "mar | ar_arch")->required();
    simc->add_option("--phi", sim.phi, "MAR causal coefficients, comma separated");
    simc->add_option("--psi", sim.psi, "MAR noncausal coefficients");
    simc->add_option("--a1", sim.a1, "AR coefficient");
    simc->add_option("--alpha1", sim.alpha1, "ARCH coefficient");
    simc->add_option("--T", sim.T, "sample length");
    simc->add_option("--nu", sim.nu, "error dof (inf for Gaussian)");
    simc->add_option("--seed", sim.seed, "stream seed");
    simc->add_option("--out", sim.out, "output CSV")->required();

    auto* mcc = app.add_subcommand("montecarlo", "simulate-estimate grid");
    mcc->add_option("--family", mc.family, "ar_arch | mar")->required();
    mcc->add_option("--grid", mc.grid, "a=0:0.1:0.9,alpha=0.5")->required();
    mcc->add_option("--T", mc.T, "sample length per replication");
    mcc->add_option("--replications", mc.replications, "replications per cell");
    mcc->add_option("--nu", mc.nu, "error dof for mar");
    mcc->add_option("--H", mc.H, "criterion lags");
    mcc->add_option("--seed", mc.seed, "base seed");
    mcc->add_option("--out", mc.out, "output basename (.csv/.json)")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (est->parsed()) {
            common.H = opts.H;
            return cmd_estimate(common, margs, opts);
        }
        if (tst->parsed()) return cmd_test(common);
        if (simc->parsed()) return cmd_simulate(sim);
        if (mcc->parsed()) return cmd_montecarlo(mc);
    } catch (const gcov::NoConvergence& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNoConvergence;
    } catch (const gcov::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
