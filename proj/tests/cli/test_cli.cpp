// Integration tests driving the CLI binary end to end. The binary path
// arrives through GCOV_CLI_BIN (set by CTest).
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "gcov/csv.hpp"
#include "gcov/simulation.hpp"
#include "gcov/stats.hpp"

using nlohmann::json;

namespace {

std::string cli_bin() {
    const char* p = std::getenv("GCOV_CLI_BIN");
    REQUIRE_MESSAGE(p != nullptr, "GCOV_CLI_BIN must point at the CLI binary");
    return p;
}

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

RunResult run_cli(const std::string& args) {
    const std::string out_path = "/tmp/gcov_cli_stdout.txt";
    const std::string err_path = "/tmp/gcov_cli_stderr.txt";
    const std::string cmd =
        cli_bin() + " " + args + " > " + out_path + " 2> " + err_path;
    const int raw = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WEXITSTATUS(raw);
    r.out = slurp(out_path);
    r.err = slurp(err_path);
    return r;
}

json run_json(const std::string& args, int expected_exit = 0) {
    const RunResult r = run_cli(args);
    REQUIRE_MESSAGE(r.exit_code == expected_exit, r.err);
    return json::parse(r.out);
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path);
    f << content;
}

}  // namespace

TEST_CASE("test command on a clean path") {
    run_cli("simulate --model mar --phi 0.4 --psi 0 --T 300 --nu inf --seed 5 "
            "--out /tmp/gcov_it_ar.csv");
    const json rep = run_json("test /tmp/gcov_it_ar.csv --H 3");
    CHECK(rep["command"] == "test");
    CHECK(rep["K"] == 1);
    CHECK(rep["weak_wn"]["df"] == 3);
    CHECK(rep["per_lag"].size() == 3);
    // serial correlation of an AR(0.4) path must be detected
    CHECK(rep["weak_wn"]["p_value"].get<double>() < 0.01);
}

TEST_CASE("NA cells fail with the line number and exit 1") {
    write_file("/tmp/gcov_it_na.csv", "1\n2\n3\n4\n5\n6\nNA\n8\n");
    const RunResult r = run_cli("test /tmp/gcov_it_na.csv --H 1");
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("line 7") != std::string::npos);
}

TEST_CASE("constant columns exit 1 with a degenerate-series error") {
    write_file("/tmp/gcov_it_const.csv", "7\n7\n7\n7\n7\n7\n7\n7\n7\n7\n");
    const RunResult r = run_cli("test /tmp/gcov_it_const.csv --H 1 --center none");
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("variance") != std::string::npos);
}

TEST_CASE("H=1 makes the weak-WN and SUR statistics identical") {
    run_cli("simulate --model mar --phi 0.2 --psi 0.3 --T 250 --nu 6 --seed 8 "
            "--out /tmp/gcov_it_h1.csv");
    const json rep = run_json("test /tmp/gcov_it_h1.csv --H 1");
    CHECK(rep["weak_wn"]["statistic"].get<double>() ==
          rep["sur"]["statistic"].get<double>());
}

TEST_CASE("i.i.d. input rejects at the nominal rate across seeds") {
    int rejections = 0;
    for (int s = 0; s < 100; ++s) {
        const std::string data = "/tmp/gcov_it_iid.csv";
        run_cli("simulate --model mar --phi 0 --psi 0 --T 400 --nu inf --seed " +
                std::to_string(9000 + s) + " --out " + data);
        const json rep = run_json("test " + data + " --H 3");
        if (rep["weak_wn"]["p_value"].get<double>() < 0.05) ++rejections;
    }
    CHECK(rejections >= 1);
    CHECK(rejections <= 12);
}

TEST_CASE("estimate VAR(1) matches least squares and zeroes the criterion") {
    // Simulate a K=2 VAR(1) in-process, write it, estimate through the CLI.
    Eigen::MatrixXd phi(2, 2);
    phi << 0.5, 0.1, 0.2, 0.3;
    gcov::RngStream rng(77, 0);
    Eigen::MatrixXd y(2, 700);
    y.col(0).setZero();
    for (Eigen::Index t = 1; t < y.cols(); ++t) {
        Eigen::Vector2d e(rng.normal(), rng.normal());
        y.col(t) = phi * y.col(t - 1) + e;
    }
    const gcov::SeriesMatrix data{y.rightCols(500)};
    gcov::save_csv("/tmp/gcov_it_var.csv", data);

    const json rep = run_json(
        "estimate /tmp/gcov_it_var.csv --model var --var-order 1 --H 1 "
        "--center mean --seed 4 --multistart 0");
    CHECK(rep["converged"] == true);
    CHECK(rep["df"] == 0);  // just identified
    // The exact-root property: the minimized criterion is numerically zero.
    CHECK(rep["objective"].get<double>() <= 1e-10);

    // Least-squares oracle on the same (centered) data.
    Eigen::MatrixXd yc = data.values();
    yc.row(0).array() -= yc.row(0).mean();
    yc.row(1).array() -= yc.row(1).mean();
    const Eigen::MatrixXd x = yc.leftCols(499);
    const Eigen::MatrixXd b =
        ((x * x.transpose()).ldlt().solve(x * yc.rightCols(499).transpose()))
            .transpose();
    const auto theta = rep["theta"]["values"];
    // GCov and OLS are asymptotically equivalent for the causal VAR; in a
    // finite sample they differ at the O(1/sqrt(T)) level. The acceptance
    // suite holds this comparison to the strict published tolerance.
    for (Eigen::Index i = 0; i < 2; ++i)
        for (Eigen::Index j = 0; j < 2; ++j)
            CHECK(std::fabs(theta[i * 2 + j].get<double>() - b(i, j)) <= 0.06);
}

TEST_CASE("under-identified configurations exit 1 before estimating") {
    write_file("/tmp/gcov_it_under.csv", [] {
        std::string s;
        for (int i = 0; i < 50; ++i) s += std::to_string(0.1 * (i % 7)) + "\n";
        return s;
    }());
    const RunResult r = run_cli(
        "estimate /tmp/gcov_it_under.csv --model mar --phi-order 3 "
        "--psi-order 3 --H 1");
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("under-identified") != std::string::npos);
}

TEST_CASE("simulate is deterministic: identical files for identical seeds") {
    run_cli("simulate --model mar --phi 0.3 --psi 0.3 --T 400 --nu 6 --seed 7 "
            "--out /tmp/gcov_it_det_a.csv");
    run_cli("simulate --model mar --phi 0.3 --psi 0.3 --T 400 --nu 6 --seed 7 "
            "--out /tmp/gcov_it_det_b.csv");
    CHECK(slurp("/tmp/gcov_it_det_a.csv") == slurp("/tmp/gcov_it_det_b.csv"));
    CHECK(!slurp("/tmp/gcov_it_det_a.csv").empty());
}

TEST_CASE("simulate output round-trips through load_csv bit-exactly") {
    run_cli("simulate --model ar_arch --a1 0.5 --alpha1 0.5 --T 300 --seed 21 "
            "--out /tmp/gcov_it_rt.csv");
    const auto loaded = gcov::load_csv("/tmp/gcov_it_rt.csv");
    gcov::RngStream rng(21, 0);
    const auto direct = gcov::simulate_ar_arch(0.5, 0.5, 300, rng);
    CHECK(loaded.values() == direct.series.values());
}

TEST_CASE("montecarlo subgrid writes a well-formed table") {
    const RunResult r = run_cli(
        "montecarlo --family ar_arch --grid a=0.3:0.2:0.5,alpha=0.2:0.2:0.4 "
        "--T 150 --replications 3 --seed 3 --out /tmp/gcov_it_mc");
    CHECK(r.exit_code == 0);

    std::ifstream csv("/tmp/gcov_it_mc.csv");
    std::string line;
    REQUIRE(std::getline(csv, line));
    CHECK(line == "a,alpha,mean_a1,mean_alpha1,q5_a1,q5_alpha1,q95_a1,"
                  "q95_alpha1,failures");
    int rows = 0;
    while (std::getline(csv, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 4);

    const json tbl = json::parse(slurp("/tmp/gcov_it_mc.json"));
    CHECK(tbl["cells"].size() == 4);
    for (const auto& cell : tbl["cells"])
        CHECK(cell["q5"][0].get<double>() <= cell["q95"][0].get<double>());
}

TEST_CASE("text format renders the same report") {
    run_cli("simulate --model mar --phi 0.2 --psi 0.2 --T 200 --nu 6 --seed 2 "
            "--out /tmp/gcov_it_txt.csv");
    const RunResult r =
        run_cli("test /tmp/gcov_it_txt.csv --H 2 --format text");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("statistic") != std::string::npos);
    CHECK(r.out.find("weak_wn") != std::string::npos);
}

TEST_CASE("estimate ar_arch end to end") {
    run_cli("simulate --model ar_arch --a1 0.5 --alpha1 0.5 --T 400 --seed 31 "
            "--out /tmp/gcov_it_arch.csv");
    const json rep = run_json(
        "estimate /tmp/gcov_it_arch.csv --model ar_arch --H 3 --seed 1 "
        "--center none");
    CHECK(rep["converged"] == true);
    CHECK(rep["K"] == 2);
    CHECK(rep["df"] == 10);  // K^2 H - J = 12 - 2
    const double a_hat = rep["theta"]["values"][0].get<double>();
    CHECK(std::fabs(a_hat - 0.5) <= 0.2);
    CHECK(rep["residual_test"]["kind"] == "residual_based");
    CHECK(rep["acf"]["matrices"].size() == 21);
    CHECK(rep["se_corollary1"].size() == 2);
    CHECK(rep["se_hessian"].size() == 2);
}

TEST_CASE("non-convergence exits 2 but still writes the report") {
    run_cli("simulate --model mar --phi 0.5 --psi 0.3 --T 300 --nu 6 --seed 6 "
            "--out /tmp/gcov_it_noconv.csv");
    const RunResult r = run_cli(
        "estimate /tmp/gcov_it_noconv.csv --model mar --phi-order 1 "
        "--psi-order 1 --transforms identity,square --H 3 --seed 1 "
        "--max-iter 1 --out /tmp/gcov_it_noconv.json");
    CHECK(r.exit_code == 2);
    const json rep = json::parse(slurp("/tmp/gcov_it_noconv.json"));
    CHECK(rep["converged"] == false);
    CHECK(rep["theta"]["values"].size() == 2);  // diagnostics still present
}

TEST_CASE("montecarlo reproduces the published AR-ARCH row a = 0.5") {
    const RunResult r = run_cli(
        "montecarlo --family ar_arch --grid a=0.5,alpha=0.1:0.1:0.7 --T 400 "
        "--replications 100 --seed 7 --out /tmp/gcov_it_row");
    REQUIRE(r.exit_code == 0);
    const json tbl = json::parse(slurp("/tmp/gcov_it_row.json"));
    REQUIRE(tbl["cells"].size() == 7);

    // Published 90% intervals for the mean drift estimate in this row,
    // alpha = 0.1 .. 0.7.
    const double lo[] = {0.40, 0.40, 0.41, 0.42, 0.40, 0.39, 0.39};
    const double hi[] = {0.55, 0.57, 0.57, 0.57, 0.57, 0.60, 0.57};
    for (size_t i = 0; i < 7; ++i) {
        const double mean_a = tbl["cells"][i]["mean"][0].get<double>();
        CHECK(mean_a >= lo[i]);
        CHECK(mean_a <= hi[i]);
    }
}

TEST_CASE("synthetic MAR(3,3) walkthrough recovers the generator parameters") {
    // The documented walkthrough: simulate at the published MAR(3,3)
    // coefficient values, median-center, fit with (u, u^2, u^3) and H = 3.
    run_cli("simulate --model mar --phi 0.7029,0.1020,0.1666 "
            "--psi 0.3359,-0.0026,0.0072 --T 800 --nu 8 --seed 1 "
            "--out /tmp/gcov_it_mar33.csv");
    const json rep = run_json(
        "estimate /tmp/gcov_it_mar33.csv --model mar --phi-order 3 "
        "--psi-order 3 --transforms identity,square,cube --H 3 "
        "--center median --seed 1");
    CHECK(rep["converged"] == true);
    CHECK(rep["df"] == 21);  // 27 - 6
    const double phi1 = rep["theta"]["values"][0].get<double>();
    const double psi1 = rep["theta"]["values"][3].get<double>();
    CHECK(std::fabs(phi1 - 0.7029) <= 0.15);
    CHECK(std::fabs(psi1 - 0.3359) <= 0.15);
}
