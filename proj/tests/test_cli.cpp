#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fixsim/cli.hpp"
#include "fixsim/exact.hpp"

using namespace fixsim;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

// Data rows of a CSV emitted by the CLI (metadata and header stripped).
std::vector<std::vector<std::string>> csv_rows(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::vector<std::vector<std::string>> rows;
    std::string line;
    bool header_skipped = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_skipped) {
            header_skipped = true;
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

}  // namespace

TEST_CASE("certify subcommand emits the certificate") {
    const std::string out = "/tmp/fixsim_cli_certify.csv";
    const int rc = run_cli({"certify", "--a", "4", "--b", "2", "--c", "3",
                            "--d", "1", "--w", "0.3", "--out", out});
    CHECK(rc == 0);
    const std::string body = slurp(out);
    CHECK(body.find("# fixsim certify") != std::string::npos);
    CHECK(body.find("# version") != std::string::npos);
    CHECK(body.find("# config") != std::string::npos);
    CHECK(body.find("N0,4") != std::string::npos);
    CHECK(body.find("lambda,1.3") != std::string::npos);
    std::remove(out.c_str());
}

TEST_CASE("certify as json") {
    const std::string out = "/tmp/fixsim_cli_certify.json";
    const int rc = run_cli({"certify", "--w", "0.3", "--format", "json",
                            "--out", out});
    CHECK(rc == 0);
    const nlohmann::json j = nlohmann::json::parse(slurp(out));
    CHECK(j["command"] == "certify");
    CHECK(j["config"]["w"] == 0.3);
    bool found_n0 = false;
    for (const auto& row : j["rows"]) {
        if (row[0] == "N0") {
            CHECK(row[1] == "4");
            found_n0 = true;
        }
    }
    CHECK(found_n0);
    std::remove(out.c_str());
}

TEST_CASE("exact subcommand matches the library") {
    const std::string out = "/tmp/fixsim_cli_exact.csv";
    const int rc = run_cli({"exact", "--N", "20", "--out", out});
    CHECK(rc == 0);
    const auto rows = csv_rows(out);
    REQUIRE(rows.size() == 21);
    const FixationVector fv =
        solve_fixation(ChainKernel::wright_fisher(GameSpec{4, 2, 3, 1, 0.3}, 20));
    for (const auto& row : rows) {
        REQUIRE(row.size() == 4);
        const int i = std::stoi(row[0]);
        const double lower = std::stod(row[1]);
        const double p = std::stod(row[2]);
        const double upper = std::stod(row[3]);
        CHECK(p == doctest::Approx(fv.p[i]).epsilon(1e-11));
        CHECK(lower <= p + 1e-12);
        CHECK(p <= upper + 1e-12);
    }
    std::remove(out.c_str());
}

TEST_CASE("exact without a certificate omits bound columns") {
    const std::string out = "/tmp/fixsim_cli_exact_neutral.csv";
    const int rc = run_cli({"exact", "--w", "0", "--N", "10", "--out", out});
    CHECK(rc == 0);
    const std::string body = slurp(out);
    CHECK(body.find("bound columns omitted") != std::string::npos);
    const auto rows = csv_rows(out);
    REQUIRE(rows.size() == 11);
    for (const auto& row : rows) {
        REQUIRE(row.size() == 2);
        const int i = std::stoi(row[0]);
        CHECK(std::stod(row[1]) == doctest::Approx(i / 10.0).epsilon(1e-9));
    }
    std::remove(out.c_str());
}

TEST_CASE("bounds subcommand sandwiches the exact column") {
    const std::string out = "/tmp/fixsim_cli_bounds.csv";
    const int rc = run_cli({"bounds", "--N", "10", "20", "--model", "moran",
                            "--out", out});
    CHECK(rc == 0);
    const auto rows = csv_rows(out);
    REQUIRE(rows.size() == 9 + 19);
    for (const auto& row : rows) {
        REQUIRE(row.size() == 6);
        const double lower = std::stod(row[2]);
        const double exact = std::stod(row[3]);
        const double upper = std::stod(row[4]);
        CHECK(lower <= exact + 1e-12);
        CHECK(exact <= upper + 1e-12);
        CHECK(row[5] == "moran");
    }
    std::remove(out.c_str());
}

TEST_CASE("config file with flag override") {
    const std::string cfg_path = "/tmp/fixsim_cli_cfg.json";
    {
        std::ofstream cfg(cfg_path);
        cfg << R"({"a":4,"b":2,"c":3,"d":1,"w":0.5,"N":12,"seed":7})";
    }
    const std::string out = "/tmp/fixsim_cli_cfg_out.csv";
    // --w overrides the config file; N comes from the file.
    const int rc = run_cli({"certify", "--config", cfg_path, "--w", "0.3",
                            "--out", out});
    CHECK(rc == 0);
    const std::string body = slurp(out);
    CHECK(body.find("\"w\":0.3") != std::string::npos);
    CHECK(body.find("\"N\":[12]") != std::string::npos);
    CHECK(body.find("lambda,1.3") != std::string::npos);
    std::remove(cfg_path.c_str());
    std::remove(out.c_str());
}

TEST_CASE("malformed config leaves no partial output") {
    const std::string cfg_path = "/tmp/fixsim_cli_bad.json";
    {
        std::ofstream cfg(cfg_path);
        cfg << "{\"a\": 4,,}";
    }
    const std::string out = "/tmp/fixsim_cli_bad_out.csv";
    std::remove(out.c_str());
    const int rc = run_cli({"certify", "--config", cfg_path, "--out", out});
    CHECK(rc == 2);
    std::ifstream check_out(out);
    CHECK_FALSE(check_out.good());
    std::ifstream check_tmp(out + ".tmp");
    CHECK_FALSE(check_tmp.good());
    std::remove(cfg_path.c_str());

    // Unknown keys are rejected too.
    {
        std::ofstream cfg(cfg_path);
        cfg << R"({"alpha": 4})";
    }
    CHECK(run_cli({"certify", "--config", cfg_path, "--out", out}) == 2);
    std::remove(cfg_path.c_str());
}

TEST_CASE("exit codes map the error taxonomy") {
    // Unknown flag: argument error.
    CHECK(run_cli({"certify", "--bogus", "1"}) == 2);
    // Unknown subcommand.
    CHECK(run_cli({"frobnicate"}) == 2);
    // Domain error: no dominance certificate for these payoffs.
    CHECK(run_cli({"certify", "--a", "2", "--b", "4", "--c", "1", "--d", "3"}) == 3);
    // Domain error: solver cap exceeded.
    CHECK(run_cli({"exact", "--N", "50", "--cap", "10"}) == 3);
    // Config error: invalid payoffs.
    CHECK(run_cli({"certify", "--a", "-1"}) == 2);
    // Help exits cleanly.
    CHECK(run_cli({"--help"}) == 0);
}

TEST_CASE("figure1 on a coarse grid") {
    const std::string out = "/tmp/fixsim_cli_fig1.csv";
    const int rc = run_cli({"figure1", "--wmin", "0.3", "--wmax", "0.6",
                            "--wstep", "0.3", "--N", "30", "--replicas", "300",
                            "--serial", "--out", out});
    CHECK(rc == 0);
    const auto rows = csv_rows(out);
    REQUIRE(rows.size() == 2);
    CHECK(std::stod(rows[0][0]) == doctest::Approx(0.3));
    CHECK(std::stod(rows[1][0]) == doctest::Approx(0.6));
    // p_inf at w=0.3 is the frozen running-example value 1 - 0.5770.
    CHECK(std::stod(rows[0][1]) == doctest::Approx(0.42296995).epsilon(1e-6));
    for (const auto& row : rows) {
        const double p_mc = std::stod(row[2]);
        const double se = std::stod(row[3]);
        CHECK(p_mc >= 0.0);
        CHECK(p_mc <= 1.0);
        CHECK(se > 0.0);
    }
    CHECK(run_cli({"figure1", "--wmin", "0", "--out", out}) == 2);
    std::remove(out.c_str());
}

TEST_CASE("table1 on small sizes") {
    const std::string out = "/tmp/fixsim_cli_table1.csv";
    const int rc = run_cli({"table1", "--N", "10", "20", "--out", out});
    CHECK(rc == 0);
    const auto rows = csv_rows(out);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0][0] == "10");
    CHECK(std::stod(rows[0][1]) == doctest::Approx(0.6979).epsilon(0.03));
    CHECK(rows[0][3] == "exact");
    // The gap column shrinks with N.
    CHECK(std::stod(rows[1][2]) < std::stod(rows[0][2]));
    CHECK(std::stod(rows[1][2]) > 0.0);
    std::remove(out.c_str());
}

TEST_CASE("logplot emits per-capita rates and skips zero rows") {
    const std::string out = "/tmp/fixsim_cli_logplot.csv";
    const int rc = run_cli({"logplot", "--N", "200", "--i", "1", "2", "3",
                            "--out", out});
    CHECK(rc == 0);
    const auto rows = csv_rows(out);
    REQUIRE(rows.size() == 3);
    const FixationVector fv =
        solve_fixation(ChainKernel::wright_fisher(GameSpec{4, 2, 3, 1, 0.3}, 200));
    for (const auto& row : rows) {
        const int i = std::stoi(row[1]);
        const double expect = -std::log(1.0 - fv.p[i]) / i;
        CHECK(std::stod(row[2]) == doctest::Approx(expect).epsilon(1e-9));
    }

    // i = N has p = 1: the default quantity is zero and the row is skipped.
    const int rc2 = run_cli({"logplot", "--N", "10", "--i", "10", "--out", out});
    CHECK(rc2 == 0);
    CHECK(csv_rows(out).empty());
    CHECK(slurp(out).find("skipped N=10 i=10") != std::string::npos);

    // Caption-literal mode emits -(1/i) log p instead.
    const int rc3 = run_cli({"logplot", "--N", "10", "--i", "2",
                             "--caption-literal", "--out", out});
    CHECK(rc3 == 0);
    const auto rows3 = csv_rows(out);
    REQUIRE(rows3.size() == 1);
    const FixationVector fv10 =
        solve_fixation(ChainKernel::wright_fisher(GameSpec{4, 2, 3, 1, 0.3}, 10));
    CHECK(std::stod(rows3[0][2]) ==
          doctest::Approx(-std::log(fv10.p[2]) / 2.0).epsilon(1e-9));
    std::remove(out.c_str());
}

TEST_CASE("fixtime joins the empirical cdf with the window") {
    const std::string out = "/tmp/fixsim_cli_fixtime.csv";
    const int rc = run_cli({"fixtime", "--N", "300", "--i", "1", "--m", "1",
                            "2", "3", "--replicas", "2000", "--c0-replicas",
                            "5000", "--serial", "--out", out});
    CHECK(rc == 0);
    const std::string body = slurp(out);
    CHECK(body.find("estimated from coupling draws") != std::string::npos);
    const auto rows = csv_rows(out);
    REQUIRE(rows.size() == 3);
    for (const auto& row : rows) {
        REQUIRE(row.size() == 4);
        const double lower = std::stod(row[1]);
        const double emp = std::stod(row[2]);
        const double upper = std::stod(row[3]);
        CHECK(lower >= 0.0);
        CHECK(upper <= 1.0);
        CHECK(lower <= upper);
        CHECK(emp >= 0.0);
        CHECK(emp <= 1.0);
    }
    std::remove(out.c_str());
}

TEST_CASE("couple emits the mismatch table") {
    const std::string out = "/tmp/fixsim_cli_couple.csv";
    const int rc = run_cli({"couple", "--N", "100", "--J", "8", "--replicas",
                            "2000", "--serial", "--out", out});
    CHECK(rc == 0);
    const auto rows = csv_rows(out);
    REQUIRE(rows.size() == 8);
    for (const auto& row : rows) {
        REQUIRE(row.size() == 3);
        const double rate = std::stod(row[1]);
        const double bound = std::stod(row[2]);
        CHECK(rate >= 0.0);
        CHECK(rate <= bound + 1e-12);
    }
    std::remove(out.c_str());
}

TEST_CASE("couple emits triple paths") {
    const std::string out = "/tmp/fixsim_cli_triple.csv";
    const int rc = run_cli({"couple", "--N", "50", "--i", "10",
                            "--triple-steps", "25", "--out", out});
    CHECK(rc == 0);
    const auto rows = csv_rows(out);
    REQUIRE(rows.size() == 26);
    for (const auto& row : rows) {
        REQUIRE(row.size() == 4);
        const int x1 = std::stoi(row[1]);
        const int x2 = std::stoi(row[2]);
        const int x3 = std::stoi(row[3]);
        CHECK(x1 <= x2);
        CHECK(x2 <= x3);
    }
    std::remove(out.c_str());
}

TEST_CASE("fit subcommand round-trips an exact table") {
    const std::string pairs = "/tmp/fixsim_cli_pairs.csv";
    {
        std::ofstream f(pairs);
        f << "# synthetic pairs\n";
        f << "i,p\n";
        for (int i = 1; i <= 10; ++i) {
            f << i << "," << 1.0 - std::pow(0.6, i) << "\n";
        }
    }
    const std::string out = "/tmp/fixsim_cli_fit.csv";
    const int rc = run_cli({"fit", "--pairs", pairs, "--out", out});
    CHECK(rc == 0);
    const auto rows = csv_rows(out);
    bool found = false;
    for (const auto& row : rows) {
        if (row[0] == "q_fit") {
            CHECK(std::stod(row[1]) == doctest::Approx(0.6).epsilon(1e-7));
            found = true;
        }
    }
    CHECK(found);

    // Degenerate inputs surface as a domain error.
    {
        std::ofstream f(pairs);
        f << "1,1\n2,1\n";
    }
    CHECK(run_cli({"fit", "--pairs", pairs, "--out", out}) == 3);
    std::remove(pairs.c_str());
    std::remove(out.c_str());
}
