#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

namespace {

using nlohmann::json;

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void spit(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    f << content;
}

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

/// Runs the installed binary with the given argument string, capturing both
/// streams through temp files.
CliResult run_cli(const std::string& args) {
    const std::string out_path = "/tmp/quadisc_cli_test_out.txt";
    const std::string err_path = "/tmp/quadisc_cli_test_err.txt";
    const std::string cmd =
        std::string(QUADISC_CLI_PATH) + " " + args + " >" + out_path + " 2>" + err_path;
    const int status = std::system(cmd.c_str());
    CliResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out_path);
    r.err = slurp(err_path);
    return r;
}

std::vector<std::vector<double>> parse_csv_rows(const std::string& text) {
    std::vector<std::vector<double>> rows;
    std::istringstream lines(text);
    std::string line;
    bool header = true;
    while (std::getline(lines, line)) {
        if (header) { // skip the column-name row
            header = false;
            continue;
        }
        std::vector<double> row;
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) {
            if (cell == "nan")
                row.push_back(std::numeric_limits<double>::quiet_NaN());
            else if (cell == "inf")
                row.push_back(std::numeric_limits<double>::infinity());
            else if (cell == "-inf")
                row.push_back(-std::numeric_limits<double>::infinity());
            else {
                try {
                    row.push_back(std::stod(cell));
                } catch (const std::exception&) {
                    row.push_back(std::numeric_limits<double>::quiet_NaN());
                }
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace

TEST_CASE("invert emits the four-degree chi-squared value", "[cli]") {
    const CliResult r = run_cli("invert --gf lego --m 5 --t 4");
    REQUIRE(r.exit_code == 0);
    const auto rows = parse_csv_rows(r.out);
    REQUIRE(rows.size() == 1);
    REQUIRE(rows[0].size() == 3);
    REQUIRE(rows[0][0] == 4.0);
    REQUIRE(rows[0][1] == Catch::Approx(0.13534).margin(1e-4));
    REQUIRE(std::abs(rows[0][2]) < 1e-8);
}

TEST_CASE("discrepancy subcommand covers all three kinds", "[cli]") {
    spit("/tmp/quadisc_cli_pts1.csv", "0.5\n");
    const CliResult l2 = run_cli("discrepancy --points /tmp/quadisc_cli_pts1.csv");
    REQUIRE(l2.exit_code == 0);
    REQUIRE(parse_csv_rows(l2.out)[0][3] == Catch::Approx(1.0 / 12.0).epsilon(1e-10));

    const CliResult dw =
        run_cli("discrepancy --points /tmp/quadisc_cli_pts1.csv --kind wiener --m 2");
    REQUIRE(dw.exit_code == 0);
    REQUIRE(parse_csv_rows(dw.out)[0][3] == Catch::Approx(0.125).epsilon(1e-12));

    spit("/tmp/quadisc_cli_pts3.csv", "0.1\n0.5\n0.9\n");
    const CliResult lego = run_cli(
        "discrepancy --points /tmp/quadisc_cli_pts3.csv --kind lego --w 0.25,0.25,0.5");
    REQUIRE(lego.exit_code == 0);
    // counts (1,0,2): (1/3)(1/0.25 + 4/0.5) - 3 = 1.
    REQUIRE(parse_csv_rows(lego.out)[0][3] == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("eigen emits a JSON eigenvalue list", "[cli]") {
    const CliResult r = run_cli("eigen --a 1,2,3 --b 1,1,1 --eps 1");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.out);
    const std::vector<double> ev = j.at("eigenvalues").get<std::vector<double>>();
    REQUIRE(ev.size() == 3);
    double sum = 0.0;
    for (const double v : ev) sum += v;
    REQUIRE(sum == Catch::Approx(9.0).epsilon(1e-10));
    REQUIRE((ev[0] > 1.0 && ev[0] < 2.0));
}

TEST_CASE("validation failures exit with code 2", "[cli]") {
    REQUIRE(run_cli("invert --gf lego --m 5 --t 4 --bogus 1").exit_code == 2);
    REQUIRE(run_cli("invert --gf lego --m 3 --t 4").exit_code == 2); // tail not integrable
    REQUIRE(run_cli("invert --gf nope --t 4").exit_code == 2);
    REQUIRE(run_cli("invert --gf lego --m 5").exit_code == 2); // no grid at all
    REQUIRE(run_cli("gf --gf lego --m 5 --z-re 0.5").exit_code == 2); // pole
    REQUIRE(run_cli("discrepancy --points /tmp/quadisc_no_such_file.csv").exit_code == 2);
    REQUIRE(run_cli("fig --id 9").exit_code == 2);
    REQUIRE(run_cli("eigen --a 1,2 --b 1,junk").exit_code == 2);
    REQUIRE(run_cli("nonsense-subcommand").exit_code == 2);
}

TEST_CASE("identical invocations give byte-identical files", "[cli]") {
    const std::string args =
        "gf --gf wiener --z-min 0 --z-max 2 --steps 16 --out /tmp/quadisc_cli_rep";
    REQUIRE(run_cli(args + "1.csv").exit_code == 0);
    REQUIRE(run_cli(args + "2.csv").exit_code == 0);
    REQUIRE(slurp("/tmp/quadisc_cli_rep1.csv") == slurp("/tmp/quadisc_cli_rep2.csv"));
    REQUIRE(!slurp("/tmp/quadisc_cli_rep1.csv").empty());
}

TEST_CASE("mc output depends on the seed and nothing else", "[cli]") {
    // A continuous sampling class: distinct seeds collide with probability
    // zero (a binned class can land on the same counts by chance).
    const std::string base = "mc --class wiener --n 8 --reps 50 --z-re 0.1 --seed ";
    const CliResult a1 = run_cli(base + "5");
    const CliResult a2 = run_cli(base + "5");
    const CliResult b = run_cli(base + "6");
    REQUIRE(a1.exit_code == 0);
    REQUIRE(a1.out == a2.out);
    REQUIRE(a1.out != b.out);

    // stderr column present and positive for a non-degenerate sample.
    const auto rows = parse_csv_rows(a1.out);
    REQUIRE(rows[0].size() == 5);
    REQUIRE(rows[0][4] > 0.0);
}

TEST_CASE("config file merges under explicit flags", "[cli]") {
    spit("/tmp/quadisc_cli_cfg.json", "{\"m\": 7, \"t\": 2.0}\n");

    // Config alone: six degrees of freedom at t = 2 -> e^{-1}/4.
    const CliResult cfg = run_cli("invert --gf lego --config /tmp/quadisc_cli_cfg.json");
    REQUIRE(cfg.exit_code == 0);
    REQUIRE(parse_csv_rows(cfg.out)[0][1] ==
            Catch::Approx(std::exp(-1.0) / 4.0).margin(1e-6));

    // Explicit --t wins over the config value; --m still comes from config.
    const CliResult ovr =
        run_cli("invert --gf lego --config /tmp/quadisc_cli_cfg.json --t 4");
    REQUIRE(ovr.exit_code == 0);
    REQUIRE(parse_csv_rows(ovr.out)[0][0] == 4.0);
    REQUIRE(parse_csv_rows(ovr.out)[0][1] == Catch::Approx(std::exp(-2.0)).margin(1e-6));

    spit("/tmp/quadisc_cli_badcfg.json", "{\"no_such_flag\": 1}\n");
    REQUIRE(run_cli("invert --t 4 --config /tmp/quadisc_cli_badcfg.json").exit_code == 2);

    spit("/tmp/quadisc_cli_junkcfg.json", "not json\n");
    REQUIRE(run_cli("invert --t 4 --config /tmp/quadisc_cli_junkcfg.json").exit_code == 2);
}

TEST_CASE("figure emitters produce the advertised tables", "[cli]") {
    const CliResult f1 = run_cli("fig --id 1 --v 2 --steps 8");
    REQUIRE(f1.exit_code == 0);
    const auto rows1 = parse_csv_rows(f1.out);
    REQUIRE(rows1.size() == 11); // 9 curve points + 2 markers
    // Markers sit on the level line e^v and on the curve e^y / y.
    for (const std::size_t i : {rows1.size() - 2, rows1.size() - 1}) {
        REQUIRE(rows1[i][2] == 1.0);
        REQUIRE(rows1[i][1] == Catch::Approx(std::exp(2.0)).epsilon(1e-10));
        REQUIRE(std::exp(rows1[i][0]) / rows1[i][0] ==
                Catch::Approx(std::exp(2.0)).epsilon(1e-9));
    }

    const CliResult f2 = run_cli("fig --id 2 --w-plus 0.09 --v-max 10 --steps 8");
    REQUIRE(f2.exit_code == 0);
    const auto rows2 = parse_csv_rows(f2.out);
    REQUIRE(rows2.size() == 9);
    REQUIRE(rows2[0][3] == Catch::Approx(0.23814846679).margin(1e-9));

    const CliResult f3 = run_cli(
        "fig --id 3 --grid 64 --summary-out /tmp/quadisc_cli_fig3.json");
    REQUIRE(f3.exit_code == 0);
    const auto rows3 = parse_csv_rows(f3.out);
    REQUIRE(rows3.size() == 65);
    // Re-anchored start: all three profiles begin at the same turning point.
    REQUIRE(rows3[0][1] == Catch::Approx(rows3[0][2]).margin(1e-10));
    REQUIRE(rows3[0][1] == Catch::Approx(rows3[0][3]).margin(1e-10));
    const json sum3 = json::parse(slurp("/tmp/quadisc_cli_fig3.json"));
    const std::vector<double> zs = sum3.at("z").get<std::vector<double>>();
    REQUIRE(zs[1] / zs[0] == Catch::Approx(4.0).epsilon(1e-10));
    REQUIRE(zs[2] / zs[0] == Catch::Approx(9.0).epsilon(1e-10));

    for (const char* args : {"fig --id 4 --steps 6", "fig --id 5 --steps 6"}) {
        const CliResult f = run_cli(args);
        REQUIRE(f.exit_code == 0);
        const auto rows = parse_csv_rows(f.out);
        REQUIRE(rows.size() == 7);
        REQUIRE(rows[0].size() == 4);
        REQUIRE(std::isnan(rows[0][3])); // asymptotic column empty below E = 1
        REQUIRE(!std::isnan(rows.back()[3]));
    }
}

TEST_CASE("lego-instanton scan and summary", "[cli]") {
    const CliResult r = run_cli(
        "lego-instanton --w-plus 0.09 --v-max 10 --steps 40 "
        "--out /tmp/quadisc_cli_li.csv --summary-out /tmp/quadisc_cli_li.json");
    REQUIRE(r.exit_code == 0);
    const auto rows = parse_csv_rows(slurp("/tmp/quadisc_cli_li.csv"));
    REQUIRE(rows.size() == 41);
    REQUIRE(rows[0][0] == 1.0);
    REQUIRE(rows[0][3] == 0.5); // z at the degenerate end
    REQUIRE(std::isinf(rows[0][4]));

    const json s = json::parse(slurp("/tmp/quadisc_cli_li.json"));
    REQUIRE(s.at("v_c").get<double>() == Catch::Approx(8.70163498881).margin(1e-5));
    REQUIRE(s.at("wall_threshold").get<double>() ==
            Catch::Approx(0.23814846679).margin(1e-9));
    REQUIRE(s.at("wall_region_found").get<bool>());
    REQUIRE(s.at("min_z").get<double>() < 0.25);
}

TEST_CASE("wiener-instanton scan and profile modes", "[cli]") {
    const CliResult scan = run_cli("wiener-instanton --e-min 0.5 --e-max 4 --steps 7");
    REQUIRE(scan.exit_code == 0);
    const auto rows = parse_csv_rows(scan.out);
    REQUIRE(rows.size() == 8);
    REQUIRE(rows[0].size() == 7);
    REQUIRE(rows[0][1] == Catch::Approx(4.6296814661667625).margin(1e-8));
    REQUIRE(rows[0][1] == Catch::Approx(rows[0][2]).margin(1e-8)); // series agrees here
    REQUIRE(std::isnan(rows[0][3]));
    REQUIRE(rows.back()[0] == 4.0);

    const CliResult prof = run_cli("wiener-instanton --profile 1.0,2,64");
    REQUIRE(prof.exit_code == 0);
    const auto prows = parse_csv_rows(prof.out);
    REQUIRE(prows.size() == 65);
    REQUIRE(prows[0][0] == 0.0);
    REQUIRE(prows.back()[0] == 1.0);
    // Two bends: ends meet at the same value.
    REQUIRE(prows[0][1] == Catch::Approx(prows.back()[1]).margin(1e-10));

    REQUIRE(run_cli("wiener-instanton --profile 1.0,2").exit_code == 2);
    REQUIRE(run_cli("wiener-instanton --profile 1.0,2.5,64").exit_code == 2);
}
