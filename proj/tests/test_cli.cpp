#include <cmath>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"

using testutil::read_file;
using testutil::run_command;
using testutil::write_file;

namespace {

const std::string kBin = "\"" RUINCALC_PATH "\"";
const std::string kConfigDir = CONFIG_DIR;

std::string golden_unprof_path() {
    const std::string path = "cli_golden_unprof.json";
    write_file(path, testutil::golden_unprofitable_json());
    return path;
}

std::string golden_prof_path() {
    const std::string path = "cli_golden_prof.json";
    write_file(path, testutil::golden_profitable_json());
    return path;
}

// value of a "name:   1.25" report line
double report_value(const std::string& output, const std::string& key) {
    std::istringstream is(output);
    std::string line;
    while (std::getline(is, line)) {
        if (line.rfind(key + ":", 0) == 0) return std::strtod(line.c_str() + key.size() + 1, nullptr);
    }
    return std::nan("");
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

} // namespace

TEST_CASE("cli moments golden values") {
    auto r = run_command(kBin + " moments --config " + golden_unprof_path() + " --x 1");
    CHECK(r.exit_code == 0);
    CHECK(report_value(r.output, "mean") == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(report_value(r.output, "ruin_prob") == 1.0);
    CHECK(report_value(r.output, "variance") == doctest::Approx(81.0).epsilon(1e-10));

    auto p = run_command(kBin + " moments --config " + golden_prof_path() + " --x 2");
    CHECK(p.exit_code == 0);
    CHECK(report_value(p.output, "mean") == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(report_value(p.output, "ruin_prob") ==
          doctest::Approx(0.75 * std::exp(-2.0 / 6.0)).epsilon(1e-12));
}

TEST_CASE("cli moments methods agree") {
    const std::string cfg = golden_unprof_path();
    auto closed = run_command(kBin + " moments --config " + cfg + " --x 2 --method closed");
    auto general = run_command(kBin + " moments --config " + cfg + " --x 2 --method general");
    auto conv = run_command(kBin + " moments --config " + cfg + " --x 2 --method conv");
    CHECK(closed.exit_code == 0);
    CHECK(general.exit_code == 0);
    CHECK(conv.exit_code == 0);
    const double m = report_value(closed.output, "mean");
    CHECK(m == doctest::Approx(7.0).epsilon(1e-12));
    CHECK(report_value(general.output, "mean") == doctest::Approx(m).epsilon(1e-10));
    CHECK(report_value(conv.output, "mean") == doctest::Approx(m).epsilon(1e-3));
}

TEST_CASE("cli rejects bad configs and usage with exit code 2") {
    CHECK(run_command(kBin + " moments --config does_not_exist.json --x 1").exit_code == 2);

    write_file("cli_bad_syntax.json", "{ not json");
    CHECK(run_command(kBin + " moments --config cli_bad_syntax.json --x 1").exit_code == 2);

    write_file("cli_bad_schema.json",
               "{\"p\": 1.0, \"sigma2\": 0.0, \"lambda\": 1.0,\n"
               " \"claims\": {\"kind\": \"phase-type\", \"alpha\": [0.5, 0.5],\n"
               "             \"T\": [[-1.0, 0.0]]}}\n");
    CHECK(run_command(kBin + " moments --config cli_bad_schema.json --x 1").exit_code == 2);

    write_file("cli_bad_gamma.json",
               "{\"p\": 1.0, \"sigma2\": 0.0, \"lambda\": 1.0,\n"
               " \"claims\": {\"kind\": \"exponential\", \"gamma\": -2.0}}\n");
    CHECK(run_command(kBin + " moments --config cli_bad_gamma.json --x 1").exit_code == 2);

    CHECK(run_command(kBin).exit_code == 2);                      // missing subcommand
    CHECK(run_command(kBin + " frobnicate").exit_code == 2);      // unknown subcommand
    CHECK(run_command(kBin + " moments --x 1").exit_code == 2);   // missing --config
    CHECK(run_command(kBin + " moments --config " + golden_unprof_path() + " --x 1 --k 3")
              .exit_code == 2);
    CHECK(run_command(kBin + " moments --config " + golden_unprof_path() + " --x 1 --method fast")
              .exit_code == 2);
}

TEST_CASE("cli domain errors exit with code 3") {
    auto r = run_command(kBin + " moments --config " + golden_unprof_path() + " --x -1");
    CHECK(r.exit_code == 3);
    CHECK(r.output.find("NegativeArgument") != std::string::npos);
}

TEST_CASE("cli curve emits a lossless csv") {
    const std::string cfg = golden_unprof_path();
    auto r = run_command(kBin + " curve --config " + cfg +
                         " --x-min 0 --x-max 10 --steps 11 --out cli_curve.csv");
    CHECK(r.exit_code == 0);
    const std::string csv = read_file("cli_curve.csv");
    std::istringstream is(csv);
    std::string line;
    REQUIRE(std::getline(is, line));
    CHECK(line == "x,ruin_prob,mean,second,variance");
    int rows = 0;
    while (std::getline(is, line)) {
        auto fields = split(line, ',');
        REQUIRE(fields.size() == 5);
        const double x = std::strtod(fields[0].c_str(), nullptr);
        CHECK(x == doctest::Approx(static_cast<double>(rows)).epsilon(1e-15));
        const double mean = std::strtod(fields[2].c_str(), nullptr);
        CHECK(mean == doctest::Approx(2.0 * x + 3.0).epsilon(1e-12));
        // %.17g formatting is lossless: re-rendering the parsed value gives the same text
        for (const auto& f : fields) {
            char buf[40];
            std::snprintf(buf, sizeof(buf), "%.17g", std::strtod(f.c_str(), nullptr));
            CHECK(f == buf);
        }
        ++rows;
    }
    CHECK(rows == 11);
    CHECK(csv.find('\r') == std::string::npos); // \n endings only
}

TEST_CASE("cli curve with one step emits a single row") {
    auto r = run_command(kBin + " curve --config " + golden_unprof_path() +
                         " --x-min 2.5 --x-max 9 --steps 1 --out cli_single.csv");
    CHECK(r.exit_code == 0);
    const std::string csv = read_file("cli_single.csv");
    std::istringstream is(csv);
    std::string header, row, extra;
    REQUIRE(std::getline(is, header));
    REQUIRE(std::getline(is, row));
    CHECK(!std::getline(is, extra));
    CHECK(row.rfind("2.5,", 0) == 0);
}

TEST_CASE("cli curve refuses unwritable outputs") {
    auto r = run_command(kBin + " curve --config " + golden_unprof_path() +
                         " --x-min 0 --x-max 1 --steps 2 --out /nonexistent_dir/x.csv");
    CHECK(r.exit_code == 2);
}

TEST_CASE("cli mc is deterministic and self-consistent") {
    const std::string cmd = kBin + " mc --config " + golden_unprof_path() +
                            " --x 1 --paths 2000 --seed 7";
    auto a = run_command(cmd);
    auto b = run_command(cmd);
    CHECK(a.exit_code == 0); // z-scores inside the tripwire for this seed
    CHECK(a.output == b.output);
    CHECK(a.output.find("ruin_prob") != std::string::npos);

    auto t = run_command(cmd + " --out cli_mc.txt");
    CHECK(t.output == read_file("cli_mc.txt"));
}

TEST_CASE("cli mc reports all-escape runs with exit code 3") {
    auto r = run_command(kBin + " mc --config " + golden_prof_path() +
                         " --x 300 --paths 20 --seed 3");
    CHECK(r.exit_code == 3);
    CHECK(r.output.find("NoRuinObserved") != std::string::npos);
}

TEST_CASE("cli check passes on the golden and shipped configs") {
    auto g = run_command(kBin + " check --config " + golden_unprof_path());
    CHECK(g.exit_code == 0);
    CHECK(g.output.find("PASS") != std::string::npos);
    CHECK(g.output.find("FAIL") == std::string::npos);

    for (const char* name :
         {"figure1_x_unprof_s0", "figure1_x_prof_s2", "figure1_y_unprof_s2", "figure1_y_prof_s0",
          "figure1_z_unprof_s0", "figure1_z_prof_s2"}) {
        auto r = run_command(kBin + " check --config " + kConfigDir + "/" + name + ".json");
        CHECK(r.exit_code == 0);
        CHECK(r.output.find("FAIL") == std::string::npos);
    }
}

TEST_CASE("cli check reports degenerate models") {
    write_file("cli_dup_rate.json",
               "{\"p\": 1.2, \"sigma2\": 0.0, \"lambda\": 0.8,\n"
               " \"claims\": {\"kind\": \"phase-type\", \"alpha\": [0.5, 0.5],\n"
               "             \"T\": [[-1.0, 0.0], [0.0, -1.0]]}}\n");
    auto dup = run_command(kBin + " check --config cli_dup_rate.json");
    CHECK(dup.exit_code == 3);
    CHECK(dup.output.find("MultipleRootDetected") != std::string::npos);

    write_file("cli_critical.json",
               "{\"p\": 1.5, \"sigma2\": 0.0, \"lambda\": 1.0,\n"
               " \"claims\": {\"kind\": \"exponential\", \"gamma\": 0.66666666666666663}}\n");
    auto crit = run_command(kBin + " check --config cli_critical.json");
    CHECK(crit.exit_code == 3);
    CHECK(crit.output.find("CriticalDrift") != std::string::npos);
}
