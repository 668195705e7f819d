#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "twistxxz/twistxxz.h"

using json = nlohmann::json;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + (env.empty() ? "" : " ") + TWISTXXZ_CLI_PATH + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    Run r;
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

json run_json(const std::string& args) {
    const auto r = run(args);
    REQUIRE_MESSAGE(r.code == 0, args);
    return json::parse(r.out);
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string c;
        while (std::getline(ls, c, ',')) cells.push_back(c);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        rows.push_back(cells);
    }
    return rows;
}

std::filesystem::path temp_path(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("twistxxz_cli_" + std::to_string(::getpid()) + "_" + name);
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream f(p);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
}

}  // namespace

TEST_CASE("ed lowest level and trace") {
    const auto j = run_json("ed --n 6");
    REQUIRE(j["states"].size() == 64);
    CHECK(std::abs(j["states"][0]["energy"].get<double>() + 6.4785) < 1e-3);
    CHECK(std::abs(j["states"][63]["energy"].get<double>() - 8.7513) < 1e-3);

    const auto j2 = run_json("ed --n 2");
    REQUIRE(j2["states"].size() == 4);
    double sum = 0.0;
    for (const auto& s : j2["states"]) sum += s["energy"].get<double>();
    CHECK(std::abs(sum) < 1e-10);
}

TEST_CASE("csv and json carry identical values") {
    const auto j = run_json("ed --n 6");
    const auto r = run("ed --n 6 --format csv");
    REQUIRE(r.code == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 65);
    CHECK(rows[0] == std::vector<std::string>{"index", "energy", "parity"});
    for (std::size_t i = 0; i < 64; ++i) {
        CHECK(std::strtod(rows[i + 1][1].c_str(), nullptr) == j["states"][i]["energy"].get<double>());
        CHECK(std::stoi(rows[i + 1][2]) == j["states"][i]["parity"].get<int>());
    }
}

TEST_CASE("json floats round-trip bit for bit") {
    txxz_model* m = nullptr;
    REQUIRE(txxz_model_create(6, {0.0, M_PI / 3.0}, &m) == TXXZ_OK);
    txxz_spectrum* s = nullptr;
    REQUIRE(txxz_spectrum_compute(m, &s) == TXXZ_OK);
    std::vector<double> e(64);
    txxz_spectrum_eigenvalues(s, e.data(), 64);
    txxz_spectrum_destroy(s);
    txxz_model_destroy(m);
    const auto j = run_json("ed --n 6");
    for (std::size_t i = 0; i < 64; ++i) CHECK(j["states"][i]["energy"].get<double>() == e[i]);
    // parse and re-emit
    const auto again = json::parse(j.dump());
    CHECK(again == j);

    double closed = 0.0;
    txxz_ground_energy_density(&closed, nullptr);
    CHECK(run_json("thermo --quantity eg")["value"].get<double>() == closed);
}

TEST_CASE("thermo and scatter examples") {
    const auto eg = run_json("thermo --quantity eg");
    CHECK(std::abs(eg["value"].get<double>() + 1.098076) < 1e-6);
    CHECK(std::abs(eg["quadrature"].get<double>() - eg["value"].get<double>()) < 1e-8);
    const auto de1 = run_json("thermo --quantity de1 --alpha 0");
    CHECK(std::abs(de1["value"].get<double>() - 2.598076) < 1e-6);
    const auto de2 = run_json("thermo --quantity de2 --grid=-2:2:5 --quadrature");
    REQUIRE(de2["samples"].size() == 5);
    for (const auto& s : de2["samples"])
        CHECK(std::abs(s["value"].get<double>() - s["quadrature"].get<double>()) < 1e-6);
    CHECK(std::abs(de2["samples"][2]["value"].get<double>() - 3.0 * std::sqrt(6.0)) < 1e-10);

    const auto sc = run_json("scatter --process I_I --a1 0 --a2 0");
    REQUIRE(sc["values"].size() == 1);
    CHECK(sc["values"][0]["s"]["re"].get<double>() == doctest::Approx(1.0));
    CHECK(std::abs(sc["values"][0]["s"]["im"].get<double>()) < 1e-15);

    const auto grid = run_json("scatter --process I_II --grid=-1:1:10");
    REQUIRE(grid["values"].size() == 100);
    for (const auto& v : grid["values"])
        CHECK(std::abs(std::hypot(v["s"]["re"].get<double>(), v["s"]["im"].get<double>()) - 1.0) < 1e-12);

    const auto fill = run_json("thermo --quantity filling --n 8 --excite II@0.3");
    CHECK(std::abs(fill["value"].get<double>() - 5.0 / 8.0) < 1e-6);
    const auto rho = run_json("thermo --quantity rho --grid=-1:1:3");
    REQUIRE(rho["samples"].size() == 3);
    CHECK(rho["n"] == "infinity");
}

TEST_CASE("bae solves and records its inputs") {
    const auto j = run_json("bae --n 6 --state type2 --value 2");
    REQUIRE(j["solutions"].size() == 1);
    const auto& s = j["solutions"][0];
    CHECK(s["status"] == "converged");
    CHECK(s["pattern"]["name"] == "type-II");
    CHECK(s["roots"].size() == 5);
    CHECK(s["residual"].get<double>() < 1e-12);

    const auto r = run_json("bae --n 4 --seed 99 --spread 0.05");
    CHECK(r["seed"] == 99);
    REQUIRE(r["thetas"].size() == 4);
    for (const auto& t : r["thetas"]) CHECK(std::abs(t["re"].get<double>()) <= 0.05);

    const auto scan = run_json("bae --n 4 --scan --compare-ed");
    CHECK(scan["solutions"].size() == 8);
    CHECK(scan["ed_match"]["unmatched_ed"] == 0);
    CHECK(scan["ed_match"]["unmatched_bae"] == 0);
}

TEST_CASE("table1 default run") {
    const auto j = run_json("table1");
    CHECK(j["matched"] == 32);
    CHECK(j["total"] == 32);
    CHECK(j["max_printed_deviation"].get<double>() < 1e-3);
    CHECK(j["max_ed_deviation"].get<double>() < 1e-8);

    const auto fine = run_json("table1 --tol 1e-9");
    CHECK(fine["matched"] == 32);
    CHECK(fine["max_ed_deviation"].get<double>() < 1e-8);
}

TEST_CASE("table1 flags a corrupted fixture") {
    std::ifstream in(std::string(TWISTXXZ_DATA_DIR) + "/table1.csv");
    std::stringstream all;
    all << in.rdbuf();
    std::string text = all.str();
    const std::string needle = "\n7,-0.3047,";
    const auto at = text.find(needle);
    REQUIRE(at != std::string::npos);
    text.replace(at, needle.size(), "\n7,-0.3147,");
    const auto path = temp_path("bad.csv");
    std::ofstream(path) << text;
    const auto r = run("table1 --fixture " + path.string());
    CHECK(r.code != 0);
    const auto j = json::parse(r.out);
    for (const auto& lv : j["levels"]) CHECK(lv["pass"].get<bool>() == (lv["level"] != 7));
    std::filesystem::remove(path);
}

TEST_CASE("exit codes") {
    CHECK(run("ed --n 13").code == 2);
    CHECK(run("ed --n 4 --format xml").code == 2);
    CHECK(run("thermo --quantity nope").code == 2);
    CHECK(run("").code == 2);
    CHECK(run("--help").code == 0);
    CHECK(run("bae --n 6 --roots 0:0,0.1:0,0.2:0,0.3:0,0.4:0 --max-iter 2").code == 3);
    CHECK(run("table1 --fixture /nonexistent/table.csv").code == 4);
    CHECK(run("ed --n 4 --output /nonexistent/dir/out.json").code == 4);
    CHECK(run("table1", "TWISTXXZ_THREADS=zero").code == 2);
}

TEST_CASE("output file equals stdout") {
    const auto path = temp_path("ed.json");
    REQUIRE(run("ed --n 4 --output " + path.string()).code == 0);
    CHECK(read_file(path) == run("ed --n 4").out);
    std::filesystem::remove(path);
}

TEST_CASE("runs are deterministic across thread counts") {
    const auto a = run("table1", "TWISTXXZ_THREADS=1");
    const auto b = run("table1", "TWISTXXZ_THREADS=4");
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    const auto v1 = run("verify --n 4 --seed 5", "TWISTXXZ_THREADS=1");
    const auto v2 = run("verify --n 4 --seed 5", "TWISTXXZ_THREADS=3");
    REQUIRE(v1.code == 0);
    CHECK(v1.out == v2.out);
    const auto j = json::parse(v1.out);
    CHECK(j["seed"] == 5);
    CHECK(j["pass"] == true);
    CHECK(j["states_passed"].get<int>() >= 5);
}
