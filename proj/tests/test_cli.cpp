// End-to-end checks of the command-line tool: exit codes, printed results,
// written documents. The binary path comes from the build system.

#include "theicp/examples.hpp"
#include "theicp/io.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <unistd.h>

using namespace theicp;
namespace fs = std::filesystem;

namespace {

fs::path data_dir() { return fs::path(THEICP_DATA_DIR); }

fs::path work_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() /
                     ("theicp_cli_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(THEICP_CLI_PATH) + " " + args + " > " +
                            (work_dir() / "stdout.txt").string() + " 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string last_stdout() {
    std::ifstream in(work_dir() / "stdout.txt");
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    return text;
}

std::string example1() { return (data_dir() / "example1.problem").string(); }

}  // namespace

TEST_CASE("cli solve on the first bundled row") {
    const fs::path out = work_dir() / "solve1.json";
    const fs::path trace = work_dir() / "trace1.csv";
    const int rc = run_cli("solve --problem " + example1() +
                           " --u0 0.3829,0.0846,0.7339,0.3320 --gamma1 200 --gamma2 10"
                           " --trace " + trace.string() + " --out " + out.string());
    CHECK(rc == 0);

    io::ResultDocument doc = io::load_result(out);
    REQUIRE(doc.records.size() == 1);
    const auto& r = doc.records[0];
    CHECK(r.status == "converged_nonzero");
    CHECK(std::abs(r.lambda - 0.6830) <= 5e-4);
    CHECK(r.support == std::vector<int>{3});
    CHECK(r.passed);

    // trace: header plus one row per iteration, final relerr under tol
    std::ifstream tin(trace);
    std::string header;
    std::getline(tin, header);
    CHECK(header == "iter,relerr,objective,violation");
    std::string line, last;
    int rows = 0;
    while (std::getline(tin, line))
        if (!line.empty()) {
            last = line;
            ++rows;
        }
    CHECK(rows == r.total_iterations);
    double it, relerr, obj, viol;
    REQUIRE(std::sscanf(last.c_str(), "%lf,%lf,%lf,%lf", &it, &relerr, &obj, &viol) == 4);
    CHECK(relerr <= 1e-6);
}

TEST_CASE("cli solve result documents self-validate through verify") {
    const fs::path out = work_dir() / "solve2.json";
    REQUIRE(run_cli("solve --problem " + example1() +
                    " --u0 0.8397,0.3717,0.8282,0.1765 --gamma1 200 --gamma2 10 --out " +
                    out.string()) == 0);
    io::ResultDocument doc = io::load_result(out);
    REQUIRE(doc.records.size() == 1);
    const auto& r = doc.records[0];
    std::string x_csv;
    for (Eigen::Index i = 0; i < r.x.size(); ++i) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", r.x[i]);
        x_csv += buf;
        if (i + 1 < r.x.size()) x_csv += ",";
    }
    char lam[32];
    std::snprintf(lam, sizeof lam, "%.17g", r.lambda);
    CHECK(run_cli("verify --problem " + example1() + " --lambda " + lam + " --x " + x_csv +
                  " --tol 1e-5") == 0);
}

TEST_CASE("cli solve exit codes") {
    SUBCASE("iteration cap exits 3") {
        CHECK(run_cli("solve --problem " + example1() +
                      " --u0 0.3829,0.0846,0.7339,0.3320 --max-iter 1") == 3);
    }
    SUBCASE("bad flags exit 1") {
        CHECK(run_cli("solve --problem " + example1()) == 1);          // no start
        CHECK(run_cli("solve --no-such-flag") == 1);                   // unknown flag
        CHECK(run_cli("solve --problem /nonexistent.problem --random") == 1);
        CHECK(run_cli("solve --problem " + example1() + " --u0 0.1,0.2") == 1);  // wrong n
    }
    SUBCASE("random start with seed works") {
        CHECK(run_cli("solve --problem " + example1() + " --random --seed 3") == 0);
    }
}

TEST_CASE("cli enumerate") {
    const fs::path out = work_dir() / "enum1.json";
    CHECK(run_cli("enumerate --problem " + example1() + " --max-support 1 --out " +
                  out.string()) == 0);
    io::ResultDocument doc = io::load_result(out);
    int matched = 0;
    for (double expect : {0.6830, 1.6563, 0.8392, 1.0561})
        for (const auto& r : doc.records)
            if (std::abs(r.lambda - expect) <= 1e-4) {
                ++matched;
                break;
            }
    CHECK(matched == 4);
    for (const auto& r : doc.records) {
        CHECK(r.status == "enumerated");
        CHECK(r.passed);
        CHECK(r.method == "closed_form_univariate");
    }
    const std::string text = last_stdout();
    CHECK(text.find("bound n*m^n = 64") != std::string::npos);
    CHECK(text.find("exact_for_singletons") != std::string::npos);
}

TEST_CASE("cli verify") {
    SUBCASE("published row passes at print tolerance") {
        CHECK(run_cli("verify --problem " + example1() +
                      " --lambda 0.6830 --x 0,0,0.5701,0 --tol 5e-4") == 0);
    }
    SUBCASE("wrong support fails with exit 4") {
        CHECK(run_cli("verify --problem " + example1() +
                      " --lambda 0.6830 --x 1,0,0,0 --tol 5e-4") == 4);
    }
    SUBCASE("trivial instance passes exactly") {
        const fs::path prob = work_dir() / "trivial.problem";
        std::ofstream(prob) << R"({"format":1,"m":2,"n":3,"A":"identity","B":"zero","C":"neg_identity"})";
        CHECK(run_cli("verify --problem " + prob.string() +
                      " --lambda 1 --x 1,0,0 --tol 1e-12") == 0);
        CHECK(last_stdout().find("pass") != std::string::npos);
    }
}

TEST_CASE("cli handles polyhedral-cone documents") {
    // identity generators make the reduced problem coincide with the data
    const fs::path prob = work_dir() / "poly.problem";
    std::ofstream(prob) << R"({
        "format": 1, "m": 2, "n": 3,
        "A": "identity", "B": "zero", "C": "neg_identity",
        "cone": {"type": "polyhedral", "H": [[1,0,0],[0,1,0],[0,0,1]]}
    })";
    SUBCASE("enumerate reduces and finds lambda = 1") {
        const fs::path out = work_dir() / "poly_enum.json";
        CHECK(run_cli("enumerate --problem " + prob.string() + " --max-support 1 --out " +
                      out.string()) == 0);
        io::ResultDocument doc = io::load_result(out);
        bool found = false;
        for (const auto& r : doc.records)
            if (std::abs(r.lambda - 1.0) <= 1e-10) found = true;
        CHECK(found);
    }
    SUBCASE("verify interprets --x as generator weights") {
        CHECK(run_cli("verify --problem " + prob.string() +
                      " --lambda 1 --x 1,0,0 --tol 1e-10") == 0);
        CHECK(run_cli("verify --problem " + prob.string() +
                      " --lambda 0.5 --x 1,0,0 --tol 1e-10") == 4);
    }
}

TEST_CASE("cli reproduce") {
    CHECK(run_cli("reproduce --example 1 --rows 1") == 0);
    CHECK(run_cli("reproduce --example 2 --rows 1") == 0);
    CHECK(run_cli("reproduce --example 3 --rows all") == 0);
    const std::string text = last_stdout();
    CHECK(text.find("lambda") != std::string::npos);
    CHECK(text.find("[ok]") != std::string::npos);
    CHECK(run_cli("reproduce --example 9") == 1);  // out of range
    CHECK(run_cli("reproduce --example 1 --rows 7") == 1);
}

TEST_CASE("cli reproduce with multistart rates") {
    CHECK(run_cli("reproduce --example 1 --rows 1 --multistart 10 --seed 3") == 0);
    const std::string text = last_stdout();
    CHECK(text.find("diverged") != std::string::npos);
    CHECK(text.find("converged_zero") != std::string::npos);
    CHECK(text.find("converged_nonzero") != std::string::npos);
}
