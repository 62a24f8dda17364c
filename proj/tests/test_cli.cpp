// Black-box tests of the command-line surface: exit codes, CSV output,
// config round-trip, determinism.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const std::string kCli = SWEEP_CLI_PATH;

struct RunResult {
    int code = -1;
    std::string out;
};

fs::path work_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() /
                     ("sweep_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

RunResult run(const std::string& args) {
    const fs::path out_file = work_dir() / "stdout.txt";
    const std::string cmd = kCli + " " + args + " > " + out_file.string() + " 2>/dev/null";
    const int raw = std::system(cmd.c_str());
    RunResult r;
    r.code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    std::ifstream in(out_file);
    std::stringstream ss;
    ss << in.rdbuf();
    r.out = ss.str();
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("list-scenarios prints the registry") {
    const RunResult r = run("list-scenarios");
    CHECK(r.code == 0);
    CHECK(r.out.find("moving-wall") != std::string::npos);
    CHECK(r.out.find("ball-complement-obstacle") != std::string::npos);
    int lines = 0;
    for (char c : r.out)
        if (c == '\n') ++lines;
    CHECK(lines >= 7);
}

TEST_CASE("solve moving-wall writes a CSV whose x column tracks t") {
    const fs::path csv = work_dir() / "wall.csv";
    const RunResult r = run("solve --scenario moving-wall --h 1e-2 --out " + csv.string());
    CHECK(r.code == 0);
    std::ifstream in(csv);
    REQUIRE(in.good());
    std::string line;
    std::getline(in, line);
    CHECK(line == "t,x_0,z_0,dist_C,volterra_norm");
    while (std::getline(in, line)) {
        std::istringstream ss(line);
        std::string t_s, x_s;
        std::getline(ss, t_s, ',');
        std::getline(ss, x_s, ',');
        CHECK(std::abs(std::stod(t_s) - std::stod(x_s)) <= 1e-12);
    }
}

TEST_CASE("volterra-cosine final row lands near cos(1)") {
    const fs::path csv = work_dir() / "cos.csv";
    const RunResult r = run("solve --scenario volterra-cosine --h 1e-3 --out " + csv.string());
    CHECK(r.code == 0);
    std::ifstream in(csv);
    std::string line, last;
    std::getline(in, line);  // header
    while (std::getline(in, line))
        if (!line.empty()) last = line;
    std::istringstream ss(last);
    std::string t_s, x_s;
    std::getline(ss, t_s, ',');
    std::getline(ss, x_s, ',');
    CHECK(std::abs(std::stod(x_s) - 0.5403023058681398) <= 5e-3);
}

TEST_CASE("malformed config exits 2 and writes no output") {
    const fs::path cfg = work_dir() / "broken.json";
    {
        std::ofstream out(cfg);
        out << "{ this is not json";
    }
    const fs::path csv = work_dir() / "broken.csv";
    const RunResult r = run("solve --config " + cfg.string() + " --out " + csv.string());
    CHECK(r.code == 2);
    CHECK_FALSE(fs::exists(csv));
}

TEST_CASE("missing scenario and config exits 2") {
    CHECK(run("solve").code == 2);
    CHECK(run("solve --scenario does-not-exist").code == 2);
}

TEST_CASE("infeasible initial point exits 3") {
    const fs::path cfg = work_dir() / "infeasible.json";
    {
        std::ofstream out(cfg);
        out << R"({"problem": {"dim": 1, "interval": [0.0, 1.0], "x0": [-5.0],
                  "set": {"name": "halfspace", "normal": [1.0], "offset0": 0.0}},
                  "grid": {"h": 0.01}})";
    }
    CHECK(run("solve --config " + cfg.string()).code == 3);
}

TEST_CASE("iterate exits 4 when the budget is exhausted") {
    const RunResult r =
        run("iterate --scenario lipschitz-two-point-F --h 1e-3 --max-iter 1 --out " +
            (work_dir() / "it.csv").string());
    CHECK(r.code == 4);
}

TEST_CASE("iterate two-point-F converges and reports residual zero") {
    const fs::path rep = work_dir() / "it_report.json";
    const RunResult r = run("iterate --scenario two-point-F --out " +
                            (work_dir() / "tp.csv").string() + " --report " + rep.string());
    CHECK(r.code == 0);
    const std::string text = slurp(rep);
    CHECK(text.find("\"converged\": true") != std::string::npos);
    CHECK(text.find("\"iterations_used\": 1") != std::string::npos);
}

TEST_CASE("iterate lipschitz-two-point-F converges with factorial bounds logged") {
    const fs::path rep = work_dir() / "lip_report.json";
    const RunResult r = run("iterate --scenario lipschitz-two-point-F --tol 1e-6 --h 1e-3 --out " +
                            (work_dir() / "lip.csv").string() + " --report " + rep.string());
    CHECK(r.code == 0);
    const std::string text = slurp(rep);
    CHECK(text.find("\"converged\": true") != std::string::npos);
    CHECK(text.find("\"factorial_bound\"") != std::string::npos);
    CHECK(text.find("\"certificate\"") != std::string::npos);
}

TEST_CASE("verify flags a wrong gamma declaration with exit 5") {
    const fs::path cfg = work_dir() / "wrong_gamma.json";
    {
        std::ofstream out(cfg);
        out << R"({"problem": {"dim": 1, "interval": [0.0, 1.0], "x0": [0.0],
                  "set": {"name": "free"},
                  "perturb": {"name": "finite", "points": [[-1.0],[1.0]], "gamma": 0.5}},
                  "grid": {"h": 0.01}})";
    }
    const fs::path rep = work_dir() / "wrong_gamma_report.json";
    const RunResult r = run("verify --config " + cfg.string() + " --report " + rep.string());
    CHECK(r.code == 5);
    CHECK(slurp(rep).find("\"pass\": false") != std::string::npos);
}

TEST_CASE("dump-config round trips byte-identically") {
    const RunResult first = run("solve --scenario diode-clamp --dump-config");
    CHECK(first.code == 0);
    const fs::path cfg = work_dir() / "dumped.json";
    {
        std::ofstream out(cfg);
        out << first.out;
    }
    const RunResult second = run("solve --config " + cfg.string() + " --dump-config");
    CHECK(second.code == 0);
    CHECK(first.out == second.out);
}

TEST_CASE("identical solve runs produce byte-identical CSVs") {
    const fs::path a = work_dir() / "det_a.csv";
    const fs::path b = work_dir() / "det_b.csv";
    CHECK(run("solve --scenario diode-clamp --h 2e-3 --out " + a.string()).code == 0);
    CHECK(run("solve --scenario diode-clamp --h 2e-3 --out " + b.string()).code == 0);
    const std::string sa = slurp(a), sb = slurp(b);
    CHECK(sa == sb);
    CHECK_FALSE(sa.empty());
}

TEST_CASE("bounds subcommand emits a certificate") {
    const fs::path rep = work_dir() / "cert.json";
    const RunResult r = run("bounds --scenario two-point-F --report " + rep.string());
    CHECK(r.code == 0);
    const std::string text = slurp(rep);
    CHECK(text.find("\"eta\"") != std::string::npos);
    CHECK(text.find("\"Phi\"") != std::string::npos);
    CHECK(text.find("\"rdot\"") != std::string::npos);
}

TEST_CASE("constant selection from config drives the solve") {
    const fs::path cfg = work_dir() / "const_z.json";
    {
        std::ofstream out(cfg);
        out << R"({"scenario": "ball-F", "z": {"kind": "constant", "value": [0.5]}})";
    }
    const fs::path csv = work_dir() / "const_z.csv";
    const RunResult r = run("solve --config " + cfg.string() + " --out " + csv.string());
    CHECK(r.code == 0);
    std::ifstream in(csv);
    std::string line, last;
    std::getline(in, line);
    while (std::getline(in, line))
        if (!line.empty()) last = line;
    // x(1) = -0.5 for z == 0.5 on free space
    std::istringstream ss(last);
    std::string t_s, x_s;
    std::getline(ss, t_s, ',');
    std::getline(ss, x_s, ',');
    CHECK(std::stod(x_s) == doctest::Approx(-0.5).epsilon(1e-9));
}

TEST_CASE("region violation triggers the halving remedy") {
    // Predictor from (1,0) with drift (2,0) and h = 0.5 lands exactly on the
    // obstacle center; one halving clears it.
    const fs::path cfg = work_dir() / "halving.json";
    {
        std::ofstream out(cfg);
        out << R"({"problem": {"dim": 2, "interval": [0.0, 1.0], "x0": [1.0, 0.0],
                  "set": {"name": "ball_complement", "center": [0.0, 0.0], "radius": 1.0},
                  "drift": {"name": "constant", "value": [2.0, 0.0]}},
                  "grid": {"h": 0.5}})";
    }
    const fs::path csv = work_dir() / "halving.csv";
    const RunResult r = run("solve --config " + cfg.string() + " --out " + csv.string());
    CHECK(r.code == 0);
    CHECK(fs::exists(csv));
}
