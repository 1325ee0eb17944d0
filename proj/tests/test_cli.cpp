#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "sclab/config.hpp"
#include "sclab/runner.hpp"

using namespace sclab;
namespace fs = std::filesystem;

namespace {

const char* kMinimalSolve = R"(
[experiment]
task = solve
seed = 7

[grid]
dim = 1
n = 64

[flux]
kind = burgers

[noise]
K = 1
sigma = 0.2

[initial]
kind = riemann
left = 1.0
right = 0.0

[time]
T = 0.1
steps = 32
)";

std::string read_file(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("minimal config fills documented defaults") {
    auto r = cfg::parse_config(kMinimalSolve);
    REQUIRE(r.ok());
    CHECK(r.spec.cfl == 0.45);
    CHECK(r.spec.scheme == "engquist_osher");
    CHECK(r.spec.task == "solve");
    CHECK(r.spec.seed == 7);
    CHECK(r.spec.n == 64);
    CHECK(r.spec.init_left == 1.0);
}

TEST_CASE("validation errors carry line numbers and are all collected") {
    std::string bad = R"([grid]
dim = 1
n = 64
[noise]
K = 1
[solver]
cfl = 1.5
wibble = 3
[time]
T = 0.1
)";
    auto r = cfg::parse_config(bad);
    REQUIRE_FALSE(r.ok());

    bool saw_cfl = false, saw_unknown = false, saw_missing_flux = false;
    for (const auto& e : r.errors) {
        if (e.message == "cfl out of (0,1]") {
            saw_cfl = true;
            CHECK(e.line == 7);
        }
        if (e.message.find("unknown key 'wibble'") != std::string::npos) {
            saw_unknown = true;
            CHECK(e.line == 8);
        }
        if (e.message == "missing section [flux]") saw_missing_flux = true;
    }
    CHECK(saw_cfl);
    CHECK(saw_unknown);
    CHECK(saw_missing_flux);
    CHECK(r.errors.size() >= 3);  // not first-error-only
}

TEST_CASE("unknown task and section are rejected") {
    auto r = cfg::parse_config("[experiment]\ntask = juggle\n");
    bool saw = false;
    for (const auto& e : r.errors)
        if (e.message.find("unknown task") != std::string::npos) saw = true;
    CHECK(saw);

    r = cfg::parse_config("[wibble]\nx = 1\n");
    saw = false;
    for (const auto& e : r.errors)
        if (e.message.find("unknown section") != std::string::npos) saw = true;
    CHECK(saw);
}

TEST_CASE("solve task writes snapshots and a manifest") {
    TempDir dir("sclab_test_solve");
    auto r = cfg::parse_config(kMinimalSolve);
    REQUIRE(r.ok());
    r.spec.output_dir = (dir.path / "out").string();
    CHECK(run::run_experiment(r.spec) == 0);
    CHECK(fs::exists(dir.path / "out" / "manifest.json"));
    CHECK(fs::exists(dir.path / "out" / "snap_00000.csv"));
    CHECK(fs::exists(dir.path / "out" / "snap_00032.csv"));

    // snapshot CSV: header plus one rectangular row per cell
    std::stringstream ss(read_file(dir.path / "out" / "snap_00000.csv"));
    std::string line;
    std::getline(ss, line);
    CHECK(line == "x1,u");
    int rows = 0;
    while (std::getline(ss, line)) {
        CHECK(std::count(line.begin(), line.end(), ',') == 1);
        ++rows;
    }
    CHECK(rows == 64);
}

TEST_CASE("mc task: table shape and byte-identical rerun") {
    std::string text = R"(
[grid]
dim = 1
n = 16
[flux]
kind = zero
[noise]
K = 1
sigma = 0.5
[initial]
kind = constant
value = 0
[time]
T = 0.25
steps = 10
[mc]
n_traj = 200
eps_list = 0.08,0.04
event = mean_threshold
threshold = 0.05
)";
    auto r = cfg::parse_config(text);
    REQUIRE(r.ok());
    r.spec.task = "mc";
    r.spec.seed = 11;

    TempDir dir("sclab_test_mc");
    r.spec.output_dir = (dir.path / "a").string();
    CHECK(run::run_experiment(r.spec) == 0);
    r.spec.output_dir = (dir.path / "b").string();
    CHECK(run::run_experiment(r.spec) == 0);

    for (const char* f : {"mc.csv", "trajectories.csv", "manifest.json"}) {
        auto a = read_file(dir.path / "a" / f);
        auto b = read_file(dir.path / "b" / f);
        CHECK(a == b);
        CHECK(!a.empty());
    }

    std::stringstream ss(read_file(dir.path / "a" / "mc.csv"));
    std::string line;
    std::getline(ss, line);
    CHECK(line == "eps,n_traj,hits,p_hat,ci_lo,ci_hi,minus_eps_log_p,usable");
    int rows = 0;
    while (std::getline(ss, line)) {
        CHECK(std::count(line.begin(), line.end(), ',') == 7);
        ++rows;
    }
    CHECK(rows == 2);
}

TEST_CASE("ldp-fit exits 3 when too few usable rows") {
    std::string text = R"(
[grid]
dim = 1
n = 8
[flux]
kind = zero
[noise]
K = 1
sigma = 0.5
[initial]
kind = constant
[time]
T = 0.1
steps = 5
[mc]
n_traj = 100
eps_list = 0.1,0.05
threshold = 0.01
)";
    auto r = cfg::parse_config(text);
    REQUIRE(r.ok());
    r.spec.task = "ldp-fit";
    TempDir dir("sclab_test_fit3");
    r.spec.output_dir = (dir.path / "out").string();
    CHECK(run::run_experiment(r.spec) == 3);
}

TEST_CASE("minimize exits 2 when the target is unreachable in budget") {
    std::string text = R"(
[grid]
dim = 1
n = 8
[flux]
kind = zero
[noise]
K = 1
sigma = 0.001
[initial]
kind = constant
[time]
T = 0.01
steps = 4
[minimize]
delta_target = 1e-9
shift = 50
steps = 4
)";
    auto r = cfg::parse_config(text);
    REQUIRE(r.ok());
    r.spec.task = "minimize";
    TempDir dir("sclab_test_min2");
    r.spec.output_dir = (dir.path / "out").string();
    CHECK(run::run_experiment(r.spec) == 2);
    CHECK(fs::exists(dir.path / "out" / "result.csv"));
}

TEST_CASE("action task reports the control action") {
    std::string text = R"(
[grid]
dim = 1
n = 8
[flux]
kind = zero
[noise]
K = 1
sigma = 0.5
[control]
kind = constant
level = 2.0
[initial]
kind = constant
[time]
T = 1.0
steps = 10
)";
    auto r = cfg::parse_config(text);
    REQUIRE(r.ok());
    r.spec.task = "action";
    TempDir dir("sclab_test_action");
    r.spec.output_dir = (dir.path / "out").string();
    CHECK(run::run_experiment(r.spec) == 0);
    auto csv = read_file(dir.path / "out" / "action.csv");
    CHECK(csv.find("action,norm_sq") == 0);
    CHECK(csv.find("\n2,4\n") != std::string::npos);
}

TEST_CASE("kinetic-check writes lift and measure CSVs") {
    std::string text = R"(
[grid]
dim = 1
n = 32
[flux]
kind = zero
[noise]
K = 1
sigma = 0
[initial]
kind = cosine
amplitude = 0.5
[time]
T = 0.005
steps = 64
[solver]
eta = 1.0
[kinetic]
xi_min = -2
xi_max = 2
points = 33
)";
    auto r = cfg::parse_config(text);
    REQUIRE(r.ok());
    r.spec.task = "kinetic-check";
    TempDir dir("sclab_test_kin");
    r.spec.output_dir = (dir.path / "out").string();
    CHECK(run::run_experiment(r.spec) == 0);
    auto lift = read_file(dir.path / "out" / "kinetic.csv");
    CHECK(lift.rfind("x,xi,f", 0) == 0);
    auto meas = read_file(dir.path / "out" / "measure.csv");
    CHECK(meas.rfind("x,t,xi,mass", 0) == 0);
    auto manifest = read_file(dir.path / "out" / "manifest.json");
    CHECK(manifest.find("heat_residual") != std::string::npos);
}
