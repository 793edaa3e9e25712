// End-to-end exercises of the command-line tool: exit-code contract,
// determinism, and the report round trip.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#ifndef OB_CLI_PATH
#error "OB_CLI_PATH must point at the oberbeck binary"
#endif

namespace {

namespace fs = std::filesystem;

int run_cli(const std::string& args) {
    const std::string cmd = std::string(OB_CLI_PATH) + " " + args + " > cli_stdout.txt 2> cli_stderr.txt";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

void write_file(const std::string& path, const std::string& body) {
    std::ofstream os(path);
    os << body;
}

std::string slurp(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

int count_lines(const std::string& path) {
    std::ifstream is(path);
    int n = 0;
    std::string line;
    while (std::getline(is, line)) ++n;
    return n;
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::path("cli_tmp") / name) {
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all("cli_tmp"); }
};

}  // namespace

TEST_CASE("missing config is a config error") {
    CHECK(run_cli("linear-verify") == 1);
}

TEST_CASE("unknown config keys are a config error") {
    TempDir dir("badkey");
    write_file((dir.path / "cfg.ini").string(), "[grid]\nwrong = 1\n");
    CHECK(run_cli("linear-verify --config " + (dir.path / "cfg.ini").string()) == 1);
}

TEST_CASE("linear-verify writes the sweep csv and exits 0") {
    TempDir dir("linver");
    write_file((dir.path / "cfg.ini").string(),
               "[linear]\nkappa_t = 1\nr_count = 64\nt_count = 32\n");
    CHECK(run_cli("linear-verify --config " + (dir.path / "cfg.ini").string() + " --out " +
                  dir.path.string()) == 0);
    // header + 64*32*3 rows
    CHECK(count_lines((dir.path / "decay_conducting_kt1.csv").string()) == 1 + 64 * 32 * 3);
}

TEST_CASE("linear-verify rejects an empty r grid with a schema error") {
    TempDir dir("emptyr");
    write_file((dir.path / "cfg.ini").string(), "[linear]\nkappa_t = 1\nr_count = 0\n");
    CHECK(run_cli("linear-verify --config " + (dir.path / "cfg.ini").string()) == 1);
}

TEST_CASE("linear-verify flags the degenerate conducting kappa_t = 0 weight") {
    TempDir dir("kt0");
    write_file((dir.path / "cfg.ini").string(),
               "[linear]\nkappa_t = 0\nvariant = conducting\nr_count = 4\nt_count = 4\n");
    CHECK(run_cli("linear-verify --config " + (dir.path / "cfg.ini").string()) == 2);
    const std::string err = slurp("cli_stderr.txt");
    CHECK(err.find("alpha") != std::string::npos);
}

TEST_CASE("converge rejects a one-rung ladder as a config error") {
    TempDir dir("ladder1");
    write_file((dir.path / "cfg.ini").string(),
               "[grid]\ndim = 2\nn = 24\nL = 24\n[physics]\neps_ladder = 0.25\n[time]\nT = 0.25\n");
    CHECK(run_cli("converge --config " + (dir.path / "cfg.ini").string() + " --out " + dir.path.string()) == 1);
}

TEST_CASE("converge pilot is deterministic and report re-emission matches") {
    TempDir dir("pilot");
    const std::string cfg = (dir.path / "cfg.ini").string();
    write_file(cfg,
               "[grid]\ndim = 2\nn = 24\nL = 24\n"
               "[physics]\neps_ladder = 0.25, 0.125, 0.0625\nmu = 0.5\nkappa = 1\n"
               "[initial_data]\namplitude = 0.005\nwidth = 2.5\n"
               "[time]\nT = 0.25\ndt_factor = 0.1\n"
               "[measure]\npairs = 4:0.6\nslope_tol = 10\n");
    const std::string out1 = (dir.path / "o1").string(), out2 = (dir.path / "o2").string();
    fs::create_directories(out1);
    fs::create_directories(out2);
    CHECK(run_cli("converge --config " + cfg + " --out " + out1 + " --threads 2") == 0);
    CHECK(run_cli("converge --config " + cfg + " --out " + out2 + " --threads 1") == 0);
    CHECK(slurp(out1 + "/report.csv") == slurp(out2 + "/report.csv"));
    CHECK(!slurp(out1 + "/report.csv").empty());

    // report command round trip: identical csv from the stored json
    const std::string out3 = (dir.path / "o3").string();
    fs::create_directories(out3);
    CHECK(run_cli("report --config " + out1 + "/report.json --out " + out3) == 0);
    CHECK(slurp(out3 + "/report.csv") == slurp(out1 + "/report.csv"));
}

TEST_CASE("simulate runs the monitor and writes snapshots") {
    TempDir dir("sim");
    const std::string cfg = (dir.path / "cfg.ini").string();
    write_file(cfg,
               "[grid]\ndim = 2\nn = 24\nL = 24\n"
               "[physics]\neps = 0.25\nmu = 0.5\nkappa = 1\n"
               "[initial_data]\namplitude = 0.005\nwidth = 2.5\n"
               "[time]\nT = 0.25\ndt_factor = 0.1\nsnapshot_every = 5\n"
               "[output]\nwrite_snapshots = true\n");
    CHECK(run_cli("simulate --config " + cfg + " --out " + dir.path.string()) == 0);
    CHECK(fs::exists(dir.path / "monitor.csv"));
    CHECK(fs::exists(dir.path / "b_0.obfld"));
    CHECK(count_lines((dir.path / "monitor.csv").string()) > 2);
}

TEST_CASE("besov-test verification command passes on a small grid") {
    TempDir dir("bes");
    write_file((dir.path / "cfg.ini").string(), "[grid]\ndim = 2\nn = 32\nL = 6.283185307179586\n");
    CHECK(run_cli("besov-test --config " + (dir.path / "cfg.ini").string() + " --out " + dir.path.string()) ==
          0);
    CHECK(fs::exists(dir.path / "besov.json"));
}
