// End-to-end checks that spawn the installed CLI binary. TRAPBOSE_CLI_PATH is
// injected by the build so the tests always exercise the freshly built tool.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest/doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;

namespace {

struct Sandbox {
    fs::path dir;
    Sandbox() {
        static int counter = 0;
        dir = fs::temp_directory_path() /
              ("trapbose_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(dir);
    }
    ~Sandbox() { std::error_code ec; fs::remove_all(dir, ec); }

    fs::path write(const std::string& name, const std::string& text) const {
        const fs::path p = dir / name;
        std::ofstream(p) << text;
        return p;
    }
};

int run_cli(const std::string& args, const Sandbox& sb) {
    const std::string cmd = std::string(TRAPBOSE_CLI_PATH) + " " + args + " > " +
                            (sb.dir / "stdout.log").string() + " 2> " +
                            (sb.dir / "stderr.log").string();
    const int rc = std::system(cmd.c_str());
    REQUIRE(rc != -1);
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -2;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

const std::string kZeroCfg =
    "[basis]\n"
    "size = 8\n"
    "[potential]\n"
    "shape = zero\n"
    "[solve]\n"
    "levels = 3\n";

} // namespace

TEST_CASE("solve with no interaction reports the exact oscillator ladder") {
    Sandbox sb;
    const auto cfg = sb.write("zero.cfg", kZeroCfg);
    CHECK(run_cli("solve --config " + cfg.string() + " --out " + (sb.dir / "out").string(), sb) == 0);

    // every derived column must be the literal "0": no roundoff allowed to leak in
    CHECK(slurp(sb.dir / "out" / "levels.csv") ==
          "index,n1_label,l,E_over_hw,shift_over_hw,det_residual,oracle_gap,eq24_gap\n"
          "0,0,0,1.5,0,0,0,0\n"
          "1,1,0,3.5,0,0,0,0\n"
          "2,2,0,5.5,0,0,0,0\n");
    CHECK(fs::exists(sb.dir / "out" / "run.json"));
}

TEST_CASE("config errors exit 2 and write nothing") {
    Sandbox sb;
    const auto cfg = sb.write("bad.cfg", "[basis]\nsize = 0\n");
    const fs::path out = sb.dir / "never";
    CHECK(run_cli("solve --config " + cfg.string() + " --out " + out.string(), sb) == 2);
    CHECK_FALSE(fs::exists(out));
    CHECK(slurp(sb.dir / "stderr.log").find("config error: [basis] size") != std::string::npos);

    CHECK(run_cli("solve --config " + (sb.dir / "missing.cfg").string() + " --out " +
                      out.string(), sb) == 2);
    CHECK_FALSE(fs::exists(out));

    // sweep without a variable is caught before any solving
    const auto nosweep = sb.write("nosweep.cfg", "[potential]\nshape = zero\n");
    CHECK(run_cli("sweep --config " + nosweep.string() + " --out " + out.string(), sb) == 2);
    CHECK_FALSE(fs::exists(out));
}

TEST_CASE("unwritable output directory exits 3 after a clean solve") {
    Sandbox sb;
    const auto cfg = sb.write("zero.cfg", kZeroCfg);
    CHECK(run_cli("solve --config " + cfg.string() + " --out /proc/nope/out", sb) == 3);
    CHECK(slurp(sb.dir / "stderr.log").find("solver error") != std::string::npos);
}

TEST_CASE("repeated runs are byte-identical") {
    Sandbox sb;
    const auto cfg = sb.write("g.cfg",
                              "[basis]\nsize = 12\n"
                              "[potential]\nshape = gaussian\nstrength = 0.2\nrange = 1.0\n"
                              "[solve]\nlevels = 2\nwavefunctions = 1\ngrid_points = 80\n"
                              "grid_rmax = 6\n"
                              "[output]\nformats = csv,json\n");
    const fs::path out = sb.dir / "out";
    REQUIRE(run_cli("solve --config " + cfg.string() + " --out " + out.string(), sb) == 0);
    const std::string levels = slurp(out / "levels.csv");
    const std::string wf = slurp(out / "wavefunction_0.csv");
    const std::string run = slurp(out / "run.json");
    CHECK(wf.rfind("r,u\n", 0) == 0);

    fs::remove_all(out);
    REQUIRE(run_cli("solve --config " + cfg.string() + " --out " + out.string(), sb) == 0);
    CHECK(slurp(out / "levels.csv") == levels);
    CHECK(slurp(out / "wavefunction_0.csv") == wf);
    CHECK(slurp(out / "run.json") == run);
}

TEST_CASE("a run.json replays to the same artifacts") {
    Sandbox sb;
    const auto cfg = sb.write("g.cfg",
                              "[basis]\nsize = 10\n"
                              "[potential]\nshape = gaussian\nstrength = -0.15\nrange = 0.9\n"
                              "[solve]\nlevels = 2\n");
    const fs::path a = sb.dir / "a", b = sb.dir / "b";
    REQUIRE(run_cli("solve --config " + cfg.string() + " --out " + a.string(), sb) == 0);
    REQUIRE(run_cli("solve --config " + (a / "run.json").string() + " --out " + b.string(), sb) ==
            0);
    CHECK(slurp(b / "levels.csv") == slurp(a / "levels.csv"));
}

TEST_CASE("sweep: single zero-coupling point matches the bare solve") {
    Sandbox sb;
    const auto cfg = sb.write("sweep.cfg",
                              "[basis]\nsize = 8\n"
                              "[potential]\nshape = gaussian\nrange = 1.0\n"
                              "[sweep]\nvariable = g\nvalues = 0\nlevels = 2\n");
    const fs::path out = sb.dir / "out";
    CHECK(run_cli("sweep --config " + cfg.string() + " --out " + out.string(), sb) == 0);
    CHECK(slurp(out / "sweep.csv") ==
          "value,status,E0_over_hw,shift0_over_hw,E1_over_hw,shift1_over_hw\n"
          "0,ok,1.5,0,3.5,0\n");
}

TEST_CASE("sweep results do not depend on the job count") {
    Sandbox sb;
    const auto cfg = sb.write("sweep.cfg",
                              "[basis]\nsize = 10\n"
                              "[potential]\nshape = gaussian\nrange = 1.0\n"
                              "[sweep]\nvariable = g\nvalues = -0.3:0.3:7\nlevels = 2\n"
                              "[output]\nformats = csv,svg\n");
    const fs::path serial = sb.dir / "serial", parallel = sb.dir / "parallel";
    REQUIRE(run_cli("sweep --config " + cfg.string() + " --out " + serial.string(), sb) == 0);
    REQUIRE(run_cli("sweep --config " + cfg.string() + " --out " + parallel.string() +
                        " --jobs 3", sb) == 0);
    CHECK(slurp(parallel / "sweep.csv") == slurp(serial / "sweep.csv"));
    CHECK(slurp(parallel / "sweep.svg") == slurp(serial / "sweep.svg"));
    CHECK(slurp(serial / "sweep.svg").rfind("<svg ", 0) == 0);
}

TEST_CASE("converge with no interaction flags immediately at zero deltas") {
    Sandbox sb;
    const auto cfg = sb.write("conv.cfg",
                              "[potential]\nshape = zero\n"
                              "[converge]\nladder = 4,8,12\n");
    const fs::path out = sb.dir / "out";
    CHECK(run_cli("converge --config " + cfg.string() + " --out " + out.string(), sb) == 0);
    CHECK(slurp(out / "converge.csv") ==
          "N,E0_over_hw,delta0\n"
          "4,1.5,\n"
          "8,1.5,0\n"
          "12,1.5,0\n");
    const std::string run = slurp(out / "run.json");
    CHECK(run.find("\"converged\": [\n    true\n  ]") != std::string::npos);
}

TEST_CASE("usage errors and help") {
    Sandbox sb;
    CHECK(run_cli("solve", sb) == 2);                       // --config is required
    CHECK(run_cli("transmogrify --config x", sb) == 2);     // unknown subcommand
    CHECK(run_cli("--help", sb) == 0);
    CHECK(slurp(sb.dir / "stdout.log").find("solve") != std::string::npos);
}
