#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "spdc/config.hpp"

using Catch::Matchers::ContainsSubstring;

namespace {
namespace fs = std::filesystem;

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

fs::path work_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "spdcsim_cli_test";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunResult run(const std::string& args) {
    static int counter = 0;
    const fs::path out = work_dir() / ("out" + std::to_string(counter) + ".txt");
    const fs::path err = work_dir() / ("err" + std::to_string(counter) + ".txt");
    ++counter;
    const std::string cmd = std::string(SPDCSIM_BIN) + " " + args + " > " + out.string() +
                            " 2> " + err.string();
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WEXITSTATUS(status);
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

fs::path write_config(const std::string& name, const std::string& text) {
    const fs::path p = work_dir() / name;
    std::ofstream(p) << text;
    return p;
}

// value of a "# key = value" metadata line
std::string metadata_value(const std::string& text, const std::string& key) {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const std::string prefix = "# " + key + " = ";
        if (line.rfind(prefix, 0) == 0) return line.substr(prefix.size());
    }
    return {};
}
}  // namespace

TEST_CASE("spectrum emits labeled deterministic curves") {
    const fs::path cfg = write_config("spectrum.cfg",
                                      "source.tau0_fs = 63\n"
                                      "grid.n_points = 513\n");
    const std::string args = "spectrum --config " + cfg.string() +
                             " --thetas 45,45 --thetas 45,-45";
    const RunResult first = run(args);
    REQUIRE(first.exit_code == 0);
    CHECK_THAT(first.out, ContainsSubstring("x_value,x_unit,rate_normalized,curve_label"));
    CHECK_THAT(first.out, ContainsSubstring("theta1=45_theta2=45"));
    CHECK_THAT(first.out, ContainsSubstring("theta1=45_theta2=-45"));
    CHECK_THAT(first.out, ContainsSubstring("summary.singlet_wavelength_low_nm"));

    const RunResult second = run(args);
    CHECK(first.out == second.out);  // byte determinism
}

TEST_CASE("spectrum without analyzers is a usage error") {
    const RunResult r = run("spectrum");
    CHECK(r.exit_code == 2);
}

TEST_CASE("config problems exit with code 2 and a diagnostic") {
    const fs::path bad = write_config("bad.cfg", "source.tau0_fs = 63\nwhatever = 1\n");
    const RunResult r = run("spectrum --config " + bad.string() + " --thetas 45,45");
    CHECK(r.exit_code == 2);
    CHECK_THAT(r.err, ContainsSubstring("line 2"));
    CHECK_THAT(r.err, ContainsSubstring("whatever"));

    const RunResult missing = run("spectrum --config /nonexistent.cfg --thetas 45,45");
    CHECK(missing.exit_code == 2);
}

TEST_CASE("domain problems exit with code 3") {
    // fringe selects the filter wavelength, far outside the sampled band
    const fs::path cfg = write_config("offband.cfg", "filter.center_nm = 640\n");
    const RunResult r = run("fringe --config " + cfg.string());
    CHECK(r.exit_code == 3);
    CHECK_THAT(r.err, ContainsSubstring("error"));
}

TEST_CASE("fringe at the antisymmetric wavelength reports unit visibility") {
    // delay chosen so 708.5 nm is exactly the antisymmetric-state wavelength,
    // and a grid whose samples include that offset
    const fs::path cfg = write_config("fringe.cfg",
                                      "source.tau0_fs = 63.8091435909305\n"
                                      "grid.half_extent_pi_units = 2\n"
                                      "filter.center_nm = 708.5\n");
    const RunResult r = run("fringe --config " + cfg.string());
    REQUIRE(r.exit_code == 0);
    CHECK(metadata_value(r.out, "summary.visibility") == "1");
}

TEST_CASE("hwpscan reports the invariance spread") {
    const fs::path cfg = write_config("hwp.cfg", "analyzers.theta2_deg = 45\n");
    const RunResult r = run("hwpscan --config " + cfg.string() + " --alphas 7 --alphas 17 --alphas 22.5");
    REQUIRE(r.exit_code == 0);
    const double spread = std::stod(metadata_value(r.out, "summary.max_spread_at_singlet"));
    CHECK(spread < 1e-10);
    CHECK_THAT(r.out, ContainsSubstring("hwp_deg="));
}

TEST_CASE("fibre summary carries the selection delay") {
    const RunResult r = run("fibre");  // defaults: 63 fs, 1 km, k'' = 3.2e-28 s^2/cm
    REQUIRE(r.exit_code == 0);
    const double delay = std::stod(metadata_value(r.out, "summary.singlet_delay_ns"));
    CHECK(std::abs(delay - 1.59573) < 1e-4);
    CHECK_THAT(r.out, ContainsSubstring("33.5 fs"));
    CHECK_THAT(r.out, ContainsSubstring("3.00092"));
    CHECK(metadata_value(r.out, "source.tau0_fs") == "63");  // defaults echoed

    const RunResult again = run("fibre");  // default runs are reproducible too
    CHECK(r.out == again.out);
}

TEST_CASE("mc needs its config section") {
    const RunResult r = run("mc");
    CHECK(r.exit_code == 2);
    CHECK_THAT(r.err, ContainsSubstring("mc section"));
}

TEST_CASE("mc fringe reports estimates and respects the seed flag") {
    const fs::path cfg = write_config("mc.cfg",
                                      "grid.n_points = 513\n"
                                      "filter.center_nm = 708.5\n"
                                      "mc.n_pairs = 20000\n"
                                      "mc.seed = 5\n");
    const std::string args = "mc --config " + cfg.string();
    const RunResult a = run(args);
    REQUIRE(a.exit_code == 0);
    CHECK_THAT(a.out, ContainsSubstring("summary.visibility = "));
    CHECK_THAT(a.out, ContainsSubstring("summary.singlet_fraction = "));
    CHECK_THAT(a.out, ContainsSubstring("+-"));
    CHECK(metadata_value(a.out, "summary.rng") == "splitmix64/boxmuller/v1");

    const RunResult same = run(args);
    CHECK(a.out == same.out);

    const RunResult reseeded = run(args + " --seed 6");
    REQUIRE(reseeded.exit_code == 0);
    CHECK(a.out != reseeded.out);
}

TEST_CASE("mc with too few pairs exits with the statistics code") {
    const fs::path cfg = write_config("mc_small.cfg", "mc.n_pairs = 100\n");
    const RunResult r = run("mc --config " + cfg.string());
    CHECK(r.exit_code == 4);
}

TEST_CASE("mc histogram and event modes emit their tables") {
    const fs::path cfg = write_config("mc_hist.cfg",
                                      "grid.n_points = 513\n"
                                      "fibre.z_km = 1\n"
                                      "mc.n_pairs = 5000\n"
                                      "analyzers.theta2_deg = -45\n");
    const RunResult hist = run("mc --mode histogram --config " + cfg.string());
    REQUIRE(hist.exit_code == 0);
    CHECK_THAT(hist.out, ContainsSubstring("bin_center_s,count"));
    CHECK_THAT(hist.out, ContainsSubstring("summary.peak_delay_ns"));

    const RunResult events = run("mc --mode events --config " + cfg.string());
    REQUIRE(events.exit_code == 0);
    CHECK_THAT(events.out, ContainsSubstring("t1_s,t2_s,pass1,pass2,accidental"));
}

TEST_CASE("metadata echo reparses to the effective configuration") {
    const fs::path cfg = write_config("echo.cfg",
                                      "source.tau0_fs = 63\n"
                                      "grid.n_points = 513\n"
                                      "mc.n_pairs = 20000\n"
                                      "mc.seed = 5\n");
    const RunResult r = run("mc --config " + cfg.string());
    REQUIRE(r.exit_code == 0);

    // collect config keys from the '# key = value' block and reparse
    std::istringstream in(r.out);
    std::ostringstream echoed;
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("# ", 0) != 0) continue;
        const std::string body = line.substr(2);
        if (body.rfind("summary.", 0) == 0 || body.rfind("note", 0) == 0 ||
            body.rfind("spdcsim", 0) == 0 || body.find('=') == std::string::npos)
            continue;
        echoed << body << '\n';
    }
    const spdc::ScenarioConfig from_file = spdc::parse_config_string(slurp(cfg));
    const spdc::ScenarioConfig from_echo = spdc::parse_config_string(echoed.str());
    CHECK(from_echo == from_file);
}

TEST_CASE("state dump writes the amplitude table") {
    const fs::path dump = work_dir() / "state.csv";
    const fs::path cfg = write_config("dump.cfg", "grid.n_points = 129\n");
    const RunResult r =
        run("fibre --config " + cfg.string() + " --dump-state " + dump.string());
    REQUIRE(r.exit_code == 0);
    const std::string table = slurp(dump);
    CHECK_THAT(table, ContainsSubstring("omega_rad_s,re_hh,im_hh,re_hv,im_hv,re_vh,im_vh,re_vv,im_vv"));
    // header + one row per grid point
    CHECK(std::count(table.begin(), table.end(), '\n') == 130);
}

TEST_CASE("output lands in the requested file") {
    const fs::path out_file = work_dir() / "fringe.csv";
    const RunResult r = run("fringe --out " + out_file.string());
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.empty());
    CHECK_THAT(slurp(out_file), ContainsSubstring("x_value,x_unit"));
}
