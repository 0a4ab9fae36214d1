// test_runner.cpp — task execution, file schemas, deterministic sweeps

#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "trilind/runner.hpp"

using namespace trilind;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("trilind_test_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

} // namespace

TEST_CASE("zero-coupling open dynamics decays from the excited state") {
    TempDir tmp;
    const RunConfig cfg = validate_config(
        "model = squeeze\ntask = dynamics\nparams.g = 0\nparams.omega_pump = 0\n"
        "truncation.n_a_max = 2\ntruncation.n_b_max = 2\ntime.t_max = 2\ntime.n_points = 9\n");
    const RunReport rep = run_config(cfg, (tmp.path / "run").string(), 1);
    CHECK(rep.exit_code == 0);

    const auto rows = lines_of(slurp(tmp.path / "run" / "dynamics.csv"));
    REQUIRE(rows.size() == 10);
    CHECK(rows[0] == "t,n_a,n_b,spin_exc,n_e,g2_aa_0,g2_bb_0");
    // modes stay empty: the g2 columns stay undefined
    CHECK(rows[1].find("nan") != std::string::npos);
    // spin excitation decays as exp(-t)
    const auto cells = lines_of(rows.back()); // single line
    std::istringstream last(rows.back());
    std::string cell;
    std::vector<double> vals;
    while (std::getline(last, cell, ',')) {
        try {
            vals.push_back(std::stod(cell));
        } catch (...) {
            vals.push_back(std::nan(""));
        }
    }
    CHECK(vals[0] == doctest::Approx(2.0));
    CHECK(vals[3] == doctest::Approx(std::exp(-2.0)).epsilon(1e-5));
    CHECK(fs::exists(tmp.path / "run" / "metadata.json"));
}

TEST_CASE("closed zero-coupling dynamics stays flat") {
    TempDir tmp;
    const RunConfig cfg = validate_config(
        "model = squeeze\ntask = dynamics\nparams.g = 0\nparams.omega_pump = 0\n"
        "params.gamma = 0\nparams.kappa_a = 0\nparams.kappa_b = 0\n"
        "initial.kind = explicit\ninitial.n_a = 1\ninitial.n_b = 1\ninitial.spin = g\n"
        "truncation.n_a_max = 2\ntruncation.n_b_max = 2\ntime.t_max = 1\ntime.n_points = 5\n");
    const RunReport rep = run_config(cfg, (tmp.path / "run").string(), 1);
    CHECK(rep.exit_code == 0);
    const auto rows = lines_of(slurp(tmp.path / "run" / "dynamics.csv"));
    for (std::size_t i = 1; i < rows.size(); ++i) {
        std::istringstream row(rows[i]);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(row, cell, ',')) cells.push_back(cell);
        CHECK(std::stod(cells[1]) == doctest::Approx(1.0).epsilon(1e-10)); // n_a
        CHECK(std::stod(cells[2]) == doctest::Approx(1.0).epsilon(1e-10)); // n_b
        CHECK(std::stod(cells[5]) == doctest::Approx(0.0));                // g2_aa of |1>
    }
}

TEST_CASE("sweep with no axes degenerates to the steady task") {
    TempDir tmp;
    const std::string shared =
        "model = squeeze\nparams.delta = 40\nparams.delta_a = 54.641016151377549\n"
        "params.lock_delta_b_to_delta_a = true\ntruncation.n_a_max = 4\ntruncation.n_b_max = "
        "4\n";
    const RunConfig sweep_cfg = validate_config(shared + "task = sweep\n");
    const RunConfig steady_cfg = validate_config(shared + "task = steady\n");

    REQUIRE(run_config(sweep_cfg, (tmp.path / "sweep").string(), 1).exit_code == 0);
    REQUIRE(run_config(steady_cfg, (tmp.path / "steady").string(), 1).exit_code == 0);

    const auto sweep_rows = lines_of(slurp(tmp.path / "sweep" / "sweep.csv"));
    REQUIRE(sweep_rows.size() == 2);
    CHECK(sweep_rows[0] == "n_a_ss,n_b_ss,g2_aa_0,g2_bb_0,tail_a,tail_b,converged");

    const auto steady_rows = lines_of(slurp(tmp.path / "steady" / "steady.csv"));
    REQUIRE(steady_rows.size() == 2);

    // n_a_ss from both routes agrees bit-for-bit (identical code path underneath)
    const std::string sweep_na = sweep_rows[1].substr(0, sweep_rows[1].find(','));
    const std::string steady_na = steady_rows[1].substr(0, steady_rows[1].find(','));
    CHECK(sweep_na == steady_na);
}

TEST_CASE("sweep output is row-major and independent of the worker count") {
    TempDir tmp;
    const std::string text =
        "model = squeeze\ntask = sweep\nparams.delta = 40\n"
        "params.lock_delta_b_to_delta_a = true\ntruncation.n_a_max = 3\ntruncation.n_b_max = 3\n"
        "sweep.axis1.name = delta_a\nsweep.axis1.min = 20\nsweep.axis1.max = 80\n"
        "sweep.axis1.points = 3\n"
        "sweep.axis2.name = kappa_b\nsweep.axis2.min = 0.5\nsweep.axis2.max = 2\n"
        "sweep.axis2.points = 2\n";
    const RunConfig cfg = validate_config(text);

    REQUIRE(run_config(cfg, (tmp.path / "j1").string(), 1).exit_code == 0);
    REQUIRE(run_config(cfg, (tmp.path / "j3").string(), 3).exit_code == 0);

    const std::string csv1 = slurp(tmp.path / "j1" / "sweep.csv");
    const std::string csv3 = slurp(tmp.path / "j3" / "sweep.csv");
    CHECK(csv1 == csv3);

    const auto rows = lines_of(csv1);
    REQUIRE(rows.size() == 1 + 3 * 2);
    CHECK(rows[0].rfind("delta_a,kappa_b,", 0) == 0);
    // row-major: axis1 outer, axis2 inner
    CHECK(rows[1].rfind("20,0.5,", 0) == 0);
    CHECK(rows[2].rfind("20,2,", 0) == 0);
    CHECK(rows[3].rfind("50,0.5,", 0) == 0);
    CHECK(rows[6].rfind("80,2,", 0) == 0);
}

TEST_CASE("metadata echoes the resolved config") {
    TempDir tmp;
    const RunConfig cfg = validate_config(
        "model = squeeze\ntask = steady\ntruncation.n_a_max = 2\ntruncation.n_b_max = 2\n");
    REQUIRE(run_config(cfg, (tmp.path / "run").string(), 1).exit_code == 0);
    const std::string meta = slurp(tmp.path / "run" / "metadata.json");
    CHECK(meta.find("\"model\": \"squeeze\"") != std::string::npos);
    CHECK(meta.find("\"params.kappa_a\": \"10\"") != std::string::npos);
    CHECK(meta.find("\"truncation.n_a_max\": \"2\"") != std::string::npos);
    CHECK(meta.find("\"version\"") != std::string::npos);
}

TEST_CASE("wigner run emits both grids and flags undersampling") {
    TempDir tmp;
    const RunConfig cfg = validate_config(
        "model = squeeze\ntask = wigner\nparams.omega_pump = 0\ntruncation.n_a_max = "
        "2\ntruncation.n_b_max = 2\nwigner.n_points = 3\n");
    const RunReport rep = run_config(cfg, (tmp.path / "run").string(), 1);
    CHECK(rep.exit_code == 0); // normalization failure is a warning, not an error
    CHECK_FALSE(rep.warnings.empty());
    CHECK(fs::exists(tmp.path / "run" / "wigner_cavity.csv"));
    CHECK(fs::exists(tmp.path / "run" / "wigner_phonon.csv"));

    const auto rows = lines_of(slurp(tmp.path / "run" / "wigner_cavity.csv"));
    REQUIRE(rows.size() == 1 + 9);
    CHECK(rows[0] == "re_alpha,im_alpha,w");

    // undriven steady state is the vacuum: W(0) = 2/pi at the center row
    std::istringstream centre(rows[5]);
    std::string cell;
    std::vector<double> vals;
    while (std::getline(centre, cell, ',')) vals.push_back(std::stod(cell));
    CHECK(vals[0] == doctest::Approx(0.0));
    CHECK(vals[1] == doctest::Approx(0.0));
    CHECK(vals[2] == doctest::Approx(2.0 / M_PI).epsilon(1e-9));
}

TEST_CASE("spectrum run lists dressed levels from n = 1") {
    TempDir tmp;
    const RunConfig cfg = validate_config(
        "model = squeeze\ntask = spectrum\nparams.g = 40\nparams.delta = 40\nspectrum.n_max = "
        "2\n");
    REQUIRE(run_config(cfg, (tmp.path / "run").string(), 1).exit_code == 0);
    const auto rows = lines_of(slurp(tmp.path / "run" / "spectrum.csv"));
    REQUIRE(rows.size() == 3); // header + n = 1, 2
    CHECK(rows[0] == "n,e_plus,e_minus,delta_a_plus,delta_a_minus");
    CHECK(rows[1].rfind("1,", 0) == 0);

    // delta = g resonance: d_a^(+) = (1+sqrt(3)) g / 2
    std::istringstream row(rows[1]);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    CHECK(std::stod(cells[3]) ==
          doctest::Approx(0.5 * (1.0 + std::sqrt(3.0)) * 40.0).epsilon(1e-12));
}

TEST_CASE("distribution output accompanies dynamics when requested") {
    TempDir tmp;
    const RunConfig cfg = validate_config(
        "model = squeeze\ntask = dynamics\ntruncation.n_a_max = 2\ntruncation.n_b_max = 2\n"
        "time.t_max = 0.01\ntime.n_points = 3\noutput.distributions = true\n");
    REQUIRE(run_config(cfg, (tmp.path / "run").string(), 1).exit_code == 0);
    const auto rows = lines_of(slurp(tmp.path / "run" / "dist.csv"));
    CHECK(rows[0] == "t,mode,q,p");
    // 3 times x 2 modes x 3 levels
    CHECK(rows.size() == 1 + 3 * 2 * 3);
}

TEST_CASE("multi-run text produces one directory per label") {
    TempDir tmp;
    const std::string text =
        "model = squeeze\ntask = steady\ntruncation.n_a_max = 2\ntruncation.n_b_max = 2\n"
        "[run one]\nparams.omega_pump = 1\n[run two]\nparams.omega_pump = 2\n";
    const RunReport rep = run_config_text(text, (tmp.path / "multi").string(), 1);
    CHECK(rep.exit_code == 0);
    CHECK(fs::exists(tmp.path / "multi" / "one" / "steady.csv"));
    CHECK(fs::exists(tmp.path / "multi" / "two" / "steady.csv"));
}

TEST_CASE("shipped presets parse and validate") {
    // locate the presets directory relative to the test binary's build tree
    fs::path dir = "presets";
    if (!fs::exists(dir)) dir = fs::path("..") / "presets";
    REQUIRE(fs::exists(dir));
    std::size_t count = 0;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.path().extension() != ".conf") continue;
        ++count;
        CHECK_NOTHROW(parse_runs(read_text_file(entry.path().string())));
    }
    CHECK(count >= 8);
}
