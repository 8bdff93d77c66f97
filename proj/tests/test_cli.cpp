#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli/runners.hpp"

using namespace lk;
using namespace lk::cli;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / "lindblad_kit_tests" / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
    std::istringstream in(slurp(p));
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

const char* kFig1Config = R"({
  "scheme": "BOTH",
  "dimensionless": {"omega0_meV": 11.0, "eta2": 1.31, "zeta": 0.4,
                     "sigma": 0.0092, "N_tilde": 9},
  "sweep": {"param": "sigma_ratio", "from": 0.0, "to": 3.0, "points": 61}
})";

const char* kFig5Config = R"({
  "scheme": "SYM",
  "dimensionless": {"omega0_meV": 11.0, "eta2": 1.31, "zeta": 0.4,
                     "sigma": 0.0092, "N_tilde": 20},
  "time_grid": {"t_max": 3.0, "points": 200}
})";

const char* kFig3Config = R"({
  "scheme": "CM",
  "dimensionless": {"omega0_meV": 11.0, "eta2": 1.31, "zeta": 0.4,
                     "sigma": 0.0092, "N_tilde": 20},
  "time_grid": {"t_max": 250.0, "points": 1500}
})";

}  // namespace

TEST_CASE("config validation") {
    CHECK_THROWS_AS(parse_config_text("{"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("{}"), ConfigError);

    // both parameter blocks present is a hard error
    CHECK_THROWS_AS(parse_config_text(R"({
        "dimensionless": {"eta2": 1.0, "sigma": 0.01, "N_tilde": 1},
        "physical": {}
    })"),
                    ConfigError);

    try {
        parse_config_text(R"({
            "dimensionless": {"eta2": 1.0, "sigma": 0.01, "N_tilde": 1},
            "sweep": {"points": 1}
        })");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.field_path == "sweep.points");
    }

    CHECK_THROWS_AS(parse_config_text(R"({
        "dimensionless": {"eta2": 1.0, "sigma": 0.01, "N_tilde": 1},
        "time_grid": {"t_max": 0.0}
    })"),
                    ConfigError);

    const RunConfig cfg = parse_config_text(kFig1Config);
    CHECK(cfg.scheme == SchemeSel::Both);
    REQUIRE(cfg.dimensionless.has_value());
    CHECK(cfg.dimensionless->n_tilde == 9.0);
    CHECK(std::norm(cfg.dimensionless->eta) == doctest::Approx(1.31).epsilon(1e-12));
}

TEST_CASE("spectrum run reproduces the stability picture") {
    const fs::path dir = fresh_dir("spectrum");
    RunConfig cfg = parse_config_text(kFig1Config);
    const RunResult res = run_spectrum(cfg, dir);
    REQUIRE(res.files.size() == 3);

    const auto cm = read_csv(dir / "run_spectrum_cm.csv");
    REQUIRE(cm.size() == 62);  // header + 61 rows
    CHECK(cm[0][0] == "sigma_ratio");

    // sigma = 0 row: eigenvalues {0, 0, +-i omega0}
    CHECK(std::stod(cm[1][1]) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(std::stod(cm[1][4]) == doctest::Approx(0.0).epsilon(1e-12));
    std::vector<double> ims{std::stod(cm[1][5]), std::stod(cm[1][6]),
                            std::stod(cm[1][7]), std::stod(cm[1][8])};
    std::sort(ims.begin(), ims.end());
    CHECK(ims[0] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(ims[3] == doctest::Approx(1.0).epsilon(1e-12));

    // the largest real part crosses zero at sigma/sigma_bar = 1 within a step
    double crossing = -1.0;
    for (std::size_t i = 2; i < cm.size(); ++i) {
        const double prev = std::stod(cm[i - 1][1]);
        const double cur = std::stod(cm[i][1]);
        if (prev <= 0.0 && cur > 0.0) {
            crossing = std::stod(cm[i][0]);
            break;
        }
    }
    const double step = 3.0 / 60.0;
    CHECK(std::abs(crossing - 1.0) <= step * 1.01);

    // SYM: every real part non-positive over the whole sweep
    const auto sym = read_csv(dir / "run_spectrum_sym.csv");
    for (std::size_t i = 1; i < sym.size(); ++i)
        for (int k = 1; k <= 4; ++k) CHECK(std::stod(sym[i][k]) <= 1e-12);
}

TEST_CASE("evolve run: SYM reaches the steady state with null polarization") {
    const fs::path dir = fresh_dir("evolve_sym");
    RunConfig cfg = parse_config_text(kFig5Config);
    run_evolve(cfg, dir);

    const auto rows = read_csv(dir / "run_evolve_sym.csv");
    REQUIRE(rows.size() == 201);
    CHECK(rows[0] == std::vector<std::string>{"t", "rho11", "rho22", "re_rho12",
                                              "im_rho12", "trace", "min_eig",
                                              "overflow"});
    const auto& last = rows.back();
    CHECK(std::stod(last[1]) == doctest::Approx(21.0 / 41.0).epsilon(5e-3));
    CHECK(std::stod(last[2]) == doctest::Approx(20.0 / 41.0).epsilon(5e-3));
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(std::abs(std::stod(rows[i][3])) <= 1e-12);
        CHECK(std::abs(std::stod(rows[i][4])) <= 1e-12);
        CHECK(rows[i][7] == "0");
    }
}

TEST_CASE("evolve run: CM overflows at finite time") {
    const fs::path dir = fresh_dir("evolve_cm");
    RunConfig cfg = parse_config_text(kFig3Config);
    run_evolve(cfg, dir);

    const auto rows = read_csv(dir / "run_evolve_cm.csv");
    REQUIRE(rows.size() > 2);
    CHECK(rows.back()[7] == "1");      // overflow flag set on the last row
    CHECK(rows.size() < std::size_t(1501));  // truncated before the grid end
}

TEST_CASE("evolve with scheme BOTH is rejected") {
    const fs::path dir = fresh_dir("evolve_both");
    RunConfig cfg = parse_config_text(kFig1Config);
    CHECK_THROWS_AS(run_evolve(cfg, dir), ConfigError);
}

TEST_CASE("partition run") {
    const fs::path dir = fresh_dir("partition");
    RunConfig cfg = parse_config_text(R"({
        "scheme": "BOTH",
        "dimensionless": {"eta2": 1.31, "zeta": 0.4, "sigma": 0.0092, "N_tilde": 20},
        "partition_grid": {"N_from": 0, "N_to": 30, "N_points": 31},
        "partition_table": [
            {"hbar_omega0_meV": 11.0, "eta2": 1.31, "sigma": 0.0092},
            {"hbar_omega0_meV": 10.0, "eta2": 0.91, "sigma": 0.011}
        ]
    })");
    run_partition(cfg, dir);

    const auto cells = read_csv(dir / "run_partition.csv");
    REQUIRE(cells.size() == 1 + 62);
    // at (eta2 = 1.31, sigma = 0.0092): N = 20 nonphysical, N = 9 safe
    for (std::size_t i = 1; i < cells.size(); ++i) {
        if (cells[i][1] != "11") continue;
        const double n = std::stod(cells[i][0]);
        if (n == 20.0) CHECK(cells[i][2] == "nonphysical");
        if (n == 9.0) CHECK(cells[i][2] == "safe");
    }
    // |eta| <= 1 cells are unbounded-safe
    for (std::size_t i = 1; i < cells.size(); ++i)
        if (cells[i][1] == "10") CHECK(cells[i][2] == "unbounded-safe");

    const auto boundary = read_csv(dir / "run_boundary.csv");
    REQUIRE(boundary.size() == 3);
    CHECK(std::stod(boundary[1][1]) == doctest::Approx(15.0352).epsilon(1e-3));
    CHECK(boundary[2][1] == "inf");
}

TEST_CASE("compare run emits the side-by-side table and summary") {
    const fs::path dir = fresh_dir("compare");
    RunConfig cfg = parse_config_text(R"({
        "scheme": "BOTH",
        "dimensionless": {"eta2": 1.31, "zeta": 0.4, "sigma": 0.0092, "N_tilde": 20},
        "time_grid": {"t_max": 250.0, "points": 800}
    })");
    const RunResult res = run_compare(cfg, dir);
    CHECK(res.summary.find("cm_diverged=true") != std::string::npos);
    CHECK(res.summary.find("sym_positive=true") != std::string::npos);

    const std::string summary = slurp(dir / "run_summary.json");
    CHECK(summary.find("\"cm_diverged\": true") != std::string::npos);
    CHECK(summary.find("\"sym_positive\": true") != std::string::npos);

    // population columns agree between the schemes until the CM overflow
    const auto rows = read_csv(dir / "run_compare.csv");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i][1].empty() || rows[i][7] == "1") break;
        CHECK(std::abs(std::stod(rows[i][1]) - std::stod(rows[i][8])) < 1e-9);
        CHECK(std::abs(std::stod(rows[i][2]) - std::stod(rows[i][9])) < 1e-9);
    }
}

TEST_CASE("compare of the free evolution: schemes coincide") {
    const fs::path dir = fresh_dir("compare_free");
    RunConfig cfg = parse_config_text(R"({
        "scheme": "BOTH",
        "dimensionless": {"eta2": 1.31, "zeta": 0.4, "sigma": 0.0, "N_tilde": 20},
        "time_grid": {"t_max": 5.0, "points": 50}
    })");
    run_compare(cfg, dir);
    const auto rows = read_csv(dir / "run_compare.csv");
    for (std::size_t i = 1; i < rows.size(); ++i)
        for (int k = 1; k <= 4; ++k)
            CHECK(rows[i][k] == rows[i][k + 7]);
}

TEST_CASE("rates dump") {
    const fs::path dir = fresh_dir("dump");
    RunConfig cfg = parse_config_text(R"({
        "scheme": "BOTH",
        "dimensionless": {"eta2": 1.31, "zeta": 0.4, "sigma": 0.0092, "N_tilde": 20}
    })");
    run_rates_dump(cfg, dir);
    const std::string text = slurp(dir / "run_rates.txt");
    CHECK(text.find("FREE") != std::string::npos);
    CHECK(text.find("CM scatt") != std::string::npos);
    CHECK(text.find("SYM scatt") != std::string::npos);

    // sigma = 0 dump: scattering parts vanish entirely
    const fs::path dir0 = fresh_dir("dump0");
    RunConfig cfg0 = parse_config_text(R"({
        "scheme": "BOTH",
        "dimensionless": {"eta2": 1.31, "zeta": 0.4, "sigma": 0.0, "N_tilde": 20}
    })");
    run_rates_dump(cfg0, dir0);
    const std::string text0 = slurp(dir0 / "run_rates.txt");
    std::istringstream in(text0);
    std::string line;
    bool in_scatt = false;
    while (std::getline(in, line)) {
        if (line.find("scatt") != std::string::npos) {
            in_scatt = true;
            continue;
        }
        if (line.find("total") != std::string::npos || line.empty()) {
            in_scatt = false;
            continue;
        }
        if (in_scatt) {
            CHECK(line.find_first_not_of("0+-i. ") == std::string::npos);
        }
    }
}

TEST_CASE("run_main exit codes and determinism") {
    const fs::path dir = fresh_dir("main");
    const fs::path cfg_path = dir / "config.json";
    {
        std::ofstream out(cfg_path);
        out << kFig1Config;
    }

    const fs::path out1 = dir / "out1";
    const fs::path out2 = dir / "out2";
    CHECK(run_main({"spectrum", "--config", cfg_path.string(), "--out",
                    out1.string(), "--seed", "7"}) == 0);
    CHECK(run_main({"spectrum", "--config", cfg_path.string(), "--out",
                    out2.string(), "--seed", "7"}) == 0);
    CHECK(slurp(out1 / "run_spectrum_cm.csv") == slurp(out2 / "run_spectrum_cm.csv"));
    CHECK(slurp(out1 / "run_spectrum_sym.csv") == slurp(out2 / "run_spectrum_sym.csv"));

    // config errors exit with 2
    const fs::path bad_path = dir / "bad.json";
    {
        std::ofstream out(bad_path);
        out << "{\"scheme\": \"BOTH\"}";
    }
    CHECK(run_main({"spectrum", "--config", bad_path.string()}) == 2);
    CHECK(run_main({"bogus-mode", "--config", cfg_path.string()}) == 2);
    CHECK(run_main({"spectrum"}) == 2);

    // CM divergence in an evolve run is data, not an error
    const fs::path cfg3 = dir / "fig3.json";
    {
        std::ofstream out(cfg3);
        out << kFig3Config;
    }
    CHECK(run_main({"evolve", "--config", cfg3.string(), "--out",
                    (dir / "fig3").string()}) == 0);
}
