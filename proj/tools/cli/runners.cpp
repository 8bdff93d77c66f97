#include "cli/runners.hpp"

#include <cmath>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "cli/csv.hpp"
#include "lindblad_kit/dynamics.hpp"

namespace lk::cli {

namespace fs = std::filesystem;

namespace {

std::vector<double> sweep_values(const SweepSpec& s) {
    std::vector<double> v(s.points);
    if (s.log_scale) {
        const double lf = std::log(s.from), lt = std::log(s.to);
        for (int i = 0; i < s.points; ++i)
            v[i] = std::exp(lf + (lt - lf) * i / double(s.points - 1));
    } else {
        for (int i = 0; i < s.points; ++i)
            v[i] = s.from + (s.to - s.from) * i / double(s.points - 1);
    }
    return v;
}

std::vector<double> time_values(const TimeGrid& g) {
    std::vector<double> v(g.points);
    for (int i = 0; i < g.points; ++i)
        v[i] = g.t_max * i / double(g.points - 1);
    return v;
}

// Ordered fan-out: results land in index slots, so output is deterministic
// regardless of scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
    const int workers = std::min<std::size_t>(worker_count(), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < count;
                 i = next.fetch_add(1))
                fn(i);
        });
    for (auto& t : pool) t.join();
}

std::vector<Scheme> selected_schemes(SchemeSel sel) {
    switch (sel) {
        case SchemeSel::CM: return {Scheme::CM};
        case SchemeSel::SYM: return {Scheme::SYM};
        case SchemeSel::Both: return {Scheme::CM, Scheme::SYM};
    }
    return {};
}

Liouvillian build_liouvillian(const TwoLevelParams& p, Scheme scheme) {
    return scheme == Scheme::CM ? liouvillian_cm(p) : liouvillian_sym(p);
}

std::string lower(std::string s) {
    for (char& c : s) c = char(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::vector<std::string> trajectory_cells(double t, const DensityMatrix& rho,
                                          const StepDiagnostics& d) {
    return {fmt17(t),
            fmt17(rho.mat(0, 0).real()),
            fmt17(rho.mat(1, 1).real()),
            fmt17(rho.mat(0, 1).real()),
            fmt17(rho.mat(0, 1).imag()),
            fmt17(d.trace_re),
            fmt17(d.min_eig),
            fmt_bool(d.overflow)};
}

}  // namespace

RunResult run_spectrum(const RunConfig& cfg, const fs::path& out_dir) {
    const TwoLevelParams base = effective_params(cfg);
    const std::optional<double> sigma_bar = sigma_crit(base.eta, base.n_tilde);

    std::string sweep_col = cfg.sweep.param;
    if (sweep_col == "sigma_ratio" && !sigma_bar)
        sweep_col = "sigma";  // |eta| <= 1: no finite threshold to scale by

    const std::vector<double> values = sweep_values(cfg.sweep);
    RunResult res;

    for (Scheme scheme : selected_schemes(cfg.scheme)) {
        std::vector<std::vector<std::string>> rows(values.size());
        parallel_for(values.size(), [&](std::size_t i) {
            TwoLevelParams p = base;
            p.sigma = sweep_col == "sigma_ratio" ? values[i] * *sigma_bar
                                                 : values[i];
            const Spectrum s = eig_general(build_liouvillian(p, scheme).mat,
                                           /*want_vectors=*/false);
            std::vector<std::string> cells{fmt17(values[i])};
            for (int k = 0; k < 4; ++k) cells.push_back(fmt17(s.eigenvalues[k].real()));
            for (int k = 0; k < 4; ++k) cells.push_back(fmt17(s.eigenvalues[k].imag()));
            rows[i] = std::move(cells);
        });

        const std::string name =
            cfg.prefix + "_spectrum_" + lower(scheme_name(scheme)) + ".csv";
        CsvWriter csv((out_dir / name).string());
        csv.row({sweep_col, "re_mu1", "re_mu2", "re_mu3", "re_mu4", "im_mu1",
                 "im_mu2", "im_mu3", "im_mu4"});
        for (auto& r : rows) csv.row(r);
        res.files.push_back(name);
    }

    std::ostringstream gp;
    gp << "set datafile separator ','\n"
       << "set key autotitle columnhead\n"
       << "set xlabel '" << sweep_col << "'\n"
       << "set ylabel 'Re mu_i / omega0'\n"
       << "plot ";
    bool first = true;
    for (Scheme scheme : selected_schemes(cfg.scheme)) {
        const std::string name =
            cfg.prefix + "_spectrum_" + lower(scheme_name(scheme)) + ".csv";
        for (int k = 2; k <= 5; ++k) {
            if (!first) gp << ", \\\n     ";
            gp << "'" << name << "' using 1:" << k << " with lines";
            first = false;
        }
    }
    gp << "\npause -1\n";
    const std::string gpname = cfg.prefix + "_spectrum.gp";
    write_text_file((out_dir / gpname).string(), gp.str());
    res.files.push_back(gpname);

    std::ostringstream sum;
    sum << "spectrum sweep over " << sweep_col << " [" << cfg.sweep.from << ", "
        << cfg.sweep.to << "] with " << cfg.sweep.points << " points";
    if (sigma_bar) sum << ", sigma_bar=" << fmt17(*sigma_bar);
    res.summary = sum.str();
    return res;
}

namespace {

Trajectory evolve_trajectory(const RunConfig& cfg, Scheme scheme) {
    const TwoLevelParams p = effective_params(cfg);
    const DensityMatrix rho0 = cfg.rho0
                                   ? DensityMatrix::checked(*cfg.rho0)
                                   : ground_state();
    const std::vector<double> times = time_values(cfg.time_grid);
    return propagate(build_liouvillian(p, scheme), rho0, times, Method::Expm);
}

}  // namespace

RunResult run_evolve(const RunConfig& cfg, const fs::path& out_dir) {
    if (cfg.scheme == SchemeSel::Both)
        throw ConfigError("scheme", "evolve needs CM or SYM (use compare for both)");
    const Scheme scheme = selected_schemes(cfg.scheme)[0];
    const Trajectory traj = evolve_trajectory(cfg, scheme);

    const std::string name =
        cfg.prefix + "_evolve_" + lower(scheme_name(scheme)) + ".csv";
    CsvWriter csv((out_dir / name).string());
    csv.row({"t", "rho11", "rho22", "re_rho12", "im_rho12", "trace", "min_eig",
             "overflow"});
    for (std::size_t i = 0; i < traj.times.size(); ++i)
        csv.row(trajectory_cells(traj.times[i], traj.states[i],
                                 traj.diagnostics[i]));

    std::ostringstream gp;
    gp << "set datafile separator ','\n"
       << "set key autotitle columnhead\n"
       << "set xlabel 't [1/omega0]'\n"
       << "plot '" << name << "' using 1:2 with lines, \\\n"
       << "     '" << name << "' using 1:3 with lines, \\\n"
       << "     '" << name << "' using 1:4 with lines, \\\n"
       << "     '" << name << "' using 1:5 with lines\npause -1\n";
    const std::string gpname =
        cfg.prefix + "_evolve_" + lower(scheme_name(scheme)) + ".gp";
    write_text_file((out_dir / gpname).string(), gp.str());

    const DiagnoseReport rep = diagnose(traj);
    RunResult res;
    res.files = {name, gpname};
    res.summary = scheme_name(scheme) + " evolve: " + rep.format();
    return res;
}

RunResult run_partition(const RunConfig& cfg, const fs::path& out_dir) {
    const auto& grid = cfg.partition_grid;
    std::vector<double> n_grid(grid.n_points), hw_grid(grid.hw_points);
    for (int i = 0; i < grid.n_points; ++i)
        n_grid[i] = grid.n_points == 1
                        ? grid.n_from
                        : grid.n_from + (grid.n_to - grid.n_from) * i /
                                            double(grid.n_points - 1);
    for (int i = 0; i < grid.hw_points; ++i)
        hw_grid[i] = grid.hw_points == 1
                         ? grid.hw_from_meV
                         : grid.hw_from_meV +
                               (grid.hw_to_meV - grid.hw_from_meV) * i /
                                   double(grid.hw_points - 1);

    PartitionMap map;
    if (!cfg.partition_table.empty()) {
        // dimensionless table input: eta and sigma given per phonon energy
        for (const auto& row : cfg.partition_table) {
            const Complex eta(std::sqrt(std::max(0.0, row.eta2)), 0.0);
            const std::optional<double> nbar = n_crit(eta, row.sigma);
            map.boundary.push_back({row.hbar_omega0_meV, nbar, false});
            for (double n : n_grid) {
                CellLabel label = !nbar ? CellLabel::UnboundedSafe
                                  : (n > *nbar ? CellLabel::Nonphysical
                                               : CellLabel::Safe);
                map.cells.push_back({n, row.hbar_omega0_meV, label});
            }
        }
    } else {
        if (!cfg.physical)
            throw ConfigError("physical",
                              "partition needs a physical block or partition_table");
        map = partition_map(n_grid, hw_grid, cfg.physical->material,
                            cfg.physical->geometry);
    }

    const std::string cells_name = cfg.prefix + "_partition.csv";
    CsvWriter cells((out_dir / cells_name).string());
    cells.row({"N_tilde", "hbar_omega0_meV", "label"});
    for (const auto& c : map.cells)
        cells.row({fmt17(c.n_tilde), fmt17(c.hbar_omega0_meV),
                   cell_label_name(c.label)});

    const std::string boundary_name = cfg.prefix + "_boundary.csv";
    CsvWriter boundary((out_dir / boundary_name).string());
    boundary.row({"hbar_omega0_meV", "n_bar"});
    for (const auto& b : map.boundary) {
        std::string nbar = b.singular ? "nan"
                           : b.n_bar  ? fmt17(*b.n_bar)
                                      : "inf";
        boundary.row({fmt17(b.hbar_omega0_meV), nbar});
    }

    std::ostringstream gp;
    gp << "set datafile separator ','\n"
       << "set key autotitle columnhead\n"
       << "set xlabel 'hbar omega0 [meV]'\nset ylabel 'N'\n"
       << "plot '" << boundary_name << "' using 1:2 with lines title 'N_bar'\n"
       << "pause -1\n";
    const std::string gpname = cfg.prefix + "_partition.gp";
    write_text_file((out_dir / gpname).string(), gp.str());

    std::size_t nonphysical = 0;
    for (const auto& c : map.cells)
        if (c.label == CellLabel::Nonphysical) ++nonphysical;

    RunResult res;
    res.files = {cells_name, boundary_name, gpname};
    std::ostringstream sum;
    sum << "partition: " << map.cells.size() << " cells, " << nonphysical
        << " nonphysical";
    res.summary = sum.str();
    return res;
}

namespace {

void dump_matrix(std::ostringstream& os, const std::string& tag,
                 const CMatrix& m) {
    os << tag << " (" << m.rows() << "x" << m.cols() << ")\n";
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c) os << ' ';
            os << fmt17(m(r, c).real()) << (m(r, c).imag() < 0 ? "-" : "+")
               << fmt17(std::abs(m(r, c).imag())) << "i";
        }
        os << '\n';
    }
    os << '\n';
}

}  // namespace

RunResult run_rates_dump(const RunConfig& cfg, const fs::path& out_dir) {
    const TwoLevelParams p = effective_params(cfg);
    std::ostringstream os;
    const Liouvillian free_part = free_liouvillian(two_level_basis(p));
    dump_matrix(os, "FREE", free_part.mat);
    for (Scheme scheme : selected_schemes(cfg.scheme)) {
        const Liouvillian full = build_liouvillian(p, scheme);
        dump_matrix(os, scheme_name(scheme) + " scatt",
                    CMatrix(full.mat - free_part.mat));
        dump_matrix(os, scheme_name(scheme) + " total", full.mat);
    }
    const std::string name = cfg.prefix + "_rates.txt";
    write_text_file((out_dir / name).string(), os.str());

    RunResult res;
    res.files = {name};
    res.summary = "rates dump written";
    return res;
}

RunResult run_compare(const RunConfig& cfg, const fs::path& out_dir) {
    if (cfg.scheme != SchemeSel::Both)
        throw ConfigError("scheme", "compare requires scheme BOTH");

    const Trajectory cm = evolve_trajectory(cfg, Scheme::CM);
    const Trajectory sym = evolve_trajectory(cfg, Scheme::SYM);
    const DiagnoseReport cm_rep = diagnose(cm);
    const DiagnoseReport sym_rep = diagnose(sym);

    const std::string name = cfg.prefix + "_compare.csv";
    CsvWriter csv((out_dir / name).string());
    csv.row({"t", "cm_rho11", "cm_rho22", "cm_re_rho12", "cm_im_rho12",
             "cm_trace", "cm_min_eig", "cm_overflow", "sym_rho11", "sym_rho22",
             "sym_re_rho12", "sym_im_rho12", "sym_trace", "sym_min_eig",
             "sym_overflow"});
    const std::size_t rows = std::max(cm.times.size(), sym.times.size());
    for (std::size_t i = 0; i < rows; ++i) {
        std::vector<std::string> cells;
        const bool has_cm = i < cm.times.size();
        const bool has_sym = i < sym.times.size();
        cells.push_back(fmt17(has_sym ? sym.times[i] : cm.times[i]));
        if (has_cm) {
            auto c = trajectory_cells(cm.times[i], cm.states[i], cm.diagnostics[i]);
            cells.insert(cells.end(), c.begin() + 1, c.end());
        } else {
            for (int k = 0; k < 7; ++k) cells.push_back("");  // CM truncated (overflow)
        }
        if (has_sym) {
            auto c = trajectory_cells(sym.times[i], sym.states[i], sym.diagnostics[i]);
            cells.insert(cells.end(), c.begin() + 1, c.end());
        } else {
            for (int k = 0; k < 7; ++k) cells.push_back("");
        }
        csv.row(cells);
    }

    const bool cm_diverged = cm.overflowed();
    const bool sym_positive =
        sym_rep.min_eigenvalue >= -tol::positivity &&
        !sym_rep.first_positivity_violation;

    std::ostringstream js;
    js << "{\n  \"cm_diverged\": " << (cm_diverged ? "true" : "false")
       << ",\n  \"sym_positive\": " << (sym_positive ? "true" : "false")
       << ",\n  \"cm_first_positivity_violation\": "
       << (cm_rep.first_positivity_violation
               ? fmt17(*cm_rep.first_positivity_violation)
               : std::string("null"))
       << ",\n  \"cm_first_overflow\": "
       << (cm_rep.first_overflow ? fmt17(*cm_rep.first_overflow)
                                 : std::string("null"))
       << ",\n  \"sym_min_eigenvalue\": " << fmt17(sym_rep.min_eigenvalue)
       << ",\n  \"seed\": " << cfg.seed << "\n}\n";
    const std::string sum_name = cfg.prefix + "_summary.json";
    write_text_file((out_dir / sum_name).string(), js.str());

    RunResult res;
    res.files = {name, sum_name};
    std::ostringstream sum;
    sum << "compare: cm_diverged=" << (cm_diverged ? "true" : "false")
        << " sym_positive=" << (sym_positive ? "true" : "false");
    res.summary = sum.str();
    return res;
}

RunResult run_mode(Mode mode, const RunConfig& cfg, const fs::path& out_dir) {
    if (cfg.mode && *cfg.mode != mode)
        throw ConfigError("mode", "config mode '" + mode_name(*cfg.mode) +
                                      "' does not match subcommand '" +
                                      mode_name(mode) + "'");
    fs::create_directories(out_dir);
    switch (mode) {
        case Mode::Spectrum: return run_spectrum(cfg, out_dir);
        case Mode::Evolve: return run_evolve(cfg, out_dir);
        case Mode::Partition: return run_partition(cfg, out_dir);
        case Mode::RatesDump: return run_rates_dump(cfg, out_dir);
        case Mode::Compare: return run_compare(cfg, out_dir);
    }
    throw ConfigError("mode", "unreachable");
}

int run_main(const std::vector<std::string>& args) {
    CLI::App app{"Markovian relaxation generators for a driven quantum dot"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed_override = 0;
    bool seed_given = false;

    std::vector<std::pair<std::string, Mode>> modes = {
        {"spectrum", Mode::Spectrum},   {"evolve", Mode::Evolve},
        {"partition", Mode::Partition}, {"rates-dump", Mode::RatesDump},
        {"compare", Mode::Compare}};
    for (auto& [name, mode] : modes) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path)->required();
        sub->add_option("--out", out_dir);
        sub->add_option_function<std::uint64_t>(
            "--seed", [&](std::uint64_t v) {
                seed_override = v;
                seed_given = true;
            });
    }

    std::vector<const char*> argv;
    argv.push_back("simulate");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(int(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    Mode mode = Mode::Spectrum;
    for (auto& [name, m] : modes)
        if (app.get_subcommand(name)->parsed()) mode = m;

    try {
        RunConfig cfg = parse_config_file(config_path);
        if (seed_given) cfg.seed = seed_override;
        const RunResult res = run_mode(mode, cfg, out_dir);
        for (const auto& f : res.files)
            std::cout << "wrote " << (fs::path(out_dir) / f).string() << "\n";
        std::cout << res.summary << "\n";
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const NoConvergence& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace lk::cli
