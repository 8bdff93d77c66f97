#include "cli/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace lk::cli {

using nlohmann::json;

Mode mode_from_name(const std::string& name) {
    if (name == "spectrum") return Mode::Spectrum;
    if (name == "evolve") return Mode::Evolve;
    if (name == "partition") return Mode::Partition;
    if (name == "rates-dump") return Mode::RatesDump;
    if (name == "compare") return Mode::Compare;
    throw ConfigError("mode", "unknown mode '" + name + "'");
}

std::string mode_name(Mode m) {
    switch (m) {
        case Mode::Spectrum: return "spectrum";
        case Mode::Evolve: return "evolve";
        case Mode::Partition: return "partition";
        case Mode::RatesDump: return "rates-dump";
        case Mode::Compare: return "compare";
    }
    return "?";
}

namespace {

double get_num(const json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigError(path, "expected a number");
    return j.get<double>();
}

double req_num(const json& j, const char* key, const std::string& path) {
    if (!j.contains(key)) throw ConfigError(path + "." + key, "missing field");
    return get_num(j.at(key), path + "." + key);
}

double opt_num(const json& j, const char* key, double fallback,
               const std::string& path) {
    if (!j.contains(key)) return fallback;
    return get_num(j.at(key), path + "." + key);
}

int req_int(const json& j, const char* key, const std::string& path) {
    const double v = req_num(j, key, path);
    if (v != std::floor(v)) throw ConfigError(path + "." + key, "expected an integer");
    return static_cast<int>(v);
}

Complex parse_complex(const json& j, const std::string& path) {
    if (j.is_number()) return Complex(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return Complex(j[0].get<double>(), j[1].get<double>());
    throw ConfigError(path, "expected a number or [re, im]");
}

SchemeSel parse_scheme(const json& j) {
    if (!j.contains("scheme")) return SchemeSel::Both;
    const std::string s = j.at("scheme").get<std::string>();
    if (s == "CM") return SchemeSel::CM;
    if (s == "SYM") return SchemeSel::SYM;
    if (s == "BOTH") return SchemeSel::Both;
    throw ConfigError("scheme", "expected CM, SYM or BOTH");
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("<document>", std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("<document>", "expected a JSON object");

    RunConfig cfg;
    if (j.contains("mode")) cfg.mode = mode_from_name(j.at("mode").get<std::string>());
    cfg.scheme = parse_scheme(j);

    const bool has_dimless = j.contains("dimensionless");
    const bool has_physical = j.contains("physical");
    if (has_dimless && has_physical)
        throw ConfigError("dimensionless",
                          "exactly one of dimensionless/physical may be present");
    if (!has_dimless && !has_physical)
        throw ConfigError("dimensionless",
                          "one of dimensionless/physical is required");

    if (has_dimless) {
        const json& d = j.at("dimensionless");
        TwoLevelParams p;
        p.omega0 = 1.0;  // internal frequencies in units of omega0
        if (d.contains("eta") && d.contains("eta2"))
            throw ConfigError("dimensionless.eta", "give eta or eta2, not both");
        if (d.contains("eta"))
            p.eta = parse_complex(d.at("eta"), "dimensionless.eta");
        else {
            const double eta2 = req_num(d, "eta2", "dimensionless");
            if (eta2 < 0.0) throw ConfigError("dimensionless.eta2", "must be >= 0");
            p.eta = Complex(std::sqrt(eta2), 0.0);
        }
        if (d.contains("zeta"))
            p.zeta = parse_complex(d.at("zeta"), "dimensionless.zeta");
        p.sigma = req_num(d, "sigma", "dimensionless");
        p.n_tilde = req_num(d, "N_tilde", "dimensionless");
        if (p.sigma < 0.0) throw ConfigError("dimensionless.sigma", "must be >= 0");
        if (p.n_tilde < 0.0) throw ConfigError("dimensionless.N_tilde", "must be >= 0");
        cfg.dimensionless = p;
        if (d.contains("omega0_meV")) {
            const double w = get_num(d.at("omega0_meV"), "dimensionless.omega0_meV");
            if (w <= 0.0) throw ConfigError("dimensionless.omega0_meV", "must be > 0");
            cfg.omega0_meV = w;
        }
    } else {
        const json& ph = j.at("physical");
        RunConfig::Physical p;
        const std::string base = "physical";
        if (ph.contains("material")) {
            const json& m = ph.at("material");
            p.material.eps_def_meV =
                opt_num(m, "eps_def_meV", p.material.eps_def_meV, base + ".material");
            p.material.rho_kg_m3 =
                opt_num(m, "rho_kg_m3", p.material.rho_kg_m3, base + ".material");
            p.material.c_s_m_s =
                opt_num(m, "c_s_m_s", p.material.c_s_m_s, base + ".material");
            p.material.volume_nm3 =
                opt_num(m, "volume_nm3", p.material.volume_nm3, base + ".material");
        }
        if (ph.contains("geometry")) {
            const json& g = ph.at("geometry");
            p.geometry.d_nm = opt_num(g, "d_nm", p.geometry.d_nm, base + ".geometry");
            p.geometry.a_inv_nm =
                opt_num(g, "a_inv_nm", p.geometry.a_inv_nm, base + ".geometry");
            p.geometry.e_loc_meV =
                opt_num(g, "e_loc_meV", p.geometry.e_loc_meV, base + ".geometry");
            p.geometry.m_star_rel =
                opt_num(g, "m_star_rel", p.geometry.m_star_rel, base + ".geometry");
        }
        p.hbar_omega0_meV = opt_num(ph, "hbar_omega0_meV", p.hbar_omega0_meV, base);
        p.n_tilde = opt_num(ph, "N_tilde", p.n_tilde, base);
        try {
            p.material.validate();
            p.geometry.validate();
        } catch (const InvalidParameter& e) {
            throw ConfigError(base, e.what());
        }
        cfg.physical = p;
    }

    if (j.contains("sweep")) {
        const json& s = j.at("sweep");
        if (s.contains("param")) cfg.sweep.param = s.at("param").get<std::string>();
        if (cfg.sweep.param != "sigma_ratio" && cfg.sweep.param != "sigma")
            throw ConfigError("sweep.param", "expected sigma_ratio or sigma");
        cfg.sweep.from = opt_num(s, "from", cfg.sweep.from, "sweep");
        cfg.sweep.to = opt_num(s, "to", cfg.sweep.to, "sweep");
        if (s.contains("points")) cfg.sweep.points = req_int(s, "points", "sweep");
        if (s.contains("scale")) {
            const std::string sc = s.at("scale").get<std::string>();
            if (sc == "log")
                cfg.sweep.log_scale = true;
            else if (sc != "linear")
                throw ConfigError("sweep.scale", "expected linear or log");
        }
        if (cfg.sweep.points < 2) throw ConfigError("sweep.points", "must be >= 2");
        if (cfg.sweep.to <= cfg.sweep.from)
            throw ConfigError("sweep.to", "must exceed sweep.from");
        if (cfg.sweep.log_scale && cfg.sweep.from <= 0.0)
            throw ConfigError("sweep.from", "log scale requires from > 0");
    }

    if (j.contains("time_grid")) {
        const json& t = j.at("time_grid");
        cfg.time_grid.t_max = req_num(t, "t_max", "time_grid");
        if (t.contains("points"))
            cfg.time_grid.points = req_int(t, "points", "time_grid");
        if (!(cfg.time_grid.t_max > 0.0))
            throw ConfigError("time_grid.t_max", "must be > 0");
        if (cfg.time_grid.points < 2)
            throw ConfigError("time_grid.points", "must be >= 2");
    }

    if (j.contains("partition_grid")) {
        const json& g = j.at("partition_grid");
        auto& pg = cfg.partition_grid;
        pg.n_from = opt_num(g, "N_from", pg.n_from, "partition_grid");
        pg.n_to = opt_num(g, "N_to", pg.n_to, "partition_grid");
        if (g.contains("N_points")) pg.n_points = req_int(g, "N_points", "partition_grid");
        pg.hw_from_meV = opt_num(g, "hw_from_meV", pg.hw_from_meV, "partition_grid");
        pg.hw_to_meV = opt_num(g, "hw_to_meV", pg.hw_to_meV, "partition_grid");
        if (g.contains("hw_points"))
            pg.hw_points = req_int(g, "hw_points", "partition_grid");
        if (pg.n_points < 1 || pg.hw_points < 1)
            throw ConfigError("partition_grid", "grid must be non-empty");
        if (pg.n_to < pg.n_from || pg.hw_to_meV < pg.hw_from_meV)
            throw ConfigError("partition_grid", "grid bounds are inverted");
    }

    if (j.contains("partition_table")) {
        const json& t = j.at("partition_table");
        if (!t.is_array() || t.empty())
            throw ConfigError("partition_table", "expected a non-empty array");
        for (std::size_t i = 0; i < t.size(); ++i) {
            const std::string path = "partition_table[" + std::to_string(i) + "]";
            PartitionTableRow row;
            row.hbar_omega0_meV = req_num(t[i], "hbar_omega0_meV", path);
            row.eta2 = req_num(t[i], "eta2", path);
            row.sigma = req_num(t[i], "sigma", path);
            cfg.partition_table.push_back(row);
        }
    }

    if (j.contains("rho0")) {
        const json& r = j.at("rho0");
        if (!r.is_array() || r.size() != 2)
            throw ConfigError("rho0", "expected a 2x2 array of [re, im] entries");
        CMatrix m(2, 2);
        for (int row = 0; row < 2; ++row) {
            if (!r[row].is_array() || r[row].size() != 2)
                throw ConfigError("rho0", "expected a 2x2 array of [re, im] entries");
            for (int col = 0; col < 2; ++col)
                m(row, col) = parse_complex(
                    r[row][col], "rho0[" + std::to_string(row) + "][" +
                                     std::to_string(col) + "]");
        }
        try {
            cfg.rho0 = DensityMatrix::checked(m).mat;
        } catch (const Error& e) {
            throw ConfigError("rho0", e.what());
        }
    }

    if (j.contains("output") && j.at("output").contains("prefix"))
        cfg.prefix = j.at("output").at("prefix").get<std::string>();
    if (j.contains("seed")) {
        if (!j.at("seed").is_number_unsigned())
            throw ConfigError("seed", "expected an unsigned integer");
        cfg.seed = j.at("seed").get<std::uint64_t>();
    }
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("<config>", "cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

TwoLevelParams effective_params(const RunConfig& cfg) {
    if (cfg.dimensionless) return *cfg.dimensionless;
    const auto& ph = *cfg.physical;
    const DimensionlessParams d = dimensionless_from_physical(
        ph.material, ph.geometry, ph.hbar_omega0_meV, ph.n_tilde);
    TwoLevelParams p;
    p.omega0 = 1.0;
    p.eta = d.eta;
    p.zeta = d.zeta;
    p.sigma = d.sigma;
    p.n_tilde = d.n_tilde;
    return p;
}

int worker_count() {
    const char* env = std::getenv("LINDBLAD_KIT_THREADS");
    if (!env) return 1;
    const long v = std::strtol(env, nullptr, 10);
    return v >= 1 ? static_cast<int>(v) : 1;
}

}  // namespace lk::cli
