#pragma once

#include <optional>
#include <string>

#include "lindblad_kit/qdphonon.hpp"
#include "lindblad_kit/twolevel.hpp"

namespace lk::cli {

enum class Mode { Spectrum, Evolve, Partition, RatesDump, Compare };
enum class SchemeSel { CM, SYM, Both };

Mode mode_from_name(const std::string& name);
std::string mode_name(Mode m);

struct SweepSpec {
    std::string param = "sigma_ratio";  // "sigma_ratio" or "sigma"
    double from = 0.0;
    double to = 3.0;
    int points = 121;
    bool log_scale = false;
};

struct TimeGrid {
    double t_max = 10.0;  // units of 1/omega0
    int points = 400;
};

struct PartitionGrid {
    double n_from = 0.0, n_to = 30.0;
    int n_points = 31;
    double hw_from_meV = 7.5, hw_to_meV = 13.0;
    int hw_points = 23;
};

// One row of the dimensionless partition table (eta and sigma given per
// phonon energy instead of computed from a material).
struct PartitionTableRow {
    double hbar_omega0_meV;
    double eta2;
    double sigma;
};

struct RunConfig {
    std::optional<Mode> mode;  // must match the subcommand when present
    SchemeSel scheme = SchemeSel::Both;

    // exactly one of the two blocks is present
    std::optional<TwoLevelParams> dimensionless;
    std::optional<double> omega0_meV;  // set when dimensionless block given
    struct Physical {
        Material material;
        QDGeometry geometry;
        double hbar_omega0_meV = 11.0;
        double n_tilde = 0.0;
    };
    std::optional<Physical> physical;

    SweepSpec sweep;
    TimeGrid time_grid;
    PartitionGrid partition_grid;
    std::vector<PartitionTableRow> partition_table;  // optional alternative input
    std::optional<CMatrix> rho0;                     // default: ground state

    std::string prefix = "run";
    std::uint64_t seed = 0;
};

// Parses and validates the JSON config document; throws ConfigError with the
// offending field path.
RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text);

// Dimensionless two-level parameters for the run, derived from whichever
// block is present.
TwoLevelParams effective_params(const RunConfig& cfg);

// LINDBLAD_KIT_THREADS override; defaults to 1.
int worker_count();

}  // namespace lk::cli
