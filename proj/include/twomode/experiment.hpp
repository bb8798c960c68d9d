// experiment.hpp — run configuration, presets and the CSV / JSON writers behind the CLI
//
// Config text is flat "key = value" lines; '#' starts a comment. A "preset" key (or the
// CLI --preset flag) loads a named parameter set first, later keys override it.
// Frequencies, rates and times are in units of omega0.

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "twomode/exact.hpp"
#include "twomode/master_equations.hpp"
#include "twomode/spectral.hpp"

namespace twomode {

enum class SchemeKind { Exact, Redfield, CpRedfield, CgRedfield, Global, Local, Mixture };

const char* scheme_name(SchemeKind k);
SchemeKind parse_scheme(const std::string& name);

struct TimeGrid {
    double start{0.0};
    double stop{300.0};
    int count{301};
    bool log{false};

    std::vector<double> points() const;
};

// "start:stop:count[:lin|log]", linear when the spacing is omitted
TimeGrid parse_grid(const std::string& spec);

struct RunConfig {
    ModelParams params;
    std::vector<SchemeKind> schemes;
    TimeGrid grid;
    std::filesystem::path out_dir{"out"};
    bool lamb_shift{true};
    bool oracle_verify{false};
    SchemeKind reference{SchemeKind::Exact};
    std::optional<double> s_filter;  // direct S_{+-} for cg_redfield; otherwise sinc(g delta_t)
    std::string preset;

    // Throws ValidationError naming the offending field.
    void validate() const;
    double cg_filter() const;
};

std::vector<std::string> preset_names();
RunConfig preset(const std::string& name);

// Applies one key = value assignment; ValidationError on unknown keys or bad values.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

// Parses config text; errors carry the line number.
RunConfig parse_config(const std::string& text, const RunConfig& base = RunConfig{});

struct SchemeResult {
    Trajectory trajectory;
    std::vector<EnergyComponents> energies;  // exact only
};

struct RunResult {
    std::map<std::string, SchemeResult> schemes;
    nlohmann::ordered_json summary;
    std::vector<std::filesystem::path> files;
};

// Computes every requested scheme on the grid (no files written).
RunResult simulate(const RunConfig& cfg);

// simulate + one CSV per scheme and summary.json under cfg.out_dir.
RunResult run(const RunConfig& cfg);

struct FidelityRow {
    double t;
    double f2_local, f2_global, f2_cp_redfield, re_f2_redfield, f2_mixture_lower_bound;
    bool redfield_physical;
};

// F^2 of each scheme against cfg.reference; writes fidelity.csv when write is set.
std::vector<FidelityRow> fidelity_run(const RunConfig& cfg, bool write = true);

struct SweepEntry {
    std::string value;
    std::filesystem::path dir;
    bool ok{false};
    std::string error;
    nlohmann::ordered_json summary;
};

// Runs cfg once per value of `axis` (in parallel), each into out_dir/<axis>_<i>, and writes
// out_dir/index.json.
std::vector<SweepEntry> sweep(const RunConfig& cfg, const std::string& axis,
                              const std::vector<std::string>& values, unsigned threads = 0);

struct OracleReport {
    int cutoff{0};
    double moment_deviation{0.0};    // max over schemes, times and moments
    double fidelity_deviation{0.0};  // |F^2(local, global)| Fock vs Gaussian, max over times
};

// Propagates vacuum under the local and global generators both on a truncated Fock space
// and through the moment equations, and reports the largest disagreement.
OracleReport oracle_compare(const ModelParams& p, const std::vector<double>& times, bool lamb_shift = true);

// 17 significant digits.
std::string format_number(double v);

} // namespace twomode
