#pragma once

// Configuration, table emission and the single / sweep / validate commands.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fockfisher/metrics.hpp"

namespace fockfisher {

inline constexpr const char* kEngineVersion = "1.0.0";

/// Bad configuration value; the message names the field (and line, for files).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class OutputFormat { csv, json };
enum class SweepAxis { delta, photons, family };

struct RunOptions {
    std::vector<StateSpec> states;        // --state, ';'-separated
    std::vector<std::string> families;    // ghb<k> | hb | noon, for the delta axis
    std::vector<int> photons;             // N values
    std::vector<int> ks;                  // ghb(k, N-k) families for the photon axis
    double phi = 0.3;
    std::vector<double> deltas;           // explicit Delta values
    std::vector<double> etas;             // symmetric loss
    std::optional<double> eta_a, eta_b;   // asymmetric override
    GridSettings grid;
    EnvironmentAccess environment = EnvironmentAccess::traced;
    std::filesystem::path out = "out";
    OutputFormat format = OutputFormat::csv;
    SweepAxis axis = SweepAxis::delta;
    double cutoff_tolerance = 1e-3;

    /// Every key with the value it currently holds, for config echoes.
    std::map<std::string, std::string> echo() const;
};

/// Keys understood by apply_option, e.g. "phi", "delta-range", "grid-points".
const std::vector<std::string>& option_keys();

/// Parses and stores one option; throws ConfigError naming the field.
void apply_option(RunOptions& options, const std::string& key, const std::string& value);

struct ConfigEntry {
    std::string key;
    std::string value;
    int line = 0;
};

/// Flat "key = value" (or "key value") lines; '#' starts a comment.
std::vector<ConfigEntry> read_config(std::istream& in);

/// Applies a config file; errors carry "path:line: field 'key'".
void load_config_file(RunOptions& options, const std::filesystem::path& path);

/// ghb:<n>,<N-n> | hb:<N> | noon:<N>
StateSpec parse_state_spec(const std::string& text);

/// 12 significant digits.
std::string format_number(double value);
std::string format_number(long double value);

/// Fixed column order shared by every table.
const std::vector<std::string>& table_columns();

void write_table_csv(std::ostream& out, const std::vector<SweepRow>& rows,
                     const std::string& config_json);
void write_table_json(std::ostream& out, const std::vector<SweepRow>& rows,
                      const std::string& config_json);

/// Prints F_C, F_Q, W, Upsilon, Sigma^2, HCR and the commutation diagnostics.
/// Returns the process exit status.
int cmd_single(const RunOptions& options, std::ostream& out);

/// Writes one table per axis and loss setting plus manifest.json under options.out.
/// Returns the written file names (relative to options.out).
std::vector<std::string> cmd_sweep(const RunOptions& options);

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Fast invariant suite; options.grid overrides the measurement grid.
std::vector<CheckResult> run_validation(const RunOptions& options);

/// Prints one line per check; nonzero when any check fails.
int cmd_validate(const RunOptions& options, std::ostream& out);

}  // namespace fockfisher
