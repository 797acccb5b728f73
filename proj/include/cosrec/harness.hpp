#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "cosrec/intrel.hpp"

namespace cosrec {

// Invalid configuration, carrying one entry per violation so a bad config
// reports everything wrong with it in a single pass.
struct ConfigError : std::runtime_error {
    explicit ConfigError(std::vector<std::string> violations);
    std::vector<std::string> items;
};

// A parameter sweep: the cell grid is d_grid x gamma_grid x beta_grid x
// n_grid, nested in that order. Gamma entries are dimension-relative specs
// ("1", "sqrt(d)", "2d", "0.5*sqrt(d)"); in the phase-retrieval modes the
// gamma column carries the target norm instead of a frequency.
struct ExperimentConfig {
    std::string mode;
    std::vector<int> d_grid;
    std::vector<std::string> gamma_grid;
    std::vector<double> beta_grid;
    std::vector<long> n_grid = {0};  // truncation depth; 0 takes the preset value
    int trials = 1;
    std::uint64_t seed = 1;
    std::string preset = "desk";  // desk | paper
    long precision_bits = 0;      // 0 picks max(192, N + 64)
    long m_exp = 0;               // relation embedding scale 2^m_exp; 0 picks 2^(3d)
    double success_threshold = 0.0;  // 0 picks the per-mode default
    std::string noise = "auto";      // auto | none | uniform | constant | gaussian
    std::string phase_samples = "d+1";  // "d" drops one sample and records the ambiguity
    std::uint64_t cover_cap = 1000000;
    long detect_m = 2000;
    double detect_eps = 0.1;
    int jobs = 1;
    std::string output_path;      // empty writes to stdout
    std::string format = "json";  // json | csv | markdown

    std::vector<std::string> violations() const;
    void validate() const;  // throws ConfigError listing every violation
};

extern const std::vector<std::string> kExperimentModes;

// Gamma spec against a concrete dimension: a decimal literal, "d", "sqrt(d)",
// or either base with a decimal multiplier ("2sqrt(d)", "0.5*d"). Throws
// std::invalid_argument on anything else or a nonpositive result.
double resolve_gamma(const std::string& spec, int d);

struct TrialOutcome {
    std::string status;  // success | yes | no | learner_failed | fail_*
    double error = -1.0;     // mode-specific figure of merit; -1 when unavailable
    double wall_ms = 0.0;
    double lattice_ms = 0.0;      // relation-detection share of wall_ms
    double relation_norm = 0.0;   // l2 norm of the detected relation, 0 when none
    long candidates = 0;          // feasible-set size in the short-sample phase mode

    bool operator==(const TrialOutcome&) const = default;
};

// One grid cell: resolved parameters, the per-trial outcomes in trial order,
// and aggregates. success_rate = successes / trials; median_error is taken
// over successful trials only and is -1 when none succeeded; the wall and
// lattice medians are over all trials.
struct ExperimentRecord {
    std::string mode;
    int d = 0;
    std::string gamma_spec;
    double gamma = 0.0;
    double beta = 0.0;
    long n_bits = 0;
    long precision_bits = 0;
    int trials = 0;
    std::uint64_t cell_seed = 0;
    std::vector<TrialOutcome> outcomes;
    long successes = 0;
    double success_rate = 0.0;
    double median_error = -1.0;
    double median_wall_ms = 0.0;
    double median_lattice_ms = 0.0;

    bool operator==(const ExperimentRecord&) const = default;
};

// Runs every cell of the grid, `trials` seeded trials each. Cell streams are
// derived from the cell's own parameter values, never its position, so
// permuting the grid permutes the records without changing their contents.
// Per-trial failures are recorded as fail_* statuses, not thrown. Throws
// ConfigError on an invalid config.
std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& config);

// Report in one of {json, csv, markdown}. json carries everything and parses
// back exactly; csv is one aggregate row per record with a fixed column
// order; markdown pivots into a success landscape with one row per beta and
// one column per mode. Non-json floats are printed with 12 significant
// digits. Throws std::invalid_argument on an unknown format or an empty
// record list for a table format.
std::string emit_report(const std::vector<ExperimentRecord>& records, const std::string& format);

// Inverse of emit_report(records, "json"). Throws std::invalid_argument on
// malformed input.
std::vector<ExperimentRecord> parse_report_json(const std::string& text);

// emit_report to `path`, or to `out` when path is empty. Throws
// std::runtime_error naming the path on an unwritable file.
void write_report(const std::vector<ExperimentRecord>& records, const std::string& format,
                  const std::string& path, std::ostream& out);

// Flat key/value config text: one `key = value` per line, arrays as
// [a, b, c], # starts a comment. Keys overwrite `defaults`, last occurrence
// winning. Unknown keys and malformed values are collected into a single
// ConfigError. Semantic checks are left to ExperimentConfig::validate so
// command-line overrides can apply first.
ExperimentConfig parse_config_file(std::istream& is,
                                   const ExperimentConfig& defaults = ExperimentConfig{});

// Dyadic-vector text format: first line "n N", then n numerators, decimal or
// 0x-prefixed hex. Throws std::invalid_argument on malformed input.
DyadicVector read_dyadic_vector(std::istream& is);

}  // namespace cosrec
