#pragma once

// Config-driven pipeline: axioms -> hypotheses -> extraction -> verification,
// with JSON and CSV report output.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fuzzystab/control.hpp"
#include "fuzzystab/funceq.hpp"
#include "fuzzystab/fuzzy_space.hpp"
#include "fuzzystab/hyers.hpp"

namespace fuzzystab::harness {

enum ExitCode : int {
    kExitOk = 0,
    kExitViolations = 1,
    kExitBadConfig = 2,
    kExitScale = 3,
    kExitUnwritable = 4,
};

/// Invalid config; `what()` is "<source>:<line>: <message>".
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string source, int line, const std::string& message);
    int line() const { return line_; }
    const std::string& message() const { return message_; }

private:
    int line_;
    std::string message_;
};

struct ControlSpec {
    control::ControlFunction::Family family = control::ControlFunction::Family::constant;
    /// delta or theta; nullopt means "measured": the smallest value that
    /// satisfies the premise on the premise pairs.
    std::optional<double> magnitude;
    double p = 1.0;
    double p1 = 1.0;
    double p2 = 1.0;
    double alpha = 1.0;
};

struct GridSpec {
    std::size_t x_count = 20;
    double x_radius = 2.0;
    double a_min = 1e-3;
    double a_max = 1e3;
    std::size_t a_points = 25;
    std::size_t random_pairs = 32;
    std::size_t axiom_samples = 200;
    /// Explicit x samples appended after the random ones.
    std::vector<Vector> x_extra;
};

struct Tolerances {
    double extraction_tol = 1e-9;
    int n_max = 40;
    int confirm_steps = 8;
    double slack = fuzzy::kMembershipSlack;
    double fuzzy_tol = fuzzy::kDefaultTolerance;
    int vanishing_n = 30;
};

struct ExperimentConfig {
    fuzzy::SpaceConfig space;
    funceq::TestFunction function{1, 1};
    ControlSpec control;
    control::Bound bound = control::Bound::quadratic_up;
    GridSpec grids;
    Tolerances tolerances;
    std::uint64_t seed = 0;
    /// Closed-form components used in place of extraction.
    std::optional<funceq::TestFunction> override_quadratic;
    std::optional<funceq::TestFunction> override_additive;

    std::vector<double> a_grid() const;
};

/// Parses and validates a JSON config. Throws ConfigError.
ExperimentConfig parse_config(const std::string& text, const std::string& source = "config");
ExperimentConfig load_config(const std::string& path);

enum class Command { check_axioms, extract, verify, run };
const char* to_string(Command c);

struct AxiomSection {
    std::string norm;
    fuzzy::AxiomReport report;
};

struct HypothesisRow {
    std::string check;
    std::string scheme;
    bool holds;
    double value;
    std::string note;
};

struct ExtractionRow {
    std::size_t x_index;
    std::string component;  // "Q", "A" or "limit"
    std::string scheme;
    Vector x;
    Vector limit;
    bool converged;
    double ratio_estimate;
    int n_used;
    std::string stop_reason;
};

struct RunReport {
    Command command = Command::run;
    std::string control;  // control description after any measurement
    std::string bound;
    std::uint64_t seed = 0;
    std::vector<AxiomSection> axioms;
    std::vector<HypothesisRow> hypothesis;
    std::vector<ExtractionRow> extraction;
    std::optional<control::StabilityReport> verification;
    std::vector<std::string> repairs;
    std::vector<std::string> messages;
    int exit_status = kExitOk;

    bool has_verification_rows() const { return verification && !verification->rows.empty(); }
};

/// Runs the stages `command` selects. Scale errors end the pipeline with
/// exit status 3 and a message naming scheme, x and n.
RunReport run_pipeline(const ExperimentConfig& cfg, Command command);

enum class Format { json, csv };
Format parse_format(const std::string& s);

/// Seeded samples, uniform in the ball of the given radius in R^dim.
std::vector<Vector> ball_samples(std::uint64_t seed, std::size_t count, std::size_t dim,
                                 double radius);

/// JSON document with sections axioms, hypothesis, extraction,
/// verification, repair_log and exit_status.
std::string to_json(const RunReport& report);

/// CSV text per section, keyed by file name.
std::vector<std::pair<std::string, std::string>> to_csv(const RunReport& report);

/// Writes the report into out_dir. Returns false when the directory or a
/// file cannot be written.
bool emit_report(const RunReport& report, const std::string& out_dir, Format format);

struct RunOptions {
    Command command = Command::run;
    std::string config_path;
    std::string out_dir = ".";
    Format format = Format::json;
};

/// Load, run, write. Returns the process exit code; diagnostics go to `err`.
int run(const RunOptions& opts, std::ostream& err);

}  // namespace fuzzystab::harness
