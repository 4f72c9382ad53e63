#pragma once

// Fuzzy norms on finite-dimensional real spaces, sampled axiom checks and
// fuzzy convergence predicates.

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fuzzystab/core.hpp"

namespace fuzzystab::fuzzy {

inline constexpr double kMembershipSlack = 1e-12;
inline constexpr double kDefaultTolerance = 0.01;

/// Domain X = R^dim_x and codomain Y = R^dim_y with their crisp norms.
struct SpaceConfig {
    std::size_t dim_x = 1;
    std::size_t dim_y = 1;
    CrispNorm norm_x = CrispNorm::euclidean();
    CrispNorm norm_y = CrispNorm::euclidean();

    /// Throws InputError on zero dimensions or weight/dimension mismatch.
    void validate() const;
};

/// The induced fuzzy norm a/(a+|x|) for a > 0, and 0 for a <= 0.
double induced_fuzzy_norm(const CrispNorm& norm, VectorView x, double a);

/// A membership function N : R^dim x R -> [0,1].
class FuzzyNorm {
public:
    using Evaluator = std::function<double(VectorView, double)>;

    FuzzyNorm() : FuzzyNorm(induced(CrispNorm::euclidean(), 1)) {}

    static FuzzyNorm induced(CrispNorm norm, std::size_t dim);
    /// Arbitrary evaluator; used to probe the axiom checker with non-norms.
    static FuzzyNorm custom(std::string name, std::size_t dim, Evaluator eval);

    /// Throws InputError when x does not live in R^dim.
    double operator()(VectorView x, double a) const;

    std::size_t dim() const { return dim_; }
    bool is_induced() const { return induced_; }
    const CrispNorm& crisp() const { return crisp_; }
    const std::string& name() const { return name_; }

private:
    FuzzyNorm(std::string name, std::size_t dim, bool induced, CrispNorm crisp, Evaluator eval)
        : name_(std::move(name)), dim_(dim), induced_(induced), crisp_(std::move(crisp)),
          eval_(std::move(eval)) {}

    std::string name_;
    std::size_t dim_;
    bool induced_;
    CrispNorm crisp_;
    Evaluator eval_;
};

/// `points` values log-spaced on [lo, hi], both ends included.
std::vector<double> log_grid(double lo, double hi, std::size_t points);
/// 25 points on [1e-3, 1e3].
std::vector<double> default_a_grid();

struct AxiomSample {
    Vector x;
    double a;
};

enum class AxiomStatus { pass, fail, sampled };
const char* to_string(AxiomStatus s);

struct AxiomCheck {
    std::string axiom;  // "N1".."N6", "range"
    std::size_t checks = 0;
    std::size_t violations = 0;
    double worst_slack = 0.0;  // most negative margin seen; >= -slack when passing
    AxiomStatus status = AxiomStatus::pass;
    std::string note;
};

struct AxiomReport {
    std::vector<AxiomCheck> checks;

    const AxiomCheck& at(const std::string& axiom) const;
    /// True when N1-N5 and the range check pass and N6 found no discontinuity.
    bool all_pass() const;
    std::size_t total_violations() const;
};

struct AxiomOptions {
    std::vector<double> a_grid = default_a_grid();
    double slack = kMembershipSlack;
    double tolerance = kDefaultTolerance;
};

/// Checks (N1)-(N6) at the given samples. Degenerate input yields report
/// entries with zero checks, never an exception. N6 is only sampled.
AxiomReport check_axioms(const FuzzyNorm& norm, std::span<const AxiomSample> samples,
                         std::span<const double> scalars, const AxiomOptions& opts = {});

/// Finite view of a sequence n -> x_n for convergence predicates.
struct SequenceProbe {
    std::function<Vector(long)> terms;
    std::vector<double> a_grid = default_a_grid();
    double tolerance = kDefaultTolerance;

    /// Throws InputError unless a_grid is non-empty, positive and strictly
    /// increasing and tolerance lies in (0,1).
    void validate() const;
};

/// Inclusive index range.
struct IndexRange {
    long first = 0;
    long last = 0;
    bool empty() const { return last < first; }
};

/// True iff N(x_n - candidate, a) > 1 - tolerance for every a in the grid and
/// every n in the window.
bool fuzzy_limit(const FuzzyNorm& norm, const SequenceProbe& probe, VectorView candidate,
                 IndexRange window);

/// True iff N(x_{n+p} - x_n, a) > 1 - tolerance for all n0 <= n <= n_last,
/// 1 <= p <= p_max and a in the grid.
bool fuzzy_cauchy(const FuzzyNorm& norm, const SequenceProbe& probe, int p_max, long n0,
                  long n_last);

}  // namespace fuzzystab::fuzzy
