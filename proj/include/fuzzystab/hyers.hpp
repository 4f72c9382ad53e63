#pragma once

// Direct-method iteration schemes: f(2^n x)/4^n, 4^n f(x/2^n), f(2^n x)/2^n
// and 2^n f(x/2^n), their limits, and the even/odd component extraction.

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fuzzystab/core.hpp"

namespace fuzzystab::hyers {

enum class Scheme { quadratic_up, quadratic_down, additive_up, additive_down };

const char* to_string(Scheme s);
Scheme parse_scheme(const std::string& s);

bool is_quadratic(Scheme s);
bool is_scale_up(Scheme s);

/// Open interval of admissible scaling factors alpha; hi may be +infinity.
struct AlphaInterval {
    double lo;
    double hi;
    bool contains(double alpha) const { return alpha > lo && alpha < hi; }
    std::string str() const;
};

AlphaInterval admissible_alpha(Scheme s);
/// Throws InputError "alpha out of range (0,4) for quadratic_up" and similar.
void require_admissible_alpha(Scheme s, double alpha);

inline constexpr double kOverflowGuard = 1e150;
inline constexpr double kDenormalGuard = 1e-140;

/// Up-scheme argument 2^n x grew past the overflow guard.
class ScaleError : public std::runtime_error {
public:
    ScaleError(Scheme scheme, Vector x, int n);

    Scheme scheme() const { return scheme_; }
    const Vector& x() const { return x_; }
    int n() const { return n_; }

private:
    Scheme scheme_;
    Vector x_;
    int n_;
};

/// The n-th term of the scheme at x. Throws ScaleError when |2^n x| > 1e150.
Vector iterate(Scheme scheme, const Mapping& f, VectorView x, int n,
               const CrispNorm& norm_x = CrispNorm::euclidean());

struct ExtractOptions {
    double tol = 1e-9;
    int n_max = 40;
    /// consecutive small steps needed before stopping
    int confirm_steps = 8;
    /// Optional magnitude M(t) of the raw evaluations behind f(t). The step
    /// threshold is widened by 16 eps M(t) after rescaling, so rounding noise
    /// from cancellation is not mistaken for divergence.
    std::function<double(VectorView)> noise_scale;
    CrispNorm norm_x = CrispNorm::euclidean();
    CrispNorm norm_y = CrispNorm::euclidean();

    void validate() const;
};

struct Iterate {
    int n;
    Vector value;
};

struct ExtractionResult {
    Vector limit_value;
    std::vector<Iterate> iterates;
    bool converged = false;
    /// exp of the least-squares slope of log|iterate(n) - iterate(n-1)|;
    /// 0 when every difference vanished.
    double ratio_estimate = 0.0;
    int n_used = 0;
    std::string stop_reason;
};

/// Empirical geometric ratio of a sequence of difference norms.
double geometric_ratio(const std::vector<double>& diffs);

/// Iterates until |v_n - v_{n-1}| <= tol (1 + |v_n|) on confirm_steps
/// consecutive steps, or n_max. Up-schemes only count steps once
/// |2^n x| >= 1. Down-schemes
/// stop early, keeping the current value, once |x/2^n| < 1e-140.
/// Non-convergence is reported through `converged`, not thrown.
ExtractionResult extract_limit(Scheme scheme, const Mapping& f, VectorView x,
                               const ExtractOptions& opts = {});

struct ComponentConfig {
    Scheme quadratic = Scheme::quadratic_up;
    Scheme additive = Scheme::additive_up;
    ExtractOptions options;

    void validate() const;
};

/// Q and A recovered from f - f(0) through its even and odd parts.
class ComponentPair {
public:
    struct Sample {
        Vector x;
        ExtractionResult quadratic;
        ExtractionResult additive;
    };

    ComponentPair(Mapping f, std::size_t dim_x, ComponentConfig cfg);

    /// Q(x); exactly 0 at x = 0.
    Vector quadratic(VectorView x) const;
    /// A(x); exactly 0 at x = 0.
    Vector additive(VectorView x) const;
    ExtractionResult quadratic_diagnostics(VectorView x) const;
    ExtractionResult additive_diagnostics(VectorView x) const;

    Mapping quadratic_mapping() const;
    Mapping additive_mapping() const;
    /// x -> f(x) - f(0)
    const Mapping& normalized() const { return normalized_; }
    const Mapping& even() const { return even_; }
    const Mapping& odd() const { return odd_; }

    const Vector& f0() const { return f0_; }
    const ComponentConfig& config() const { return cfg_; }
    std::size_t dim_x() const { return dim_x_; }

    const std::vector<Sample>& samples() const { return samples_; }
    bool quadratic_converged() const;
    bool additive_converged() const;

private:
    friend ComponentPair extract_components(const Mapping&, std::size_t, const ComponentConfig&,
                                            const std::vector<Vector>&);

    Mapping raw_;
    Mapping normalized_;
    Mapping even_;
    Mapping odd_;
    std::size_t dim_x_;
    ComponentConfig cfg_;
    Vector f0_;
    std::vector<Sample> samples_;
};

/// Subtracts f(0), splits into even and odd parts and runs the quadratic
/// scheme on the even part and the additive scheme on the odd part at every
/// sample x. Propagates ScaleError.
ComponentPair extract_components(const Mapping& f, std::size_t dim_x, const ComponentConfig& cfg,
                                 const std::vector<Vector>& sample_xs);

/// Half-open iterate window [begin, end).
struct Window {
    int begin;
    int end;
};

struct CrosscheckResult {
    bool agree = false;
    Vector limit1;
    Vector limit2;
    bool converged1 = false;
    bool converged2 = false;
    double distance = 0.0;
    std::string diagnostic;
};

/// Compares the limits read off two disjoint iterate windows. Each window
/// must hold at least two indices; its limit is its last iterate and it
/// counts as converged when the last step is within tol (1 + |limit|).
CrosscheckResult uniqueness_crosscheck(Scheme scheme, const Mapping& f, VectorView x, Window w1,
                                       Window w2, double tol,
                                       const CrispNorm& norm_x = CrispNorm::euclidean(),
                                       const CrispNorm& norm_y = CrispNorm::euclidean());

}  // namespace fuzzystab::hyers
