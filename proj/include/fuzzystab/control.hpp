#pragma once

// Control functions phi(x, y), their scaling and vanishing hypotheses, the
// envelope memberships that bound each stability estimate, and the grid
// verification of those estimates.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fuzzystab/core.hpp"
#include "fuzzystab/fuzzy_space.hpp"
#include "fuzzystab/hyers.hpp"

namespace fuzzystab::control {

class ControlFunction {
public:
    enum class Family { constant, power, product };

    /// phi = delta
    static ControlFunction constant(double delta, double alpha);
    /// phi = theta (|x|^p + |y|^p)
    static ControlFunction power(double theta, double p, double alpha);
    /// phi = theta |x|^p1 |y|^p2
    static ControlFunction product(double theta, double p1, double p2, double alpha);

    /// Throws DomainError when a zero argument meets a negative exponent.
    double operator()(VectorView x, VectorView y) const;

    Family family() const { return family_; }
    double alpha() const { return alpha_; }
    /// delta for the constant family, theta otherwise.
    double magnitude() const { return magnitude_; }
    double p() const { return p1_; }
    double p1() const { return p1_; }
    double p2() const { return p2_; }
    /// Homogeneity degree: 0, p or p1 + p2.
    double degree() const;

    ControlFunction with_norm(CrispNorm norm) const;
    ControlFunction with_magnitude(double m) const;
    ControlFunction with_alpha(double alpha) const;
    const CrispNorm& norm() const { return norm_; }

    std::string describe() const;

private:
    ControlFunction(Family family, double magnitude, double p1, double p2, double alpha);

    Family family_;
    double magnitude_;
    double p1_;
    double p2_;
    double alpha_;
    CrispNorm norm_ = CrispNorm::euclidean();
};

const char* to_string(ControlFunction::Family f);

/// Which stability estimate is being checked. Each of the four single-scheme
/// bounds pairs with the scheme of the same name; `combined` extracts both
/// components with the two scale-up schemes.
enum class Bound { quadratic_up, quadratic_down, additive_up, additive_down, combined };

const char* to_string(Bound b);
Bound parse_bound(const std::string& s);
Bound bound_for(hyers::Scheme s);
hyers::AlphaInterval admissible_alpha(Bound b);
/// Throws InputError naming the interval and the bound.
void require_admissible_alpha(Bound b, double alpha);

/// Known departures from the literal printed statements, recorded in reports.
namespace repair {
inline constexpr const char* kAdditiveEnvelopeArgument = "additive_envelope_argument";
inline constexpr const char* kDownBoundSign = "down_bound_sign";
inline constexpr const char* kCombinedBeta = "combined_beta";
inline constexpr const char* kCombinedLhsSign = "combined_lhs_sign";
inline constexpr const char* kQuadraticDownScaling = "quadratic_down_scaling_arguments";

std::string describe(const std::string& id);
}  // namespace repair

/// Repairs that checking `b` relies on.
std::vector<std::string> repairs_for(Bound b);

using ArgPair = std::pair<Vector, Vector>;

/// The (u, w) arguments whose control values make up the envelope for `b`
/// at x. For `combined` this is the union of the quadratic and additive sets.
std::vector<ArgPair> envelope_pairs(Bound b, VectorView x);

/// Minimum of N'(phi(u, w), a) over envelope_pairs(b, x). For `combined`
/// this is min(E_quad(x, a(4-alpha)/12), E_add(x, a(2-alpha)/8)). Returns 0
/// for a <= 0.
double envelope(Bound b, const ControlFunction& phi, const fuzzy::FuzzyNorm& norm_z, VectorView x,
                double a);

/// Factor applied to a on the right-hand side: (4-alpha)/6, (alpha-4)/6,
/// (2-alpha)/4, (alpha-2)/4, and 1 for `combined`.
double bound_scale(Bound b, double alpha);

double eval_control(const ControlFunction& phi, VectorView x, VectorView y);

struct Witness {
    Vector x;
    Vector y;
    double a;
    double lhs;
    double rhs;
};

struct ScalingVerdict {
    bool holds = false;
    bool alpha_admissible = false;
    std::size_t checks = 0;
    std::string reason;
    std::optional<Witness> witness;
};

/// Samples the scaling hypothesis at every x, every y of the bound's y-set
/// and every a. Scale-up: N'(phi(2u, 2y), a) >= N'(alpha phi(u, y), a);
/// scale-down: N'(phi(u/2, y/2), a) >= N'(phi(u, y), alpha a); u = x/3 for
/// the quadratic bounds and x/2 otherwise.
ScalingVerdict scaling_alpha_check(const ControlFunction& phi, Bound b,
                                   const fuzzy::FuzzyNorm& norm_z, const std::vector<Vector>& xs,
                                   const std::vector<double>& a_grid,
                                   double slack = fuzzy::kMembershipSlack);
ScalingVerdict scaling_alpha_check(const ControlFunction& phi, hyers::Scheme scheme,
                                   const fuzzy::FuzzyNorm& norm_z, const std::vector<Vector>& xs,
                                   const std::vector<double>& a_grid,
                                   double slack = fuzzy::kMembershipSlack);

/// Closed-form verdict for the homogeneous families: 2^degree <= alpha for
/// scale-up bounds, 2^degree >= alpha for scale-down, alpha admissible.
bool analytic_scaling_criterion(const ControlFunction& phi, Bound b);

struct VanishingVerdict {
    bool holds = false;
    double worst_membership = 1.0;
    std::string note;
};

/// N'(phi(2^n x, 2^n y), s^n a) > 1 - tol at n = n_probe (scale-up) or
/// N'(s^n phi(x/2^n, y/2^n), a) > 1 - tol (scale-down), s = 4 for quadratic
/// schemes and 2 for additive ones.
VanishingVerdict vanishing_check(const ControlFunction& phi, hyers::Scheme scheme,
                                 const fuzzy::FuzzyNorm& norm_z, const std::vector<ArgPair>& pairs,
                                 const std::vector<double>& a_grid, int n_probe,
                                 double tol = fuzzy::kDefaultTolerance);

/// Premise pairs: the envelope arguments at every x plus `extra`.
std::vector<ArgPair> premise_pairs(Bound b, const std::vector<Vector>& xs,
                                   const std::vector<ArgPair>& extra);

/// sup |residual_main(f, x, y)| over the pairs.
double measure_residual_sup(const Mapping& f, const std::vector<ArgPair>& pairs,
                            const CrispNorm& norm_y);

/// Smallest magnitude m such that |residual_main(f, x, y)| <= m * unit(x, y)
/// on the pairs, where unit is phi with magnitude 1. Throws InputError when
/// the residual is nonzero where unit vanishes.
double measure_control_magnitude(const Mapping& f, const ControlFunction& shape,
                                 const std::vector<ArgPair>& pairs, const CrispNorm& norm_y);

struct StabilityRow {
    std::size_t x_index;
    double x_norm;
    double a;
    double lhs;
    double rhs;
    double slack;
};

struct StabilityReport {
    Bound bound = Bound::quadratic_up;
    std::vector<StabilityRow> rows;
    std::optional<double> worst_slack;
    std::size_t violations = 0;

    bool hypothesis_satisfied = true;
    std::vector<std::string> hypothesis_notes;
    std::size_t premise_checks = 0;
    std::size_t premise_violations = 0;
    std::optional<double> premise_worst_slack;

    std::vector<std::string> repairs;
};

struct StabilityInput {
    Bound bound = Bound::quadratic_up;
    /// The perturbed function; f(0) is subtracted before comparison.
    Mapping f;
    /// Q, A or Q + A: the exact solution f is compared against.
    Mapping approximant;
    ControlFunction phi = ControlFunction::constant(0.0, 1.0);
    fuzzy::FuzzyNorm norm_y;
    fuzzy::FuzzyNorm norm_z;
    std::vector<Vector> xs;
    std::vector<double> a_grid = fuzzy::default_a_grid();
    /// Premise pairs beyond the envelope arguments.
    std::vector<ArgPair> extra_pairs;
    bool extraction_converged = true;
    double slack = fuzzy::kMembershipSlack;
};

/// Checks the premise N(residual, a) >= N'(phi(x, y), a) on the premise
/// pairs, the parity of f - f(0) the bound assumes, and then the bound
/// N(approximant(x) - (f(x) - f(0)), a) >= envelope(x, a * bound_scale) on
/// the (x, a) grid. A failed hypothesis leaves the bound unasserted.
StabilityReport verify_stability(const StabilityInput& in);

}  // namespace fuzzystab::control
