#include "fuzzystab/control.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fuzzystab/funceq.hpp"

namespace fuzzystab::control {

using hyers::Scheme;

ControlFunction::ControlFunction(Family family, double magnitude, double p1, double p2,
                                 double alpha)
    : family_(family), magnitude_(magnitude), p1_(p1), p2_(p2), alpha_(alpha) {
    if (!(magnitude >= 0.0) || !std::isfinite(magnitude)) {
        throw InputError("control magnitude (delta or theta) must be finite and >= 0");
    }
    if (!std::isfinite(p1) || !std::isfinite(p2)) {
        throw InputError("control exponents must be finite");
    }
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw InputError("control alpha must be finite and > 0");
    }
}

ControlFunction ControlFunction::constant(double delta, double alpha) {
    return ControlFunction(Family::constant, delta, 0.0, 0.0, alpha);
}

ControlFunction ControlFunction::power(double theta, double p, double alpha) {
    return ControlFunction(Family::power, theta, p, 0.0, alpha);
}

ControlFunction ControlFunction::product(double theta, double p1, double p2, double alpha) {
    return ControlFunction(Family::product, theta, p1, p2, alpha);
}

namespace {
double checked_pow(double base, double p) {
    if (base == 0.0) {
        if (p < 0.0) throw DomainError("control function: zero argument raised to negative power");
        return p == 0.0 ? 1.0 : 0.0;
    }
    return std::pow(base, p);
}
}  // namespace

double ControlFunction::operator()(VectorView x, VectorView y) const {
    switch (family_) {
        case Family::constant: return magnitude_;
        case Family::power: {
            const double s = checked_pow(norm_(x), p1_) + checked_pow(norm_(y), p1_);
            return magnitude_ == 0.0 ? 0.0 : magnitude_ * s;
        }
        case Family::product: {
            const double s = checked_pow(norm_(x), p1_) * checked_pow(norm_(y), p2_);
            return magnitude_ == 0.0 ? 0.0 : magnitude_ * s;
        }
    }
    return 0.0;
}

double ControlFunction::degree() const {
    switch (family_) {
        case Family::constant: return 0.0;
        case Family::power: return p1_;
        case Family::product: return p1_ + p2_;
    }
    return 0.0;
}

ControlFunction ControlFunction::with_norm(CrispNorm norm) const {
    ControlFunction c = *this;
    c.norm_ = std::move(norm);
    return c;
}

ControlFunction ControlFunction::with_magnitude(double m) const {
    ControlFunction c(family_, m, p1_, p2_, alpha_);
    c.norm_ = norm_;
    return c;
}

ControlFunction ControlFunction::with_alpha(double alpha) const {
    ControlFunction c(family_, magnitude_, p1_, p2_, alpha);
    c.norm_ = norm_;
    return c;
}

std::string ControlFunction::describe() const {
    std::ostringstream os;
    os.precision(17);
    switch (family_) {
        case Family::constant: os << "constant(delta=" << magnitude_; break;
        case Family::power: os << "power(theta=" << magnitude_ << ",p=" << p1_; break;
        case Family::product:
            os << "product(theta=" << magnitude_ << ",p1=" << p1_ << ",p2=" << p2_;
            break;
    }
    os << ",alpha=" << alpha_ << ')';
    return os.str();
}

const char* to_string(ControlFunction::Family f) {
    switch (f) {
        case ControlFunction::Family::constant: return "constant";
        case ControlFunction::Family::power: return "power";
        case ControlFunction::Family::product: return "product";
    }
    return "?";
}

const char* to_string(Bound b) {
    switch (b) {
        case Bound::quadratic_up: return "quadratic_up";
        case Bound::quadratic_down: return "quadratic_down";
        case Bound::additive_up: return "additive_up";
        case Bound::additive_down: return "additive_down";
        case Bound::combined: return "combined";
    }
    return "?";
}

Bound parse_bound(const std::string& s) {
    if (s == "combined") return Bound::combined;
    return bound_for(hyers::parse_scheme(s));
}

Bound bound_for(Scheme s) {
    switch (s) {
        case Scheme::quadratic_up: return Bound::quadratic_up;
        case Scheme::quadratic_down: return Bound::quadratic_down;
        case Scheme::additive_up: return Bound::additive_up;
        case Scheme::additive_down: return Bound::additive_down;
    }
    return Bound::quadratic_up;
}

hyers::AlphaInterval admissible_alpha(Bound b) {
    switch (b) {
        case Bound::quadratic_up: return hyers::admissible_alpha(Scheme::quadratic_up);
        case Bound::quadratic_down: return hyers::admissible_alpha(Scheme::quadratic_down);
        case Bound::additive_up:
        case Bound::combined: return hyers::admissible_alpha(Scheme::additive_up);
        case Bound::additive_down: return hyers::admissible_alpha(Scheme::additive_down);
    }
    return {0.0, 0.0};
}

void require_admissible_alpha(Bound b, double alpha) {
    const auto iv = admissible_alpha(b);
    if (!iv.contains(alpha)) {
        throw InputError("alpha out of range " + iv.str() + " for " + to_string(b));
    }
}

namespace repair {
std::string describe(const std::string& id) {
    if (id == kAdditiveEnvelopeArgument) {
        return "additive envelopes: the single-argument term phi(x/2) is evaluated as phi(x/2, x/2)";
    }
    if (id == kDownBoundSign) {
        return "scale-down bounds use the positive constants (alpha-4)/6 and (alpha-2)/4";
    }
    if (id == kCombinedBeta) {
        return "combined scaling y-set: the undefined scale factor beta is taken as 1";
    }
    if (id == kCombinedLhsSign) {
        return "combined bound compares Q(x) + A(x) with f(x); Q(x) - A(x) - f(x) fails for nonzero A";
    }
    if (id == kQuadraticDownScaling) {
        return "quadratic scale-down hypothesis halves both arguments: phi(x/6, y/2) against phi(x/3, y)";
    }
    return id;
}
}  // namespace repair

std::vector<std::string> repairs_for(Bound b) {
    switch (b) {
        case Bound::quadratic_up: return {};
        case Bound::quadratic_down: return {repair::kDownBoundSign, repair::kQuadraticDownScaling};
        case Bound::additive_up: return {repair::kAdditiveEnvelopeArgument};
        case Bound::additive_down:
            return {repair::kAdditiveEnvelopeArgument, repair::kDownBoundSign};
        case Bound::combined:
            return {repair::kAdditiveEnvelopeArgument, repair::kCombinedBeta,
                    repair::kCombinedLhsSign};
    }
    return {};
}

namespace {

bool quadratic_family(Bound b) { return b == Bound::quadratic_up || b == Bound::quadratic_down; }
bool scale_down(Bound b) { return b == Bound::quadratic_down || b == Bound::additive_down; }

std::vector<ArgPair> quadratic_pairs(VectorView x) {
    const Vector u = scale(1.0 / 3.0, x);
    return {
        {u, u},
        {u, Vector(x.begin(), x.end())},
        {u, scale(4.0 / 3.0, x)},
        {u, scale(-2.0 / 3.0, x)},
        {u, Vector(x.size(), 0.0)},
    };
}

std::vector<ArgPair> additive_pairs(VectorView x) {
    const Vector half = scale(0.5, x);
    return {
        {Vector(x.begin(), x.end()), Vector(x.begin(), x.end())},
        {half, half},
        {half, scale(2.0, x)},
        {half, scale(1.5, x)},
    };
}

double membership(const fuzzy::FuzzyNorm& norm_z, double value, double a) {
    const double v[1] = {value};
    return norm_z(v, a);
}

double min_membership(const std::vector<ArgPair>& pairs, const ControlFunction& phi,
                      const fuzzy::FuzzyNorm& norm_z, double a) {
    double m = 1.0;
    for (const auto& [u, w] : pairs) m = std::min(m, membership(norm_z, phi(u, w), a));
    return m;
}

}  // namespace

std::vector<ArgPair> envelope_pairs(Bound b, VectorView x) {
    switch (b) {
        case Bound::quadratic_up:
        case Bound::quadratic_down: return quadratic_pairs(x);
        case Bound::additive_up:
        case Bound::additive_down: return additive_pairs(x);
        case Bound::combined: {
            auto p = quadratic_pairs(x);
            auto q = additive_pairs(x);
            p.insert(p.end(), q.begin(), q.end());
            return p;
        }
    }
    return {};
}

double envelope(Bound b, const ControlFunction& phi, const fuzzy::FuzzyNorm& norm_z, VectorView x,
                double a) {
    if (!(a > 0.0)) return 0.0;
    if (b == Bound::combined) {
        const double alpha = phi.alpha();
        const double q = envelope(Bound::quadratic_up, phi, norm_z, x, a * (4.0 - alpha) / 12.0);
        const double r = envelope(Bound::additive_up, phi, norm_z, x, a * (2.0 - alpha) / 8.0);
        return std::min(q, r);
    }
    return min_membership(envelope_pairs(b, x), phi, norm_z, a);
}

double bound_scale(Bound b, double alpha) {
    switch (b) {
        case Bound::quadratic_up: return (4.0 - alpha) / 6.0;
        case Bound::quadratic_down: return (alpha - 4.0) / 6.0;
        case Bound::additive_up: return (2.0 - alpha) / 4.0;
        case Bound::additive_down: return (alpha - 2.0) / 4.0;
        case Bound::combined: return 1.0;
    }
    return 0.0;
}

double eval_control(const ControlFunction& phi, VectorView x, VectorView y) { return phi(x, y); }

namespace {

std::vector<Vector> scaling_y_set(Bound b, VectorView x) {
    auto sc = [&](double s) { return scale(s, x); };
    if (quadratic_family(b)) {
        return {Vector(x.size(), 0.0), sc(1.0 / 3.0), sc(4.0 / 3.0), sc(-2.0 / 3.0), sc(1.0)};
    }
    if (b == Bound::combined) {
        return {Vector(x.size(), 0.0), sc(1.0),       sc(0.5), sc(4.0 / 3.0),
                sc(-2.0 / 3.0),        sc(1.0 / 3.0), sc(1.5), sc(2.0)};
    }
    return {sc(1.0), sc(0.5), sc(1.5), sc(2.0)};
}

}  // namespace

ScalingVerdict scaling_alpha_check(const ControlFunction& phi, Bound b,
                                   const fuzzy::FuzzyNorm& norm_z, const std::vector<Vector>& xs,
                                   const std::vector<double>& a_grid, double slack) {
    ScalingVerdict v;
    const auto iv = admissible_alpha(b);
    v.alpha_admissible = iv.contains(phi.alpha());
    if (!v.alpha_admissible) {
        v.reason = "alpha out of range " + iv.str() + " for " + to_string(b);
        return v;
    }
    const double alpha = phi.alpha();
    const double u_scale = quadratic_family(b) ? 1.0 / 3.0 : 0.5;
    try {
        for (const Vector& x : xs) {
            const Vector u = scale(u_scale, x);
            for (const Vector& y : scaling_y_set(b, x)) {
                for (double a : a_grid) {
                    double lhs = 0.0;
                    double rhs = 0.0;
                    if (scale_down(b)) {
                        lhs = membership(norm_z, phi(scale_pow2(u, -1), scale_pow2(y, -1)), a);
                        rhs = membership(norm_z, phi(u, y), alpha * a);
                    } else {
                        lhs = membership(norm_z, phi(scale_pow2(u, 1), scale_pow2(y, 1)), a);
                        rhs = membership(norm_z, alpha * phi(u, y), a);
                    }
                    ++v.checks;
                    if (lhs - rhs < -slack && !v.witness) {
                        v.witness = Witness{x, y, a, lhs, rhs};
                    }
                }
            }
        }
    } catch (const DomainError& e) {
        v.reason = e.what();
        return v;
    }
    v.holds = !v.witness.has_value();
    if (!v.holds) {
        std::ostringstream os;
        os.precision(17);
        os << "scaling inequality fails at a=" << v.witness->a << ": " << v.witness->lhs << " < "
           << v.witness->rhs;
        v.reason = os.str();
    }
    return v;
}

ScalingVerdict scaling_alpha_check(const ControlFunction& phi, Scheme scheme,
                                   const fuzzy::FuzzyNorm& norm_z, const std::vector<Vector>& xs,
                                   const std::vector<double>& a_grid, double slack) {
    return scaling_alpha_check(phi, bound_for(scheme), norm_z, xs, a_grid, slack);
}

bool analytic_scaling_criterion(const ControlFunction& phi, Bound b) {
    if (!admissible_alpha(b).contains(phi.alpha())) return false;
    const double growth = std::exp2(phi.degree());
    return scale_down(b) ? growth >= phi.alpha() : growth <= phi.alpha();
}

VanishingVerdict vanishing_check(const ControlFunction& phi, Scheme scheme,
                                 const fuzzy::FuzzyNorm& norm_z, const std::vector<ArgPair>& pairs,
                                 const std::vector<double>& a_grid, int n_probe, double tol) {
    if (n_probe < 1) throw InputError("vanishing_check: n_probe must be >= 1");
    VanishingVerdict v;
    const int log2_s = hyers::is_quadratic(scheme) ? 2 : 1;
    const int out_exp = log2_s * n_probe;
    for (const auto& [x, y] : pairs) {
        for (double a : a_grid) {
            double m = 0.0;
            if (hyers::is_scale_up(scheme)) {
                const double value = phi(scale_pow2(x, n_probe), scale_pow2(y, n_probe));
                m = membership(norm_z, value, std::ldexp(a, out_exp));
            } else {
                const double value = phi(scale_pow2(x, -n_probe), scale_pow2(y, -n_probe));
                m = membership(norm_z, std::ldexp(value, out_exp), a);
            }
            v.worst_membership = std::min(v.worst_membership, m);
        }
    }
    v.holds = v.worst_membership > 1.0 - tol;
    if (!v.holds && phi.magnitude() > 0.0) {
        const double growth = std::exp2(phi.degree());
        const double s = std::exp2(log2_s);
        if (growth == s) {
            v.note = "hypothesis fails at boundary: control grows like the scheme factor";
        }
    }
    return v;
}

std::vector<ArgPair> premise_pairs(Bound b, const std::vector<Vector>& xs,
                                   const std::vector<ArgPair>& extra) {
    std::vector<ArgPair> pairs;
    for (const Vector& x : xs) {
        auto p = envelope_pairs(b, x);
        pairs.insert(pairs.end(), p.begin(), p.end());
    }
    pairs.insert(pairs.end(), extra.begin(), extra.end());
    return pairs;
}

double measure_residual_sup(const Mapping& f, const std::vector<ArgPair>& pairs,
                            const CrispNorm& norm_y) {
    double sup = 0.0;
    for (const auto& [x, y] : pairs) {
        sup = std::max(sup, norm_y(funceq::residual_main(f, x, y).value));
    }
    return sup;
}

double measure_control_magnitude(const Mapping& f, const ControlFunction& shape,
                                 const std::vector<ArgPair>& pairs, const CrispNorm& norm_y) {
    const ControlFunction unit = shape.with_magnitude(1.0);
    double m = 0.0;
    for (const auto& [x, y] : pairs) {
        const double r = norm_y(funceq::residual_main(f, x, y).value);
        const double u = unit(x, y);
        if (u > 0.0) {
            m = std::max(m, r / u);
        } else if (r > 0.0) {
            throw InputError("residual is nonzero where the control function vanishes; no " +
                             std::string(to_string(shape.family())) + " control bounds it");
        }
    }
    return m;
}

namespace {
bool is_zero(VectorView x) {
    return std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0; });
}
}  // namespace

StabilityReport verify_stability(const StabilityInput& in) {
    StabilityReport rep;
    rep.bound = in.bound;
    rep.repairs = repairs_for(in.bound);

    if (!admissible_alpha(in.bound).contains(in.phi.alpha())) {
        rep.hypothesis_satisfied = false;
        rep.hypothesis_notes.push_back("alpha out of range " + admissible_alpha(in.bound).str() +
                                       " for " + to_string(in.bound));
    }
    if (!in.extraction_converged) {
        rep.hypothesis_satisfied = false;
        rep.hypothesis_notes.push_back("extraction did not converge");
    }
    if (in.xs.empty()) {
        rep.hypothesis_notes.push_back("empty x grid");
        return rep;
    }

    const std::size_t dim_x = in.xs.front().size();
    const Vector f0 = in.f(Vector(dim_x, 0.0));
    const Mapping g = [&](VectorView x) { return sub(in.f(x), f0); };
    const CrispNorm& ny = in.norm_y.crisp();

    // premise: N(residual, a) >= N'(phi(x, y), a)
    const auto pairs = premise_pairs(in.bound, in.xs, in.extra_pairs);
    try {
        for (const auto& [x, y] : pairs) {
            const Vector r = funceq::residual_main(g, x, y).value;
            const double phi_xy = in.phi(x, y);
            for (double a : in.a_grid) {
                const double lhs = in.norm_y(r, a);
                const double rhs = membership(in.norm_z, phi_xy, a);
                const double s = lhs - rhs;
                ++rep.premise_checks;
                if (!rep.premise_worst_slack || s < *rep.premise_worst_slack) {
                    rep.premise_worst_slack = s;
                }
                if (s < -in.slack) ++rep.premise_violations;
            }
        }
    } catch (const DomainError& e) {
        rep.hypothesis_satisfied = false;
        rep.hypothesis_notes.push_back(std::string("control undefined on premise pairs: ") +
                                       e.what());
        return rep;
    }
    if (rep.premise_violations > 0) {
        rep.hypothesis_satisfied = false;
        rep.hypothesis_notes.push_back("premise fails at " +
                                       std::to_string(rep.premise_violations) + " of " +
                                       std::to_string(rep.premise_checks) + " samples");
    }

    // parity the single-scheme bounds assume
    if (in.bound != Bound::combined) {
        const bool want_even = quadratic_family(in.bound);
        std::size_t bad = 0;
        for (const Vector& x : in.xs) {
            const Vector p = g(x);
            const Vector m = g(negate(x));
            const Vector d = want_even ? sub(p, m) : add(p, m);
            if (ny(d) > 1e-12 * (1.0 + ny(p))) ++bad;
        }
        if (bad > 0) {
            rep.hypothesis_satisfied = false;
            rep.hypothesis_notes.push_back(std::string("f - f(0) is not ") +
                                           (want_even ? "even" : "odd") + " at " +
                                           std::to_string(bad) + " samples");
        }
    }

    if (!rep.hypothesis_satisfied) {
        rep.hypothesis_notes.push_back("hypothesis not satisfied; bound not asserted");
        return rep;
    }

    const double factor = bound_scale(in.bound, in.phi.alpha());
    const CrispNorm& nx = in.phi.norm();
    for (std::size_t i = 0; i < in.xs.size(); ++i) {
        const Vector& x = in.xs[i];
        const Vector diff = sub(in.approximant(x), g(x));
        const double x_norm = is_zero(x) ? 0.0 : nx(x);
        for (double a : in.a_grid) {
            const double lhs = in.norm_y(diff, a);
            const double rhs = envelope(in.bound, in.phi, in.norm_z, x, a * factor);
            const double s = lhs - rhs;
            rep.rows.push_back({i, x_norm, a, lhs, rhs, s});
            if (!rep.worst_slack || s < *rep.worst_slack) rep.worst_slack = s;
            if (s < -in.slack) ++rep.violations;
        }
    }
    return rep;
}

}  // namespace fuzzystab::control
