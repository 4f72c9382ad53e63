#include "fuzzystab/hyers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fuzzystab/funceq.hpp"

namespace fuzzystab::hyers {

const char* to_string(Scheme s) {
    switch (s) {
        case Scheme::quadratic_up: return "quadratic_up";
        case Scheme::quadratic_down: return "quadratic_down";
        case Scheme::additive_up: return "additive_up";
        case Scheme::additive_down: return "additive_down";
    }
    return "?";
}

Scheme parse_scheme(const std::string& s) {
    if (s == "quadratic_up") return Scheme::quadratic_up;
    if (s == "quadratic_down") return Scheme::quadratic_down;
    if (s == "additive_up") return Scheme::additive_up;
    if (s == "additive_down") return Scheme::additive_down;
    throw InputError("unknown scheme '" + s + "'");
}

bool is_quadratic(Scheme s) { return s == Scheme::quadratic_up || s == Scheme::quadratic_down; }
bool is_scale_up(Scheme s) { return s == Scheme::quadratic_up || s == Scheme::additive_up; }

std::string AlphaInterval::str() const {
    std::ostringstream os;
    os << '(' << lo << ',';
    if (std::isinf(hi)) {
        os << "inf";
    } else {
        os << hi;
    }
    os << ')';
    return os.str();
}

AlphaInterval admissible_alpha(Scheme s) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    switch (s) {
        case Scheme::quadratic_up: return {0.0, 4.0};
        case Scheme::quadratic_down: return {4.0, inf};
        case Scheme::additive_up: return {0.0, 2.0};
        case Scheme::additive_down: return {2.0, inf};
    }
    return {0.0, 0.0};
}

void require_admissible_alpha(Scheme s, double alpha) {
    const AlphaInterval iv = admissible_alpha(s);
    if (!iv.contains(alpha)) {
        throw InputError("alpha out of range " + iv.str() + " for " + to_string(s));
    }
}

namespace {
std::string scale_message(Scheme scheme, VectorView x, int n) {
    std::ostringstream os;
    os.precision(17);
    os << "scale error: |2^n x| exceeds " << kOverflowGuard << " in " << to_string(scheme)
       << " at n=" << n << ", x=[";
    for (std::size_t i = 0; i < x.size(); ++i) os << (i ? "," : "") << x[i];
    os << ']';
    return os.str();
}

constexpr double kNoiseUlps = 16.0;

// log2 of the output rescaling: 4^-n, 4^n, 2^-n, 2^n
int output_exponent(Scheme s, int n) {
    switch (s) {
        case Scheme::quadratic_up: return -2 * n;
        case Scheme::quadratic_down: return 2 * n;
        case Scheme::additive_up: return -n;
        case Scheme::additive_down: return n;
    }
    return 0;
}

bool is_zero(VectorView x) {
    return std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0; });
}
}  // namespace

ScaleError::ScaleError(Scheme scheme, Vector x, int n)
    : std::runtime_error(scale_message(scheme, x, n)), scheme_(scheme), x_(std::move(x)), n_(n) {}

Vector iterate(Scheme scheme, const Mapping& f, VectorView x, int n, const CrispNorm& norm_x) {
    if (n < 0) throw InputError("iterate: n must be >= 0");
    const int arg_exp = is_scale_up(scheme) ? n : -n;
    const Vector arg = scale_pow2(x, arg_exp);
    if (is_scale_up(scheme)) {
        const double size = norm_x(arg);
        if (!(size <= kOverflowGuard)) {
            throw ScaleError(scheme, Vector(x.begin(), x.end()), n);
        }
    }
    return scale_pow2(f(arg), output_exponent(scheme, n));
}

void ExtractOptions::validate() const {
    if (!(tol > 0.0)) throw InputError("extraction tol must be > 0");
    if (n_max < 2) throw InputError("extraction n_max must be >= 2");
    if (confirm_steps < 1) throw InputError("extraction confirm_steps must be >= 1");
}

double geometric_ratio(const std::vector<double>& diffs) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t m = 0;
    for (std::size_t i = 0; i < diffs.size(); ++i) {
        if (!(diffs[i] > 0.0) || !std::isfinite(diffs[i])) continue;
        const double xi = static_cast<double>(i);
        const double yi = std::log(diffs[i]);
        sx += xi;
        sy += yi;
        sxx += xi * xi;
        sxy += xi * yi;
        ++m;
    }
    if (m < 2) return 0.0;
    const double md = static_cast<double>(m);
    const double denom = md * sxx - sx * sx;
    if (denom <= 0.0) return 0.0;
    return std::exp((md * sxy - sx * sy) / denom);
}

ExtractionResult extract_limit(Scheme scheme, const Mapping& f, VectorView x,
                               const ExtractOptions& opts) {
    opts.validate();
    ExtractionResult res;
    res.iterates.push_back({0, iterate(scheme, f, x, 0, opts.norm_x)});
    std::vector<double> diffs;
    const bool origin = is_zero(x);
    bool last_step_small = false;
    int streak = 0;

    for (int n = 1; n <= opts.n_max; ++n) {
        if (!is_scale_up(scheme) && !origin &&
            opts.norm_x(scale_pow2(x, -n)) < kDenormalGuard) {
            res.stop_reason = "denormal guard";
            res.converged = last_step_small;
            break;
        }
        Vector v = iterate(scheme, f, x, n, opts.norm_x);
        const double d = opts.norm_y(sub(v, res.iterates.back().value));
        const double size = opts.norm_y(v);
        double noise = 0.0;
        if (opts.noise_scale) {
            const Vector arg = scale_pow2(x, is_scale_up(scheme) ? n : -n);
            noise = kNoiseUlps * std::numeric_limits<double>::epsilon() *
                    std::ldexp(opts.noise_scale(arg), output_exponent(scheme, n));
        }
        diffs.push_back(d);
        res.iterates.push_back({n, std::move(v)});
        // up-schemes only count steps once 2^n x has left the unit ball
        const bool scaled_out = !is_scale_up(scheme) || origin ||
                                opts.norm_x(scale_pow2(x, n)) >= 1.0;
        last_step_small = d <= opts.tol * (1.0 + size) + noise;
        streak = last_step_small && scaled_out ? streak + 1 : 0;
        if (streak >= opts.confirm_steps) {
            res.converged = true;
            res.stop_reason = "converged";
            break;
        }
    }
    if (res.stop_reason.empty()) res.stop_reason = "n_max reached";
    res.n_used = res.iterates.back().n;
    res.limit_value = res.iterates.back().value;
    res.ratio_estimate = geometric_ratio(diffs);
    return res;
}

void ComponentConfig::validate() const {
    if (!is_quadratic(quadratic)) {
        throw InputError(std::string("component extraction needs a quadratic scheme, got ") +
                         to_string(quadratic));
    }
    if (is_quadratic(additive)) {
        throw InputError(std::string("component extraction needs an additive scheme, got ") +
                         to_string(additive));
    }
    options.validate();
}

ComponentPair::ComponentPair(Mapping f, std::size_t dim_x, ComponentConfig cfg)
    : dim_x_(dim_x), cfg_(std::move(cfg)) {
    if (dim_x < 1) throw InputError("component extraction: dim_x must be >= 1");
    cfg_.validate();
    f0_ = f(Vector(dim_x, 0.0));
    raw_ = f;
    normalized_ = [f = std::move(f), f0 = f0_](VectorView x) { return sub(f(x), f0); };
    // even and odd parts lose the bits of f(t) and f(-t) to cancellation
    cfg_.options.noise_scale = [raw = raw_, norm = cfg_.options.norm_y](VectorView t) {
        return norm(raw(t)) + norm(raw(negate(t)));
    };
    even_ = funceq::even_part(normalized_);
    odd_ = funceq::odd_part(normalized_);
}

ExtractionResult ComponentPair::quadratic_diagnostics(VectorView x) const {
    require_dim(x, dim_x_, "component query");
    return extract_limit(cfg_.quadratic, even_, x, cfg_.options);
}

ExtractionResult ComponentPair::additive_diagnostics(VectorView x) const {
    require_dim(x, dim_x_, "component query");
    return extract_limit(cfg_.additive, odd_, x, cfg_.options);
}

Vector ComponentPair::quadratic(VectorView x) const {
    require_dim(x, dim_x_, "component query");
    if (is_zero(x)) return Vector(f0_.size(), 0.0);
    return quadratic_diagnostics(x).limit_value;
}

Vector ComponentPair::additive(VectorView x) const {
    require_dim(x, dim_x_, "component query");
    if (is_zero(x)) return Vector(f0_.size(), 0.0);
    return additive_diagnostics(x).limit_value;
}

Mapping ComponentPair::quadratic_mapping() const {
    return [self = *this](VectorView x) { return self.quadratic(x); };
}

Mapping ComponentPair::additive_mapping() const {
    return [self = *this](VectorView x) { return self.additive(x); };
}

bool ComponentPair::quadratic_converged() const {
    return std::all_of(samples_.begin(), samples_.end(),
                       [](const Sample& s) { return s.quadratic.converged; });
}

bool ComponentPair::additive_converged() const {
    return std::all_of(samples_.begin(), samples_.end(),
                       [](const Sample& s) { return s.additive.converged; });
}

ComponentPair extract_components(const Mapping& f, std::size_t dim_x, const ComponentConfig& cfg,
                                 const std::vector<Vector>& sample_xs) {
    ComponentPair pair(f, dim_x, cfg);
    pair.samples_.reserve(sample_xs.size());
    for (const Vector& x : sample_xs) {
        ComponentPair::Sample s{x, pair.quadratic_diagnostics(x), pair.additive_diagnostics(x)};
        if (is_zero(x)) {
            s.quadratic.limit_value.assign(pair.f0_.size(), 0.0);
            s.additive.limit_value.assign(pair.f0_.size(), 0.0);
        }
        pair.samples_.push_back(std::move(s));
    }
    return pair;
}

namespace {
struct WindowLimit {
    Vector value;
    bool converged;
    std::string note;
};

WindowLimit window_limit(Scheme scheme, const Mapping& f, VectorView x, Window w, double tol,
                         const CrispNorm& norm_x, const CrispNorm& norm_y) {
    const Vector prev = iterate(scheme, f, x, w.end - 2, norm_x);
    Vector last = iterate(scheme, f, x, w.end - 1, norm_x);
    const double step = norm_y(sub(last, prev));
    const bool ok = std::isfinite(step) && step <= tol * (1.0 + norm_y(last));
    std::string note;
    if (!ok) {
        std::ostringstream os;
        os << "window [" << w.begin << ',' << w.end << ") not converged: last step " << step;
        note = os.str();
    }
    return {std::move(last), ok, std::move(note)};
}
}  // namespace

CrosscheckResult uniqueness_crosscheck(Scheme scheme, const Mapping& f, VectorView x, Window w1,
                                       Window w2, double tol, const CrispNorm& norm_x,
                                       const CrispNorm& norm_y) {
    if (w1.begin < 0 || w2.begin < 0 || w1.end - w1.begin < 2 || w2.end - w2.begin < 2) {
        throw InputError("uniqueness_crosscheck: windows need at least two non-negative indices");
    }
    if (!(w1.end <= w2.begin || w2.end <= w1.begin)) {
        throw InputError("uniqueness_crosscheck: windows must be disjoint");
    }
    if (!(tol > 0.0)) throw InputError("uniqueness_crosscheck: tol must be > 0");

    CrosscheckResult res;
    WindowLimit l1 = window_limit(scheme, f, x, w1, tol, norm_x, norm_y);
    WindowLimit l2 = window_limit(scheme, f, x, w2, tol, norm_x, norm_y);
    res.limit1 = std::move(l1.value);
    res.limit2 = std::move(l2.value);
    res.converged1 = l1.converged;
    res.converged2 = l2.converged;
    res.distance = norm_y(sub(res.limit1, res.limit2));
    if (!res.converged1 || !res.converged2) {
        res.diagnostic = !l1.note.empty() ? l1.note : l2.note;
        res.agree = false;
        return res;
    }
    res.agree = res.distance <= tol;
    if (!res.agree) {
        std::ostringstream os;
        os << "window limits differ by " << res.distance;
        res.diagnostic = os.str();
    }
    return res;
}

}  // namespace fuzzystab::hyers
