#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <set>

#include "fuzzystab/harness.hpp"

namespace fuzzystab::harness {

using control::Bound;
using control::ControlFunction;
using hyers::Scheme;

const char* to_string(Command c) {
    switch (c) {
        case Command::check_axioms: return "check-axioms";
        case Command::extract: return "extract";
        case Command::verify: return "verify";
        case Command::run: return "run";
    }
    return "?";
}

namespace {

std::uint64_t splitmix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Distributions are spelled out because std::*_distribution output differs
// between standard libraries, which would break report determinism.
class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : engine_(splitmix(seed)) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double normal() {
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    Vector in_ball(std::size_t dim, double radius) {
        Vector v(dim);
        double n2 = 0.0;
        do {
            n2 = 0.0;
            for (auto& c : v) {
                c = normal();
                n2 += c * c;
            }
        } while (n2 == 0.0);
        const double r = radius * std::pow(uniform(), 1.0 / static_cast<double>(dim)) / std::sqrt(n2);
        for (auto& c : v) c *= r;
        return v;
    }

private:
    std::mt19937_64 engine_;
};

bool is_zero(VectorView x) {
    return std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0; });
}

std::vector<fuzzy::AxiomSample> axiom_samples(std::uint64_t seed, std::size_t count, std::size_t dim,
                                       double radius, const std::vector<double>& a_grid) {
    Sampler s(seed);
    std::vector<fuzzy::AxiomSample> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        Vector x = i == 0 ? Vector(dim, 0.0) : s.in_ball(dim, radius);
        out.push_back({std::move(x), a_grid[i % a_grid.size()]});
    }
    return out;
}

const std::vector<double> kAxiomScalars = {-3.0, -1.0, -0.5, 0.25, 2.0, 10.0};

ControlFunction make_control(const ControlSpec& spec, double magnitude, const CrispNorm& norm_x) {
    switch (spec.family) {
        case ControlFunction::Family::constant:
            return ControlFunction::constant(magnitude, spec.alpha).with_norm(norm_x);
        case ControlFunction::Family::power:
            return ControlFunction::power(magnitude, spec.p, spec.alpha).with_norm(norm_x);
        case ControlFunction::Family::product:
            return ControlFunction::product(magnitude, spec.p1, spec.p2, spec.alpha).with_norm(norm_x);
    }
    return ControlFunction::constant(magnitude, spec.alpha);
}

Scheme single_scheme(Bound b) {
    switch (b) {
        case Bound::quadratic_up: return Scheme::quadratic_up;
        case Bound::quadratic_down: return Scheme::quadratic_down;
        case Bound::additive_up: return Scheme::additive_up;
        case Bound::additive_down: return Scheme::additive_down;
        case Bound::combined: return Scheme::additive_up;
    }
    return Scheme::quadratic_up;
}

void add_unique(std::vector<std::string>& log, const std::vector<std::string>& items) {
    for (const auto& it : items) {
        if (std::find(log.begin(), log.end(), it) == log.end()) log.push_back(it);
    }
}

ExtractionRow override_row(std::size_t i, const char* component, const Vector& x,
                           const funceq::TestFunction& fn) {
    Vector v = is_zero(x) ? Vector(fn.dim_y(), 0.0) : fn(x);
    return {i, component, "override", x, std::move(v), true, 0.0, 0, "override"};
}

ExtractionRow row_from(std::size_t i, const char* component, Scheme scheme, const Vector& x,
                       const hyers::ExtractionResult& r) {
    return {i,           component,          hyers::to_string(scheme), x,
            r.limit_value, r.converged, r.ratio_estimate, r.n_used, r.stop_reason};
}

}  // namespace

std::vector<Vector> ball_samples(std::uint64_t seed, std::size_t count, std::size_t dim,
                                 double radius) {
    Sampler s(seed);
    std::vector<Vector> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(s.in_ball(dim, radius));
    return out;
}

RunReport run_pipeline(const ExperimentConfig& cfg, Command command) {
    RunReport rep;
    rep.command = command;
    rep.seed = cfg.seed;
    rep.bound = control::to_string(cfg.bound);

    const bool do_axioms = command == Command::check_axioms || command == Command::run;
    const bool do_hypothesis = command == Command::verify || command == Command::run;
    const bool do_extract = command != Command::check_axioms;
    const bool do_verify = do_hypothesis;

    const std::size_t dim_x = cfg.space.dim_x;
    const std::size_t dim_y = cfg.space.dim_y;
    const auto a_grid = cfg.a_grid();
    const auto norm_y = fuzzy::FuzzyNorm::induced(cfg.space.norm_y, dim_y);
    const auto norm_z = fuzzy::FuzzyNorm::induced(CrispNorm::euclidean(), 1);

    bool failed = false;

    if (do_axioms) {
        fuzzy::AxiomOptions ao;
        ao.a_grid = a_grid;
        ao.slack = cfg.tolerances.slack;
        ao.tolerance = cfg.tolerances.fuzzy_tol;
        const auto ys = axiom_samples(cfg.seed + 101, cfg.grids.axiom_samples, dim_y,
                                      cfg.grids.x_radius, a_grid);
        const auto zs = axiom_samples(cfg.seed + 102, cfg.grids.axiom_samples, 1,
                                      cfg.grids.x_radius, a_grid);
        rep.axioms.push_back({"N", fuzzy::check_axioms(norm_y, ys, kAxiomScalars, ao)});
        rep.axioms.push_back({"N_prime", fuzzy::check_axioms(norm_z, zs, kAxiomScalars, ao)});
        for (const auto& s : rep.axioms) failed = failed || !s.report.all_pass();
    }

    if (!do_extract) {
        rep.exit_status = failed ? kExitViolations : kExitOk;
        return rep;
    }

    std::vector<Vector> xs = ball_samples(cfg.seed, cfg.grids.x_count, dim_x, cfg.grids.x_radius);
    xs.insert(xs.end(), cfg.grids.x_extra.begin(), cfg.grids.x_extra.end());
    std::vector<control::ArgPair> extra;
    {
        const auto pts = ball_samples(cfg.seed + 1, 2 * cfg.grids.random_pairs, dim_x,
                                      cfg.grids.x_radius);
        for (std::size_t i = 0; i + 1 < pts.size(); i += 2) extra.emplace_back(pts[i], pts[i + 1]);
    }

    const Mapping f = cfg.function.mapping();
    const Vector f0 = f(Vector(dim_x, 0.0));
    const Mapping g = [f, f0](VectorView x) { return sub(f(x), f0); };

    ControlFunction phi = make_control(cfg.control, 0.0, cfg.space.norm_x);
    const auto pairs = control::premise_pairs(cfg.bound, xs, extra);
    if (do_hypothesis) {
        if (cfg.control.magnitude) {
            phi = phi.with_magnitude(*cfg.control.magnitude);
        } else {
            try {
                const double m =
                    cfg.control.family == ControlFunction::Family::constant
                        ? control::measure_residual_sup(g, pairs, cfg.space.norm_y)
                        : control::measure_control_magnitude(g, phi, pairs, cfg.space.norm_y);
                phi = phi.with_magnitude(m);
                rep.messages.push_back("control magnitude measured on " +
                                       std::to_string(pairs.size()) + " premise pairs");
            } catch (const InputError& e) {
                rep.hypothesis.push_back({"control_measurement", control::to_string(cfg.bound),
                                          false, 0.0, e.what()});
                failed = true;
            } catch (const DomainError& e) {
                rep.hypothesis.push_back({"control_measurement", control::to_string(cfg.bound),
                                          false, 0.0, e.what()});
                failed = true;
            }
        }
        rep.control = phi.describe();

        const auto scaling =
            control::scaling_alpha_check(phi, cfg.bound, norm_z, xs, a_grid, cfg.tolerances.slack);
        rep.hypothesis.push_back({"scaling", control::to_string(cfg.bound), scaling.holds,
                                  scaling.witness ? scaling.witness->lhs - scaling.witness->rhs : 0.0,
                                  scaling.reason});
        failed = failed || !scaling.holds;

        const Scheme vs = single_scheme(cfg.bound);
        try {
            const auto vanish = control::vanishing_check(phi, vs, norm_z, pairs, a_grid,
                                                         cfg.tolerances.vanishing_n,
                                                         cfg.tolerances.fuzzy_tol);
            rep.hypothesis.push_back({"vanishing", hyers::to_string(vs), vanish.holds,
                                      vanish.worst_membership, vanish.note});
            failed = failed || !vanish.holds;
        } catch (const DomainError& e) {
            rep.hypothesis.push_back({"vanishing", hyers::to_string(vs), false, 0.0, e.what()});
            failed = true;
        }
    }

    // extraction
    hyers::ExtractOptions opts;
    opts.tol = cfg.tolerances.extraction_tol;
    opts.n_max = cfg.tolerances.n_max;
    opts.confirm_steps = cfg.tolerances.confirm_steps;
    opts.norm_x = cfg.space.norm_x;
    opts.norm_y = cfg.space.norm_y;
    std::map<Vector, Vector> approx_cache;
    Mapping approximant;
    bool converged = true;
    try {
        if (cfg.bound == Bound::combined) {
            hyers::ComponentConfig cc{Scheme::quadratic_up, Scheme::additive_up, opts};
            const bool need_extraction = !cfg.override_quadratic || !cfg.override_additive;
            std::optional<hyers::ComponentPair> pair;
            if (need_extraction) pair = hyers::extract_components(f, dim_x, cc, xs);
            for (std::size_t i = 0; i < xs.size(); ++i) {
                ExtractionRow q = cfg.override_quadratic
                                      ? override_row(i, "Q", xs[i], *cfg.override_quadratic)
                                      : row_from(i, "Q", cc.quadratic, xs[i], pair->samples()[i].quadratic);
                ExtractionRow a = cfg.override_additive
                                      ? override_row(i, "A", xs[i], *cfg.override_additive)
                                      : row_from(i, "A", cc.additive, xs[i], pair->samples()[i].additive);
                converged = converged && q.converged && a.converged;
                approx_cache[xs[i]] = add(q.limit, a.limit);
                rep.extraction.push_back(std::move(q));
                rep.extraction.push_back(std::move(a));
            }
            const auto oq = cfg.override_quadratic;
            const auto oa = cfg.override_additive;
            approximant = [pair, oq, oa, dim_y](VectorView x) {
                if (is_zero(x)) return Vector(dim_y, 0.0);
                const Vector q = oq ? (*oq)(x) : pair->quadratic(x);
                const Vector a = oa ? (*oa)(x) : pair->additive(x);
                return add(q, a);
            };
        } else {
            const Scheme scheme = single_scheme(cfg.bound);
            const char* name = hyers::is_quadratic(scheme) ? "Q" : "A";
            const auto& ov = hyers::is_quadratic(scheme) ? cfg.override_quadratic : cfg.override_additive;
            for (std::size_t i = 0; i < xs.size(); ++i) {
                ExtractionRow row;
                if (ov) {
                    row = override_row(i, name, xs[i], *ov);
                } else if (is_zero(xs[i])) {
                    row = {i, name, hyers::to_string(scheme), xs[i], Vector(dim_y, 0.0), true, 0.0, 0, "origin"};
                } else {
                    row = row_from(i, name, scheme, xs[i], hyers::extract_limit(scheme, g, xs[i], opts));
                }
                converged = converged && row.converged;
                approx_cache[xs[i]] = row.limit;
                rep.extraction.push_back(std::move(row));
            }
            approximant = [ov, scheme, g, opts, dim_y](VectorView x) {
                if (is_zero(x)) return Vector(dim_y, 0.0);
                if (ov) return (*ov)(x);
                return hyers::extract_limit(scheme, g, x, opts).limit_value;
            };
        }
    } catch (const hyers::ScaleError& e) {
        rep.messages.push_back(e.what());
        rep.exit_status = kExitScale;
        return rep;
    }
    if (!converged) {
        rep.messages.push_back("extraction did not converge at every sample");
        failed = true;
    }

    if (do_verify) {
        control::StabilityInput in;
        in.bound = cfg.bound;
        in.f = f;
        in.approximant = [&approx_cache, approximant](VectorView x) {
            auto it = approx_cache.find(Vector(x.begin(), x.end()));
            return it != approx_cache.end() ? it->second : approximant(x);
        };
        in.phi = phi;
        in.norm_y = norm_y;
        in.norm_z = norm_z;
        in.xs = xs;
        in.a_grid = a_grid;
        in.extra_pairs = extra;
        in.extraction_converged = converged;
        in.slack = cfg.tolerances.slack;
        try {
            rep.verification = control::verify_stability(in);
        } catch (const hyers::ScaleError& e) {
            rep.messages.push_back(e.what());
            rep.exit_status = kExitScale;
            return rep;
        }
        const auto& v = *rep.verification;
        rep.hypothesis.push_back({"premise", control::to_string(cfg.bound), v.premise_violations == 0,
                                  v.premise_worst_slack.value_or(0.0),
                                  std::to_string(v.premise_checks) + " checks"});
        for (const auto& note : v.hypothesis_notes) {
            rep.hypothesis.push_back({"bound_hypothesis", control::to_string(cfg.bound),
                                      v.hypothesis_satisfied, 0.0, note});
        }
        failed = failed || !v.hypothesis_satisfied || v.violations > 0;
        add_unique(rep.repairs, v.repairs);
    }

    rep.exit_status = failed ? kExitViolations : kExitOk;
    return rep;
}

}  // namespace fuzzystab::harness
