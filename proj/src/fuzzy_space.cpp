#include "fuzzystab/fuzzy_space.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fuzzystab::fuzzy {

void SpaceConfig::validate() const {
    if (dim_x < 1 || dim_y < 1) {
        throw InputError("space dimensions must be >= 1");
    }
    if (norm_x.kind() == CrispNorm::Kind::weighted && norm_x.weights().size() != dim_x) {
        throw InputError("domain norm weights must have length dim_x");
    }
    if (norm_y.kind() == CrispNorm::Kind::weighted && norm_y.weights().size() != dim_y) {
        throw InputError("codomain norm weights must have length dim_y");
    }
}

double induced_fuzzy_norm(const CrispNorm& norm, VectorView x, double a) {
    const double nx = norm(x);
    if (!(a > 0.0)) return 0.0;
    if (std::isinf(a)) return 1.0;
    return a / (a + nx);
}

FuzzyNorm FuzzyNorm::induced(CrispNorm norm, std::size_t dim) {
    if (dim < 1) throw InputError("fuzzy norm dimension must be >= 1");
    if (norm.kind() == CrispNorm::Kind::weighted && norm.weights().size() != dim) {
        throw InputError("weighted norm weights must match the space dimension");
    }
    std::string name = "induced(" + norm.name() + ")";
    CrispNorm captured = norm;
    return FuzzyNorm(std::move(name), dim, true, std::move(norm),
                     [captured](VectorView x, double a) { return induced_fuzzy_norm(captured, x, a); });
}

FuzzyNorm FuzzyNorm::custom(std::string name, std::size_t dim, Evaluator eval) {
    if (dim < 1) throw InputError("fuzzy norm dimension must be >= 1");
    return FuzzyNorm(std::move(name), dim, false, CrispNorm::euclidean(), std::move(eval));
}

double FuzzyNorm::operator()(VectorView x, double a) const {
    require_dim(x, dim_, "fuzzy norm");
    return eval_(x, a);
}

std::vector<double> log_grid(double lo, double hi, std::size_t points) {
    if (!(lo > 0.0) || !(hi > lo) || points < 1) {
        throw InputError("log grid needs 0 < lo < hi and at least one point");
    }
    if (points == 1) return {lo};
    std::vector<double> g(points);
    const double l0 = std::log(lo);
    const double step = (std::log(hi) - l0) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) {
        g[i] = std::exp(l0 + step * static_cast<double>(i));
    }
    g.front() = lo;
    g.back() = hi;
    return g;
}

std::vector<double> default_a_grid() { return log_grid(1e-3, 1e3, 25); }

const char* to_string(AxiomStatus s) {
    switch (s) {
        case AxiomStatus::pass: return "pass";
        case AxiomStatus::fail: return "fail";
        case AxiomStatus::sampled: return "sampled";
    }
    return "?";
}

const AxiomCheck& AxiomReport::at(const std::string& axiom) const {
    for (const auto& c : checks) {
        if (c.axiom == axiom) return c;
    }
    throw std::out_of_range("no axiom entry " + axiom);
}

bool AxiomReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const AxiomCheck& c) { return c.status != AxiomStatus::fail; });
}

std::size_t AxiomReport::total_violations() const {
    std::size_t n = 0;
    for (const auto& c : checks) n += c.violations;
    return n;
}

namespace {

class Tally {
public:
    Tally(std::string axiom, double slack) : slack_(slack) { check_.axiom = std::move(axiom); }

    // margin >= 0 means the inequality holds
    void record(double margin) {
        ++check_.checks;
        if (check_.checks == 1 || margin < check_.worst_slack) check_.worst_slack = margin;
        if (!(margin >= -slack_)) ++check_.violations;
    }

    AxiomCheck finish(std::string note = {}) {
        check_.status = check_.violations == 0 ? AxiomStatus::pass : AxiomStatus::fail;
        if (check_.checks == 0) note = note.empty() ? "no applicable samples" : note;
        check_.note = std::move(note);
        return check_;
    }

private:
    double slack_;
    AxiomCheck check_;
};

bool is_zero(VectorView x) {
    return std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0; });
}

}  // namespace

AxiomReport check_axioms(const FuzzyNorm& norm, std::span<const AxiomSample> samples,
                         std::span<const double> scalars, const AxiomOptions& opts) {
    std::vector<double> grid = opts.a_grid;
    std::sort(grid.begin(), grid.end());
    grid.erase(std::remove_if(grid.begin(), grid.end(), [](double a) { return !(a > 0.0); }),
               grid.end());

    const double slack = opts.slack;
    AxiomReport report;

    Tally range("range", slack);
    Tally n1("N1", slack);
    for (const auto& s : samples) {
        const double v = norm(s.x, s.a);
        range.record(std::min(v, 1.0 - v));
        for (double a : {0.0, -std::abs(s.a), -1.0}) {
            n1.record(-norm(s.x, a));
        }
        if (s.a <= 0.0) n1.record(-norm(s.x, s.a));
    }
    report.checks.push_back(n1.finish());

    // N2: N(0,a) = 1 for all a > 0; for x != 0 some a > 0 gives N(x,a) < 1.
    Tally n2("N2", slack);
    if (!samples.empty()) {
        const Vector zero(samples.front().x.size(), 0.0);
        for (double a : grid) n2.record(-std::abs(1.0 - norm(zero, a)));
        for (const auto& s : samples) {
            if (s.a > 0.0) n2.record(-std::abs(1.0 - norm(zero, s.a)));
        }
    }
    for (const auto& s : samples) {
        if (is_zero(s.x)) continue;
        double lowest = 1.0;
        for (double a : grid) lowest = std::min(lowest, norm(s.x, a));
        for (int k = 0; k <= 1000 && lowest >= 1.0 - slack; k += 10) {
            lowest = std::min(lowest, norm(s.x, std::ldexp(1.0, -k)));
        }
        // margin > 0 iff the membership drops below one somewhere
        n2.record((1.0 - lowest) - 2.0 * slack);
    }
    report.checks.push_back(n2.finish());

    Tally n3("N3", slack);
    for (const auto& s : samples) {
        if (!(s.a > 0.0)) continue;
        for (double alpha : scalars) {
            if (alpha == 0.0) continue;
            const double lhs = norm(scale(alpha, s.x), s.a);
            const double rhs = norm(s.x, s.a / std::abs(alpha));
            n3.record(-std::abs(lhs - rhs));
        }
    }
    report.checks.push_back(n3.finish(scalars.empty() ? "no scalar samples" : ""));

    Tally n4("N4", slack);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        for (std::size_t j = i; j < samples.size(); ++j) {
            const auto& p = samples[i];
            const auto& q = samples[j];
            const double lhs = norm(add(p.x, q.x), p.a + q.a);
            const double rhs = std::min(norm(p.x, p.a), norm(q.x, q.a));
            n4.record(lhs - rhs);
        }
    }
    report.checks.push_back(n4.finish());

    Tally n5("N5", slack);
    for (const auto& s : samples) {
        for (std::size_t k = 1; k < grid.size(); ++k) {
            n5.record(norm(s.x, grid[k]) - norm(s.x, grid[k - 1]));
        }
        if (!grid.empty()) {
            // a -> infinity: membership must approach 1
            const double far = norm(s.x, grid.back() * 1e9);
            n5.record(far - (1.0 - opts.tolerance));
        }
    }
    report.checks.push_back(n5.finish());

    // N6: only right-continuity at sampled a is observable from point queries.
    Tally n6("N6", slack);
    std::size_t suspects = 0;
    for (const auto& s : samples) {
        if (is_zero(s.x)) continue;
        for (double a : grid) {
            const double jump = std::abs(norm(s.x, a * (1.0 + 1e-9)) - norm(s.x, a));
            n6.record(-jump);
            if (jump > 1e-6) ++suspects;
        }
    }
    AxiomCheck c6 = n6.finish("sampled, not proven");
    c6.violations = suspects;
    c6.status = suspects == 0 ? AxiomStatus::sampled : AxiomStatus::fail;
    report.checks.push_back(c6);

    report.checks.push_back(range.finish("outputs in [0,1]"));
    return report;
}

void SequenceProbe::validate() const {
    if (!terms) throw InputError("sequence probe has no terms");
    if (a_grid.empty()) throw InputError("sequence probe a_grid is empty");
    for (std::size_t i = 0; i < a_grid.size(); ++i) {
        if (!(a_grid[i] > 0.0)) throw InputError("sequence probe a_grid must be positive");
        if (i > 0 && !(a_grid[i] > a_grid[i - 1])) {
            throw InputError("sequence probe a_grid must be strictly increasing");
        }
    }
    if (!(tolerance > 0.0 && tolerance < 1.0)) {
        throw InputError("sequence probe tolerance must lie in (0,1)");
    }
}

bool fuzzy_limit(const FuzzyNorm& norm, const SequenceProbe& probe, VectorView candidate,
                 IndexRange window) {
    probe.validate();
    if (window.empty()) throw InputError("fuzzy_limit: empty index window");
    const double floor = 1.0 - probe.tolerance;
    for (long n = window.first; n <= window.last; ++n) {
        const Vector diff = sub(probe.terms(n), candidate);
        // N(x, .) is monotone, so the smallest a decides; the whole grid is
        // still scanned because custom norms need not be monotone
        for (double a : probe.a_grid) {
            if (!(norm(diff, a) > floor)) return false;
        }
    }
    return true;
}

bool fuzzy_cauchy(const FuzzyNorm& norm, const SequenceProbe& probe, int p_max, long n0,
                  long n_last) {
    probe.validate();
    if (p_max < 1) throw InputError("fuzzy_cauchy: p_max must be >= 1");
    if (n_last < n0) throw InputError("fuzzy_cauchy: empty index range");
    const double floor = 1.0 - probe.tolerance;
    for (long n = n0; n <= n_last; ++n) {
        const Vector xn = probe.terms(n);
        for (int p = 1; p <= p_max; ++p) {
            const Vector diff = sub(probe.terms(n + p), xn);
            for (double a : probe.a_grid) {
                if (!(norm(diff, a) > floor)) return false;
            }
        }
    }
    return true;
}

}  // namespace fuzzystab::fuzzy
