// End-to-end acceptance checks. One PASS/FAIL line per criterion; exit status
// is the number of failures.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include <json.hpp>

#include "fuzzystab/control.hpp"
#include "fuzzystab/funceq.hpp"
#include "fuzzystab/fuzzy_space.hpp"
#include "fuzzystab/harness.hpp"
#include "fuzzystab/hyers.hpp"

using namespace fuzzystab;
using funceq::Perturbation;
using funceq::TestFunction;
using hyers::Scheme;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

double euclid(VectorView v) { return CrispNorm::euclidean()(v); }

// a |x|^2 + b (1,...,1).x + c
TestFunction quadratic_in(std::size_t dim, double a, double b, double c) {
    TestFunction f(dim, 1);
    Vector m(dim * dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i) m[i * dim + i] = a;
    f.set_quadratic(0, m).set_linear(0, Vector(dim, b)).set_constant(0, c);
    return f;
}

TestFunction with_terms(double a, double b, double sin_amp, double cos_amp) {
    auto f = TestFunction::polynomial(a, b, 0.0);
    if (sin_amp != 0.0) f.add_perturbation({0, Perturbation::Shape::sin, sin_amp, {1.0}, 0.0});
    if (cos_amp != 0.0) f.add_perturbation({0, Perturbation::Shape::cos, cos_amp, {1.0}, 0.0});
    return f;
}

int cli(const std::string& args) {
    const std::string cmd = std::string("\"") + FUZZYSTAB_CLI + "\" " + args + " 2>/dev/null";
    const int raw = std::system(cmd.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("fuzzystab_acceptance_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

Outcome exact_solution_residual() {
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> coef(-5.0, 5.0);
    std::uniform_real_distribution<double> coord(-3.0, 3.0);
    double worst = 0.0;
    std::size_t evals = 0;
    for (std::size_t dim : {1u, 3u}) {
        for (int t = 0; t < 50; ++t) {
            const auto f = quadratic_in(dim, coef(rng), coef(rng), coef(rng)).mapping();
            for (int k = 0; k < 100; ++k) {
                Vector x(dim), y(dim);
                for (auto& v : x) v = coord(rng);
                for (auto& v : y) v = coord(rng);
                const auto r = funceq::residual_main(f, x, y);
                // relative to the largest evaluation the residual combines
                double scale = 0.0;
                for (double s : {2.0, 1.0}) {
                    for (double sy : {1.0, -1.0}) {
                        Vector z(dim);
                        for (std::size_t i = 0; i < dim; ++i) z[i] = s * x[i] + sy * y[i];
                        scale = std::max(scale, euclid(f(z)));
                    }
                }
                scale = std::max({scale, euclid(f(x)), 1.0});
                worst = std::max(worst, euclid(r.value) / scale);
                ++evals;
            }
        }
    }
    return {worst <= 1e-9, std::to_string(evals) + " pairs, worst relative residual " +
                               fmt("%.3g", worst)};
}

Outcome axiom_suite() {
    const auto norm = fuzzy::FuzzyNorm::induced(CrispNorm::euclidean(), 2);
    std::mt19937_64 rng(202);
    std::uniform_real_distribution<double> coord(-3.0, 3.0);
    std::uniform_real_distribution<double> loga(-3.0, 3.0);
    std::vector<fuzzy::AxiomSample> samples = {{Vector{0.0, 0.0}, 1.0}};
    while (samples.size() < 200) {
        samples.push_back({Vector{coord(rng), coord(rng)}, std::pow(10.0, loga(rng))});
    }
    const std::vector<double> scalars = {-2.5, -1.0, 0.5, 2.0, 7.0};
    const auto rep = fuzzy::check_axioms(norm, samples, scalars);
    bool ok = true;
    std::size_t checks = 0;
    for (const char* ax : {"N1", "N2", "N3", "N4", "N5"}) {
        const auto& c = rep.at(ax);
        ok = ok && c.status == fuzzy::AxiomStatus::pass && c.violations == 0 && c.checks > 0;
        checks += c.checks;
    }
    const bool n6 = rep.at("N6").status == fuzzy::AxiomStatus::sampled;
    return {ok && n6, std::to_string(checks) + " checks on N1-N5 with zero violations; N6 " +
                          fuzzy::to_string(rep.at("N6").status)};
}

Outcome geometric_convergence() {
    const auto f = with_terms(1.0, 0.0, 0.1, 0.0).mapping();
    hyers::ExtractOptions opts;
    opts.n_max = 40;
    double lo = 1.0, hi = 0.0, worst = 0.0;
    bool ok = true;
    for (int i = 0; i < 10; ++i) {
        const double x = 0.3 + 1.7 * i / 9.0;
        const auto r = hyers::extract_limit(Scheme::quadratic_up, f, Vector{x}, opts);
        const double err = std::abs(r.limit_value[0] - x * x);
        lo = std::min(lo, r.ratio_estimate);
        hi = std::max(hi, r.ratio_estimate);
        worst = std::max(worst, err);
        ok = ok && r.converged && err <= 1e-8 && r.ratio_estimate >= 0.15 && r.ratio_estimate <= 0.35;
    }
    return {ok, "ratio in [" + fmt("%.4f", lo) + ", " + fmt("%.4f", hi) + "], max |limit - x^2| " +
                    fmt("%.3g", worst)};
}

Outcome component_recovery() {
    const auto f = TestFunction::polynomial(3.0, 2.0, 5.0).mapping();
    const auto comp = hyers::extract_components(f, 1, {}, {Vector{1.0}});
    const double q = comp.quadratic(Vector{1.0})[0];
    const double a = comp.additive(Vector{1.0})[0];
    const bool comps = std::abs(q - 3.0) <= 1e-9 && std::abs(a - 2.0) <= 1e-9;

    const auto fe = funceq::even_part(f);
    const auto fo = funceq::odd_part(f);
    std::mt19937_64 rng(303);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    double worst_ulps = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const Vector x = {u(rng)};
        const double v = f(x)[0];
        const double ulp = std::numeric_limits<double>::epsilon() * std::abs(v);
        worst_ulps = std::max(worst_ulps, std::abs(fe(x)[0] + fo(x)[0] - v) / ulp);
    }
    return {comps && worst_ulps <= 4.0, "Q(1)=" + fmt("%.17g", q) + " A(1)=" + fmt("%.17g", a) +
                                            ", worst f_e+f_o error " + fmt("%.2f", worst_ulps) +
                                            " ulps"};
}

Outcome limit_laws() {
    const auto f = with_terms(1.0, 2.0, 0.01, 0.01).mapping();
    const hyers::ComponentPair comp(f, 1, {});
    const auto Q = comp.quadratic_mapping();
    const auto A = comp.additive_mapping();
    std::mt19937_64 rng(404);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double rq = 0.0, ra = 0.0, hq = 0.0, ha = 0.0;
    for (int i = 0; i < 20; ++i) {
        const Vector x = {u(rng)}, y = {u(rng)};
        const Vector x2 = {2.0 * x[0]};
        rq = std::max(rq, euclid(funceq::residual_quadratic(Q, x, y).value));
        ra = std::max(ra, euclid(funceq::residual_additive(A, x, y).value));
        hq = std::max(hq, std::abs(Q(x2)[0] - 4.0 * Q(x)[0]));
        ha = std::max(ha, std::abs(A(x2)[0] - 2.0 * A(x)[0]));
    }
    const bool ok = rq <= 1e-6 && ra <= 1e-6 && hq <= 1e-6 && ha <= 1e-6;
    return {ok, "quadratic residual " + fmt("%.2g", rq) + ", additive residual " + fmt("%.2g", ra) +
                    ", |Q(2x)-4Q(x)| " + fmt("%.2g", hq) + ", |A(2x)-2A(x)| " + fmt("%.2g", ha)};
}

Outcome stability_bounds() {
    struct Case {
        const char* name;
        const char* json;
    };
    const Case cases[] = {
        {"quadratic_up", R"({"seed": 1,
          "function": {"quadratic": 1, "perturbations": [{"shape": "cos", "amplitude": 0.01}]},
          "control": {"family": "constant", "delta": "measured", "alpha": 1},
          "bound": "quadratic_up"})"},
        {"additive_up", R"({"seed": 2,
          "function": {"linear": 2, "perturbations": [{"shape": "sin", "amplitude": 0.01}]},
          "control": {"family": "constant", "delta": "measured", "alpha": 1},
          "bound": "additive_up"})"},
        {"combined", R"({"seed": 3,
          "function": {"quadratic": 1, "linear": 2, "perturbations": [
            {"shape": "sin", "amplitude": 0.01}, {"shape": "cos", "amplitude": 0.01}]},
          "control": {"family": "constant", "delta": "measured", "alpha": 1},
          "bound": "combined"})"},
    };
    bool ok = true;
    std::string detail;
    for (const auto& c : cases) {
        const auto cfg = harness::parse_config(c.json, c.name);
        const auto rep = harness::run_pipeline(cfg, harness::Command::verify);
        const bool have = rep.verification.has_value();
        const std::size_t rows = have ? rep.verification->rows.size() : 0;
        const std::size_t viol = have ? rep.verification->violations : 0;
        const bool this_ok = have && rep.verification->hypothesis_satisfied && rows == 20 * 25 &&
                             viol == 0 && rep.exit_status == harness::kExitOk;
        ok = ok && this_ok;
        if (!detail.empty()) detail += "; ";
        detail += std::string(c.name) + ": " + std::to_string(viol) + " violations in " +
                  std::to_string(rows) + " rows, " + rep.control;
    }
    return {ok, detail};
}

Outcome negative_control() {
    const auto dir = scratch("negative");
    const int rc = cli(std::string("run --config \"") + FUZZYSTAB_EXAMPLES +
                       "/negative_control.json\" --out-dir \"" + dir.string() + "\"");
    std::size_t viol = 0;
    try {
        const auto doc = nlohmann::json::parse(slurp(dir / "report.json"));
        viol = doc["verification"]["violations"].get<std::size_t>();
    } catch (const std::exception&) {
        return {false, "report.json missing or unreadable; exit " + std::to_string(rc)};
    }
    return {rc == 1 && viol >= 1,
            "exit " + std::to_string(rc) + ", " + std::to_string(viol) + " violations"};
}

Outcome scaling_agreement() {
    using control::Bound;
    using control::ControlFunction;
    const auto norm_z = fuzzy::FuzzyNorm::induced(CrispNorm::euclidean(), 1);
    const std::vector<Vector> xs = {{0.3}, {-1.0}, {2.5}, {7.0}};
    const auto grid = fuzzy::default_a_grid();
    std::mt19937_64 rng(808);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::size_t agree = 0, total = 0, holds = 0;
    for (Bound b : {Bound::quadratic_up, Bound::quadratic_down, Bound::additive_up,
                    Bound::additive_down}) {
        const auto iv = control::admissible_alpha(b);
        const double hi = std::isfinite(iv.hi) ? iv.hi : iv.lo + 8.0;
        for (int fam = 0; fam < 3; ++fam) {
            for (int i = 0; i < 10; ++i) {
                const double alpha = iv.lo + (hi - iv.lo) * unit(rng);
                const double theta = 0.05 + 2.0 * unit(rng);
                const ControlFunction phi =
                    fam == 0   ? ControlFunction::constant(theta, alpha)
                    : fam == 1 ? ControlFunction::power(theta, 0.05 + 3.5 * unit(rng), alpha)
                               : ControlFunction::product(theta, 0.05 + 2.0 * unit(rng),
                                                          0.05 + 2.0 * unit(rng), alpha);
                const auto v = control::scaling_alpha_check(phi, b, norm_z, xs, grid);
                const bool analytic = control::analytic_scaling_criterion(phi, b);
                agree += v.holds == analytic;
                holds += analytic;
                ++total;
            }
        }
    }
    return {agree == total, std::to_string(agree) + "/" + std::to_string(total) +
                                " agree (" + std::to_string(holds) + " analytic true)"};
}

Outcome uniqueness_surrogate() {
    struct Case {
        const char* name;
        Scheme scheme;
        Mapping f;
        hyers::Window w1;
        hyers::Window w2;
    };
    auto quartic = TestFunction::polynomial(1.0, 0.0, 0.0);
    quartic.add_monomial({0, 0.1, 4, {1.0}});
    auto cubic = TestFunction::polynomial(0.0, -3.0, 0.0);
    cubic.add_monomial({0, 0.2, 3, {1.0}});
    const auto exact = TestFunction::polynomial(3.0, 2.0, 5.0).mapping();
    const Vector e0 = exact(Vector{0.0});
    const Mapping exact0 = [exact, e0](VectorView x) { return sub(exact(x), e0); };
    const auto mixed = with_terms(1.0, 2.0, 0.01, 0.01).mapping();
    const Vector m0 = mixed(Vector{0.0});
    const Mapping mixed0 = [mixed, m0](VectorView x) { return sub(mixed(x), m0); };

    const std::vector<Case> cases = {
        {"x^2+0.1sin", Scheme::quadratic_up, with_terms(1.0, 0.0, 0.1, 0.0).mapping(), {10, 20}, {20, 40}},
        {"x^2+0.01(cos-1)", Scheme::quadratic_up, with_terms(1.0, 0.0, 0.0, 0.01).mapping(), {10, 20}, {20, 40}},
        {"2x+0.01sin", Scheme::additive_up, with_terms(0.0, 2.0, 0.01, 0.0).mapping(), {20, 30}, {30, 40}},
        {"x^2+0.1x^4", Scheme::quadratic_down, quartic.mapping(), {10, 20}, {20, 40}},
        {"-3x+0.2x^3", Scheme::additive_down, cubic.mapping(), {10, 20}, {20, 40}},
        {"even(3x^2+2x+5)", Scheme::quadratic_up, funceq::even_part(exact0), {2, 5}, {5, 9}},
        {"odd(3x^2+2x+5)", Scheme::additive_up, funceq::odd_part(exact0), {2, 5}, {5, 9}},
        {"even(mixed)", Scheme::quadratic_up, funceq::even_part(mixed0), {10, 20}, {20, 40}},
        // the quadratic part cancels in the odd part only up to eps 2^n |x|^2, so the
        // windows sit where that is still below the 0.01 / 2^n perturbation decay
        {"odd(mixed)", Scheme::additive_up, funceq::odd_part(mixed0), {19, 23}, {23, 27}},
    };
    const std::vector<double> xs = {-1.7, -0.6, 0.3, 0.9, 1.4, 2.0};
    bool ok = true;
    double worst = 0.0;
    std::string failed;
    for (const auto& c : cases) {
        for (double x : xs) {
            const auto r = hyers::uniqueness_crosscheck(c.scheme, c.f, Vector{x}, c.w1, c.w2, 1e-8);
            worst = std::max(worst, r.distance);
            const bool this_ok = r.converged1 && r.converged2 && r.distance <= 1e-8;
            if (!this_ok && failed.empty()) failed = std::string(" first failure ") + c.name + " x=" + fmt("%g", x);
            ok = ok && this_ok;
        }
    }
    return {ok, std::to_string(cases.size() * xs.size()) + " window pairs, max distance " +
                    fmt("%.3g", worst) + failed};
}

Outcome determinism() {
    const auto dir = scratch("determinism");
    std::size_t files = 0;
    bool ok = true;
    for (const char* name : {"combined_exact.json", "quadratic_power.json", "negative_control.json"}) {
        for (const char* format : {"json", "csv"}) {
            const std::string base = std::string("run --config \"") + FUZZYSTAB_EXAMPLES + "/" + name +
                                     "\" --format " + format + " --out-dir \"";
            const fs::path a = dir / (std::string(name) + format + "_a");
            const fs::path b = dir / (std::string(name) + format + "_b");
            const int ra = cli(base + a.string() + "\"");
            const int rb = cli(base + b.string() + "\"");
            ok = ok && ra == rb;
            std::size_t here = 0;
            for (const auto& e : fs::directory_iterator(a)) {
                const auto other = b / e.path().filename();
                ok = ok && fs::exists(other) && slurp(e.path()) == slurp(other);
                ++here;
            }
            ok = ok && here > 0;
            files += here;
        }
    }
    return {ok, std::to_string(files) + " report files compared byte for byte"};
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<Outcome()> check;
    };
    const std::vector<Criterion> criteria = {
        {"exact_solution_residual", exact_solution_residual},
        {"axiom_suite", axiom_suite},
        {"geometric_convergence", geometric_convergence},
        {"component_recovery", component_recovery},
        {"limit_laws", limit_laws},
        {"stability_bounds", stability_bounds},
        {"negative_control", negative_control},
        {"scaling_criterion_agreement", scaling_agreement},
        {"uniqueness_surrogate", uniqueness_surrogate},
        {"determinism", determinism},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += !o.pass;
        std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].name,
                    o.detail.c_str());
    }
    return failures;
}
