#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

#include "fuzzystab/harness.hpp"
#include "json_lines.hpp"

namespace fuzzystab::harness {

using nlohmann::json;

ConfigError::ConfigError(std::string source, int line, const std::string& message)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + message), line_(line),
      message_(message) {}

std::vector<double> ExperimentConfig::a_grid() const {
    return fuzzy::log_grid(grids.a_min, grids.a_max, grids.a_points);
}

namespace {

class Reader {
public:
    Reader(const std::string& text, std::string source) : index_(text), source_(std::move(source)) {}

    [[noreturn]] void fail(const std::string& pointer, const std::string& msg) const {
        throw ConfigError(source_, index_.line_of(pointer), msg);
    }

    void only_keys(const json& obj, const std::string& ptr,
                   std::initializer_list<const char*> allowed) const {
        if (!obj.is_object()) fail(ptr, "expected an object at '" + ptr + "'");
        for (auto it = obj.begin(); it != obj.end(); ++it) {
            bool ok = false;
            for (const char* k : allowed) ok = ok || it.key() == k;
            if (!ok) fail(ptr + "/" + it.key(), "unknown key '" + it.key() + "'");
        }
    }

    double number(const json& v, const std::string& ptr) const {
        if (!v.is_number()) fail(ptr, "expected a number at '" + ptr + "'");
        const double d = v.get<double>();
        if (!std::isfinite(d)) fail(ptr, "expected a finite number at '" + ptr + "'");
        return d;
    }

    std::size_t count(const json& v, const std::string& ptr, std::size_t min) const {
        if (!v.is_number_integer() && !v.is_number_unsigned()) {
            fail(ptr, "expected an integer at '" + ptr + "'");
        }
        const auto n = v.get<long long>();
        if (n < static_cast<long long>(min)) {
            fail(ptr, "'" + ptr + "' must be >= " + std::to_string(min));
        }
        return static_cast<std::size_t>(n);
    }

    Vector vec(const json& v, const std::string& ptr, std::size_t dim) const {
        if (!v.is_array()) fail(ptr, "expected an array of " + std::to_string(dim) + " numbers");
        if (v.size() != dim) {
            fail(ptr, "expected " + std::to_string(dim) + " entries, got " + std::to_string(v.size()));
        }
        Vector out;
        for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], ptr + "/" + std::to_string(i)));
        return out;
    }

    std::string str(const json& v, const std::string& ptr) const {
        if (!v.is_string()) fail(ptr, "expected a string at '" + ptr + "'");
        return v.get<std::string>();
    }

private:
    detail::JsonLineIndex index_;
    std::string source_;
};

CrispNorm parse_norm(const Reader& r, const json& v, const std::string& ptr, std::size_t dim) {
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (s == "euclidean") return CrispNorm::euclidean();
        if (s == "max") return CrispNorm::max();
        r.fail(ptr, "unknown norm '" + s + "' (expected euclidean, max or {\"weighted\": [...]})");
    }
    r.only_keys(v, ptr, {"weighted"});
    if (!v.contains("weighted")) r.fail(ptr, "norm object needs 'weighted'");
    const Vector w = r.vec(v["weighted"], ptr + "/weighted", dim);
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (!(w[i] > 0.0)) r.fail(ptr + "/weighted/" + std::to_string(i), "weights must be > 0");
    }
    return CrispNorm::weighted(w);
}

Vector default_direction(const Reader& r, const json& obj, const std::string& key,
                         const std::string& ptr, std::size_t dim_x) {
    if (obj.contains(key)) return r.vec(obj[key], ptr + "/" + key, dim_x);
    if (dim_x != 1) r.fail(ptr, "'" + key + "' is required when dim_x > 1");
    return {1.0};
}

std::size_t coord_of(const Reader& r, const json& obj, const std::string& ptr, std::size_t dim_y) {
    if (!obj.contains("coord")) return 0;
    const std::size_t c = r.count(obj["coord"], ptr + "/coord", 0);
    if (c >= dim_y) r.fail(ptr + "/coord", "coord must be < dim_y");
    return c;
}

funceq::TestFunction parse_function(const Reader& r, const json& v, const std::string& ptr,
                                    std::size_t dim_x, std::size_t dim_y) {
    r.only_keys(v, ptr, {"constant", "linear", "quadratic", "monomials", "perturbations"});
    funceq::TestFunction f(dim_x, dim_y);

    if (v.contains("constant")) {
        const auto& c = v["constant"];
        const std::string p = ptr + "/constant";
        if (c.is_number()) {
            for (std::size_t i = 0; i < dim_y; ++i) f.set_constant(i, r.number(c, p));
        } else {
            const Vector cv = r.vec(c, p, dim_y);
            for (std::size_t i = 0; i < dim_y; ++i) f.set_constant(i, cv[i]);
        }
    }
    if (v.contains("linear")) {
        const auto& l = v["linear"];
        const std::string p = ptr + "/linear";
        if (l.is_number()) {
            if (dim_x != 1 || dim_y != 1) r.fail(p, "scalar 'linear' needs dim_x = dim_y = 1");
            f.set_linear(0, {r.number(l, p)});
        } else {
            if (!l.is_array() || l.size() != dim_y) r.fail(p, "'linear' needs one row per output coordinate");
            for (std::size_t i = 0; i < dim_y; ++i) {
                f.set_linear(i, r.vec(l[i], p + "/" + std::to_string(i), dim_x));
            }
        }
    }
    if (v.contains("quadratic")) {
        const auto& q = v["quadratic"];
        const std::string p = ptr + "/quadratic";
        if (q.is_number()) {
            // s * I on every output coordinate
            const double s = r.number(q, p);
            Vector m(dim_x * dim_x, 0.0);
            for (std::size_t i = 0; i < dim_x; ++i) m[i * dim_x + i] = s;
            for (std::size_t i = 0; i < dim_y; ++i) f.set_quadratic(i, m);
        } else {
            if (!q.is_array() || q.size() != dim_y) {
                r.fail(p, "'quadratic' needs one row-major matrix per output coordinate");
            }
            for (std::size_t i = 0; i < dim_y; ++i) {
                f.set_quadratic(i, r.vec(q[i], p + "/" + std::to_string(i), dim_x * dim_x));
            }
        }
    }
    if (v.contains("monomials")) {
        const auto& ms = v["monomials"];
        const std::string p = ptr + "/monomials";
        if (!ms.is_array()) r.fail(p, "'monomials' must be an array");
        for (std::size_t k = 0; k < ms.size(); ++k) {
            const std::string mp = p + "/" + std::to_string(k);
            const auto& m = ms[k];
            r.only_keys(m, mp, {"coord", "coef", "degree", "direction"});
            funceq::MonomialTerm t;
            t.coord = coord_of(r, m, mp, dim_y);
            if (!m.contains("coef")) r.fail(mp, "monomial needs 'coef'");
            t.coef = r.number(m["coef"], mp + "/coef");
            if (!m.contains("degree")) r.fail(mp, "monomial needs 'degree'");
            t.degree = static_cast<int>(r.count(m["degree"], mp + "/degree", 0));
            t.direction = default_direction(r, m, "direction", mp, dim_x);
            f.add_monomial(std::move(t));
        }
    }
    if (v.contains("perturbations")) {
        const auto& ps = v["perturbations"];
        const std::string p = ptr + "/perturbations";
        if (!ps.is_array()) r.fail(p, "'perturbations' must be an array");
        for (std::size_t k = 0; k < ps.size(); ++k) {
            const std::string pp = p + "/" + std::to_string(k);
            const auto& e = ps[k];
            r.only_keys(e, pp, {"coord", "shape", "amplitude", "frequency", "phase"});
            funceq::Perturbation t;
            t.coord = coord_of(r, e, pp, dim_y);
            if (!e.contains("shape")) r.fail(pp, "perturbation needs 'shape'");
            try {
                t.shape = funceq::parse_shape(r.str(e["shape"], pp + "/shape"));
            } catch (const InputError& err) {
                r.fail(pp + "/shape", err.what());
            }
            if (!e.contains("amplitude")) r.fail(pp, "perturbation needs 'amplitude'");
            t.amplitude = r.number(e["amplitude"], pp + "/amplitude");
            if (t.amplitude < 0.0) r.fail(pp + "/amplitude", "amplitude must be >= 0");
            t.frequency = default_direction(r, e, "frequency", pp, dim_x);
            if (e.contains("phase")) t.phase = r.number(e["phase"], pp + "/phase");
            f.add_perturbation(std::move(t));
        }
    }
    return f;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::string& source) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(source, detail::JsonLineIndex::line_at_byte(text, e.byte),
                          std::string("malformed JSON: ") + e.what());
    }
    const Reader r(text, source);
    r.only_keys(doc, "",
                {"seed", "space", "function", "control", "bound", "grids", "tolerances", "override"});

    ExperimentConfig cfg;

    if (doc.contains("seed")) cfg.seed = static_cast<std::uint64_t>(r.count(doc["seed"], "/seed", 0));

    if (doc.contains("space")) {
        const auto& s = doc["space"];
        r.only_keys(s, "/space", {"dim_x", "dim_y", "norm_x", "norm_y"});
        if (s.contains("dim_x")) cfg.space.dim_x = r.count(s["dim_x"], "/space/dim_x", 1);
        if (s.contains("dim_y")) cfg.space.dim_y = r.count(s["dim_y"], "/space/dim_y", 1);
        if (s.contains("norm_x")) cfg.space.norm_x = parse_norm(r, s["norm_x"], "/space/norm_x", cfg.space.dim_x);
        if (s.contains("norm_y")) cfg.space.norm_y = parse_norm(r, s["norm_y"], "/space/norm_y", cfg.space.dim_y);
    }

    if (!doc.contains("function")) r.fail("", "config needs a 'function' section");
    cfg.function = parse_function(r, doc["function"], "/function", cfg.space.dim_x, cfg.space.dim_y);

    if (doc.contains("bound")) {
        try {
            cfg.bound = control::parse_bound(r.str(doc["bound"], "/bound"));
        } catch (const InputError& e) {
            r.fail("/bound", std::string(e.what()) +
                                 " (expected quadratic_up, quadratic_down, additive_up, additive_down or combined)");
        }
    }

    if (doc.contains("control")) {
        const auto& c = doc["control"];
        r.only_keys(c, "/control", {"family", "delta", "theta", "p", "p1", "p2", "alpha"});
        auto& spec = cfg.control;
        if (c.contains("family")) {
            const std::string fam = r.str(c["family"], "/control/family");
            if (fam == "constant") {
                spec.family = control::ControlFunction::Family::constant;
            } else if (fam == "power") {
                spec.family = control::ControlFunction::Family::power;
            } else if (fam == "product") {
                spec.family = control::ControlFunction::Family::product;
            } else {
                r.fail("/control/family", "unknown control family '" + fam + "'");
            }
        }
        const char* mag_key =
            spec.family == control::ControlFunction::Family::constant ? "delta" : "theta";
        const char* other_key =
            spec.family == control::ControlFunction::Family::constant ? "theta" : "delta";
        if (c.contains(other_key)) {
            r.fail(std::string("/control/") + other_key,
                   std::string("'") + other_key + "' does not apply to this control family");
        }
        if (c.contains(mag_key)) {
            const std::string p = std::string("/control/") + mag_key;
            const auto& m = c[mag_key];
            if (m.is_string()) {
                if (m.get<std::string>() != "measured") r.fail(p, "expected a number or \"measured\"");
                spec.magnitude.reset();
            } else {
                spec.magnitude = r.number(m, p);
                if (*spec.magnitude < 0.0) r.fail(p, std::string(mag_key) + " must be >= 0");
            }
        }
        if (c.contains("p")) spec.p = r.number(c["p"], "/control/p");
        if (c.contains("p1")) spec.p1 = r.number(c["p1"], "/control/p1");
        if (c.contains("p2")) spec.p2 = r.number(c["p2"], "/control/p2");
        if (c.contains("alpha")) spec.alpha = r.number(c["alpha"], "/control/alpha");
    }
    try {
        control::require_admissible_alpha(cfg.bound, cfg.control.alpha);
    } catch (const InputError& e) {
        r.fail(doc.contains("control") && doc["control"].contains("alpha") ? "/control/alpha" : "/bound",
               e.what());
    }

    if (doc.contains("grids")) {
        const auto& g = doc["grids"];
        r.only_keys(g, "/grids",
                    {"x_count", "x_radius", "a_min", "a_max", "a_points", "random_pairs", "axiom_samples",
                     "x_extra"});
        auto& gs = cfg.grids;
        if (g.contains("x_count")) gs.x_count = r.count(g["x_count"], "/grids/x_count", 1);
        if (g.contains("x_radius")) gs.x_radius = r.number(g["x_radius"], "/grids/x_radius");
        if (g.contains("a_min")) gs.a_min = r.number(g["a_min"], "/grids/a_min");
        if (g.contains("a_max")) gs.a_max = r.number(g["a_max"], "/grids/a_max");
        if (g.contains("a_points")) gs.a_points = r.count(g["a_points"], "/grids/a_points", 1);
        if (g.contains("random_pairs")) gs.random_pairs = r.count(g["random_pairs"], "/grids/random_pairs", 0);
        if (g.contains("axiom_samples")) gs.axiom_samples = r.count(g["axiom_samples"], "/grids/axiom_samples", 1);
        if (g.contains("x_extra")) {
            const auto& xe = g["x_extra"];
            if (!xe.is_array()) r.fail("/grids/x_extra", "'x_extra' must be an array of points");
            for (std::size_t i = 0; i < xe.size(); ++i) {
                gs.x_extra.push_back(r.vec(xe[i], "/grids/x_extra/" + std::to_string(i), cfg.space.dim_x));
            }
        }
        if (!(gs.x_radius > 0.0)) r.fail("/grids/x_radius", "x_radius must be > 0");
        if (!(gs.a_min > 0.0)) r.fail("/grids/a_min", "a_min must be > 0");
        if (!(gs.a_max > gs.a_min)) r.fail("/grids/a_max", "a_max must exceed a_min");
    }

    if (doc.contains("tolerances")) {
        const auto& t = doc["tolerances"];
        r.only_keys(t, "/tolerances", {"extraction_tol", "n_max", "confirm_steps", "slack", "fuzzy_tol", "vanishing_n"});
        auto& ts = cfg.tolerances;
        if (t.contains("extraction_tol")) ts.extraction_tol = r.number(t["extraction_tol"], "/tolerances/extraction_tol");
        if (t.contains("n_max")) ts.n_max = static_cast<int>(r.count(t["n_max"], "/tolerances/n_max", 2));
        if (t.contains("confirm_steps")) {
            ts.confirm_steps = static_cast<int>(r.count(t["confirm_steps"], "/tolerances/confirm_steps", 1));
        }
        if (t.contains("slack")) ts.slack = r.number(t["slack"], "/tolerances/slack");
        if (t.contains("fuzzy_tol")) ts.fuzzy_tol = r.number(t["fuzzy_tol"], "/tolerances/fuzzy_tol");
        if (t.contains("vanishing_n")) ts.vanishing_n = static_cast<int>(r.count(t["vanishing_n"], "/tolerances/vanishing_n", 1));
        if (!(ts.extraction_tol > 0.0)) r.fail("/tolerances/extraction_tol", "extraction_tol must be > 0");
        if (!(ts.slack >= 0.0)) r.fail("/tolerances/slack", "slack must be >= 0");
        if (!(ts.fuzzy_tol > 0.0 && ts.fuzzy_tol < 1.0)) r.fail("/tolerances/fuzzy_tol", "fuzzy_tol must lie in (0,1)");
    }

    if (doc.contains("override")) {
        const auto& o = doc["override"];
        r.only_keys(o, "/override", {"quadratic", "additive"});
        if (o.contains("quadratic")) {
            cfg.override_quadratic = parse_function(r, o["quadratic"], "/override/quadratic",
                                                    cfg.space.dim_x, cfg.space.dim_y);
        }
        if (o.contains("additive")) {
            cfg.override_additive = parse_function(r, o["additive"], "/override/additive",
                                                   cfg.space.dim_x, cfg.space.dim_y);
        }
    }

    try {
        cfg.space.validate();
    } catch (const InputError& e) {
        r.fail("/space", e.what());
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path, 1, "cannot read config file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

}  // namespace fuzzystab::harness
