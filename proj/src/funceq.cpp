#include "fuzzystab/funceq.hpp"

#include <cmath>

namespace fuzzystab::funceq {

const char* to_string(Perturbation::Shape s) {
    switch (s) {
        case Perturbation::Shape::sin: return "sin";
        case Perturbation::Shape::cos: return "cos";
        case Perturbation::Shape::rational: return "rational";
    }
    return "?";
}

Perturbation::Shape parse_shape(const std::string& s) {
    if (s == "sin") return Perturbation::Shape::sin;
    if (s == "cos") return Perturbation::Shape::cos;
    if (s == "rational") return Perturbation::Shape::rational;
    throw InputError("unknown perturbation shape '" + s + "' (expected sin, cos or rational)");
}

TestFunction::TestFunction(std::size_t dim_x, std::size_t dim_y)
    : dim_x_(dim_x), dim_y_(dim_y), constant_(dim_y, 0.0), linear_(dim_y, Vector(dim_x, 0.0)),
      quadratic_(dim_y, Vector(dim_x * dim_x, 0.0)) {
    if (dim_x < 1 || dim_y < 1) throw InputError("test function dimensions must be >= 1");
}

TestFunction TestFunction::polynomial(double a, double b, double c) {
    TestFunction f(1, 1);
    f.set_constant(0, c).set_linear(0, {b}).set_quadratic(0, {a});
    return f;
}

void TestFunction::check_coord(std::size_t coord) const {
    if (coord >= dim_y_) {
        throw InputError("output coordinate " + std::to_string(coord) + " out of range for dim_y " +
                         std::to_string(dim_y_));
    }
}

TestFunction& TestFunction::set_constant(std::size_t coord, double c) {
    check_coord(coord);
    constant_[coord] = c;
    return *this;
}

TestFunction& TestFunction::set_linear(std::size_t coord, Vector row) {
    check_coord(coord);
    require_dim(row, dim_x_, "linear part");
    linear_[coord] = std::move(row);
    return *this;
}

TestFunction& TestFunction::set_quadratic(std::size_t coord, Vector matrix) {
    check_coord(coord);
    require_dim(matrix, dim_x_ * dim_x_, "quadratic form");
    quadratic_[coord] = std::move(matrix);
    return *this;
}

TestFunction& TestFunction::add_monomial(MonomialTerm term) {
    check_coord(term.coord);
    require_dim(term.direction, dim_x_, "monomial direction");
    if (term.degree < 0) throw InputError("monomial degree must be >= 0");
    monomials_.push_back(std::move(term));
    return *this;
}

TestFunction& TestFunction::add_perturbation(Perturbation term) {
    check_coord(term.coord);
    require_dim(term.frequency, dim_x_, "perturbation frequency");
    if (!(term.amplitude >= 0.0)) throw InputError("perturbation amplitude must be >= 0");
    perturbations_.push_back(std::move(term));
    return *this;
}

namespace {
double dot(VectorView a, VectorView b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}
}  // namespace

Vector TestFunction::operator()(VectorView x) const {
    require_dim(x, dim_x_, "test function argument");
    Vector out(dim_y_);
    for (std::size_t i = 0; i < dim_y_; ++i) {
        const Vector& m = quadratic_[i];
        double q = 0.0;
        for (std::size_t r = 0; r < dim_x_; ++r) {
            double row = 0.0;
            for (std::size_t c = 0; c < dim_x_; ++c) row += m[r * dim_x_ + c] * x[c];
            q += x[r] * row;
        }
        out[i] = q + dot(linear_[i], x) + constant_[i];
    }
    for (const auto& t : monomials_) {
        out[t.coord] += t.coef * std::pow(dot(t.direction, x), t.degree);
    }
    for (const auto& p : perturbations_) {
        const double t = dot(p.frequency, x) + p.phase;
        double v = 0.0;
        switch (p.shape) {
            case Perturbation::Shape::sin: v = std::sin(t); break;
            case Perturbation::Shape::cos: v = std::cos(t) - 1.0; break;
            case Perturbation::Shape::rational: v = t / (1.0 + t * t); break;
        }
        out[p.coord] += p.amplitude * v;
    }
    return out;
}

Mapping TestFunction::mapping() const {
    return [f = *this](VectorView x) { return f(x); };
}

double TestFunction::perturbation_amplitude() const {
    double s = 0.0;
    for (const auto& p : perturbations_) s += p.amplitude;
    return s;
}

namespace {

void require_pair(VectorView x, VectorView y) {
    if (x.size() != y.size()) {
        throw InputError("residual arguments differ in dimension: " + std::to_string(x.size()) +
                         " vs " + std::to_string(y.size()));
    }
}

// out += s * v
void axpy(Vector& out, double s, const Vector& v) {
    if (out.empty()) out.assign(v.size(), 0.0);
    if (out.size() != v.size()) throw InputError("function returned inconsistent dimensions");
    for (std::size_t i = 0; i < v.size(); ++i) out[i] += s * v[i];
}

}  // namespace

Residual residual_main(const Mapping& f, VectorView x, VectorView y) {
    require_pair(x, y);
    const Vector x2 = scale_pow2(x, 1);
    Vector r;
    axpy(r, 1.0, f(add(x2, y)));
    axpy(r, 1.0, f(sub(x2, y)));
    axpy(r, -1.0, f(add(x, y)));
    axpy(r, -1.0, f(sub(x, y)));
    axpy(r, -2.0, f(x2));
    axpy(r, 2.0, f(x));
    return {std::move(r), Vector(x.begin(), x.end()), Vector(y.begin(), y.end())};
}

Residual residual_quadratic(const Mapping& f, VectorView x, VectorView y) {
    require_pair(x, y);
    Vector r;
    axpy(r, 1.0, f(add(x, y)));
    axpy(r, 1.0, f(sub(x, y)));
    axpy(r, -2.0, f(x));
    axpy(r, -2.0, f(y));
    return {std::move(r), Vector(x.begin(), x.end()), Vector(y.begin(), y.end())};
}

Residual residual_additive(const Mapping& f, VectorView x, VectorView y) {
    require_pair(x, y);
    Vector r;
    axpy(r, 1.0, f(add(x, y)));
    axpy(r, -1.0, f(x));
    axpy(r, -1.0, f(y));
    return {std::move(r), Vector(x.begin(), x.end()), Vector(y.begin(), y.end())};
}

Mapping even_part(Mapping f) {
    return [f = std::move(f)](VectorView x) {
        const Vector p = f(x);
        const Vector m = f(negate(x));
        Vector out(p.size());
        for (std::size_t i = 0; i < p.size(); ++i) out[i] = 0.5 * (p[i] + m[i]);
        return out;
    };
}

Mapping odd_part(Mapping f) {
    return [f = std::move(f)](VectorView x) {
        const Vector p = f(x);
        const Vector m = f(negate(x));
        Vector out(p.size());
        for (std::size_t i = 0; i < p.size(); ++i) out[i] = 0.5 * (p[i] - m[i]);
        return out;
    };
}

Vector biadditive_form(const Mapping& f, VectorView x, VectorView y) {
    require_pair(x, y);
    return scale(0.25, sub(f(add(x, y)), f(sub(x, y))));
}

}  // namespace fuzzystab::funceq
