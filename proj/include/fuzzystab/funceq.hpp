#pragma once

// Closed-form test functions and the defects of the additive-quadratic
// equation f(2x+y)+f(2x-y) = f(x+y)+f(x-y)+2f(2x)-2f(x).

#include <cstddef>
#include <string>
#include <vector>

#include "fuzzystab/core.hpp"

namespace fuzzystab::funceq {

/// coef * <direction, x>^degree added to output coordinate `coord`.
struct MonomialTerm {
    std::size_t coord = 0;
    double coef = 0.0;
    int degree = 0;
    Vector direction;
};

/// Globally bounded perturbation added to output coordinate `coord`, with
/// t = <frequency, x> + phase:
///   sin      -> amplitude * sin(t)
///   cos      -> amplitude * (cos(t) - 1)
///   rational -> amplitude * t / (1 + t^2)
struct Perturbation {
    enum class Shape { sin, cos, rational };

    std::size_t coord = 0;
    Shape shape = Shape::sin;
    double amplitude = 0.0;
    Vector frequency;
    double phase = 0.0;
};

const char* to_string(Perturbation::Shape s);
Perturbation::Shape parse_shape(const std::string& s);

/// f : R^dim_x -> R^dim_y. Output coordinate i is
///   c_i + <b_i, x> + x^T M_i x + monomials + perturbations.
class TestFunction {
public:
    TestFunction(std::size_t dim_x, std::size_t dim_y);

    /// Scalar a x^2 + b x + c on R.
    static TestFunction polynomial(double a, double b, double c);

    TestFunction& set_constant(std::size_t coord, double c);
    TestFunction& set_linear(std::size_t coord, Vector row);
    /// Row-major dim_x * dim_x matrix.
    TestFunction& set_quadratic(std::size_t coord, Vector matrix);
    TestFunction& add_monomial(MonomialTerm term);
    TestFunction& add_perturbation(Perturbation term);

    /// Throws InputError when x is not in R^dim_x.
    Vector operator()(VectorView x) const;
    Mapping mapping() const;

    std::size_t dim_x() const { return dim_x_; }
    std::size_t dim_y() const { return dim_y_; }
    /// Sum of perturbation amplitudes; zero means f is exactly its base family.
    double perturbation_amplitude() const;

    const std::vector<double>& constants() const { return constant_; }
    const std::vector<Vector>& linear() const { return linear_; }
    const std::vector<Vector>& quadratic() const { return quadratic_; }
    const std::vector<MonomialTerm>& monomials() const { return monomials_; }
    const std::vector<Perturbation>& perturbations() const { return perturbations_; }

private:
    void check_coord(std::size_t coord) const;

    std::size_t dim_x_;
    std::size_t dim_y_;
    std::vector<double> constant_;
    std::vector<Vector> linear_;
    std::vector<Vector> quadratic_;
    std::vector<MonomialTerm> monomials_;
    std::vector<Perturbation> perturbations_;
};

struct Residual {
    Vector value;
    Vector x;
    Vector y;
};

/// f(2x+y) + f(2x-y) - f(x+y) - f(x-y) - 2f(2x) + 2f(x)
Residual residual_main(const Mapping& f, VectorView x, VectorView y);
/// f(x+y) + f(x-y) - 2f(x) - 2f(y)
Residual residual_quadratic(const Mapping& f, VectorView x, VectorView y);
/// f(x+y) - f(x) - f(y)
Residual residual_additive(const Mapping& f, VectorView x, VectorView y);

/// x -> (f(x) + f(-x)) / 2
Mapping even_part(Mapping f);
/// x -> (f(x) - f(-x)) / 2
Mapping odd_part(Mapping f);

/// (f(x+y) - f(x-y)) / 4
Vector biadditive_form(const Mapping& f, VectorView x, VectorView y);

}  // namespace fuzzystab::funceq
