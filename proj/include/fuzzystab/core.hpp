#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fuzzystab {

using Vector = std::vector<double>;
using VectorView = std::span<const double>;

/// Any closed-form map X -> Y. TestFunction and the derived parts convert to it.
using Mapping = std::function<Vector(VectorView)>;

/// Bad user input: dimension mismatch, out-of-range parameter, malformed config.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A control function evaluated outside its domain (0 raised to a negative power).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Crisp norm on R^d.
class CrispNorm {
public:
    enum class Kind { euclidean, max, weighted };

    CrispNorm() = default;
    static CrispNorm euclidean() { return CrispNorm(Kind::euclidean, {}); }
    static CrispNorm max() { return CrispNorm(Kind::max, {}); }
    /// Weighted Euclidean norm sqrt(sum w_i x_i^2); weights must be positive.
    static CrispNorm weighted(std::vector<double> weights);

    Kind kind() const { return kind_; }
    const std::vector<double>& weights() const { return weights_; }

    /// Throws InputError when a weighted norm meets a vector of the wrong length.
    double operator()(VectorView x) const;

    std::string name() const;

private:
    CrispNorm(Kind kind, std::vector<double> weights) : kind_(kind), weights_(std::move(weights)) {}

    Kind kind_ = Kind::euclidean;
    std::vector<double> weights_;
};

// Small vector helpers. All of them require equal lengths.
Vector add(VectorView x, VectorView y);
Vector sub(VectorView x, VectorView y);
Vector scale(double s, VectorView x);
/// Multiplies by 2^k exactly (ldexp), so scaled arguments carry no rounding.
Vector scale_pow2(VectorView x, int k);
Vector negate(VectorView x);

void require_dim(VectorView x, std::size_t dim, const char* what);

}  // namespace fuzzystab
