#include "fuzzystab/core.hpp"

#include <algorithm>
#include <cmath>

namespace fuzzystab {

CrispNorm CrispNorm::weighted(std::vector<double> weights) {
    if (weights.empty()) {
        throw InputError("weighted norm needs at least one weight");
    }
    for (double w : weights) {
        if (!(w > 0.0) || !std::isfinite(w)) {
            throw InputError("weighted norm weights must be positive and finite");
        }
    }
    return CrispNorm(Kind::weighted, std::move(weights));
}

double CrispNorm::operator()(VectorView x) const {
    switch (kind_) {
        case Kind::euclidean: {
            // hypot-style scaling keeps 2^n x from overflowing the squares
            double big = 0.0;
            for (double v : x) big = std::max(big, std::abs(v));
            if (big == 0.0 || !std::isfinite(big)) return big;
            double s = 0.0;
            for (double v : x) {
                const double r = v / big;
                s += r * r;
            }
            return big * std::sqrt(s);
        }
        case Kind::max: {
            double m = 0.0;
            for (double v : x) m = std::max(m, std::abs(v));
            return m;
        }
        case Kind::weighted: {
            if (x.size() != weights_.size()) {
                throw InputError("weighted norm: vector has dimension " + std::to_string(x.size()) +
                                 ", weights have " + std::to_string(weights_.size()));
            }
            double big = 0.0;
            for (double v : x) big = std::max(big, std::abs(v));
            if (big == 0.0 || !std::isfinite(big)) return big;
            double s = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                const double r = x[i] / big;
                s += weights_[i] * r * r;
            }
            return big * std::sqrt(s);
        }
    }
    return 0.0;
}

std::string CrispNorm::name() const {
    switch (kind_) {
        case Kind::euclidean: return "euclidean";
        case Kind::max: return "max";
        case Kind::weighted: return "weighted";
    }
    return "unknown";
}

namespace {
void require_same(VectorView x, VectorView y) {
    if (x.size() != y.size()) {
        throw InputError("dimension mismatch: " + std::to_string(x.size()) + " vs " +
                         std::to_string(y.size()));
    }
}
}  // namespace

Vector add(VectorView x, VectorView y) {
    require_same(x, y);
    Vector r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] + y[i];
    return r;
}

Vector sub(VectorView x, VectorView y) {
    require_same(x, y);
    Vector r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] - y[i];
    return r;
}

Vector scale(double s, VectorView x) {
    Vector r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = s * x[i];
    return r;
}

Vector scale_pow2(VectorView x, int k) {
    Vector r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = std::ldexp(x[i], k);
    return r;
}

Vector negate(VectorView x) {
    Vector r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = -x[i];
    return r;
}

void require_dim(VectorView x, std::size_t dim, const char* what) {
    if (x.size() != dim) {
        throw InputError(std::string(what) + ": expected dimension " + std::to_string(dim) +
                         ", got " + std::to_string(x.size()));
    }
}

}  // namespace fuzzystab
