#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fuzzystab/funceq.hpp"

using namespace fuzzystab;
using namespace fuzzystab::funceq;

namespace {

Mapping scalar(double (*g)(double)) {
    return [g](VectorView x) { return Vector{g(x[0])}; };
}

TestFunction cubic() {
    TestFunction f(1, 1);
    f.add_monomial({0, 1.0, 3, {1.0}});
    return f;
}

}  // namespace

TEST_CASE("test function evaluation") {
    const auto p = TestFunction::polynomial(3.0, 2.0, 5.0);
    CHECK(p(Vector{1.0})[0] == 10.0);
    CHECK(p(Vector{-2.0})[0] == 12.0 - 4.0 + 5.0);
    CHECK_THROWS_AS(p(Vector{1.0, 2.0}), InputError);

    TestFunction f(2, 2);
    f.set_constant(1, 4.0).set_linear(0, {1.0, -1.0}).set_quadratic(1, {1.0, 2.0, 0.0, 3.0});
    const Vector v = f(Vector{2.0, 1.0});
    CHECK(v[0] == 1.0);
    // x^T M x = 4 + 2*2*1*... row-major: 1*4 + 2*2*1 + 0 + 3*1 = 11
    CHECK(v[1] == 4.0 + 11.0);
    CHECK_THROWS_AS(f.set_constant(2, 1.0), InputError);
    CHECK_THROWS_AS(f.set_linear(0, {1.0}), InputError);
    CHECK_THROWS_AS(f.set_quadratic(0, {1.0, 2.0}), InputError);

    TestFunction s(1, 1);
    s.add_perturbation({0, Perturbation::Shape::sin, 0.1, {1.0}, 0.0});
    s.add_perturbation({0, Perturbation::Shape::cos, 0.01, {1.0}, 0.0});
    s.add_perturbation({0, Perturbation::Shape::rational, 0.5, {2.0}, 0.0});
    const double x = 0.7;
    const double want =
        0.1 * std::sin(x) + 0.01 * (std::cos(x) - 1.0) + 0.5 * (2 * x) / (1 + 4 * x * x);
    CHECK(s(Vector{x})[0] == doctest::Approx(want).epsilon(1e-15));
    CHECK(s.perturbation_amplitude() == doctest::Approx(0.61));
    CHECK_THROWS_AS(s.add_perturbation({0, Perturbation::Shape::sin, -1.0, {1.0}, 0.0}),
                    InputError);
    CHECK(parse_shape("rational") == Perturbation::Shape::rational);
    CHECK_THROWS_AS(parse_shape("tanh"), InputError);
}

TEST_CASE("main residual examples") {
    const auto p = TestFunction::polynomial(1.7, -0.3, 2.2).mapping();
    CHECK(std::abs(residual_main(p, Vector{0.4}, Vector{-1.3}).value[0]) < 1e-12);
    CHECK(residual_main(cubic().mapping(), Vector{1.0}, Vector{1.0}).value[0] == 6.0);
    const auto id = TestFunction::polynomial(0.0, 1.0, 0.0).mapping();
    CHECK(residual_main(id, Vector{3.3}, Vector{-0.2}).value[0] == doctest::Approx(0.0));
    CHECK_THROWS_AS(residual_main(p, Vector{1.0, 2.0}, Vector{1.0}), InputError);
    const auto r = residual_main(p, Vector{0.5}, Vector{0.25});
    CHECK(r.x == Vector{0.5});
    CHECK(r.y == Vector{0.25});
}

TEST_CASE("cubic and quartic residual closed forms") {
    // x^3 gives 6xy^2, x^4 gives 36x^2y^2
    TestFunction quartic(1, 1);
    quartic.add_monomial({0, 1.0, 4, {1.0}});
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int i = 0; i < 50; ++i) {
        const double x = u(rng), y = u(rng);
        CHECK(residual_main(cubic().mapping(), Vector{x}, Vector{y}).value[0] ==
              doctest::Approx(6 * x * y * y).epsilon(1e-9).scale(100));
        CHECK(residual_main(quartic.mapping(), Vector{x}, Vector{y}).value[0] ==
              doctest::Approx(36 * x * x * y * y).epsilon(1e-9).scale(1000));
    }
}

TEST_CASE("quadratic residual examples") {
    const auto sq = TestFunction::polynomial(1.0, 0.0, 0.0).mapping();
    CHECK(residual_quadratic(sq, Vector{1.3}, Vector{-0.4}).value[0] == doctest::Approx(0.0));
    const auto id = TestFunction::polynomial(0.0, 1.0, 0.0).mapping();
    CHECK(residual_quadratic(id, Vector{1.0}, Vector{1.0}).value[0] == -2.0);
    const auto both = TestFunction::polynomial(1.0, 1.0, 0.0).mapping();
    CHECK(residual_quadratic(both, Vector{1.0}, Vector{1.0}).value[0] == -2.0);
}

TEST_CASE("additive residual examples") {
    const auto lin = TestFunction::polynomial(0.0, -4.5, 0.0).mapping();
    CHECK(residual_additive(lin, Vector{0.3}, Vector{2.1}).value[0] == doctest::Approx(0.0));
    const auto sq = TestFunction::polynomial(1.0, 0.0, 0.0).mapping();
    CHECK(residual_additive(sq, Vector{1.0}, Vector{1.0}).value[0] == 2.0);
    const auto shifted = TestFunction::polynomial(0.0, 1.0, 2.5).mapping();
    CHECK(residual_additive(shifted, Vector{0.75}, Vector{-3.0}).value[0] == doctest::Approx(-2.5));
}

TEST_CASE("even and odd parts") {
    const auto f = TestFunction::polynomial(3.0, 2.0, 0.0).mapping();
    CHECK(even_part(f)(Vector{1.0})[0] == 3.0);
    CHECK(odd_part(f)(Vector{1.0})[0] == 2.0);

    const auto twice = TestFunction::polynomial(0.0, 2.0, 0.0).mapping();
    CHECK(even_part(twice)(Vector{0.9})[0] == 0.0);

    TestFunction ev(1, 1);
    ev.set_quadratic(0, {1.0});
    ev.add_perturbation({0, Perturbation::Shape::cos, 1.0, {1.0}, 0.0});
    const auto evm = ev.mapping();
    for (double x : {-2.0, -0.3, 0.0, 0.8, 5.0}) {
        CHECK(even_part(evm)(Vector{x})[0] == evm(Vector{x})[0]);
        CHECK(odd_part(evm)(Vector{x})[0] == 0.0);
        CHECK(odd_part(cubic().mapping())(Vector{x})[0] == doctest::Approx(x * x * x).epsilon(1e-15));
    }
}

TEST_CASE("decomposition and parity on random points") {
    TestFunction f(3, 2);
    f.set_constant(0, 1.25).set_linear(0, {1.0, -2.0, 0.5}).set_quadratic(1, {2, 1, 0, 1, 3, 0, 0, 0, -1});
    f.add_perturbation({0, Perturbation::Shape::sin, 0.1, {1.0, 0.5, -1.0}, 0.3});
    f.add_perturbation({1, Perturbation::Shape::rational, 0.2, {0.0, 1.0, 1.0}, 0.0});
    const auto m = f.mapping();
    const auto fe = even_part(m);
    const auto fo = odd_part(m);
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    for (int i = 0; i < 1000; ++i) {
        const Vector x = {u(rng), u(rng), u(rng)};
        const Vector nx = {-x[0], -x[1], -x[2]};
        const Vector v = m(x), vn = m(nx), e = fe(x), o = fo(x);
        const Vector en = fe(nx), on = fo(nx);
        for (std::size_t k = 0; k < 2; ++k) {
            // both halves round on the scale of the larger of f(x), f(-x)
            const double scale = std::max(std::abs(v[k]), std::abs(vn[k]));
            CHECK(std::abs((e[k] + o[k]) - v[k]) <= 4 * std::numeric_limits<double>::epsilon() * scale);
            CHECK(en[k] == e[k]);
            CHECK(on[k] == -o[k]);
        }
    }
}

TEST_CASE("even part residual bounded by averaged residual") {
    TestFunction f(1, 1);
    f.set_quadratic(0, {1.0});
    f.add_monomial({0, 0.3, 3, {1.0}});
    f.add_perturbation({0, Perturbation::Shape::sin, 0.2, {1.3}, 0.4});
    const auto m = f.mapping();
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int i = 0; i < 300; ++i) {
        const double x = u(rng), y = u(rng);
        const double r = std::abs(residual_main(m, Vector{x}, Vector{y}).value[0]);
        const double rn = std::abs(residual_main(m, Vector{-x}, Vector{-y}).value[0]);
        for (const auto& part : {even_part(m), odd_part(m)}) {
            const double rp = std::abs(residual_main(part, Vector{x}, Vector{y}).value[0]);
            CHECK(rp <= (r + rn) / 2 + 1e-12);
        }
    }
}

TEST_CASE("biadditive form") {
    const auto sq = TestFunction::polynomial(1.0, 0.0, 0.0).mapping();
    CHECK(biadditive_form(sq, Vector{1.0}, Vector{1.0})[0] == 1.0);
    CHECK(biadditive_form(sq, Vector{2.0}, Vector{3.0})[0] == 6.0);
    const auto any = scalar([](double x) { return std::exp(x) + x * x * x; });
    CHECK(biadditive_form(any, Vector{0.7}, Vector{0.0})[0] == 0.0);

    TestFunction q(2, 1);
    q.set_quadratic(0, {2.0, 0.5, 0.5, -1.0});
    const auto qm = q.mapping();
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int i = 0; i < 200; ++i) {
        const Vector x = {u(rng), u(rng)};
        const double fx = qm(x)[0];
        CHECK(std::abs(biadditive_form(qm, x, x)[0] - fx) <= 1e-12 * std::max(1.0, std::abs(fx)));
    }
}

TEST_CASE("polynomials solve the main equation in several dimensions") {
    std::mt19937_64 rng(1234);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int trial = 0; trial < 20; ++trial) {
        TestFunction f(3, 2);
        for (std::size_t c = 0; c < 2; ++c) {
            f.set_constant(c, u(rng));
            f.set_linear(c, {u(rng), u(rng), u(rng)});
            Vector m(9);
            for (auto& v : m) v = u(rng);
            f.set_quadratic(c, m);
        }
        const auto fm = f.mapping();
        for (int i = 0; i < 20; ++i) {
            const Vector x = {u(rng), u(rng), u(rng)};
            const Vector y = {u(rng), u(rng), u(rng)};
            const auto r = residual_main(fm, x, y);
            Vector big = x;
            for (std::size_t k = 0; k < 3; ++k) big[k] = 2 * x[k] + y[k];
            const double scale = 1.0 + CrispNorm::euclidean()(fm(big));
            CHECK(CrispNorm::euclidean()(r.value) <= 1e-9 * scale);
        }
    }
}
