#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fps/multipoly.hpp"
#include "fps/ratfun.hpp"

#include <random>

using namespace fps;

namespace {

MultiPoly X() { return MultiPoly::variable("x"); }
MultiPoly K() { return MultiPoly::variable("k"); }
BigRational Q(long n, long d = 1) { return BigRational(n, d); }

// Random sparse polynomial in the given variables, small degrees/coefficients.
MultiPoly random_poly(std::mt19937& rng, const std::vector<std::string>& vars, int maxdeg, int terms) {
    std::uniform_int_distribution<int> coef(-6, 6), deg(0, maxdeg);
    MultiPoly p;
    for (int t = 0; t < terms; ++t) {
        MultiPoly m(BigRational(coef(rng)));
        for (const auto& v : vars) m *= MultiPoly::monomial(BigRational(1), v, deg(rng));
        p += m;
    }
    return p;
}

}  // namespace

TEST_CASE("BigRational canonical arithmetic") {
    BigRational a(1, 3), b(2, 5);
    CHECK((a + b) == Q(11, 15));
    CHECK((a * b) == Q(2, 15));
    CHECK((a - b) == Q(-1, 15));
    CHECK((a / b) == Q(5, 6));
    CHECK(BigRational(4, -6) == Q(-2, 3));  // canonicalized sign
    CHECK(BigRational(4, -6).den() == 3);
    CHECK(Q(-7, 2).floor() == -4);
    CHECK(Q(2, 3).pow(-2) == Q(9, 4));
    CHECK(BigRational::from_string("-14/21") == Q(-2, 3));
    BigRational r;
    CHECK(BigRational::nth_root_exact(Q(4, 9), 2, &r));
    CHECK(r == Q(2, 3));
    CHECK(!BigRational::nth_root_exact(Q(2), 2, nullptr));
    CHECK(pochhammer(Q(2, 3), 3) == Q(2, 3) * Q(5, 3) * Q(8, 3));
    CHECK(factorial_int(6) == 720);
    CHECK(binomial_int(7, 3) == 35);
}

TEST_CASE("MultiPoly basics and variable alignment") {
    MultiPoly p = X() * X() + MultiPoly(Q(2)) * X() + MultiPoly(Q(1));
    CHECK(p.degree("x") == 2);
    CHECK(p.to_string() == "x^2 + 2*x + 1");
    MultiPoly q = K() - MultiPoly(Q(1));
    MultiPoly s = p * q;
    CHECK(s.degree("x") == 2);
    CHECK(s.degree("k") == 1);
    CHECK(s.coeff_of("k", 1) == p);
    CHECK(s.coeff_of("k", 0) == -p);
    CHECK((p - p).is_zero());
    CHECK(p.eval_var("x", Q(3)).constant_value() == Q(16));
    CHECK(p.subst_linear("x", Q(1), Q(-1)) == X() * X());  // (x-1+1)^2 etc.
    CHECK(p.derivative("x") == MultiPoly(Q(2)) * X() + MultiPoly(Q(2)));
    CHECK(MultiPoly(Q(0)).is_zero());
    // prune: x^0 * k terms drop the unused variable
    MultiPoly t = s.coeff_of("x", 2);
    CHECK(t.vars() == std::vector<std::string>{"k"});
}

TEST_CASE("poly_divexact and divisibility") {
    MultiPoly a = (X() + MultiPoly(Q(1))).pow(3) * (K() + X());
    CHECK(poly_divexact(a, X() + MultiPoly(Q(1))) == (X() + MultiPoly(Q(1))).pow(2) * (K() + X()));
    CHECK(poly_divides(K() + X(), a));
    CHECK(!poly_divides(K() - X(), a));
}

TEST_CASE("poly_gcd univariate and multivariate") {
    MultiPoly g = (X() - MultiPoly(Q(1))) * (X() + MultiPoly(Q(2)));
    MultiPoly a = g * (X() + MultiPoly(Q(5)));
    MultiPoly b = g * (X() - MultiPoly(Q(7))) * (X() - MultiPoly(Q(7)));
    CHECK(poly_gcd(a, b) == g.primitive_part());

    // Multivariate: gcd over {x, n}
    MultiPoly n = MultiPoly::variable("n");
    MultiPoly common = X() * n + MultiPoly(Q(1));
    MultiPoly u = common * (X() + n);
    MultiPoly v = common * (X() - n) * (X() - n);
    CHECK(poly_gcd(u, v) == common);

    // Coprime
    CHECK(poly_gcd(X() + MultiPoly(Q(1)), X() + MultiPoly(Q(2))).is_constant());
}

TEST_CASE("poly_gcd randomized: gcd divides both and contains the planted factor") {
    std::mt19937 rng(12345);
    for (int iter = 0; iter < 60; ++iter) {
        MultiPoly g = random_poly(rng, {"x", "k"}, 2, 3);
        MultiPoly a = random_poly(rng, {"x", "k"}, 2, 3);
        MultiPoly b = random_poly(rng, {"x", "k"}, 2, 3);
        if (g.is_zero() || a.is_zero() || b.is_zero()) continue;
        MultiPoly d = poly_gcd(g * a, g * b);
        CHECK(poly_divides(d, g * a));
        CHECK(poly_divides(d, g * b));
        CHECK(poly_divides(g.primitive_part(), d * MultiPoly(Q(1))));
    }
}

TEST_CASE("rational_roots finds all roots with multiplicity") {
    // (x - 1/2)^2 (x + 3) x^2, scaled by 4 to integer coefficients
    MultiPoly p = (MultiPoly(Q(2)) * X() - MultiPoly(Q(1))).pow(2) * (X() + MultiPoly(Q(3))) * X().pow(2);
    auto roots = rational_roots(p, "x");
    REQUIRE(roots.size() == 3);
    CHECK(roots[0] == std::pair{Q(-3), 1});
    CHECK(roots[1] == std::pair{Q(0), 2});
    CHECK(roots[2] == std::pair{Q(1, 2), 2});

    // No rational roots
    MultiPoly q = X() * X() + MultiPoly(Q(1));
    CHECK(rational_roots(q, "x").empty());

    auto ir = integer_roots((X() - MultiPoly(Q(4))) * (MultiPoly(Q(3)) * X() - MultiPoly(Q(1))), "x");
    REQUIRE(ir.size() == 1);
    CHECK(ir[0] == 4);
}

TEST_CASE("squarefree decomposition (Yun)") {
    MultiPoly f = (X() - MultiPoly(Q(1))).pow(3) * (X() + MultiPoly(Q(2)));
    auto parts = squarefree_decomposition(f, "x");
    REQUIRE(parts.size() == 2);
    CHECK(parts[0].second == 1);
    CHECK(parts[0].first == X() + MultiPoly(Q(2)));
    CHECK(parts[1].second == 3);
    CHECK(parts[1].first == X() - MultiPoly(Q(1)));
}

TEST_CASE("factor_over_Q: linear, quadratic ceiling, remainder") {
    const std::string k = "k";
    MultiPoly kk = MultiPoly::variable(k);
    // k^2 - 2k + 5: irreducible quadratic, kept whole
    MultiPoly quad = kk * kk - MultiPoly(Q(2)) * kk + MultiPoly(Q(5));
    auto f1 = factor_over_Q(quad, k);
    CHECK(f1.linear.empty());
    REQUIRE(f1.quadratic.size() == 1);
    CHECK(f1.quadratic[0].first == quad);
    CHECK(f1.constant == Q(1));

    // (k^2 - 2k + 5)^2: squarefree decomposition exposes the repeated quadratic
    auto f2 = factor_over_Q(quad.pow(2), k);
    REQUIRE(f2.quadratic.size() == 1);
    CHECK(f2.quadratic[0].second == 2);
    CHECK(f2.quadratic[0].first == quad);

    // x^4 + x + 1: unfactored remainder
    MultiPoly hard = X().pow(4) + X() + MultiPoly(Q(1));
    auto f3 = factor_over_Q(hard, "x");
    CHECK(f3.linear.empty());
    CHECK(f3.quadratic.empty());
    REQUIRE(f3.remainder.size() == 1);
    CHECK(f3.remainder[0].first == hard);

    // Mixed with constant: 6(x-1)(x^2+1)
    MultiPoly mixed = MultiPoly(Q(6)) * (X() - MultiPoly(Q(1))) * (X() * X() + MultiPoly(Q(1)));
    auto f4 = factor_over_Q(mixed, "x");
    CHECK(f4.constant == Q(6));
    REQUIRE(f4.linear.size() == 1);
    REQUIRE(f4.quadratic.size() == 1);
}

TEST_CASE("sqrt_exact detects perfect squares") {
    MultiPoly a = MultiPoly::variable("a"), b = MultiPoly::variable("b");
    MultiPoly d = (a - b) * (a - b);
    auto s = sqrt_exact(d);
    REQUIRE(s.has_value());
    CHECK((*s == a - b || *s == b - a));
    CHECK((*s) * (*s) == d);
    CHECK(!sqrt_exact(a * a + MultiPoly(Q(5))).has_value());
    CHECK(sqrt_exact(MultiPoly(Q(9, 4))).value() == MultiPoly(Q(3, 2)));
    CHECK(!sqrt_exact(MultiPoly(Q(5))).has_value());
}

TEST_CASE("RatFun normalization and arithmetic") {
    RatFun r(X() * X() - MultiPoly(Q(1)), X() - MultiPoly(Q(1)));
    CHECK(r == RatFun(X() + MultiPoly(Q(1))));  // cancelled
    RatFun half(MultiPoly(Q(1)), MultiPoly(Q(2)));
    CHECK(half.is_constant());
    CHECK(half.constant_value() == Q(1, 2));
    // Denominator sign normalization
    RatFun neg(MultiPoly(Q(1)), -X());
    CHECK(neg.denominator().lex_leading_rational() > Q(0));
    CHECK(neg.numerator() == MultiPoly(Q(-1)));

    RatFun a(MultiPoly(Q(1)), X());
    RatFun b(MultiPoly(Q(1)), X() + MultiPoly(Q(1)));
    RatFun s = a + b;
    CHECK(s == RatFun(MultiPoly(Q(2)) * X() + MultiPoly(Q(1)), X() * (X() + MultiPoly(Q(1)))));
    CHECK((a - a).is_zero());
    CHECK(a * b == RatFun(MultiPoly(Q(1)), X() * X() + X()));
    CHECK(a / b == RatFun(X() + MultiPoly(Q(1)), X()));

    // d/dx 1/x = -1/x^2
    CHECK(a.derivative("x") == RatFun(MultiPoly(Q(-1)), X() * X()));
    CHECK(a.eval_var("x", Q(2)).constant_value() == Q(1, 2));
    CHECK_THROWS_AS(a.eval_var("x", Q(0)), std::domain_error);
}

TEST_CASE("solve_linear: unique, parametric, inconsistent") {
    auto rf = [](long v) { return RatFun(BigRational(v)); };
    SUBCASE("unique") {
        std::vector<std::vector<RatFun>> A{{rf(2), rf(1)}, {rf(1), rf(-1)}};
        std::vector<RatFun> rhs{rf(5), rf(1)};
        auto sol = solve_linear(A, rhs);
        REQUIRE(sol.has_value());
        CHECK(sol->unique());
        CHECK(sol->particular[0] == rf(2));
        CHECK(sol->particular[1] == rf(1));
    }
    SUBCASE("free parameters land on trailing columns") {
        // x0 + x1 + x2 = 3, pivot on x0 -> x1, x2 free
        std::vector<std::vector<RatFun>> A{{rf(1), rf(1), rf(1)}};
        std::vector<RatFun> rhs{rf(3)};
        auto sol = solve_linear(A, rhs);
        REQUIRE(sol.has_value());
        CHECK(sol->free_columns == std::vector<size_t>{1, 2});
        REQUIRE(sol->directions.size() == 2);
        // particular + t*dir stays a solution
        for (const auto& dir : sol->directions) {
            RatFun lhs;
            for (size_t j = 0; j < 3; ++j) lhs += A[0][j] * (sol->particular[j] + dir[j]);
            CHECK(lhs == rhs[0]);
        }
    }
    SUBCASE("inconsistent") {
        std::vector<std::vector<RatFun>> A{{rf(1), rf(1)}, {rf(2), rf(2)}};
        std::vector<RatFun> rhs{rf(1), rf(3)};
        CHECK(!solve_linear(A, rhs).has_value());
    }
    SUBCASE("over the rational-function field") {
        RatFun x = RatFun::variable("x");
        std::vector<std::vector<RatFun>> A{{x, rf(1)}, {rf(1), x}};
        std::vector<RatFun> rhs{x * x, x};
        auto sol = solve_linear(A, rhs);
        REQUIRE(sol.has_value());
        // x*a + b = x^2, a + x*b = x -> a = x(x^2-1)/(x^2-1) = x, b = 0
        CHECK(sol->particular[0] == x);
        CHECK(sol->particular[1].is_zero());
    }
}

TEST_CASE("poly_divrem over the parameter fraction field") {
    MultiPoly n = MultiPoly::variable("n");
    MultiPoly a = n * X().pow(3) + X() + MultiPoly(Q(1));
    MultiPoly b = (n + MultiPoly(Q(1))) * X() - MultiPoly(Q(2));
    auto d = poly_divrem(a, b, "x");
    CHECK(a * d.denom == d.quot * b + d.rem);
    CHECK(d.rem.degree("x") <= 0);
    CHECK(!d.denom.uses("x"));
}
