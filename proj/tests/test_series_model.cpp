#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fps/exact_eval.hpp"
#include "fps/series_model.hpp"
#include "fps/simple_de.hpp"

#include <random>

using namespace fps;

namespace {

Expr X() { return Expr::symbol("x"); }
Expr N(long v) { return Expr::integer(v); }
Expr Q(long n, long d) { return Expr::rational(BigRational(n, d)); }
Expr fn(const std::string& name, Expr a) { return Expr::call(name, {std::move(a)}); }

Expr K() { return Expr::symbol("k"); }

// (-1)^k / (2k+1)!
Expr sin_coeff() {
    Expr tf = Expr::call("factorial", {N(2) * K() + N(1)});
    return Expr::pow(N(-1), K()) / tf;
}

FPSResult sin_result() {
    FPSResult r;
    r.sums.push_back({sin_coeff(), "k", 2, 1, 1, BigRational(0)});
    return r;
}

MultiPoly Pk() { return MultiPoly::variable("k"); }

}  // namespace

TEST_CASE("exponent maps invert exactly") {
    // the sin(sqrt(x))/x map: exponent k - 1/2
    PowerSum s{sin_coeff(), "k", 2, 2, 1, BigRational(-1)};
    CHECK(s.exponent_at(0) == BigRational(-1, 2));
    CHECK(s.exponent_at(3) == BigRational(5, 2));
    CHECK(s.index_of(BigRational(-1, 2)) == 0);
    CHECK(s.index_of(BigRational(3, 2)) == 2);
    CHECK_FALSE(s.index_of(BigRational(0)).has_value());
    CHECK_FALSE(s.index_of(BigRational(-3, 2)).has_value());  // k = -1 is out

    PowerSum p{K(), "k", 3, 1, 2, BigRational(4)};
    for (long k = 0; k <= 12; ++k) {
        CHECK(p.index_of(p.exponent_at(k)) == k);
    }
}

TEST_CASE("formula evaluation is exact") {
    // alternating factorial formula
    CHECK(eval_formula(sin_coeff(), "k", 0) == N(1));
    CHECK(eval_formula(sin_coeff(), "k", 1) == Q(-1, 6));
    CHECK(eval_formula(sin_coeff(), "k", 3) == Q(-1, 5040));

    // pochhammer-based formula: 9^(-k)/(pochhammer(2/3, k) k!)
    Expr ai = Expr::pow(N(9), -K()) /
              (Expr::call("pochhammer", {Q(2, 3), K()}) * Expr::call("factorial", {K()}));
    CHECK(eval_formula(ai, "k", 0) == N(1));
    CHECK(eval_formula(ai, "k", 2) == Q(1, 180));

    // bound product formula: Product(j^2 + 1/4, j = 0..k-1) * 4^k / (2k)!
    Expr j = Expr::symbol("j");
    Expr prod = Expr::product_over(j * j + Q(1, 4), "j", K() - N(1));
    Expr f = prod * Expr::pow(N(4), K()) / Expr::call("factorial", {N(2) * K()});
    CHECK(eval_formula(f, "k", 0) == N(1));
    CHECK(eval_formula(f, "k", 2) == Q(5, 24));

    // symbolic prefactors ride along unevaluated
    Expr pre = fn("exp", Q(1, 2) * Expr::constant("Pi")) * sin_coeff();
    Expr at1 = eval_formula(pre, "k", 1);
    CHECK(at1 == Q(-1, 6) * fn("exp", Q(1, 2) * Expr::constant("Pi")));

    // binomial folds for general rational top
    Expr b = Expr::call("binomial", {K() + N(2), N(2)});
    CHECK(eval_formula(b, "k", 3) == N(10));
    CHECK(fold_formula(Expr::call("binomial", {Q(1, 2), N(2)})) == Q(-1, 8));
}

TEST_CASE("pochhammer node recurrence") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<long> num(-9, 9), den(1, 7);
    for (int trial = 0; trial < 25; ++trial) {
        BigRational a(num(rng), den(rng));
        Expr ae = Expr::rational(a);
        CHECK(fold_formula(Expr::call("pochhammer", {ae, N(0)})) == N(1));
        for (long k = 0; k <= 12; ++k) {
            Expr lhs = fold_formula(Expr::call("pochhammer", {ae, N(k + 1)}));
            Expr rhs = fold_formula(Expr::call("pochhammer", {ae, N(k)})) *
                       (ae + N(k));
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("coefficient lookup inverts the maps") {
    FPSResult r = sin_result();
    CHECK(eval_coefficient(r, BigRational(3)) == Q(-1, 6));
    CHECK(eval_coefficient(r, BigRational(1)) == N(1));
    CHECK(eval_coefficient(r, BigRational(2)).is_zero());
    CHECK(eval_coefficient(r, BigRational(-1)).is_zero());

    // the sin(sqrt(x))/x shape: leading coefficient at x^(-1/2) is 1
    FPSResult p;
    p.sums.push_back({sin_coeff(), "k", 2, 2, 1, BigRational(-1)});
    CHECK(eval_coefficient(p, BigRational(-1, 2)) == N(1));
    CHECK(eval_coefficient(p, BigRational(0)).is_zero());

    // explicit terms and the constant contribute at their exponents
    p.constant = fn("ln", N(2));
    p.terms.push_back({BigRational(0), N(3)});
    Expr at0 = eval_coefficient(p, BigRational(0));
    CHECK(at0 == N(3) + fn("ln", N(2)));
}

TEST_CASE("streaming iterates the recurrence exactly") {
    // (k+1) a_{k+1} - a_k = 0: the exp coefficients
    RE ex{"k", {MultiPoly(-1), Pk() + MultiPoly(1)}, 0, {}, TermContext("x")};
    CoefficientStream st(ex, {BigRational(1)});
    std::vector<BigRational> want = {BigRational(1), BigRational(1), BigRational(1, 2),
                                     BigRational(1, 6), BigRational(1, 24)};
    for (const BigRational& w : want) {
        auto v = st.next();
        REQUIRE(v.has_value());
        CHECK(*v == w);
    }

    // agreement with the closed form up to index 20
    FPSResult er;
    er.sums.push_back({Expr::pow(Expr::call("factorial", {K()}), N(-1)), "k", 1, 1, 0,
                       BigRational(0)});
    CoefficientStream st2(ex, {BigRational(1)});
    for (long i = 0; i <= 20; ++i) {
        auto v = st2.next();
        REQUIRE(v.has_value());
        Expr c = eval_coefficient(er, BigRational(i));
        REQUIRE(c.is_rational());
        CHECK(c.rational_value() == *v);
    }
}

TEST_CASE("streaming the Fibonacci generating function") {
    Expr f = X() / (N(1) - X() - X() * X());
    DeSearch found = find_lowest_de(f, "x", 4);
    REQUIRE(std::holds_alternative<SimpleDE>(found));
    RE re = convert_de_to_re(std::get<SimpleDE>(found));
    CoefficientStream st(re, {BigRational(0), BigRational(1)});
    std::vector<long> want = {0, 1, 1, 2, 3, 5, 8, 13};
    for (long w : want) {
        auto v = st.next();
        REQUIRE(v.has_value());
        CHECK(*v == BigRational(w));
    }
}

TEST_CASE("streaming stops at a leading-coefficient root") {
    // (k-1)(k+1) a_{k+1} = 4 a_{k-5}, normalized offsets 0 and 6
    MultiPoly lead = (Pk() + MultiPoly(4)) * (Pk() + MultiPoly(6));
    RE re{"k", {MultiPoly(-4), MultiPoly(), MultiPoly(), MultiPoly(), MultiPoly(),
                MultiPoly(), lead},
          -5,
          {},
          TermContext("x")};
    CoefficientStream st(re, {BigRational(1), BigRational(0)});
    REQUIRE(st.next().has_value());
    REQUIRE(st.next().has_value());
    CHECK_FALSE(st.next().has_value());
    REQUIRE(st.blocked_index().has_value());
    CHECK(*st.blocked_index() == 1);
    // stays blocked
    CHECK_FALSE(st.next().has_value());
}

TEST_CASE("partial sums evaluate to high precision") {
    FPSResult r = sin_result();
    NumVal ps = partial_sum(r, 10, BigRational(1, 2), 40);
    NumVal sv = num_eval(fn("sin", Q(1, 2)), {}, 256);
    mpf_class gap = abs(ps.v - sv.v) + ps.err + sv.err;
    CHECK(gap.get_d() < 1e-12);

    // N = 0 keeps the finite part only
    FPSResult c;
    c.constant = fn("ln", N(2));
    c.terms.push_back({BigRational(2), Q(-1, 4)});
    c.logs.push_back({BigRational(0), N(-1)});
    c.sums = r.sums;
    c.direction = Dir::Right;
    NumVal fin = partial_sum(c, 0, BigRational(1, 10), 30);
    double want = std::log(2.0) - std::log(0.1) - 0.25 * 0.01;
    CHECK(std::abs(fin.v.get_d() - want) < 1e-12);

    // one-sided results reject the other side
    CHECK_THROWS_AS(partial_sum(c, 4, BigRational(-1, 10), 30), FpsError);

    // asymptotic results recentre on 1/x
    FPSResult a;
    a.point = ExpansionPoint::pos_inf();
    a.direction = Dir::Right;
    a.terms.push_back({BigRational(1), N(3)});  // 3/x
    NumVal av = partial_sum(a, 0, BigRational(6), 20);
    CHECK(std::abs(av.v.get_d() - 0.5) < 1e-15);
    CHECK_THROWS_AS(partial_sum(a, 0, BigRational(-6), 20), FpsError);
}

TEST_CASE("text rendering") {
    CHECK(render(sin_result(), RenderFormat::Text) ==
          "Sum((-1)^k*x^(2*k+1)/(2*k+1)!, k=0..infinity)");

    FPSResult z;
    CHECK(render(z, RenderFormat::Text) == "0");

    FPSResult one;
    one.constant = N(1);
    CHECK(render(one, RenderFormat::Text) == "1");

    // finite parts come first, ordered by exponent, with signs folded in
    FPSResult m;
    m.constant = fn("ln", N(2));
    m.logs.push_back({BigRational(0), N(-1)});
    m.terms.push_back({BigRational(2), Q(-1, 4)});
    m.sums.push_back({Expr::pow(K() + N(1), N(-2)), "k", 1, 1, 0, BigRational(3)});
    CHECK(render(m, RenderFormat::Text) ==
          "ln(2) - ln(x) - x^2/4 + Sum(x^(k+3)/(k+1)^2, k=0..infinity)");
}

TEST_CASE("structured rendering") {
    std::string s = render(sin_result(), RenderFormat::Structured);
    CHECK(s ==
          "{\"point\":\"0\",\"direction\":\"two-sided\",\"components\":["
          "{\"kind\":\"sum\",\"exponent_map\":{\"m\":2,\"n\":1,\"r\":1,\"s\":\"0\"},"
          "\"coefficient\":\"(* (^ -1 k) (^ (factorial (+ 1 (* 2 k))) -1))\"}]}");
    // bit-exact across calls
    CHECK(s == render(sin_result(), RenderFormat::Structured));

    FPSResult m;
    m.var = "x";
    m.point = ExpansionPoint::finite(BigRational(1, 2));
    m.direction = Dir::Right;
    m.constant = N(2);
    m.logs.push_back({BigRational(0), N(-1)});
    std::string t = render(m, RenderFormat::Structured);
    CHECK(t ==
          "{\"point\":\"1/2\",\"direction\":\"right\",\"components\":["
          "{\"kind\":\"const\",\"exponent_map\":{\"m\":0,\"n\":1,\"r\":0,\"s\":\"0\"},"
          "\"coefficient\":\"2\"},"
          "{\"kind\":\"log\",\"exponent_map\":{\"m\":0,\"n\":1,\"r\":0,\"s\":\"0\"},"
          "\"coefficient\":\"-1\"}]}");
}
