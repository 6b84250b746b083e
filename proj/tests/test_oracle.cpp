#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fps/catalog.hpp"
#include "fps/oracle.hpp"

#include <numeric>
#include <random>

using namespace fps;

namespace {

Expr X() { return Expr::symbol("x"); }
Expr N(long v) { return Expr::integer(v); }
Expr Q(long n, long d) { return Expr::rational(BigRational(n, d)); }
Expr fn(const std::string& name, Expr a) { return Expr::call(name, {std::move(a)}); }

BigRational at(const SeriesTrunc& s, long num, long den = 1) {
    return s.coeff_at(BigRational(num, den));
}

std::string code_of(const Expr& f) {
    try {
        truncated_series(f, "x", 8);
        return "";
    } catch (const FpsError& e) {
        return e.code();
    }
}

}  // namespace

TEST_CASE("pinned series values") {
    Expr x = X();
    SeriesTrunc s = truncated_series(fn("sin", x), "x", 7);
    std::vector<BigRational> expected{BigRational(0), BigRational(1), BigRational(0),
                                      BigRational(-1, 6), BigRational(0),
                                      BigRational(1, 120), BigRational(0),
                                      BigRational(-1, 5040)};
    for (long j = 0; j <= 7; ++j) CHECK(at(s, j) == expected[j]);

    SeriesTrunc es = truncated_series(fn("exp", x) * fn("sin", x) / x, "x", 4);
    std::vector<BigRational> pinned{BigRational(1), BigRational(1), BigRational(1, 3),
                                    BigRational(0), BigRational(-1, 30)};
    for (long j = 0; j <= 4; ++j) CHECK(at(es, j) == pinned[j]);

    SeriesTrunc hs = truncated_series(fn("sin", Expr::pow(x, Q(1, 2))) / x, "x", 2);
    CHECK(hs.grid() == 2);
    CHECK(at(hs, -1, 2) == BigRational(1));
    CHECK(at(hs, 1, 2) == BigRational(-1, 6));
    CHECK(at(hs, 3, 2) == BigRational(1, 120));
    CHECK(at(hs, 0) == BigRational(0));
}

TEST_CASE("elementary series sanity") {
    Expr x = X();
    SeriesTrunc t = truncated_series(fn("tan", x), "x", 5);
    CHECK(at(t, 1) == BigRational(1));
    CHECK(at(t, 3) == BigRational(1, 3));
    CHECK(at(t, 5) == BigRational(2, 15));

    SeriesTrunc l = truncated_series(fn("ln", N(1) + x), "x", 4);
    CHECK(at(l, 1) == BigRational(1));
    CHECK(at(l, 2) == BigRational(-1, 2));
    CHECK(at(l, 3) == BigRational(1, 3));
    CHECK(at(l, 4) == BigRational(-1, 4));

    SeriesTrunc a = truncated_series(fn("arcsin", x), "x", 5);
    CHECK(at(a, 1) == BigRational(1));
    CHECK(at(a, 3) == BigRational(1, 6));
    CHECK(at(a, 5) == BigRational(3, 40));

    // dilog(1-x) = sum x^k / k^2
    SeriesTrunc d = truncated_series(fn("dilog", N(1) - x), "x", 5);
    CHECK(at(d, 0) == BigRational(0));
    CHECK(at(d, 1) == BigRational(1));
    CHECK(at(d, 2) == BigRational(1, 4));
    CHECK(at(d, 3) == BigRational(1, 9));
    CHECK(at(d, 4) == BigRational(1, 16));

    // Laurent part: 1/sin(x) = x^-1 + x/6 + 7x^3/360 + ...
    SeriesTrunc inv = truncated_series(N(1) / fn("sin", x), "x", 3);
    CHECK(at(inv, -1) == BigRational(1));
    CHECK(at(inv, 0) == BigRational(0));
    CHECK(at(inv, 1) == BigRational(1, 6));
    CHECK(at(inv, 3) == BigRational(7, 360));
}

TEST_CASE("rational powers and valuations") {
    Expr x = X();
    Expr f = Expr::pow(N(1) + x, Q(5, 2)) * Expr::pow(N(1) + x, Q(-5, 2));
    SeriesTrunc one = truncated_series(f, "x", 6);
    CHECK(at(one, 0) == BigRational(1));
    for (long j = 1; j <= 6; ++j) CHECK(at(one, j) == BigRational(0));

    // sqrt(x^2*(1+x)) = x*sqrt(1+x)
    SeriesTrunc r =
        truncated_series(Expr::pow(Expr::pow(x, N(2)) * (N(1) + x), Q(1, 2)), "x", 4);
    CHECK(at(r, 1) == BigRational(1));
    CHECK(at(r, 2) == BigRational(1, 2));
    CHECK(at(r, 3) == BigRational(-1, 8));

    SeriesTrunc lau = truncated_series(Expr::pow(x, N(-3)), "x", 2);
    CHECK(at(lau, -3) == BigRational(1));
    CHECK(lau.valuation() == -3 * lau.grid());
}

TEST_CASE("family polynomials unroll through the recurrence") {
    Expr x = X();
    SeriesTrunc f5 = truncated_series(Expr::call("Fibonacci", {N(5), x}), "x", 6);
    // F_5 = x^4 + 3x^2 + 1
    CHECK(at(f5, 0) == BigRational(1));
    CHECK(at(f5, 2) == BigRational(3));
    CHECK(at(f5, 4) == BigRational(1));
    CHECK(at(f5, 1) == BigRational(0));
    CHECK(at(f5, 3) == BigRational(0));

    SeriesTrunc t3 = truncated_series(Expr::call("ChebyshevT", {N(3), x}), "x", 4);
    CHECK(at(t3, 1) == BigRational(-3));
    CHECK(at(t3, 3) == BigRational(4));

    SeriesTrunc h4 = truncated_series(Expr::call("HermiteH", {N(4), x}), "x", 5);
    CHECK(at(h4, 0) == BigRational(12));
    CHECK(at(h4, 2) == BigRational(-48));
    CHECK(at(h4, 4) == BigRational(16));
}

TEST_CASE("inert integrals integrate the oracle series") {
    Expr x = X(), t = Expr::symbol("t");
    Expr f = Expr::integral(fn("exp", -Expr::pow(t, N(2))), "t", x);
    SeriesTrunc s = truncated_series(f, "x", 7);
    CHECK(at(s, 1) == BigRational(1));
    CHECK(at(s, 3) == BigRational(-1, 3));
    CHECK(at(s, 5) == BigRational(1, 10));
    CHECK(at(s, 7) == BigRational(-1, 42));

    // upper limit x^2 composes
    Expr g = Expr::integral(fn("exp", -Expr::pow(t, N(2))), "t", Expr::pow(x, N(2)));
    SeriesTrunc s2 = truncated_series(g, "x", 6);
    CHECK(at(s2, 2) == BigRational(1));
    CHECK(at(s2, 6) == BigRational(-1, 3));
}

TEST_CASE("ring laws on truncations") {
    std::mt19937 rng(40917);
    Expr x = X();
    std::vector<Expr> pool{x,
                           fn("sin", x),
                           fn("exp", x),
                           N(1) + x * x,
                           fn("cos", x) / (N(1) + x),
                           Expr::pow(N(1) + x, Q(1, 2))};
    std::uniform_int_distribution<size_t> pick(0, pool.size() - 1);
    for (int iter = 0; iter < 50; ++iter) {
        SeriesTrunc f = truncated_series(pool[pick(rng)], "x", 10);
        SeriesTrunc g = truncated_series(pool[pick(rng)], "x", 10);
        SeriesTrunc h = truncated_series(pool[pick(rng)], "x", 10);
        long grid = std::lcm(std::lcm(f.grid(), g.grid()), h.grid());
        f = f.refine(grid / f.grid());
        g = g.refine(grid / g.grid());
        h = h.refine(grid / h.grid());
        SeriesTrunc lhs = (f * g) * h;
        SeriesTrunc rhs = f * (g * h);
        for (long j = 0; j < std::min(lhs.first_unknown(), rhs.first_unknown()); ++j)
            CHECK(lhs.coeff(j) == rhs.coeff(j));
        SeriesTrunc dl = f * (g + h);
        SeriesTrunc dr = f * g + f * h;
        for (long j = 0; j < std::min(dl.first_unknown(), dr.first_unknown()); ++j)
            CHECK(dl.coeff(j) == dr.coeff(j));
    }
}

TEST_CASE("derivative compatibility") {
    Expr x = X();
    std::vector<Expr> pool{fn("sin", x) * fn("exp", x), fn("cos", Expr::pow(x, N(2))),
                           Expr::pow(N(1) + x, Q(3, 2)), fn("exp", x) / x};
    for (const Expr& f : pool) {
        Expr df = differentiate(f, "x");
        SeriesTrunc direct = truncated_series(df, "x", 9);
        SeriesTrunc formal = truncated_series(f, "x", 10).differentiate();
        long grid = std::lcm(direct.grid(), formal.grid());
        SeriesTrunc a = direct.refine(grid / direct.grid());
        SeriesTrunc b = formal.refine(grid / formal.grid());
        for (long j = b.valuation(); j < std::min(a.first_unknown(), b.first_unknown()); ++j)
            CHECK(a.coeff(j) == b.coeff(j));
    }
}

TEST_CASE("rejections") {
    Expr x = X();
    CHECK(code_of(fn("exp", N(1) / x)) == "essential-singularity");
    CHECK(code_of(fn("exp", N(1) + x)) == "composition-valuation");
    CHECK(code_of(Expr::constant("Pi") * x) == "nonrational-value");
    CHECK(code_of(fn("erf", x)) == "nonrational-value");
    CHECK(code_of(fn("arccos", x)) == "nonrational-value");
    CHECK(code_of(fn("arcsech", x)) == "nonrational-value");
    CHECK(code_of(fn("ln", x)) == "composition-valuation");
    CHECK(code_of(Expr::symbol("y") + x) == "free-parameter");
    CHECK(code_of(Expr::call("nosuchfn", {x})) == "unknown-function");
}
