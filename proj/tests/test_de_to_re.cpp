#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "fps/de_to_re.hpp"
#include "fps/oracle.hpp"

using namespace fps;

namespace {

Expr X() { return Expr::symbol("x"); }
Expr N(long v) { return Expr::integer(v); }
Expr Q(long n, long d) { return Expr::rational(BigRational(n, d)); }
Expr fn(const std::string& name, Expr a) { return Expr::call(name, {std::move(a)}); }

MultiPoly K() { return MultiPoly::variable("k"); }
MultiPoly PC(long c) { return MultiPoly(c); }

SimpleDE lowest_de(const Expr& f) {
    DeSearch r = find_lowest_de(f, "x", 5);
    REQUIRE(!std::holds_alternative<DeNotFound>(r));
    if (std::holds_alternative<ParametricDE>(r)) {
        SimpleDE inst = std::get<ParametricDE>(r).shape;
        long fill = 3;
        for (const std::string& p : std::get<ParametricDE>(r).params)
            for (MultiPoly& c : inst.coeffs) c = c.eval_var(p, BigRational(fill++, 2));
        return inst;
    }
    return std::get<SimpleDE>(r);
}

}  // namespace

TEST_CASE("first-order conversions") {
    RE re = convert_de_to_re(lowest_de(fn("exp", X())));
    CHECK(re.index == "k");
    CHECK(re.shift == 0);
    CHECK(re.removed.empty());
    CHECK(re.coeffs == std::vector<MultiPoly>{PC(-1), K() + PC(1)});
    ReValidity v = re_holds_for_all_k(re);
    CHECK(v.holds_all_k);
    CHECK(v.k_max == -1);
}

TEST_CASE("fibonacci generating function keeps the cancelled factor on record") {
    Expr x = X();
    Expr f = x / (N(1) - x - x * x);
    RE re = convert_de_to_re(lowest_de(f));
    CHECK(re.shift == -2);
    CHECK(re.coeffs == std::vector<MultiPoly>{PC(-1), PC(-1), PC(1)});
    REQUIRE(re.removed.size() == 1);
    CHECK(re.removed[0] == K() + PC(1));
    // the statement produced by the substitution rule, before normalization
    CHECK(re.original_coeff(0) == K() - PC(1));
    CHECK(re.original_coeff(-1) == -(K() - PC(1)));
    CHECK(re.original_coeff(-2) == -(K() - PC(1)));
    ReValidity v = re_holds_for_all_k(re);
    CHECK(!v.holds_all_k);
    CHECK(v.k_max == 1);
}

TEST_CASE("sparse recurrence with a large downward reach") {
    Expr x = X();
    RE re = convert_de_to_re(lowest_de(fn("newAi", x * x)));
    CHECK(re.shift == -5);
    CHECK(re.span() == 6);
    CHECK(re.original_coeff(1) == K() * K() - PC(1));
    CHECK(re.original_coeff(-5) == PC(-4));
    for (long t : {-4, -3, -2, -1, 0}) CHECK(re.original_coeff(t).is_zero());
    ReValidity v = re_holds_for_all_k(re);
    CHECK(v.holds_all_k);
    CHECK(v.k_max == 1);
}

TEST_CASE("half-grid function converts like any other") {
    Expr x = X();
    RE re = convert_de_to_re(lowest_de(fn("sin", Expr::pow(x, Q(1, 2))) / x));
    CHECK(re.shift == -1);
    CHECK(re.coeffs ==
          std::vector<MultiPoly>{PC(1), PC(4) * K() * K() + PC(14) * K() + PC(12)});
    CHECK(re.original_coeff(0) == PC(4) * K() * K() + PC(6) * K() + PC(2));
    ReValidity v = re_holds_for_all_k(re);
    CHECK(v.holds_all_k);
    CHECK(v.k_max == -1);

    // sparse offsets of a first-order equation with a gap
    SimpleDE de{"x", {MultiPoly::variable("x") * MultiPoly::variable("x"), MultiPoly(1)},
                TermContext("x")};
    std::map<long, MultiPoly> raw = convert_raw(de, "k");
    CHECK(raw.at(1) == K() + PC(1));
    CHECK(raw.at(-2) == PC(1));
}

TEST_CASE("conversion is linear in the differential equation") {
    std::mt19937 rng(42);
    std::uniform_int_distribution<long> coef(-5, 5);
    std::uniform_int_distribution<int> deg(0, 2);
    for (int trial = 0; trial < 40; ++trial) {
        long order = 1 + trial % 3;
        auto random_de = [&] {
            SimpleDE de{"x", {}, TermContext("x")};
            for (long j = 0; j <= order; ++j) {
                MultiPoly c;
                int d = deg(rng);
                for (int l = 0; l <= d; ++l)
                    c += MultiPoly::monomial(BigRational(coef(rng)), "x", l);
                de.coeffs.push_back(c);
            }
            if (de.coeffs.back().is_zero()) de.coeffs.back() = MultiPoly(1);
            return de;
        };
        SimpleDE d1 = random_de(), d2 = random_de(), sum = d1;
        for (long j = 0; j <= order; ++j) sum.coeffs[j] += d2.coeffs[j];
        std::map<long, MultiPoly> r1 = convert_raw(d1, "k"), r2 = convert_raw(d2, "k"),
                                  rs = convert_raw(sum, "k");
        for (auto& [t, p] : r2) {
            auto [it, fresh] = r1.emplace(t, p);
            if (!fresh) it->second += p;
        }
        for (auto it = r1.begin(); it != r1.end();)
            it = it->second.is_zero() ? r1.erase(it) : std::next(it);
        CHECK(r1 == rs);
    }
}

TEST_CASE("pochhammer factors expand correctly") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<long> kv(-6, 6);
    for (long l = -3; l <= 3; ++l)
        for (long j = 0; j <= 6; ++j) {
            MultiPoly p = pochhammer_poly("k", l, j);
            for (int rep = 0; rep < 3; ++rep) {
                BigRational k0(kv(rng), 1 + rep);
                BigRational direct = pochhammer(k0 + BigRational(1 - l), j);
                CHECK(p.eval_var("k", k0).constant_value() == direct);
            }
        }
}

TEST_CASE("oracle coefficients satisfy the produced recurrence") {
    Expr x = X();
    std::vector<Expr> golden = {
        fn("sin", x),
        fn("exp", x),
        fn("arcsin", x),
        fn("ln", N(1) + x),
        fn("exp", x) * fn("sin", x),
        Expr::pow(N(1) + x, Q(1, 3)),
        fn("arctan", x),
        fn("sin", Expr::pow(x, Q(1, 2))) / x,
        x / (N(1) - x - x * x),
        x * fn("exp", x) * fn("sin", N(2) * x),
    };
    for (const Expr& f : golden) {
        SimpleDE de = lowest_de(f);
        RE re = convert_de_to_re(de);
        SeriesTrunc s = truncated_series(f, "x", 20);
        long g = s.grid();
        INFO(f.to_string(), "  re: ", re.to_string());
        int checked = 0;
        // E sweeps the exponent grid; every original-form instance must vanish
        for (long num = -6 * g; num + (re.shift + re.span()) * g < s.first_unknown(); ++num) {
            BigRational E(num, g);
            BigRational acc(0);
            for (long t = re.shift; t <= re.shift + re.span(); ++t) {
                BigRational pv = re.original_coeff(t).eval_var(re.index, E).constant_value();
                acc += pv * s.coeff_at(E + BigRational(t));
            }
            CHECK(acc == BigRational(0));
            ++checked;
        }
        CHECK(checked >= 20);
    }
}
