#pragma once

#include "fps/error.hpp"
#include "fps/expr.hpp"
#include "fps/rational.hpp"

#include <map>
#include <string>

namespace fps {

// Truncated Laurent-Puiseux series used as an independent test oracle. The
// exponent grid is 1/grid: coeffs()[j] multiplies x^(j/grid), and indices at
// or beyond first_unknown() are not represented. Built only on exact
// arithmetic; never calls the solver modules.
class SeriesTrunc {
public:
    SeriesTrunc(long grid, long first_unknown);
    static SeriesTrunc constant(const BigRational& c, long grid, long first_unknown);
    static SeriesTrunc variable(long grid, long first_unknown);

    long grid() const { return grid_; }
    long first_unknown() const { return fu_; }
    bool is_zero() const { return c_.empty(); }
    // lowest nonzero index in grid units; first_unknown() for the zero series
    long valuation() const;
    BigRational coeff(long j) const;  // grid units; throws beyond truncation
    BigRational coeff_at(const BigRational& exponent) const;
    const std::map<long, BigRational>& coeffs() const { return c_; }

    SeriesTrunc operator-() const;
    friend SeriesTrunc operator+(const SeriesTrunc& a, const SeriesTrunc& b);
    friend SeriesTrunc operator-(const SeriesTrunc& a, const SeriesTrunc& b);
    friend SeriesTrunc operator*(const SeriesTrunc& a, const SeriesTrunc& b);
    friend SeriesTrunc operator/(const SeriesTrunc& a, const SeriesTrunc& b);

    SeriesTrunc inverse() const;
    SeriesTrunc scaled(const BigRational& c) const;
    SeriesTrunc pow_rational(const BigRational& e) const;
    SeriesTrunc differentiate() const;
    SeriesTrunc integrate() const;  // throws when an x^(-1) term is present

    // regrid onto a finer grid (factor >= 1)
    SeriesTrunc refine(long factor) const;

    void set(long j, const BigRational& c);

private:
    long grid_;
    long fu_;
    std::map<long, BigRational> c_;
};

// Exact truncated series of f at 0: coefficients for all exponents <= order.
// The grid is discovered automatically. Throws FpsError (stage "oracle") with
// codes: essential-singularity, composition-valuation, nonrational-value,
// log-term, free-parameter, unknown-function.
SeriesTrunc truncated_series(const Expr& f, const std::string& var, long order);

}  // namespace fps
