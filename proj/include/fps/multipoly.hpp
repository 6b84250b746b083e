#pragma once

#include "fps/rational.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fps {

// Sparse multivariate polynomial over Q. Variables are an ordered (sorted,
// duplicate-free) name list; each term maps an exponent vector aligned with
// that list to a nonzero coefficient. Terms are kept in lexicographic order
// over the variable list, which makes every traversal deterministic.
class MultiPoly {
public:
    using Exponents = std::vector<int>;
    using TermMap = std::map<Exponents, BigRational>;

    MultiPoly() = default;  // zero polynomial
    explicit MultiPoly(const BigRational& c);
    explicit MultiPoly(long c) : MultiPoly(BigRational(c)) {}

    static MultiPoly constant(const BigRational& c) { return MultiPoly(c); }
    static MultiPoly variable(const std::string& name);
    // Builds c * name^e.
    static MultiPoly monomial(const BigRational& c, const std::string& name, int e);

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Exponents(vars_.size(), 0)); }
    BigRational constant_value() const;  // pre: is_constant()
    bool uses(const std::string& var) const;
    const std::vector<std::string>& vars() const { return vars_; }
    const TermMap& terms() const { return terms_; }
    size_t term_count() const { return terms_.size(); }

    MultiPoly operator-() const;
    MultiPoly& operator+=(const MultiPoly& o);
    MultiPoly& operator-=(const MultiPoly& o);
    friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
    friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
    friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
    MultiPoly& operator*=(const MultiPoly& o) { *this = *this * o; return *this; }
    MultiPoly& operator*=(const BigRational& c);
    friend MultiPoly operator*(MultiPoly a, const BigRational& c) { return a *= c; }
    friend MultiPoly operator*(const BigRational& c, MultiPoly a) { return a *= c; }
    MultiPoly pow(unsigned e) const;

    friend bool operator==(const MultiPoly& a, const MultiPoly& b) { return a.vars_ == b.vars_ && a.terms_ == b.terms_; }
    friend bool operator!=(const MultiPoly& a, const MultiPoly& b) { return !(a == b); }
    // Total order for use as a map/set key.
    friend bool operator<(const MultiPoly& a, const MultiPoly& b);

    // Degree in one variable; zero polynomial and absent variables give -1 / 0 respectively.
    int degree(const std::string& var) const;
    long total_degree() const;

    // Coefficient of var^power, a polynomial in the remaining variables.
    MultiPoly coeff_of(const std::string& var, int power) const;
    // Lowest var-power with a nonzero coefficient (0 if var absent; -1 for zero poly).
    int valuation(const std::string& var) const;

    MultiPoly derivative(const std::string& var) const;
    // var := a*var + b (a, b rational; a may be 0 to evaluate).
    MultiPoly subst_linear(const std::string& var, const BigRational& a, const BigRational& b) const;
    MultiPoly eval_var(const std::string& var, const BigRational& value) const;
    // var := replacement polynomial.
    MultiPoly subst_poly(const std::string& var, const MultiPoly& replacement) const;

    // Positive gcd of all coefficients, sign taken from the lex-leading term;
    // zero polynomial gives 0.
    BigRational rational_content() const;
    MultiPoly primitive_part() const;  // *this / rational_content(), lex-leading coeff > 0
    BigRational lex_leading_rational() const;  // coefficient of the lex-greatest term

    // Leading coefficient viewed as univariate in var: a polynomial in the others.
    MultiPoly leading_coeff(const std::string& var) const { return coeff_of(var, degree(var)); }

    std::string to_string() const;

    // Dense coefficient list c[0..deg] in var; pre: no other variables occur.
    std::vector<BigRational> dense_coeffs(const std::string& var) const;
    static MultiPoly from_dense(const std::vector<BigRational>& c, const std::string& var);

    // The single variable this polynomial actually uses, if exactly one.
    std::optional<std::string> sole_variable() const;

private:
    std::vector<std::string> vars_;
    TermMap terms_;

    void insert_term(const Exponents& e, const BigRational& c);
    void prune();
    static void align(MultiPoly& a, MultiPoly& b);
    MultiPoly with_vars(const std::vector<std::string>& vars) const;  // reindex onto a superset list
};

std::ostream& operator<<(std::ostream& os, const MultiPoly& p);

// Exact division; throws std::domain_error if b does not divide a.
MultiPoly poly_divexact(const MultiPoly& a, const MultiPoly& b);
bool poly_divides(const MultiPoly& b, const MultiPoly& a);

// Primitive positive gcd; gcd(0,0) = 0, constants give 1.
MultiPoly poly_gcd(const MultiPoly& a, const MultiPoly& b);

// Division with remainder viewed as univariate in var over the fraction field
// of the remaining variables: a = q*b + r with deg_var r < deg_var b.
// Coefficients of q and r are rational in the other variables, so they are
// returned with a common polynomial denominator.
struct PolyDivRem {
    MultiPoly quot, rem;
    MultiPoly denom;  // parameter-only; a*denom = quot*b + rem holds exactly
};
PolyDivRem poly_divrem(const MultiPoly& a, const MultiPoly& b, const std::string& var);

// All rational roots with multiplicities, ascending. pre: univariate in var.
std::vector<std::pair<BigRational, int>> rational_roots(const MultiPoly& p, const std::string& var);
// Convenience: integer roots only, ascending.
std::vector<long> integer_roots(const MultiPoly& p, const std::string& var);

// Squarefree decomposition (Yun): p = content * prod f_i^i with f_i squarefree,
// pairwise coprime, primitive. pre: univariate in var.
std::vector<std::pair<MultiPoly, int>> squarefree_decomposition(const MultiPoly& p, const std::string& var);

// Factors out every rational-root linear factor, then squarefree parts of
// degree <= 2 are kept as quadratic factors; anything of higher degree is
// returned unfactored in `remainder`. pre: univariate in var.
struct Factorization {
    BigRational constant{1};
    std::vector<std::pair<MultiPoly, int>> linear;     // primitive q*x - p, positive leading
    std::vector<std::pair<MultiPoly, int>> quadratic;  // primitive, positive leading, no rational roots
    std::vector<std::pair<MultiPoly, int>> remainder;  // degree >= 3, squarefree, no rational roots
};
Factorization factor_over_Q(const MultiPoly& p, const std::string& var);

// Exact square root of a polynomial if one exists (sign-normalized so the
// lex-leading coefficient is positive).
std::optional<MultiPoly> sqrt_exact(const MultiPoly& p);

}  // namespace fps
