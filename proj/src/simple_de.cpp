#include "fps/simple_de.hpp"

#include <map>

#include "fps/error.hpp"
#include "fps/ratfun.hpp"

namespace fps {

namespace {

std::string derivative_name(long j) {
    if (j <= 3) return "f" + std::string(static_cast<size_t>(j), '\'') + "(x)";
    return "f^(" + std::to_string(j) + ")(x)";
}

BigRational rational_gcd(const BigRational& a, const BigRational& b) {
    mpz_class g, l;
    mpz_gcd(g.get_mpz_t(), a.num().get_mpz_t(), b.num().get_mpz_t());
    mpz_lcm(l.get_mpz_t(), a.den().get_mpz_t(), b.den().get_mpz_t());
    return BigRational(g, l);
}

// divide out the polynomial and rational content shared by all coefficients
// and make the leading coefficient lexicographically positive
void normalize_coeffs(std::vector<MultiPoly>& cs) {
    MultiPoly g;
    for (const MultiPoly& c : cs) g = poly_gcd(g, c);
    if (!g.is_zero() && !g.is_constant())
        for (MultiPoly& c : cs) c = poly_divexact(c, g);
    BigRational content(0);
    for (const MultiPoly& c : cs)
        if (!c.is_zero()) content = rational_gcd(content, c.rational_content());
    if (content.is_zero()) return;
    if (cs.back().lex_leading_rational().sign() < 0) content = -content;
    for (MultiPoly& c : cs) c = c * MultiPoly(content.inverse());
}

}  // namespace

std::string SimpleDE::to_string() const {
    std::string out;
    for (long j = order(); j >= 0; --j) {
        if (coeffs[j].is_zero()) continue;
        if (!out.empty()) out += " + ";
        Expr c = coeff_expr(j);
        if (c.is_one())
            out += derivative_name(j);
        else
            out += "(" + c.to_string() + ")*" + derivative_name(j);
    }
    if (out.empty()) out = "0";
    return out + " = 0";
}

DeSearch find_simple_de(const Expr& f, const std::string& var, long k, const Catalog& cat) {
    std::vector<Expr> der(k + 1);
    der[0] = f;
    for (long j = 1; j <= k; ++j) der[j] = differentiate(der[j - 1], var, cat);

    TermContext ctx(var);
    std::vector<TermForm> tf(k + 1);
    for (long j = 0; j <= k; ++j) tf[j] = to_term_form(der[j], ctx);

    std::map<KernelSet, size_t> classes;
    for (const TermForm& t : tf)
        for (const Term& term : t)
            classes.emplace(term.kernels, classes.size());

    size_t rows = classes.size();
    std::vector<std::vector<RatFun>> M(rows, std::vector<RatFun>(k));
    std::vector<RatFun> rhs(rows);
    for (long j = 0; j <= k; ++j)
        for (const Term& term : tf[j]) {
            size_t r = classes[term.kernels];
            if (j < k)
                M[r][j] = term.coeff;
            else
                rhs[r] = -term.coeff;
        }

    auto sol = solve_linear(M, rhs);
    if (!sol) return DeNotFound{};

    // name free unknowns after their ansatz index, avoiding symbols in f
    std::string prefix = "A";
    auto collides = [&](const std::string& p) {
        for (size_t c : sol->free_columns)
            if (f.uses(p + std::to_string(c))) return true;
        return false;
    };
    while (collides(prefix)) prefix += "A";
    std::vector<std::string> params;
    for (size_t c : sol->free_columns) params.push_back(prefix + std::to_string(c));

    std::vector<RatFun> cs(k + 1);
    cs[k] = RatFun(1);
    for (long j = 0; j < k; ++j) {
        cs[j] = sol->particular[j];
        for (size_t m = 0; m < params.size(); ++m)
            cs[j] += RatFun::variable(params[m]) * sol->directions[m][j];
    }

    MultiPoly den(BigRational(1));
    for (const RatFun& c : cs) {
        const MultiPoly& d = c.denominator();
        den = poly_divexact(den * d, poly_gcd(den, d));
    }
    std::vector<MultiPoly> coeffs(k + 1);
    for (long j = 0; j <= k; ++j)
        coeffs[j] = cs[j].numerator() * poly_divexact(den, cs[j].denominator());
    normalize_coeffs(coeffs);

    SimpleDE de{var, std::move(coeffs), std::move(ctx)};
    if (params.empty()) return de;
    return ParametricDE{std::move(de), std::move(params)};
}

DeSearch find_lowest_de(const Expr& f, const std::string& var, long kmax, const Catalog& cat) {
    for (long k = 1; k <= kmax; ++k) {
        DeSearch r = find_simple_de(f, var, k, cat);
        if (!std::holds_alternative<DeNotFound>(r)) return r;
    }
    return DeNotFound{};
}

}  // namespace fps
