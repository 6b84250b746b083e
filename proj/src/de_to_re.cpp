#include "fps/de_to_re.hpp"

#include <algorithm>

namespace fps {

namespace {

BigRational rational_gcd(const BigRational& a, const BigRational& b) {
    mpz_class g, l;
    mpz_gcd(g.get_mpz_t(), a.num().get_mpz_t(), b.num().get_mpz_t());
    mpz_lcm(l.get_mpz_t(), a.den().get_mpz_t(), b.den().get_mpz_t());
    return BigRational(g, l);
}

bool uses_only(const MultiPoly& p, const std::string& var) {
    for (const auto& v : p.vars())
        if (v != var && p.uses(v)) return false;
    return true;
}

}  // namespace

MultiPoly pochhammer_poly(const std::string& index, long l, long j) {
    MultiPoly p(BigRational(1));
    MultiPoly k = MultiPoly::variable(index);
    for (long i = 0; i < j; ++i) p = p * (k + MultiPoly(BigRational(1 - l + i)));
    return p;
}

MultiPoly RE::original_coeff(long offset) const {
    MultiPoly p = coeffs[offset - shift];
    for (const MultiPoly& r : removed) p = p * r;
    return p.subst_linear(index, BigRational(1), BigRational(shift));
}

std::string RE::to_string() const {
    std::string out;
    for (long t = shift + span(); t >= shift; --t) {
        MultiPoly p = original_coeff(t);
        if (p.is_zero()) continue;
        if (!out.empty()) out += " + ";
        std::string arg = index;
        if (t > 0) arg += " + " + std::to_string(t);
        if (t < 0) arg += " - " + std::to_string(-t);
        Expr c = ctx.to_expr(p);
        if (c.is_one())
            out += "a(" + arg + ")";
        else
            out += "(" + c.to_string() + ")*a(" + arg + ")";
    }
    if (out.empty()) out = "0";
    return out + " = 0";
}

std::map<long, MultiPoly> convert_raw(const SimpleDE& de, const std::string& index) {
    std::map<long, MultiPoly> out;
    for (long j = 0; j <= de.order(); ++j) {
        const MultiPoly& c = de.coeffs[j];
        for (long l = 0; l <= c.degree(de.var); ++l) {
            MultiPoly cl = c.coeff_of(de.var, l);
            if (cl.is_zero()) continue;
            MultiPoly term = cl * pochhammer_poly(index, l, j);
            auto [it, fresh] = out.emplace(j - l, term);
            if (!fresh) it->second += term;
        }
    }
    for (auto it = out.begin(); it != out.end();)
        it = it->second.is_zero() ? out.erase(it) : std::next(it);
    return out;
}

RE convert_de_to_re(const SimpleDE& de, const std::string& index) {
    std::string idx = index;
    auto taken = [&](const std::string& s) {
        if (s == de.var) return true;
        for (const MultiPoly& c : de.coeffs)
            if (c.uses(s)) return true;
        return false;
    };
    while (taken(idx)) idx += index;

    std::map<long, MultiPoly> raw = convert_raw(de, idx);
    RE re{idx, {}, 0, {}, de.ctx};
    if (raw.empty()) {
        re.coeffs = {MultiPoly()};
        return re;
    }
    long m0 = raw.begin()->first, m1 = raw.rbegin()->first;
    re.shift = m0;
    re.coeffs.assign(m1 - m0 + 1, MultiPoly());
    for (auto& [t, p] : raw)
        re.coeffs[t - m0] = p.subst_linear(idx, BigRational(1), BigRational(-m0));

    // parameter-free polynomial content is cancelled but kept on record: a
    // cancelled root shrinks the set of k the normalized statement covers
    MultiPoly g;
    for (const MultiPoly& c : re.coeffs) g = poly_gcd(g, c);
    if (!g.is_constant() && uses_only(g, idx)) {
        for (MultiPoly& c : re.coeffs) c = poly_divexact(c, g);
        re.removed.push_back(g);
    }

    BigRational content(0);
    for (const MultiPoly& c : re.coeffs)
        if (!c.is_zero()) content = rational_gcd(content, c.rational_content());
    if (re.coeffs.back().lex_leading_rational().sign() < 0) content = -content;
    for (MultiPoly& c : re.coeffs) c = c * MultiPoly(content.inverse());
    return re;
}

ReValidity re_holds_for_all_k(const RE& re) {
    ReValidity v{re.removed.empty(), std::nullopt};
    std::vector<long> roots = integer_roots(re.original_coeff(re.shift + re.span()), re.index);
    if (!roots.empty()) v.k_max = *std::max_element(roots.begin(), roots.end());
    return v;
}

}  // namespace fps
