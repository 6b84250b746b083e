#include "fps/multipoly.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

namespace fps {

std::ostream& operator<<(std::ostream& os, const BigRational& q) { return os << q.to_string(); }

MultiPoly::MultiPoly(const BigRational& c) {
    if (!c.is_zero()) terms_.emplace(Exponents{}, c);
}

MultiPoly MultiPoly::variable(const std::string& name) {
    MultiPoly p;
    p.vars_ = {name};
    p.terms_.emplace(Exponents{1}, BigRational(1));
    return p;
}

MultiPoly MultiPoly::monomial(const BigRational& c, const std::string& name, int e) {
    if (c.is_zero()) return MultiPoly();
    if (e == 0) return MultiPoly(c);
    MultiPoly p;
    p.vars_ = {name};
    p.terms_.emplace(Exponents{e}, c);
    return p;
}

BigRational MultiPoly::constant_value() const {
    if (terms_.empty()) return BigRational(0);
    return terms_.begin()->second;
}

bool MultiPoly::uses(const std::string& var) const {
    auto it = std::lower_bound(vars_.begin(), vars_.end(), var);
    if (it == vars_.end() || *it != var) return false;
    size_t idx = it - vars_.begin();
    for (const auto& [e, c] : terms_)
        if (e[idx] != 0) return true;
    return false;
}

void MultiPoly::insert_term(const Exponents& e, const BigRational& c) {
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        if (!c.is_zero()) terms_.emplace(e, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

void MultiPoly::prune() {
    if (vars_.empty()) return;
    std::vector<bool> used(vars_.size(), false);
    for (const auto& [e, c] : terms_)
        for (size_t i = 0; i < e.size(); ++i)
            if (e[i] != 0) used[i] = true;
    if (std::all_of(used.begin(), used.end(), [](bool b) { return b; })) return;
    std::vector<std::string> nv;
    for (size_t i = 0; i < vars_.size(); ++i)
        if (used[i]) nv.push_back(vars_[i]);
    TermMap nt;
    for (const auto& [e, c] : terms_) {
        Exponents ne;
        for (size_t i = 0; i < e.size(); ++i)
            if (used[i]) ne.push_back(e[i]);
        nt.emplace(std::move(ne), c);
    }
    vars_ = std::move(nv);
    terms_ = std::move(nt);
}

MultiPoly MultiPoly::with_vars(const std::vector<std::string>& vars) const {
    MultiPoly r;
    r.vars_ = vars;
    std::vector<int> pos(vars_.size());
    for (size_t i = 0; i < vars_.size(); ++i) {
        auto it = std::lower_bound(vars.begin(), vars.end(), vars_[i]);
        pos[i] = int(it - vars.begin());
    }
    for (const auto& [e, c] : terms_) {
        Exponents ne(vars.size(), 0);
        for (size_t i = 0; i < e.size(); ++i) ne[pos[i]] = e[i];
        r.terms_.emplace(std::move(ne), c);
    }
    return r;
}

void MultiPoly::align(MultiPoly& a, MultiPoly& b) {
    if (a.vars_ == b.vars_) return;
    std::vector<std::string> u;
    std::set_union(a.vars_.begin(), a.vars_.end(), b.vars_.begin(), b.vars_.end(), std::back_inserter(u));
    if (u != a.vars_) a = a.with_vars(u);
    if (u != b.vars_) b = b.with_vars(u);
}

MultiPoly MultiPoly::operator-() const {
    MultiPoly r = *this;
    for (auto& [e, c] : r.terms_) c = -c;
    return r;
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
    MultiPoly rhs = o;
    align(*this, rhs);
    for (const auto& [e, c] : rhs.terms_) insert_term(e, c);
    prune();
    return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) { return *this += -o; }

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    MultiPoly x = a, y = b;
    MultiPoly::align(x, y);
    MultiPoly r;
    r.vars_ = x.vars_;
    for (const auto& [ea, ca] : x.terms_)
        for (const auto& [eb, cb] : y.terms_) {
            MultiPoly::Exponents e(ea.size());
            for (size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
            r.insert_term(e, ca * cb);
        }
    r.prune();
    return r;
}

MultiPoly& MultiPoly::operator*=(const BigRational& c) {
    if (c.is_zero()) {
        terms_.clear();
        vars_.clear();
        return *this;
    }
    for (auto& [e, v] : terms_) v *= c;
    return *this;
}

MultiPoly MultiPoly::pow(unsigned e) const {
    MultiPoly r(BigRational(1));
    MultiPoly base = *this;
    while (e) {
        if (e & 1) r = r * base;
        e >>= 1;
        if (e) base = base * base;
    }
    return r;
}

bool operator<(const MultiPoly& a, const MultiPoly& b) {
    if (a.vars_ != b.vars_) return a.vars_ < b.vars_;
    auto ia = a.terms_.begin(), ib = b.terms_.begin();
    for (; ia != a.terms_.end() && ib != b.terms_.end(); ++ia, ++ib) {
        if (ia->first != ib->first) return ia->first < ib->first;
        if (ia->second != ib->second) return ia->second < ib->second;
    }
    return ib != b.terms_.end();
}

int MultiPoly::degree(const std::string& var) const {
    if (terms_.empty()) return -1;
    auto it = std::lower_bound(vars_.begin(), vars_.end(), var);
    if (it == vars_.end() || *it != var) return 0;
    size_t idx = it - vars_.begin();
    int d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, e[idx]);
    return d;
}

long MultiPoly::total_degree() const {
    long d = -1;
    for (const auto& [e, c] : terms_) {
        long t = 0;
        for (int x : e) t += x;
        d = std::max(d, t);
    }
    return d;
}

MultiPoly MultiPoly::coeff_of(const std::string& var, int power) const {
    auto it = std::lower_bound(vars_.begin(), vars_.end(), var);
    if (it == vars_.end() || *it != var) return power == 0 ? *this : MultiPoly();
    size_t idx = it - vars_.begin();
    MultiPoly r;
    r.vars_ = vars_;
    for (const auto& [e, c] : terms_) {
        if (e[idx] != power) continue;
        Exponents ne = e;
        ne[idx] = 0;
        r.insert_term(ne, c);
    }
    r.prune();
    return r;
}

int MultiPoly::valuation(const std::string& var) const {
    if (terms_.empty()) return -1;
    auto it = std::lower_bound(vars_.begin(), vars_.end(), var);
    if (it == vars_.end() || *it != var) return 0;
    size_t idx = it - vars_.begin();
    int v = -1;
    for (const auto& [e, c] : terms_) v = (v < 0) ? e[idx] : std::min(v, e[idx]);
    return v;
}

MultiPoly MultiPoly::derivative(const std::string& var) const {
    auto it = std::lower_bound(vars_.begin(), vars_.end(), var);
    if (it == vars_.end() || *it != var) return MultiPoly();
    size_t idx = it - vars_.begin();
    MultiPoly r;
    r.vars_ = vars_;
    for (const auto& [e, c] : terms_) {
        if (e[idx] == 0) continue;
        Exponents ne = e;
        ne[idx] -= 1;
        r.insert_term(ne, c * BigRational(e[idx]));
    }
    r.prune();
    return r;
}

MultiPoly MultiPoly::subst_linear(const std::string& var, const BigRational& a, const BigRational& b) const {
    MultiPoly repl = MultiPoly::monomial(a, var, 1);
    repl += MultiPoly(b);
    return subst_poly(var, repl);
}

MultiPoly MultiPoly::eval_var(const std::string& var, const BigRational& value) const {
    return subst_linear(var, BigRational(0), value);
}

MultiPoly MultiPoly::subst_poly(const std::string& var, const MultiPoly& replacement) const {
    auto it = std::lower_bound(vars_.begin(), vars_.end(), var);
    if (it == vars_.end() || *it != var) return *this;
    size_t idx = it - vars_.begin();
    int maxdeg = degree(var);
    // Precompute powers of the replacement.
    std::vector<MultiPoly> pw(size_t(maxdeg) + 1, MultiPoly(BigRational(1)));
    for (int i = 1; i <= maxdeg; ++i) pw[i] = pw[i - 1] * replacement;
    MultiPoly r;
    for (const auto& [e, c] : terms_) {
        Exponents ne = e;
        ne[idx] = 0;
        MultiPoly t;
        t.vars_ = vars_;
        t.terms_.emplace(ne, c);
        t.prune();
        r += t * pw[e[idx]];
    }
    return r;
}

BigRational MultiPoly::rational_content() const {
    if (terms_.empty()) return BigRational(0);
    mpz_class g = 0, l = 1;
    for (const auto& [e, c] : terms_) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.num().get_mpz_t());
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.den().get_mpz_t());
    }
    BigRational content(g, l);
    if (lex_leading_rational().sign() < 0) content = -content;
    return content;
}

MultiPoly MultiPoly::primitive_part() const {
    if (terms_.empty()) return *this;
    MultiPoly r = *this;
    r *= rational_content().inverse();
    return r;
}

BigRational MultiPoly::lex_leading_rational() const {
    if (terms_.empty()) return BigRational(0);
    return terms_.rbegin()->second;
}

std::vector<BigRational> MultiPoly::dense_coeffs(const std::string& var) const {
    for (const auto& v : vars_)
        if (v != var && uses(v)) throw std::domain_error("dense_coeffs: polynomial not univariate in " + var);
    int d = std::max(0, degree(var));
    std::vector<BigRational> c(size_t(d) + 1, BigRational(0));
    auto it = std::lower_bound(vars_.begin(), vars_.end(), var);
    if (it == vars_.end() || *it != var) {
        if (!terms_.empty()) c[0] = constant_value();
        return c;
    }
    size_t idx = it - vars_.begin();
    for (const auto& [e, coef] : terms_) c[e[idx]] = coef;
    return c;
}

MultiPoly MultiPoly::from_dense(const std::vector<BigRational>& c, const std::string& var) {
    MultiPoly r;
    for (size_t i = 0; i < c.size(); ++i) r += MultiPoly::monomial(c[i], var, int(i));
    return r;
}

std::optional<std::string> MultiPoly::sole_variable() const {
    std::optional<std::string> found;
    for (const auto& v : vars_) {
        if (!uses(v)) continue;
        if (found) return std::nullopt;
        found = v;
    }
    return found;
}

std::string MultiPoly::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    // Terms are printed lex-descending so the leading term comes first.
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [e, c] = *it;
        BigRational a = c;
        if (first) {
            if (a.sign() < 0) {
                os << "-";
                a = -a;
            }
        } else {
            os << (a.sign() < 0 ? " - " : " + ");
            if (a.sign() < 0) a = -a;
        }
        first = false;
        bool any_var = false;
        std::ostringstream vs;
        for (size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (any_var) vs << "*";
            vs << vars_[i];
            if (e[i] != 1) vs << "^" << e[i];
            any_var = true;
        }
        if (!any_var) {
            os << a.to_string();
        } else if (a.is_one()) {
            os << vs.str();
        } else {
            os << a.to_string() << "*" << vs.str();
        }
    }
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const MultiPoly& p) { return os << p.to_string(); }

MultiPoly poly_divexact(const MultiPoly& a, const MultiPoly& b) {
    if (b.is_zero()) throw std::domain_error("poly_divexact: division by zero");
    if (a.is_zero()) return MultiPoly();
    if (b.is_constant()) {
        MultiPoly r = a;
        r *= b.constant_value().inverse();
        return r;
    }
    // Lex long division: if b | a this terminates with remainder 0.
    MultiPoly rem = a, quot;
    std::vector<std::string> u;
    {
        MultiPoly x = a, y = b;
        std::set_union(x.vars().begin(), x.vars().end(), y.vars().begin(), y.vars().end(), std::back_inserter(u));
    }
    // Term maps are reconstructed on the union variable list each round so the
    // lex-leading exponents are comparable (desk-scale polynomials).
    auto aligned = [&u](const MultiPoly& p) {
        std::map<MultiPoly::Exponents, BigRational> m;
        for (const auto& [e, c] : p.terms()) {
            MultiPoly::Exponents ne(u.size(), 0);
            for (size_t i = 0, j = 0; i < p.vars().size(); ++i) {
                while (u[j] != p.vars()[i]) ++j;
                ne[j] = e[i];
            }
            m.emplace(ne, c);
        }
        return m;
    };
    auto rb = aligned(b);
    while (!rem.is_zero()) {
        auto ra = aligned(rem);
        const auto& [ea, ca] = *ra.rbegin();
        const auto& [eb, cbb] = *rb.rbegin();
        MultiPoly::Exponents q(u.size());
        for (size_t i = 0; i < u.size(); ++i) {
            q[i] = ea[i] - eb[i];
            if (q[i] < 0) throw std::domain_error("poly_divexact: not divisible");
        }
        MultiPoly qt(BigRational(ca / cbb));
        for (size_t i = 0; i < u.size(); ++i)
            if (q[i]) qt *= MultiPoly::monomial(BigRational(1), u[i], q[i]);
        quot += qt;
        rem -= qt * b;
    }
    return quot;
}

bool poly_divides(const MultiPoly& b, const MultiPoly& a) {
    if (a.is_zero()) return true;
    if (b.is_zero()) return false;
    try {
        poly_divexact(a, b);
        return true;
    } catch (const std::domain_error&) {
        return false;
    }
}

PolyDivRem poly_divrem(const MultiPoly& a, const MultiPoly& b, const std::string& var) {
    if (b.is_zero()) throw std::domain_error("poly_divrem: division by zero");
    int db = b.degree(var);
    MultiPoly lb = b.coeff_of(var, db);
    PolyDivRem out;
    out.denom = MultiPoly(BigRational(1));
    out.rem = a;
    int da = out.rem.degree(var);
    while (!out.rem.is_zero() && (da = out.rem.degree(var)) >= db) {
        MultiPoly la = out.rem.coeff_of(var, da);
        // Multiply the working identity through by lb so the step divides exactly:
        //   a*denom = quot*b + rem  ->  a*(denom*lb) = (quot*lb + la*var^(da-db))*b + (rem*lb - la*var^d*b)
        MultiPoly shift = MultiPoly::monomial(BigRational(1), var, da - db) * la;
        out.quot = out.quot * lb + shift;
        out.rem = out.rem * lb - shift * b;
        out.denom = out.denom * lb;
    }
    return out;
}

namespace {

// Content of p w.r.t. var: gcd of its var-coefficients (polynomials in the rest).
MultiPoly content_in(const MultiPoly& p, const std::string& var) {
    MultiPoly c;
    for (int i = 0; i <= p.degree(var); ++i) {
        MultiPoly ci = p.coeff_of(var, i);
        if (ci.is_zero()) continue;
        c = c.is_zero() ? ci : poly_gcd(c, ci);
        if (c.is_constant()) break;
    }
    return c.is_zero() ? MultiPoly(BigRational(0)) : c;
}

}  // namespace

MultiPoly poly_gcd(const MultiPoly& a, const MultiPoly& b) {
    if (a.is_zero()) return b.is_zero() ? MultiPoly() : b.primitive_part();
    if (b.is_zero()) return a.primitive_part();
    if (a.is_constant() || b.is_constant()) return MultiPoly(BigRational(1));

    // Pick the first variable used by both; if none, the polynomials share no
    // variable and the gcd is a constant.
    std::string var;
    for (const auto& v : a.vars())
        if (a.uses(v) && b.uses(v)) {
            var = v;
            break;
        }
    if (var.empty()) return MultiPoly(BigRational(1));

    MultiPoly ca = content_in(a, var), cb = content_in(b, var);
    MultiPoly pa = poly_divexact(a, ca), pb = poly_divexact(b, cb);
    MultiPoly cg = poly_gcd(ca, cb);

    // Primitive PRS on the main variable.
    MultiPoly u = pa, v = pb;
    if (u.degree(var) < v.degree(var)) std::swap(u, v);
    while (!v.is_zero()) {
        PolyDivRem d = poly_divrem(u, v, var);
        u = v;
        MultiPoly r = d.rem;
        if (!r.is_zero()) {
            MultiPoly rc = content_in(r, var);
            r = poly_divexact(r, rc);
        }
        v = r;
    }
    MultiPoly uc = content_in(u, var);
    u = poly_divexact(u, uc);
    return (cg * u).primitive_part();
}

namespace {

// Complete factorization of |n| (n != 0): trial division then Pollard rho.
void factor_mpz(mpz_class n, std::map<mpz_class, int>& out);

mpz_class pollard_rho(const mpz_class& n) {
    // Brent's variant with a deterministic parameter sweep.
    if (n % 2 == 0) return 2;
    for (unsigned long c = 1;; ++c) {
        mpz_class x = 2, y = 2, d = 1;
        while (d == 1) {
            x = (x * x + c) % n;
            y = (y * y + c) % n;
            y = (y * y + c) % n;
            mpz_class diff = x > y ? x - y : y - x;
            if (diff == 0) break;
            mpz_gcd(d.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
        }
        if (d != 1 && d != n) return d;
    }
}

void factor_mpz(mpz_class n, std::map<mpz_class, int>& out) {
    if (n < 0) n = -n;
    if (n <= 1) return;
    for (unsigned long p = 2; p <= 65536 && mpz_class(p) * p <= n; p == 2 ? p = 3 : p += 2) {
        while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            out[mpz_class(p)]++;
            n /= p;
        }
    }
    if (n == 1) return;
    if (mpz_probab_prime_p(n.get_mpz_t(), 40)) {
        out[n]++;
        return;
    }
    mpz_class d = pollard_rho(n);
    factor_mpz(d, out);
    factor_mpz(n / d, out);
}

std::vector<mpz_class> divisors_of(const mpz_class& n) {
    std::map<mpz_class, int> f;
    factor_mpz(n, f);
    std::vector<mpz_class> divs{1};
    for (const auto& [p, e] : f) {
        size_t base = divs.size();
        mpz_class pk = 1;
        for (int i = 1; i <= e; ++i) {
            pk *= p;
            for (size_t j = 0; j < base; ++j) divs.push_back(divs[j] * pk);
        }
    }
    std::sort(divs.begin(), divs.end());
    return divs;
}

BigRational eval_dense(const std::vector<BigRational>& c, const BigRational& x) {
    BigRational r(0);
    for (size_t i = c.size(); i-- > 0;) r = r * x + c[i];
    return r;
}

// Deflate by (den*x - num); pre: num/den is a root.
std::vector<BigRational> deflate(const std::vector<BigRational>& c, const BigRational& root) {
    // Synthetic division by (x - root) over Q.
    std::vector<BigRational> q(c.size() - 1, BigRational(0));
    BigRational carry(0);
    for (size_t i = c.size(); i-- > 1;) {
        carry = c[i] + carry * root;
        q[i - 1] = carry;
    }
    return q;
}

}  // namespace

std::vector<std::pair<BigRational, int>> rational_roots(const MultiPoly& p, const std::string& var) {
    std::vector<std::pair<BigRational, int>> roots;
    if (p.is_zero() || p.is_constant()) return roots;
    std::vector<BigRational> c = p.dense_coeffs(var);
    // Root at 0: strip the valuation.
    size_t val = 0;
    while (val < c.size() && c[val].is_zero()) ++val;
    if (val > 0) {
        roots.emplace_back(BigRational(0), int(val));
        c.erase(c.begin(), c.begin() + val);
    }
    if (c.size() <= 1) return roots;
    // Clear to a primitive integer polynomial.
    mpz_class l = 1;
    for (const auto& q : c) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.den().get_mpz_t());
    std::vector<mpz_class> ic;
    for (const auto& q : c) ic.push_back(q.num() * (l / q.den()));
    mpz_class g = 0;
    for (const auto& z : ic) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), z.get_mpz_t());
    for (auto& z : ic) z /= g;

    std::vector<mpz_class> ps = divisors_of(ic.front());
    std::vector<mpz_class> qs = divisors_of(ic.back());
    std::vector<BigRational> candidates;
    for (const auto& pn : ps)
        for (const auto& qd : qs) {
            BigRational r(pn, qd);
            candidates.push_back(r);
            candidates.push_back(-r);
        }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    std::vector<BigRational> cur(ic.size());
    for (size_t i = 0; i < ic.size(); ++i) cur[i] = BigRational(ic[i]);
    for (const auto& cand : candidates) {
        if (cur.size() <= 1) break;
        if (!eval_dense(cur, cand).is_zero()) continue;
        int mult = 0;
        while (cur.size() > 1 && eval_dense(cur, cand).is_zero()) {
            cur = deflate(cur, cand);
            ++mult;
        }
        roots.emplace_back(cand, mult);
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

std::vector<long> integer_roots(const MultiPoly& p, const std::string& var) {
    std::vector<long> out;
    for (const auto& [r, m] : rational_roots(p, var))
        if (r.is_integer()) out.push_back(r.to_long());
    return out;
}

std::vector<std::pair<MultiPoly, int>> squarefree_decomposition(const MultiPoly& p, const std::string& var) {
    std::vector<std::pair<MultiPoly, int>> out;
    if (p.is_zero() || p.is_constant()) return out;
    MultiPoly f = p.primitive_part();
    MultiPoly fp = f.derivative(var);
    MultiPoly a = poly_gcd(f, fp);
    MultiPoly b = poly_divexact(f, a);
    MultiPoly c = poly_divexact(fp, a) - b.derivative(var);
    int i = 1;
    while (!(b.is_constant())) {
        MultiPoly g = poly_gcd(b, c);
        if (!g.is_constant()) out.emplace_back(g, i);
        b = poly_divexact(b, g);
        c = poly_divexact(c, g) - b.derivative(var);
        ++i;
    }
    return out;
}

Factorization factor_over_Q(const MultiPoly& p, const std::string& var) {
    Factorization out;
    if (p.is_zero()) {
        out.constant = BigRational(0);
        return out;
    }
    if (p.is_constant()) {
        out.constant = p.constant_value();
        return out;
    }
    auto parts = squarefree_decomposition(p, var);
    for (const auto& [g, mult] : parts) {
        MultiPoly rest = g;
        for (const auto& [root, m1] : rational_roots(g, var)) {
            // (den*x - num), primitive with positive leading coefficient.
            MultiPoly lin = MultiPoly::monomial(BigRational(root.den()), var, 1) - MultiPoly(BigRational(root.num()));
            out.linear.emplace_back(lin, mult);
            rest = poly_divexact(rest, lin);
        }
        if (!rest.is_constant()) {
            MultiPoly pp = rest.primitive_part();
            if (pp.degree(var) <= 2)
                out.quadratic.emplace_back(pp, mult);
            else
                out.remainder.emplace_back(pp, mult);
        }
    }
    // The constant soaks up whatever scalar is left after dividing out the factors.
    MultiPoly prod(BigRational(1));
    for (const auto& [f, m] : out.linear) prod = prod * f.pow(unsigned(m));
    for (const auto& [f, m] : out.quadratic) prod = prod * f.pow(unsigned(m));
    for (const auto& [f, m] : out.remainder) prod = prod * f.pow(unsigned(m));
    MultiPoly q = poly_divexact(p, prod);
    if (!q.is_constant()) throw std::logic_error("factor_over_Q: internal factor mismatch");
    out.constant = q.constant_value();
    return out;
}

std::optional<MultiPoly> sqrt_exact(const MultiPoly& p) {
    if (p.is_zero()) return MultiPoly();
    if (p.is_constant()) {
        BigRational r;
        if (!BigRational::nth_root_exact(p.constant_value(), 2, &r)) return std::nullopt;
        return MultiPoly(r);
    }
    // For p = s^2: s = gcd(p, dp/dv) up to constant, for any variable v in p.
    std::string var;
    for (const auto& v : p.vars())
        if (p.uses(v)) {
            var = v;
            break;
        }
    MultiPoly g = poly_gcd(p, p.derivative(var));
    if (g.is_constant()) return std::nullopt;
    MultiPoly g2 = g * g;
    if (!poly_divides(g2, p)) return std::nullopt;
    MultiPoly rest = poly_divexact(p, g2);
    if (!rest.is_constant()) return std::nullopt;
    BigRational c;
    if (!BigRational::nth_root_exact(rest.constant_value(), 2, &c)) return std::nullopt;
    MultiPoly s = g * c;
    if (s.lex_leading_rational().sign() < 0) s = -s;
    return s;
}

}  // namespace fps
