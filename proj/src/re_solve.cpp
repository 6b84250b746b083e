#include "fps/re_solve.hpp"

#include "fps/exact_eval.hpp"
#include "fps/oracle.hpp"
#include "fps/ratfun.hpp"
#include "fps/trace.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace fps {

namespace {

// p(var + b)
MultiPoly shifted(const MultiPoly& p, const std::string& var, long b) {
    return p.subst_linear(var, BigRational(1), BigRational(b));
}

BigRational eval_at(const MultiPoly& p, const std::string& var, long k) {
    return p.eval_var(var, BigRational(k)).constant_value();
}

void sort_unique(std::vector<long>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

// divides out gcd(P, Q) and the rational content, recording integer roots of
// the cancelled part as exceptional instances; Q ends up primitive with a
// positive leading coefficient
void reduce_coprime(HypergeomRE& h) {
    if (!h.P.is_zero()) {
        MultiPoly g = poly_gcd(h.P, h.Q);
        if (g.degree(h.index) > 0) {
            h.P = poly_divexact(h.P, g);
            h.Q = poly_divexact(h.Q, g);
            for (long z : integer_roots(g, h.index)) h.except.push_back(z);
        }
    }
    BigRational c = h.Q.rational_content();
    if (!c.is_zero() && !(c == BigRational(1))) {
        h.Q = h.Q * c.inverse();
        if (!h.P.is_zero()) h.P = h.P * c.inverse();
    }
    sort_unique(h.except);
}

// rows of the recurrence that are not identically zero
std::vector<long> nonzero_rows(const RE& re) {
    std::vector<long> offs;
    for (long j = 0; j <= re.span(); ++j)
        if (!re.coeffs[j].is_zero()) offs.push_back(j);
    return offs;
}

// instances of the normalized recurrence made vacuous by cancelled content
std::vector<long> removed_roots(const RE& re) {
    std::vector<long> bad;
    for (const MultiPoly& r : re.removed)
        for (long z : integer_roots(r, re.index)) bad.push_back(z);
    return bad;
}

}  // namespace

std::string HypergeomRE::to_string() const {
    std::string s = "(" + Q.to_string() + ")*a(" + index + "+" + std::to_string(m) + ") = (" +
                    P.to_string() + ")*a(" + index + ")";
    if (!except.empty()) {
        s += " except {";
        for (size_t i = 0; i < except.size(); ++i)
            s += (i ? "," : "") + std::to_string(except[i]);
        s += "}";
    }
    return s;
}

std::optional<HypergeomRE> detect_hypergeometric(const RE& re) {
    std::vector<long> offs = nonzero_rows(re);
    for (long j : offs) {
        const MultiPoly& p = re.coeffs[j];
        if (!p.is_constant() && p.sole_variable() != std::optional<std::string>(re.index))
            return std::nullopt;  // parameters present; tuning territory
    }
    std::vector<long> bad = removed_roots(re);

    HypergeomRE h;
    h.index = re.index;
    if (offs.size() == 2) {
        long i = offs[0], j = offs[1];
        h.m = j - i;
        h.Q = re.coeffs[j].subst_linear(re.index, BigRational(1), BigRational(-i));
        h.P = -re.coeffs[i].subst_linear(re.index, BigRational(1), BigRational(-i));
        for (long z : bad) h.except.push_back(z + i);
    } else if (offs.size() == 1) {
        long t = offs[0];
        h.m = 1;
        h.Q = re.coeffs[t].subst_linear(re.index, BigRational(1), BigRational(1 - t));
        for (long z : bad) h.except.push_back(z + t - 1);
    } else {
        return std::nullopt;
    }
    reduce_coprime(h);
    return h;
}

// ---------------------------------------------------------------------------
// tuning: choose two rows, kill the rest with k-dependent parameter values

namespace {

// row = base(k) + sum_u lin[u](k) * A_u; fails when the row is not affine in
// the parameters
struct AffineRow {
    MultiPoly base;
    std::vector<MultiPoly> lin;
};

std::optional<AffineRow> affine_in_params(const MultiPoly& row, const std::string& index,
                                          const std::vector<std::string>& params) {
    AffineRow out;
    out.base = row;
    for (const std::string& a : params) out.base = out.base.eval_var(a, BigRational(0));
    MultiPoly acc = out.base;
    for (const std::string& a : params) {
        MultiPoly c = row.coeff_of(a, 1);
        for (const std::string& b : params)
            if (c.uses(b)) return std::nullopt;
        if (!c.is_constant() && c.sole_variable() != std::optional<std::string>(index))
            return std::nullopt;
        out.lin.push_back(c);
        acc += c * MultiPoly::variable(a);
    }
    if (acc != row) return std::nullopt;  // degree >= 2 in some parameter
    return out;
}

struct TunedPair {
    HypergeomRE re;
};

std::optional<HypergeomRE> try_tune_pair(const RE& re, const std::vector<std::string>& params,
                                         long i, long j, const std::vector<long>& offs) {
    const std::string& idx = re.index;
    std::vector<AffineRow> rows(re.span() + 1);
    for (long t : offs) {
        auto ar = affine_in_params(re.coeffs[t], idx, params);
        if (!ar) return std::nullopt;
        rows[t] = std::move(*ar);
    }

    // force every row outside the pair to vanish identically over Q(k)
    std::vector<std::vector<RatFun>> A;
    std::vector<RatFun> rhs;
    for (long t : offs) {
        if (t == i || t == j) continue;
        std::vector<RatFun> arow;
        for (size_t u = 0; u < params.size(); ++u) arow.emplace_back(rows[t].lin[u]);
        A.push_back(std::move(arow));
        rhs.emplace_back(-rows[t].base);
    }
    std::vector<RatFun> assign(params.size(), RatFun(0L));
    if (!A.empty()) {
        auto sol = solve_linear(A, rhs);
        if (!sol) return std::nullopt;
        assign = sol->particular;  // free directions pinned to zero
    }

    auto substituted = [&](long t) {
        RatFun v(rows[t].base);
        for (size_t u = 0; u < params.size(); ++u)
            if (!rows[t].lin[u].is_zero()) v += RatFun(rows[t].lin[u]) * assign[u];
        return v;
    };
    RatFun ri = substituted(i), rj = substituted(j);
    if (ri.is_zero() || rj.is_zero()) return std::nullopt;

    // clear the common denominator
    MultiPoly d = poly_gcd(ri.denominator(), rj.denominator());
    MultiPoly common = ri.denominator() * poly_divexact(rj.denominator(), d);
    MultiPoly pi = ri.numerator() * poly_divexact(common, ri.denominator());
    MultiPoly pj = rj.numerator() * poly_divexact(common, rj.denominator());

    std::vector<long> bad = removed_roots(re);
    for (const RatFun& a : assign)
        for (long z : integer_roots(a.denominator(), idx)) bad.push_back(z);

    HypergeomRE h;
    h.index = idx;
    h.m = j - i;
    h.Q = pj.subst_linear(idx, BigRational(1), BigRational(-i));
    h.P = -pi.subst_linear(idx, BigRational(1), BigRational(-i));
    for (long z : bad) h.except.push_back(z + i);
    reduce_coprime(h);

    if (trace::level() >= 3) {
        std::string vals;
        for (size_t u = 0; u < params.size(); ++u)
            vals += (u ? ", " : "") + params[u] + " = " + assign[u].to_string();
        trace_line(3, "re-solve: rows {", i, ",", j, "} kept with ", vals);
    }
    return h;
}

// checks the tuned relation against independently computed coefficients of f
// and drops exceptional instances the check clears
bool validate_tuned(HypergeomRE& h, const Expr& f, const std::string& var) {
    long degmax = std::max(h.P.degree(h.index), h.Q.degree(h.index));
    long want = 2 * h.m + degmax + 4;
    long lo = -(h.m + degmax + 4);
    std::set<long> exc(h.except.begin(), h.except.end());
    std::vector<long> ks;
    for (long k = lo; (long)ks.size() < want; ++k)
        if (!exc.count(k)) ks.push_back(k);
    long top = ks.back() + h.m;
    for (long e : exc) top = std::max(top, e + h.m);

    SeriesTrunc s = truncated_series(f, var, top + 1);
    auto coeff = [&](long k) {
        long g = k * s.grid();
        return g < s.first_unknown() ? s.coeff(g) : BigRational(0);
    };
    auto holds_at = [&](long k) {
        return eval_at(h.Q, h.index, k) * coeff(k + h.m) == eval_at(h.P, h.index, k) * coeff(k);
    };
    for (long k : ks)
        if (!holds_at(k)) {
            trace_line(3, "re-solve: tuned relation fails at k = ", k, ", rejecting pair");
            return false;
        }
    std::vector<long> kept;
    for (long e : h.except) {
        if (holds_at(e)) {
            trace_line(3, "re-solve: exceptional instance k = ", e, " validated, dropped");
            continue;
        }
        kept.push_back(e);
    }
    h.except = kept;
    return true;
}

}  // namespace

std::optional<HypergeomRE> tune_two_term(const RE& re, const std::vector<std::string>& params,
                                         const Expr& f, const std::string& var,
                                         const Catalog& cat) {
    (void)cat;
    if (params.empty()) return detect_hypergeometric(re);
    std::vector<long> offs = nonzero_rows(re);
    if (offs.size() < 2) return std::nullopt;

    std::vector<std::pair<long, long>> pairs;
    pairs.emplace_back(offs.front(), offs.back());
    for (size_t a = 0; a < offs.size(); ++a)
        for (size_t b = a + 1; b < offs.size(); ++b)
            if (std::make_pair(offs[a], offs[b]) != pairs.front())
                pairs.emplace_back(offs[a], offs[b]);
    std::stable_sort(pairs.begin() + 1, pairs.end(),
                     [](const std::pair<long, long>& x, const std::pair<long, long>& y) {
                         long sx = x.second - x.first, sy = y.second - y.first;
                         return sx != sy ? sx < sy : x.first < y.first;
                     });

    for (auto& [i, j] : pairs) {
        auto h = try_tune_pair(re, params, i, j, offs);
        if (!h) continue;
        try {
            if (validate_tuned(*h, f, var)) return h;
        } catch (const FpsError&) {
            return std::nullopt;  // no oracle coefficients to validate against
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// index normalizations

PuiseuxStep puiseux_normalize(const HypergeomRE& h) {
    long n = 1;
    for (const MultiPoly* p : {&h.P, &h.Q}) {
        if (p->is_zero() || p->is_constant()) continue;
        for (const auto& [root, mult] : rational_roots(*p, h.index))
            n = std::lcm(n, root.den().get_si());
    }
    if (n == 1) return {h, 1};

    PuiseuxStep out;
    out.n = n;
    out.re.index = h.index;
    out.re.m = n * h.m;
    BigRational inv_n(1, n);
    out.re.P = h.P.subst_linear(h.index, inv_n, BigRational(0));
    out.re.Q = h.Q.subst_linear(h.index, inv_n, BigRational(0));
    BigRational c = out.re.Q.rational_content();
    if (!c.is_zero() && !(c == BigRational(1))) {
        out.re.Q = out.re.Q * c.inverse();
        if (!out.re.P.is_zero()) out.re.P = out.re.P * c.inverse();
    }
    for (long e : h.except) out.re.except.push_back(n * e);
    return out;
}

LaurentStep laurent_normalize(const HypergeomRE& h, const Expr& g, const std::string& var,
                              Dir dir, const Catalog& cat) {
    std::vector<long> marks = integer_roots(h.Q, h.index);
    marks.insert(marks.end(), h.except.begin(), h.except.end());

    if (marks.empty()) {
        // no index can carry a first nonzero coefficient
        Expr x = Expr::symbol(var);
        LimitValue xg = limit_at_zero(x * g, var, dir, cat);
        if (xg.kind == LimitKind::Undecided)
            throw FpsError("re-solve", "limit-undecided", "lim x*f needed for the pole test");
        if (!xg.is_zero())
            throw FpsError("re-solve", "essential-singularity",
                           "recurrence admits no series index yet x*f does not vanish");
        LimitValue g0 = limit_at_zero(g, var, dir, cat);
        if (g0.kind == LimitKind::Undecided)
            throw FpsError("re-solve", "limit-undecided", "lim f needed for the pole test");
        if (!g0.is_zero())
            throw FpsError("re-solve", "essential-singularity",
                           "recurrence admits no series index yet f does not vanish");
        LaurentStep ls;
        ls.re = h;
        ls.zero_series = true;
        return ls;
    }

    long kmin = *std::min_element(marks.begin(), marks.end());
    long s = kmin + h.m;
    Expr probe = Expr::pow(Expr::symbol(var), Expr::integer(1 - s)) * g;
    LimitValue lv = limit_at_zero(probe, var, dir, cat);
    if (lv.kind == LimitKind::Undecided)
        throw FpsError("re-solve", "limit-undecided",
                       "lim x^" + std::to_string(1 - s) + "*f needed for the pole test");
    if (!lv.is_zero())
        throw FpsError("re-solve", "essential-singularity",
                       "x^" + std::to_string(-s) + "*f still grows like a pole or worse");

    LaurentStep ls;
    ls.shift = s;
    ls.re.index = h.index;
    ls.re.m = h.m;
    ls.re.P = shifted(h.P, h.index, s);
    ls.re.Q = shifted(h.Q, h.index, s);
    for (long e : h.except) ls.re.except.push_back(e - s);
    sort_unique(ls.re.except);
    return ls;
}

// ---------------------------------------------------------------------------
// closed-form assembly for one residue class

namespace {

// pieces of prod_{i<k} R(k0 + i*m): a per-step constant `geo` (raised to the
// sum index), a one-off constant `cmul`, and symbolic factors in the index
struct OrbitPieces {
    BigRational geo{1};
    BigRational cmul{1};
    ExprVec factors;
};

Expr poly_in(const MultiPoly& p, const std::string& from, const Expr& to) {
    std::vector<BigRational> c = p.dense_coeffs(from);
    ExprVec parts;
    for (size_t e = 0; e < c.size(); ++e) {
        if (c[e].is_zero()) continue;
        parts.push_back(Expr::rational(c[e]) * Expr::pow(to, Expr::integer((long)e)));
    }
    return Expr::sum(std::move(parts));
}

OrbitPieces orbit_product(const MultiPoly& poly, const std::string& idx, long m, long k0) {
    OrbitPieces out;
    if (poly.is_constant()) {
        out.geo = poly.constant_value();
        return out;
    }
    Expr K = Expr::symbol(idx);
    const std::string bound = idx == "j" ? "i" : "j";
    Expr J = Expr::symbol(bound);
    Factorization f = factor_over_Q(poly, idx);
    out.geo = f.constant;

    std::multiset<long> iroots;
    for (const auto& [lin, mult] : f.linear) {
        std::vector<BigRational> d = lin.dense_coeffs(idx);
        BigRational root = -d[0] / d[1];
        if (root.is_integer()) {
            for (int t = 0; t < mult; ++t) iroots.insert(root.to_long());
        } else {
            // factor is q*(x - root); per step q*m*(i + alpha)
            BigRational alpha = (BigRational(k0) - root) / BigRational(m);
            for (int t = 0; t < mult; ++t) {
                out.geo *= d[1] * BigRational(m);
                out.factors.push_back(Expr::call("pochhammer", {Expr::rational(alpha), K}));
            }
        }
    }

    // m consecutive integer roots telescope into one factorial with no m^k
    std::vector<long> leftovers;
    while (!iroots.empty()) {
        long rho = *iroots.begin();
        iroots.erase(iroots.begin());
        bool full = m > 1;
        for (long t = 1; t < m && full; ++t)
            if (!iroots.count(rho + t)) full = false;
        long c = k0 - rho - m + 1;
        if ((m == 1 || full) && c >= 1) {
            if (full)
                for (long t = 1; t < m; ++t) iroots.erase(iroots.find(rho + t));
            out.factors.push_back(
                Expr::call("factorial", {Expr::integer(m) * K + Expr::integer(c - 1)}));
            out.cmul /= BigRational(factorial_int((unsigned long)(c - 1)));
        } else {
            leftovers.push_back(rho);
        }
    }

    for (long rho : leftovers) {
        long diff = k0 - rho;
        if (diff % m == 0 && diff >= m) {
            long alpha = diff / m;
            out.geo *= BigRational(m);
            out.factors.push_back(Expr::call("factorial", {K + Expr::integer(alpha - 1)}));
            out.cmul /= BigRational(factorial_int((unsigned long)(alpha - 1)));
        } else if (diff % m == 0) {
            // the orbit hits the root; keep the zero-capable bound product
            out.factors.push_back(Expr::product_over(
                Expr::integer(m) * J + Expr::integer(diff), bound, K - Expr::integer(1)));
        } else {
            out.geo *= BigRational(m);
            out.factors.push_back(
                Expr::call("pochhammer", {Expr::rational(BigRational(diff, m)), K}));
        }
    }

    for (const auto* group : {&f.quadratic, &f.remainder}) {
        for (const auto& [q, mult] : *group) {
            int d = q.degree(idx);
            MultiPoly body = q.subst_linear(idx, BigRational(m), BigRational(k0));
            BigRational lc = body.coeff_of(idx, d).constant_value();
            MultiPoly monic = body * lc.inverse();
            Expr be = poly_in(monic, idx, J);
            for (int t = 0; t < mult; ++t) {
                out.geo *= lc;
                out.factors.push_back(Expr::product_over(be, bound, K - Expr::integer(1)));
            }
        }
    }
    return out;
}

PowerSum assemble_sum(const HypergeomRE& h, long k0, const Expr& seed) {
    OrbitPieces pp = orbit_product(h.P, h.index, h.m, k0);
    OrbitPieces qq = orbit_product(h.Q, h.index, h.m, k0);
    BigRational A = pp.geo / qq.geo;
    BigRational cm = pp.cmul / qq.cmul;
    Expr K = Expr::symbol(h.index);

    Expr coeff = seed * Expr::rational(cm);
    if (!(A == BigRational(1))) coeff = coeff * Expr::pow(Expr::rational(A), K);
    for (const Expr& e : pp.factors) coeff = coeff * e;
    for (const Expr& e : qq.factors) coeff = coeff / e;

    PowerSum out;
    out.coeff = coeff;
    out.index = h.index;
    out.m = h.m;
    out.n = 1;
    out.r = k0 % h.m;
    out.s = BigRational(k0 - out.r);
    return out;
}

// ---------------------------------------------------------------------------
// level solver: laurent shift, seeds, classes, logarithmic case

void shift_exponents(FPSResult& r, const BigRational& d) {
    if (d.is_zero()) return;
    for (PowerSum& s : r.sums) s.s += d / BigRational(s.n);
    for (ExplicitTerm& t : r.terms) t.exponent += d;
    for (LogTerm& l : r.logs) l.exponent += d;
    if (!r.constant.is_zero()) {
        r.terms.push_back({d, r.constant});
        r.constant = Expr::integer(0);
    }
}

FPSResult solve_level(const HypergeomRE& h, const Expr& g, const std::string& var, Dir dir,
                      const Catalog& cat, int depth, TransformTrace& tr);

// the infinite-seed case: x^(-k0)*g has a logarithmic singularity, so solve
// its derivative and integrate the expansion back termwise
FPSResult handle_log_singularity(const HypergeomRE& h, const Expr& g, long k0,
                                 const std::string& var, Dir dir, const Catalog& cat, int depth,
                                 TransformTrace& tr) {
    if (depth >= 3)
        throw FpsError("re-solve", "log-recursion-limit",
                       "logarithmic singularities nested deeper than 3");
    trace_line(2, "re-solve: infinite seed at index ", k0,
               ", switching to the logarithmic route");
    tr.push_back({Transform::Kind::Derivative, BigRational(k0)});

    Expr x = Expr::symbol(var);
    Expr core = Expr::pow(x, Expr::integer(-k0)) * g;
    Expr g_log = differentiate(core, var, cat);

    HypergeomRE hd;
    hd.index = h.index;
    hd.m = h.m;
    // shift the lattice down by k0, then apply the derivative rule
    MultiPoly pa = shifted(h.P, h.index, k0), qa = shifted(h.Q, h.index, k0);
    MultiPoly kvar = MultiPoly::variable(h.index);
    hd.P = (kvar + MultiPoly(h.m + 1)) * shifted(pa, h.index, 1);
    hd.Q = (kvar + MultiPoly(1)) * shifted(qa, h.index, 1);
    for (long e : h.except) hd.except.push_back(e - k0 - 1);
    reduce_coprime(hd);

    FPSResult S = solve_level(hd, g_log, var, dir, cat, depth + 1, tr);

    // integrate termwise; x^-1 pieces become log terms
    FPSResult I;
    I.var = S.var;
    std::vector<ExplicitTerm> src = S.terms;
    if (!S.constant.is_zero()) src.push_back({BigRational(0), S.constant});
    for (const ExplicitTerm& t : src) {
        if (t.exponent == BigRational(-1))
            I.logs.push_back({BigRational(0), t.coeff});
        else
            I.terms.push_back({t.exponent + 1, t.coeff / Expr::rational(t.exponent + 1)});
    }
    for (const LogTerm& l : S.logs) {
        if (l.exponent == BigRational(-1))
            throw FpsError("re-solve", "nested-log", "integration would produce ln(x)^2");
        BigRational e1 = l.exponent + 1;
        I.logs.push_back({e1, l.coeff / Expr::rational(e1)});
        I.terms.push_back({e1, Expr::integer(-1) * l.coeff / Expr::rational(e1 * e1)});
    }
    for (const PowerSum& ps : S.sums) {
        // lattice exponent e(j) = m*j + r + s; find the x^-1 member if any
        BigRational base = BigRational(ps.r) + ps.s;
        BigRational tstar = (BigRational(-1) - base) / BigRational(ps.m);
        if (tstar.is_integer() && tstar.sign() >= 0) {
            long jstar = tstar.to_long();
            for (long j = 0; j < jstar; ++j) {
                BigRational e = BigRational(ps.m * j) + base;
                Expr c = eval_formula(ps.coeff, ps.index, j);
                if (!c.is_zero()) I.terms.push_back({e + 1, c / Expr::rational(e + 1)});
            }
            Expr cl = eval_formula(ps.coeff, ps.index, jstar);
            if (!cl.is_zero()) I.logs.push_back({BigRational(0), cl});
            PowerSum tail;
            tail.index = ps.index;
            tail.m = ps.m;
            tail.n = 1;
            BigRational e0 = base + BigRational(ps.m * (jstar + 1)) + 1;
            long r = (((e0.to_long()) % ps.m) + ps.m) % ps.m;
            tail.r = r;
            tail.s = e0 - BigRational(r);
            Expr shifted_coeff =
                ps.coeff.subst(ps.index, Expr::symbol(ps.index) + Expr::integer(jstar + 1));
            Expr den = Expr::integer(ps.m) * Expr::symbol(ps.index) + Expr::rational(e0);
            tail.coeff = shifted_coeff / den;
            I.sums.push_back(tail);
        } else {
            PowerSum moved = ps;
            Expr den = Expr::integer(ps.m) * Expr::symbol(ps.index) + Expr::rational(base + 1);
            moved.coeff = ps.coeff / den;
            moved.s = ps.s + 1;
            I.sums.push_back(moved);
        }
    }
    // pull sum members that start below x^0 out into explicit terms
    for (PowerSum& ps : I.sums) {
        while (ps.exponent_at(0).sign() < 0) {
            Expr c = eval_formula(ps.coeff, ps.index, 0);
            if (!c.is_zero()) I.terms.push_back({ps.exponent_at(0), c});
            ps.coeff = ps.coeff.subst(ps.index, Expr::symbol(ps.index) + Expr::integer(1));
            ps.s += BigRational(ps.m) / BigRational(ps.n);
        }
    }

    // the integration constant: subtract everything of I that does not vanish
    // at 0 and take the limit of what is left
    ExprVec sing;
    for (const ExplicitTerm& t : I.terms)
        if (t.exponent.sign() <= 0)
            sing.push_back(t.coeff * Expr::pow(x, Expr::rational(t.exponent)));
    for (const LogTerm& l : I.logs)
        if (l.exponent.sign() <= 0)
            sing.push_back(l.coeff * Expr::pow(x, Expr::rational(l.exponent)) *
                           Expr::call("ln", {x}));
    for (const PowerSum& ps : I.sums)
        if (ps.exponent_at(0).is_zero()) {
            Expr c = eval_formula(ps.coeff, ps.index, 0);
            if (!c.is_zero()) sing.push_back(c);
        }
    Expr probe = core - Expr::sum(std::move(sing));
    LimitValue C = limit_at_zero(probe, var, dir, cat);
    if (C.kind == LimitKind::Undecided)
        throw FpsError("re-solve", "limit-undecided", "integration constant of the log route");
    if (!C.is_finite())
        throw FpsError("re-solve", "essential-singularity",
                       "log-route integration constant diverges");

    if (k0 == 0) {
        I.constant = C.value;
    } else if (!C.value.is_zero()) {
        I.terms.push_back({BigRational(k0), C.value});
    }
    shift_exponents(I, BigRational(k0));
    if (k0 == 0 && !C.value.is_zero()) I.constant = C.value;  // shift_exponents is a no-op then
    return I;
}

FPSResult solve_classes(const HypergeomRE& h, const Expr& g, const std::string& var, Dir dir,
                        const Catalog& cat, int depth, TransformTrace& tr) {
    std::vector<long> marks = integer_roots(h.Q, h.index);
    marks.insert(marks.end(), h.except.begin(), h.except.end());
    long kmax = -h.m;
    for (long z : marks) kmax = std::max(kmax, z);

    std::vector<Expr> seeds;
    for (long k = 0; k <= kmax + h.m; ++k) {
        LimitValue lv = taylor_seed(g, k, var, dir, cat);
        if (lv.is_infinite())
            return handle_log_singularity(h, g, k, var, dir, cat, depth, tr);
        if (lv.kind == LimitKind::Undecided)
            throw FpsError("re-solve", "limit-undecided",
                           "seed coefficient " + std::to_string(k) + " undecided");
        if (lv.kind == LimitKind::Undefined)
            throw FpsError("re-solve", "essential-singularity",
                           "seed coefficient " + std::to_string(k) + " has no limit");
        trace_line(4, "re-solve: seed a(", k, ") = ", lv.value.to_string());
        seeds.push_back(lv.value);
    }

    FPSResult out;
    for (long k = 0; k <= kmax; ++k)
        if (!seeds[k].is_zero()) out.terms.push_back({BigRational(k), seeds[k]});

    for (long r = 0; r < h.m; ++r) {
        long k0 = kmax + 1 + ((((r - kmax - 1) % h.m) + h.m) % h.m);
        if (k0 < 0) continue;  // below the series range entirely
        const Expr& v = seeds[k0];
        if (v.is_zero()) continue;  // annihilated class
        if (eval_at(h.P, h.index, k0).is_zero()) {
            out.terms.push_back({BigRational(k0), v});  // one term, then the class dies
            continue;
        }
        out.sums.push_back(assemble_sum(h, k0, v));
        trace_line(3, "re-solve: class ", r, " anchored at ", k0, " with coefficient ",
                   out.sums.back().coeff.to_string());
    }
    return out;
}

FPSResult solve_level(const HypergeomRE& h, const Expr& g, const std::string& var, Dir dir,
                      const Catalog& cat, int depth, TransformTrace& tr) {
    LaurentStep ls = laurent_normalize(h, g, var, dir, cat);
    if (ls.zero_series) {
        trace_line(2, "re-solve: no admissible index, expansion is 0");
        return FPSResult{};
    }
    Expr hh = g;
    if (ls.shift != 0) {
        hh = Expr::pow(Expr::symbol(var), Expr::integer(-ls.shift)) * g;
        tr.push_back({Transform::Kind::PowerShift, BigRational(ls.shift)});
        trace_line(2, "re-solve: lattice offset ", ls.shift, ", solving x^", -ls.shift, "*f");
    }
    FPSResult core = solve_classes(ls.re, hh, var, dir, cat, depth, tr);
    shift_exponents(core, BigRational(ls.shift));
    return core;
}

}  // namespace

// ---------------------------------------------------------------------------

std::optional<SolveOutcome> solve_re_traced(const RE& re, const Expr& f, const std::string& var,
                                            Dir dir, const Catalog& cat,
                                            const std::vector<std::string>& params) {
    std::optional<HypergeomRE> h =
        params.empty() ? detect_hypergeometric(re) : tune_two_term(re, params, f, var, cat);
    if (!h) return std::nullopt;
    trace_line(2, "re-solve: two-term form ", h->to_string());

    SolveOutcome out;
    PuiseuxStep pz = puiseux_normalize(*h);
    Expr g = f;
    Dir d2 = dir;
    if (pz.n > 1) {
        g = f.subst(var, Expr::pow(Expr::symbol(var), Expr::integer(pz.n)));
        d2 = Dir::Right;
        out.trace.push_back({Transform::Kind::ArgPower, BigRational(pz.n)});
        trace_line(2, "re-solve: exponent grid refined by ", pz.n, ", solving f(x^", pz.n, ")");
    }

    FPSResult res = solve_level(pz.re, g, var, d2, cat, 0, out.trace);
    if (pz.n > 1) {
        BigRational inv(1, pz.n);
        for (PowerSum& s : res.sums) {
            s.n *= pz.n;
            s.s = s.s * inv;
        }
        for (ExplicitTerm& t : res.terms) t.exponent = t.exponent * inv;
        for (LogTerm& l : res.logs) {
            l.exponent = l.exponent * inv;
            l.coeff = l.coeff * Expr::rational(inv);  // ln(x^(1/n)) = ln(x)/n
        }
        res.validity = Validity::OneSided;
    }
    res.var = var;
    res.direction = d2;
    out.result = std::move(res);
    return out;
}

std::optional<FPSResult> solve_re(const RE& re, const Expr& f, const std::string& var, Dir dir,
                                  const Catalog& cat, const std::vector<std::string>& params) {
    auto out = solve_re_traced(re, f, var, dir, cat, params);
    if (!out) return std::nullopt;
    return std::move(out->result);
}

}  // namespace fps
