#include "fps/numeval.hpp"

#include <cmath>
#include <cstdlib>

#include "fps/catalog.hpp"
#include "fps/error.hpp"

namespace fps {

namespace {

[[noreturn]] void fail(const std::string& code, const std::string& detail) {
    throw FpsError("numeval", code, detail);
}

mpf_class pow2m(long k, long prec) {
    mpf_class r(1, prec);
    if (k >= 0)
        mpf_div_2exp(r.get_mpf_t(), r.get_mpf_t(), (unsigned long)k);
    else
        mpf_mul_2exp(r.get_mpf_t(), r.get_mpf_t(), (unsigned long)(-k));
    return r;
}

// per-operation rounding slop, comfortably above the ulp at prec
mpf_class slop(const mpf_class& v, long prec) {
    mpf_class s(0, 64);
    s = (abs(v) + 1) * pow2m(prec, 64);
    return s;
}

struct Ctx {
    long prec;    // target bits the caller asked for
    long wprec;   // working bits for intermediate arithmetic

    NumVal nv(const mpf_class& v, const mpf_class& e) const {
        NumVal r{mpf_class(0, wprec), mpf_class(0, 64)};
        r.v = v;
        r.err = e + slop(v, prec + 16);
        return r;
    }
    NumVal exact(const mpf_class& v) const { return nv(v, mpf_class(0, 64)); }

    NumVal add(const NumVal& a, const NumVal& b) const { return nv(a.v + b.v, a.err + b.err); }
    NumVal sub(const NumVal& a, const NumVal& b) const { return nv(a.v - b.v, a.err + b.err); }
    NumVal neg(const NumVal& a) const { return nv(-a.v, a.err); }
    NumVal mul(const NumVal& a, const NumVal& b) const {
        return nv(a.v * b.v, abs(a.v) * b.err + abs(b.v) * a.err + a.err * b.err);
    }
    NumVal div(const NumVal& a, const NumVal& b) const {
        if (abs(b.v) <= b.err) fail("precision", "divisor interval touches zero");
        mpf_class q(0, wprec);
        q = a.v / b.v;
        return nv(q, (a.err + abs(q) * b.err) / (abs(b.v) - b.err));
    }
    NumVal sqrt_(const NumVal& a) const {
        if (a.v < 0 && abs(a.v) > a.err) fail("domain", "sqrt of a negative value");
        if (a.v == 0 && a.err == 0) return exact(mpf_class(0, wprec));
        mpf_class lo(0, wprec);
        lo = a.v - a.err;
        if (lo <= 0) fail("precision", "sqrt near zero");
        mpf_class r(0, wprec), rl(0, wprec);
        r = sqrt(a.v);
        rl = sqrt(lo);
        return nv(r, a.err / (2 * rl));
    }
};

// sum of t^(2k+1)/(2k+1), k >= 0 (atanh when plain, arctan when alternating);
// requires |t| <= 1/2 so the tail is bounded by twice the first omitted term
mpf_class odd_power_series(const mpf_class& t, bool alternating, long wprec, mpf_class* tail) {
    mpf_class acc(0, wprec), p(0, wprec), t2(0, wprec), term(0, wprec), eps(0, wprec);
    acc = t;
    p = t;
    t2 = t * t;
    eps = pow2m(wprec - 4, wprec);
    for (long k = 1; k < 4 * wprec; ++k) {
        p = p * t2;
        term = p / (2 * k + 1);
        if (alternating && k % 2 == 1) term = -term;
        acc += term;
        if (abs(term) < eps) break;
    }
    *tail = 2 * abs(term);
    return acc;
}

mpf_class pi_raw(long wprec, mpf_class* errout) {
    // Machin: pi = 16 arctan(1/5) - 4 arctan(1/239)
    mpf_class a(0, wprec), b(0, wprec), t1(0, wprec), t2(0, wprec), e1(0, 64), e2(0, 64);
    t1 = 1;
    t1 /= 5;
    t2 = 1;
    t2 /= 239;
    a = odd_power_series(t1, true, wprec, &e1);
    b = odd_power_series(t2, true, wprec, &e2);
    mpf_class r(0, wprec);
    r = 16 * a - 4 * b;
    *errout = 16 * e1 + 4 * e2;
    return r;
}

NumVal pi_val(const Ctx& c) {
    mpf_class e(0, 64);
    mpf_class v = pi_raw(c.wprec, &e);
    return c.nv(v, e);
}

// ln 2 = 2 atanh(1/3)
mpf_class ln2_raw(long wprec, mpf_class* errout) {
    mpf_class t(0, wprec), e(0, 64);
    t = 1;
    t /= 3;
    mpf_class r(0, wprec);
    r = 2 * odd_power_series(t, false, wprec, &e);
    *errout = 2 * e;
    return r;
}

NumVal exp_val(const Ctx& c, const NumVal& x) {
    if (x.err > mpf_class(0.25)) fail("precision", "exp argument too uncertain");
    mpf_class y(0, c.wprec);
    y = x.v;
    long shifts = 0;
    mpf_class half(0.5, 64);
    while (abs(y) > half) {
        y /= 2;
        if (++shifts > 200) fail("domain", "exp argument magnitude out of range");
    }
    mpf_class acc(0, c.wprec), term(0, c.wprec), eps(0, c.wprec);
    acc = 1 + y;
    term = y;
    eps = pow2m(c.wprec - 4, c.wprec);
    for (long k = 2; k < 4 * c.wprec; ++k) {
        term = term * y / k;
        acc += term;
        if (abs(term) < eps) break;
    }
    mpf_class trunc(0, 64);
    trunc = 2 * abs(term);
    for (long i = 0; i < shifts; ++i) {
        trunc = (2 * abs(acc) + trunc) * trunc;
        acc = acc * acc;
    }
    // |d exp| = exp; the computed value bounds it within a factor of 2 here
    return c.nv(acc, trunc + 2 * abs(acc) * x.err);
}

NumVal ln_val(const Ctx& c, const NumVal& x) {
    if (x.v <= 0 && abs(x.v) > x.err) fail("domain", "ln of a nonpositive value");
    mpf_class lo(0, c.wprec);
    lo = x.v - x.err;
    if (lo <= 0) fail("precision", "ln near zero");
    long e2;
    mpf_get_d_2exp(&e2, x.v.get_mpf_t());
    mpf_class m(0, c.wprec);
    m = x.v;
    if (e2 >= 0)
        mpf_div_2exp(m.get_mpf_t(), m.get_mpf_t(), (unsigned long)e2);
    else
        mpf_mul_2exp(m.get_mpf_t(), m.get_mpf_t(), (unsigned long)(-e2));
    if (m < mpf_class(0.75)) {
        m *= 2;
        e2 -= 1;
    }
    mpf_class t(0, c.wprec), etail(0, 64);
    t = (m - 1) / (m + 1);
    mpf_class lnm(0, c.wprec);
    lnm = 2 * odd_power_series(t, false, c.wprec, &etail);
    mpf_class eln2(0, 64);
    mpf_class l2 = ln2_raw(c.wprec, &eln2);
    mpf_class r(0, c.wprec);
    r = lnm + e2 * l2;
    mpf_class labs(0, 64);
    labs = std::abs((double)e2);
    return c.nv(r, 2 * etail + labs * eln2 + x.err / lo);
}

NumVal sincos_val(const Ctx& c, const NumVal& x, bool want_sin) {
    mpf_class y(0, c.wprec);
    y = x.v;
    mpf_class extra(0, 64);
    extra = x.err;
    if (abs(y) > mpf_class(3.2)) {
        mpf_class perr(0, 64);
        mpf_class pv = pi_raw(c.wprec, &perr);
        mpf_class twopi(0, c.wprec), n(0, c.wprec);
        twopi = 2 * pv;
        n = y / twopi + mpf_class(0.5);
        mpf_floor(n.get_mpf_t(), n.get_mpf_t());
        y = y - n * twopi;
        extra += 2 * abs(n) * perr + slop(y, c.wprec - 8);
    }
    // |y| <= pi: run both series far enough that terms decay geometrically
    mpf_class acc(0, c.wprec), term(0, c.wprec), y2(0, c.wprec), eps(0, c.wprec);
    y2 = y * y;
    eps = pow2m(c.wprec - 4, c.wprec);
    if (want_sin) {
        acc = y;
        term = y;
        for (long k = 1; k < 4 * c.wprec; ++k) {
            term = -term * y2 / ((2 * k) * (2 * k + 1));
            acc += term;
            if (abs(term) < eps && 2 * k > 4) break;
        }
    } else {
        acc = 1;
        term = 1;
        for (long k = 1; k < 4 * c.wprec; ++k) {
            term = -term * y2 / ((2 * k - 1) * (2 * k));
            acc += term;
            if (abs(term) < eps && 2 * k > 4) break;
        }
    }
    // derivative bound 1 for both
    return c.nv(acc, 2 * abs(term) + extra);
}

NumVal arctan_val(const Ctx& c, const NumVal& x) {
    mpf_class y(0, c.wprec);
    y = x.v;
    long halvings = 0;
    mpf_class lim(0.4, 64);
    while (abs(y) > lim && halvings < 300) {
        mpf_class s(0, c.wprec);
        s = sqrt(1 + y * y);
        y = y / (1 + s);
        ++halvings;
    }
    mpf_class tail(0, 64);
    mpf_class a = odd_power_series(y, true, c.wprec, &tail);
    mpf_class r(0, c.wprec);
    r = a;
    mpf_class scale(1, 64);
    for (long i = 0; i < halvings; ++i) {
        r *= 2;
        scale *= 2;
    }
    // |d arctan| <= 1; halving identities add only rounding slop
    return c.nv(r, scale * tail + x.err + scale * slop(r, c.wprec - 8));
}

NumVal erf_val(const Ctx& c, const NumVal& x) {
    if (x.err > mpf_class(0.25)) fail("precision", "erf argument too uncertain");
    mpf_class ax(0, c.wprec);
    ax = abs(x.v);
    if (ax >= 16) {
        // |erf(x)| differs from 1 by under exp(-256); beneath every target here
        mpf_class one(0, c.wprec);
        one = x.v > 0 ? 1 : -1;
        return c.nv(one, pow2m(360, 64) + x.err);
    }
    // extra guard bits soak up the cancellation of the alternating series
    long guard = (long)(ax.get_d() * ax.get_d() * 1.5) + 32;
    long wp = c.wprec + guard;
    mpf_class y(0, wp), acc(0, wp), term(0, wp), y2(0, wp), eps(0, wp);
    y = x.v;
    y2 = y * y;
    acc = y;
    term = y;
    eps = pow2m(wp - 4, wp);
    // term_k = (-1)^k x^(2k+1)/(k! (2k+1))
    mpf_class p(0, wp);
    p = y;
    // terms decay only once k exceeds x^2
    double decay_from = ax.get_d() * ax.get_d();
    for (long k = 1; k < 8 * wp; ++k) {
        p = -p * y2 / k;
        term = p / (2 * k + 1);
        acc += term;
        if (abs(term) < eps && (double)k > decay_from) break;
    }
    mpf_class perr(0, 64);
    mpf_class pv = pi_raw(wp, &perr);
    mpf_class sp(0, wp), r(0, wp);
    sp = sqrt(pv);
    r = 2 * acc / sp;
    // |d erf| <= 2/sqrt(pi) < 1.2
    mpf_class e(0, 64);
    e = 4 * abs(term) + 2 * x.err;
    return c.nv(r, e);
}

NumVal dilog_core(const Ctx& c, const NumVal& z);

// series sum z^k/k^2 for |z| <= 0.6
NumVal li2_series(const Ctx& c, const NumVal& z) {
    mpf_class acc(0, c.wprec), p(0, c.wprec), term(0, c.wprec), eps(0, c.wprec);
    acc = z.v;
    p = z.v;
    eps = pow2m(c.wprec - 4, c.wprec);
    for (long k = 2; k < 8 * c.wprec; ++k) {
        p = p * z.v;
        term = p / (k * k);
        acc += term;
        if (abs(term) < eps) break;
    }
    // |Li2'(z)| = |ln(1-z)/z| < 3 on |z| <= 0.6
    return c.nv(acc, 3 * abs(term) + 3 * z.err);
}

// Li2(z) for real z <= 1
NumVal dilog_core(const Ctx& c, const NumVal& z) {
    if (z.v > 1 && z.v - z.err > 1) fail("domain", "dilog branch point passed");
    NumVal one = c.exact(mpf_class(1, c.wprec));
    if (z.v == 1 && z.err == 0) {
        NumVal p = pi_val(c);
        return c.div(c.mul(p, p), c.exact(mpf_class(6, c.wprec)));
    }
    if (abs(z.v) <= mpf_class(0.5)) return li2_series(c, z);
    if (z.v > mpf_class(0.5)) {
        // reflection: Li2(z) = pi^2/6 - ln(z) ln(1-z) - Li2(1-z)
        NumVal w = c.sub(one, z);
        NumVal p = pi_val(c);
        NumVal head = c.div(c.mul(p, p), c.exact(mpf_class(6, c.wprec)));
        NumVal cross = c.mul(ln_val(c, z), ln_val(c, w));
        return c.sub(c.sub(head, cross), dilog_core(c, w));
    }
    if (z.v >= -1) {
        // Landen: Li2(z) = -Li2(z/(z-1)) - ln(1-z)^2/2
        NumVal w = c.div(z, c.sub(z, one));
        NumVal l = ln_val(c, c.sub(one, z));
        NumVal half = c.exact(mpf_class(0.5, c.wprec));
        return c.neg(c.add(dilog_core(c, w), c.mul(half, c.mul(l, l))));
    }
    // inversion: Li2(z) = -pi^2/6 - ln(-z)^2/2 - Li2(1/z)
    NumVal p = pi_val(c);
    NumVal head = c.div(c.mul(p, p), c.exact(mpf_class(6, c.wprec)));
    NumVal l = ln_val(c, c.neg(z));
    NumVal half = c.exact(mpf_class(0.5, c.wprec));
    NumVal inv = c.div(one, z);
    return c.neg(c.add(c.add(head, c.mul(half, c.mul(l, l))), dilog_core(c, inv)));
}

struct Evaluator {
    Ctx c;
    const std::map<std::string, NumVal>* env;

    NumVal rational(const BigRational& q) const {
        mpf_class n(0, c.wprec), d(0, c.wprec), r(0, c.wprec);
        n = mpf_class(q.num(), c.wprec);
        d = mpf_class(q.den(), c.wprec);
        r = n / d;
        return c.nv(r, mpf_class(0, 64));
    }

    NumVal pow_rational(const NumVal& b, const BigRational& e) const {
        if (e.is_zero()) return c.exact(mpf_class(1, c.wprec));
        if (e.is_integer() && e.num().fits_slong_p()) {
            long n = e.to_long();
            unsigned long an = n < 0 ? (unsigned long)(-n) : (unsigned long)n;
            mpf_class r(0, c.wprec);
            mpf_pow_ui(r.get_mpf_t(), b.v.get_mpf_t(), an);
            mpf_class hi(0, c.wprec), hp(0, c.wprec);
            hi = abs(b.v) + b.err;
            mpf_pow_ui(hp.get_mpf_t(), hi.get_mpf_t(), an - 1);
            mpf_class err(0, 64);
            err = (double)an * hp * b.err;
            NumVal p = c.nv(r, err);
            if (n < 0) return c.div(c.exact(mpf_class(1, c.wprec)), p);
            return p;
        }
        if (b.v == 0 && b.err == 0) {
            if (e.sign() > 0) return c.exact(mpf_class(0, c.wprec));
            fail("domain", "negative power of zero");
        }
        if (abs(b.v) <= b.err) fail("precision", "fractional power near zero");
        if (b.v > 0) {
            NumVal l = ln_val(c, b);
            return exp_val(c, c.mul(rational(e), l));
        }
        // negative base: q-th roots exist only for odd q
        if (e.den() % 2 == 0) fail("domain", "even root of a negative value");
        NumVal m = c.neg(b);
        NumVal r = exp_val(c, c.mul(rational(e), ln_val(c, m)));
        bool odd_num = mpz_odd_p(e.num().get_mpz_t()) != 0;
        return odd_num ? c.neg(r) : r;
    }

    NumVal family(const std::string& fn, const ExprVec& args) const {
        if (args.size() != 2 || !args[0].is_rational() || !args[0].rational_value().is_integer())
            fail("unsupported-function", fn + " needs a concrete integer index");
        long n = args[0].rational_value().to_long();
        if (n < 0 || n > 100000) fail("domain", fn + " index out of range");
        NumVal x = eval(args[1]);
        NumVal two = c.exact(mpf_class(2, c.wprec));
        NumVal f0 = c.exact(mpf_class(fn == "Fibonacci" ? 0 : 1, c.wprec));
        NumVal f1 = fn == "Fibonacci"  ? c.exact(mpf_class(1, c.wprec))
                    : fn == "ChebyshevT" ? x
                                         : c.mul(two, x);
        if (n == 0) return f0;
        NumVal prev = f0, cur = f1;
        for (long k = 2; k <= n; ++k) {
            NumVal next = fn == "Fibonacci" ? c.add(c.mul(x, cur), prev)
                          : fn == "ChebyshevT"
                              ? c.sub(c.mul(two, c.mul(x, cur)), prev)
                              : c.sub(c.mul(two, c.mul(x, cur)),
                                      c.mul(c.exact(mpf_class(2 * (k - 1), c.wprec)), prev));
            prev = cur;
            cur = next;
        }
        return cur;
    }

    NumVal integral(const Expr& e) const {
        NumVal up = eval(e.upper_limit());
        std::map<std::string, NumVal> inner = *env;
        mpf_class maxerr(0, 64);
        auto g = [&](const mpf_class& t) {
            inner[e.name()] = c.nv(t, mpf_class(0, 64));
            Evaluator ev{c, &inner};
            NumVal gi = ev.eval(e.integrand());
            if (gi.err > maxerr) maxerr = gi.err;
            return mpf_class(gi.v);
        };
        // Romberg: trapezoid refinements plus Richardson extrapolation. The
        // integrands here are analytic on [0, upper], so the diagonal
        // converges superexponentially; if it stalls we return the reached
        // estimate with its honest error bound instead of failing.
        const int depth = 22;
        std::vector<mpf_class> row;
        mpf_class h(0, c.wprec), t0(0, c.wprec);
        h = up.v;
        t0 = (g(mpf_class(0, c.wprec)) + g(up.v)) / 2 * h;
        row.push_back(t0);
        mpf_class best(0, c.wprec), esterr(0, 64);
        best = t0;
        esterr = abs(t0) + 1;
        mpf_class tol(0, 64);
        tol = pow2m(c.prec + 8, 64) * (abs(t0) + 1);
        long panels = 1;
        for (int i = 1; i < depth; ++i) {
            h /= 2;
            panels *= 2;
            mpf_class s(0, c.wprec);
            for (long j = 1; j < panels; j += 2) {
                mpf_class t(0, c.wprec);
                t = h * j;
                s += g(t);
            }
            std::vector<mpf_class> next;
            next.push_back(row[0] / 2 + s * h);
            mpf_class p4(1, 64);
            for (int k = 1; k <= i; ++k) {
                p4 *= 4;
                mpf_class v(0, c.wprec);
                v = (p4 * next[k - 1] - row[k - 1]) / (p4 - 1);
                next.push_back(v);
            }
            mpf_class diff(0, c.wprec);
            diff = abs(next.back() - row.back());
            if (diff < esterr) {
                best = next.back();
                esterr = diff;
            }
            row = std::move(next);
            if (esterr < tol) break;
        }
        NumVal gu;
        {
            mpf_class guv = g(up.v);
            gu = c.nv(guv, maxerr);
        }
        mpf_class err(0, 64);
        err = 2 * esterr + maxerr * (abs(up.v) + 1) + (abs(gu.v) + gu.err) * up.err;
        return c.nv(best, err);
    }

    NumVal call(const Expr& e) const {
        const std::string& fn = e.name();
        const ExprVec args = e.operands();
        if (fn == "factorial" || fn == "binomial" || fn == "pochhammer") {
            for (const Expr& a : args)
                if (!a.is_rational()) fail("unsupported-function", fn + " of a symbolic argument");
            if (fn == "factorial") {
                long n = args[0].rational_value().to_long();
                if (n < 0) fail("domain", "factorial of a negative integer");
                return c.nv(mpf_class(factorial_int(n), c.wprec), mpf_class(0, 64));
            }
            if (fn == "binomial") {
                long n = args[0].rational_value().to_long();
                long k = args[1].rational_value().to_long();
                if (n < 0 || k < 0 || k > n) return c.exact(mpf_class(0, c.wprec));
                return c.nv(mpf_class(binomial_int(n, k), c.wprec), mpf_class(0, 64));
            }
            BigRational a = args[0].rational_value();
            long n = args[1].rational_value().to_long();
            if (n < 0) fail("domain", "pochhammer with a negative count");
            return rational(pochhammer(a, (unsigned long)n));
        }
        if (fn == "Fibonacci" || fn == "ChebyshevT" || fn == "HermiteH") return family(fn, args);
        if (args.size() != 1) fail("unsupported-function", fn);
        NumVal x = eval(args[0]);
        if (fn == "exp") return exp_val(c, x);
        if (fn == "ln") return ln_val(c, x);
        if (fn == "sin") return sincos_val(c, x, true);
        if (fn == "cos") return sincos_val(c, x, false);
        if (fn == "tan") return c.div(sincos_val(c, x, true), sincos_val(c, x, false));
        if (fn == "sinh" || fn == "cosh") {
            NumVal ep = exp_val(c, x);
            NumVal em = exp_val(c, c.neg(x));
            NumVal two = c.exact(mpf_class(2, c.wprec));
            return c.div(fn == "sinh" ? c.sub(ep, em) : c.add(ep, em), two);
        }
        if (fn == "arctan") return arctan_val(c, x);
        if (fn == "arcsin" || fn == "arccos") {
            NumVal one = c.exact(mpf_class(1, c.wprec));
            NumVal p = pi_val(c);
            NumVal halfpi = c.div(p, c.exact(mpf_class(2, c.wprec)));
            NumVal as;
            if (x.err == 0 && abs(x.v) == 1)
                as = x.v > 0 ? halfpi : c.neg(halfpi);
            else {
                NumVal s = c.sqrt_(c.sub(one, c.mul(x, x)));
                as = arctan_val(c, c.div(x, s));
            }
            return fn == "arcsin" ? as : c.sub(halfpi, as);
        }
        if (fn == "arccosh") {
            NumVal one = c.exact(mpf_class(1, c.wprec));
            if (x.err == 0 && x.v == 1) return c.exact(mpf_class(0, c.wprec));
            if (x.v < 1 && 1 - x.v > x.err) fail("domain", "arccosh below 1");
            NumVal s = c.sqrt_(c.sub(c.mul(x, x), one));
            return ln_val(c, c.add(x, s));
        }
        if (fn == "arcsech") {
            // ln((1 + sqrt(1 - x^2))/x) on (0, 1]
            NumVal one = c.exact(mpf_class(1, c.wprec));
            if (x.v <= 0 && abs(x.v) > x.err) fail("domain", "arcsech of a nonpositive value");
            if (x.err == 0 && x.v == 1) return c.exact(mpf_class(0, c.wprec));
            NumVal s = c.sqrt_(c.sub(one, c.mul(x, x)));
            return ln_val(c, c.div(c.add(one, s), x));
        }
        if (fn == "erf") return erf_val(c, x);
        if (fn == "dilog") {
            NumVal one = c.exact(mpf_class(1, c.wprec));
            return dilog_core(c, c.sub(one, x));
        }
        fail("unsupported-function", fn);
    }

    NumVal eval(const Expr& e) const {
        switch (e.kind()) {
            case ExprKind::Rational: return rational(e.rational_value());
            case ExprKind::Const:
                if (e.name() == "Pi") return pi_val(c);
                fail("nonreal", e.name());
            case ExprKind::Symbol: {
                auto it = env->find(e.name());
                if (it == env->end()) fail("free-parameter", e.name());
                NumVal r = c.nv(it->second.v, it->second.err);
                return r;
            }
            case ExprKind::Sum: {
                NumVal r = c.exact(mpf_class(0, c.wprec));
                for (const Expr& t : e.operands()) r = c.add(r, eval(t));
                return r;
            }
            case ExprKind::Product: {
                NumVal r = c.exact(mpf_class(1, c.wprec));
                for (const Expr& f : e.operands()) r = c.mul(r, eval(f));
                return r;
            }
            case ExprKind::Power: {
                if (!e.exponent().is_rational()) {
                    // symbolic exponent: b^s = exp(s ln b), positive base only
                    NumVal b = eval(e.base());
                    NumVal s = eval(e.exponent());
                    return exp_val(c, c.mul(s, ln_val(c, b)));
                }
                return pow_rational(eval(e.base()), e.exponent().rational_value());
            }
            case ExprKind::Call: return call(e);
            case ExprKind::Integral: return integral(e);
            case ExprKind::ProductOver: {
                // the factory folds small rational bounds, so this loop only
                // runs for large explicit ones
                if (!e.upper_limit().is_rational() ||
                    !e.upper_limit().rational_value().is_integer())
                    fail("free-parameter", "product bound " + e.upper_limit().to_string());
                long n = e.upper_limit().rational_value().to_long();
                if (n > 1000000) fail("domain", "product bound out of range");
                std::map<std::string, NumVal> inner = *env;
                NumVal r = c.exact(mpf_class(1, c.wprec));
                for (long j = 0; j <= n; ++j) {
                    inner[e.name()] = c.exact(mpf_class(j, c.wprec));
                    Evaluator ev{c, &inner};
                    r = c.mul(r, ev.eval(e.body()));
                }
                return r;
            }
        }
        fail("unsupported-function", "unreachable");
    }
};

}  // namespace

NumVal num_from_rational(const BigRational& q, long prec_bits) {
    Ctx c{prec_bits, prec_bits + 64};
    Evaluator ev{c, nullptr};
    return ev.rational(q);
}

NumVal num_pi(long prec_bits) {
    Ctx c{prec_bits, prec_bits + 64};
    return pi_val(c);
}

NumVal num_eval(const Expr& e, const std::map<std::string, NumVal>& env, long prec_bits) {
    Ctx c{prec_bits, prec_bits + 64};
    Evaluator ev{c, &env};
    return ev.eval(e);
}

int robust_sign(const Expr& e) {
    static const std::map<std::string, NumVal> empty;
    for (long prec : {128L, 256L, 512L, 1024L}) {
        NumVal r;
        try {
            r = num_eval(e, empty, prec);
        } catch (const FpsError& err) {
            if (err.code() == "precision") continue;
            throw;
        }
        if (abs(r.v) > r.err) return r.v > 0 ? 1 : -1;
        if (r.err < pow2m(400, 64)) return 0;
    }
    throw FpsError("numeval", "sign-undecided", e.to_string());
}

}  // namespace fps
