#include "fps/limits.hpp"

#include <optional>
#include <utility>

#include "fps/error.hpp"
#include "fps/numeval.hpp"
#include "fps/termform.hpp"

namespace fps {

std::string LimitValue::to_string() const {
    switch (kind) {
        case LimitKind::Finite: return value.to_string();
        case LimitKind::PosInf: return "+infinity";
        case LimitKind::NegInf: return "-infinity";
        case LimitKind::Undefined: return "undefined";
        case LimitKind::Undecided: return "undecided";
    }
    return "?";
}

namespace {

// extended value of a subexpression as var tends to 0 from one side;
// Bounded means "stays in some fixed bounded set, value unknown"
enum class EK { Finite, PosInf, NegInf, Bounded, Undefined, Indet };

struct Ext {
    EK k = EK::Indet;
    Expr v;  // Finite only

    static Ext finite(Expr e) { return {EK::Finite, std::move(e)}; }
    static Ext inf(int sign) { return {sign > 0 ? EK::PosInf : EK::NegInf, Expr()}; }
    static Ext bounded() { return {EK::Bounded, Expr()}; }
    static Ext undefined() { return {EK::Undefined, Expr()}; }
    static Ext indet() { return {EK::Indet, Expr()}; }
    bool is_inf() const { return k == EK::PosInf || k == EK::NegInf; }
    int inf_sign() const { return k == EK::PosInf ? 1 : -1; }
};

std::optional<int> try_sign(const Expr& e) {
    try {
        return robust_sign(e);
    } catch (const FpsError&) {
        return std::nullopt;
    }
}

struct Limiter {
    std::string var;
    bool right;
    const Catalog* cat;

    // numeric sign of e just off zero on this side, two sample magnitudes
    std::optional<int> sign_near(const Expr& e) const {
        int agreed = 0;
        for (long decade : {8, 12}) {
            mpz_class den;
            mpz_ui_pow_ui(den.get_mpz_t(), 10, (unsigned long)decade);
            BigRational x0(right ? mpz_class(1) : mpz_class(-1), den);
            std::optional<int> s;
            for (long prec : {128L, 384L}) {
                try {
                    std::map<std::string, NumVal> env{{var, num_from_rational(x0, prec)}};
                    NumVal r = num_eval(e, env, prec);
                    if (abs(r.v) > r.err) {
                        s = r.v > 0 ? 1 : -1;
                        break;
                    }
                } catch (const FpsError&) {
                    return std::nullopt;
                }
            }
            if (!s) return std::nullopt;
            if (agreed == 0)
                agreed = *s;
            else if (agreed != *s)
                return std::nullopt;
        }
        return agreed;
    }

    // reject var-free call values whose argument left the function's domain
    Ext checked_call(const std::string& name, ExprVec args) const {
        Expr c = Expr::call(name, std::move(args));
        try {
            std::map<std::string, NumVal> env;
            num_eval(c, env, 128);
        } catch (const FpsError& err) {
            if (err.code() == "domain") return Ext::undefined();
        }
        return Ext::finite(c);
    }

    bool is_zero_val(const Ext& x) const {
        if (x.k != EK::Finite) return false;
        if (x.v.is_zero()) return true;
        if (x.v.is_rational()) return false;
        return try_sign(x.v) == 0;
    }

    Ext subst_sum(const Expr& e) const {
        ExprVec finite;
        int pos = 0, neg = 0;
        bool bnd = false;
        for (const Expr& t : e.operands()) {
            Ext x = subst(t);
            switch (x.k) {
                case EK::Finite: finite.push_back(x.v); break;
                case EK::PosInf: ++pos; break;
                case EK::NegInf: ++neg; break;
                case EK::Bounded: bnd = true; break;
                case EK::Undefined: return Ext::undefined();
                case EK::Indet: return Ext::indet();
            }
        }
        if (pos && neg) return Ext::indet();
        if (pos) return Ext::inf(1);
        if (neg) return Ext::inf(-1);
        if (bnd) return Ext::bounded();
        return Ext::finite(Expr::sum(std::move(finite)));
    }

    Ext subst_product(const Expr& e) const {
        ExprVec finite;
        int inf_sign = 1, infs = 0;
        bool bnd = false;
        for (const Expr& f : e.operands()) {
            Ext x = subst(f);
            switch (x.k) {
                case EK::Finite: finite.push_back(x.v); break;
                case EK::PosInf: ++infs; break;
                case EK::NegInf:
                    ++infs;
                    inf_sign = -inf_sign;
                    break;
                case EK::Bounded: bnd = true; break;
                case EK::Undefined: return Ext::undefined();
                case EK::Indet: return Ext::indet();
            }
        }
        Expr fv = Expr::product(std::move(finite));
        bool fzero = fv.is_zero() || (!fv.is_rational() && try_sign(fv) == 0);
        if (fzero) {
            if (infs) return Ext::indet();
            return Ext::finite(Expr::integer(0));  // 0 * bounded = 0
        }
        if (infs) {
            if (bnd) return Ext::indet();
            std::optional<int> s = fv.is_one() ? std::optional<int>(1) : try_sign(fv);
            if (!s || *s == 0) return Ext::indet();
            return Ext::inf(*s * inf_sign);
        }
        if (bnd) return Ext::bounded();
        return Ext::finite(fv);
    }

    Ext subst_power(const Expr& e) const {
        Ext b = subst(e.base());
        if (b.k == EK::Undefined) return Ext::undefined();
        if (b.k == EK::Indet) return Ext::indet();
        if (!e.exponent().is_rational()) {
            // x-free symbolic exponent over a positive base only
            if (e.exponent().uses(var)) return Ext::indet();
            if (b.k == EK::Finite && try_sign(b.v) == 1)
                return Ext::finite(Expr::pow(b.v, e.exponent()));
            return Ext::indet();
        }
        BigRational r = e.exponent().rational_value();
        bool even_den = (r.den() % 2) == 0;
        bool odd_num = mpz_odd_p(r.num().get_mpz_t()) != 0;
        if (b.k == EK::Bounded) {
            if (r.is_integer() && r.sign() > 0) return Ext::bounded();
            return Ext::indet();
        }
        if (b.is_inf()) {
            if (r.sign() < 0) return Ext::finite(Expr::integer(0));
            if (b.k == EK::PosInf) return Ext::inf(1);
            if (even_den) return Ext::undefined();
            return Ext::inf(odd_num ? -1 : 1);
        }
        // finite base
        if (is_zero_val(b)) {
            std::optional<int> side = sign_near(e.base());
            if (r.sign() > 0) {
                if (!even_den) return Ext::finite(Expr::integer(0));
                if (side == 1) return Ext::finite(Expr::integer(0));
                if (side == -1) return Ext::undefined();
                return Ext::indet();
            }
            if (side == 1) return Ext::inf(1);
            if (side == -1) {
                if (even_den) return Ext::undefined();
                return Ext::inf(odd_num ? -1 : 1);
            }
            return Ext::indet();
        }
        if (even_den) {
            std::optional<int> s =
                b.v.is_rational() ? std::optional<int>(b.v.rational_value().sign()) : try_sign(b.v);
            if (s && *s < 0) return Ext::undefined();  // even root of a negative value
            if (!s) return Ext::indet();
        }
        return Ext::finite(Expr::pow(b.v, e.exponent()));
    }

    Ext subst_call(const Expr& e) const {
        const FunctionDef* def = cat->find(e.name());
        if (!def) return Ext::indet();
        ExprVec args = e.operands();
        if (def->arity >= 2) {
            // family: the index must not involve the limit variable
            for (size_t i = 0; i + 1 < args.size(); ++i)
                if (args[i].uses(var)) return Ext::indet();
            Ext g = subst(args.back());
            if (g.k == EK::Undefined) return Ext::undefined();
            if (g.k != EK::Finite) return Ext::indet();
            ExprVec closed(args.begin(), args.end() - 1);
            closed.push_back(g.v);
            if (g.v.is_rational()) {
                auto pv = lookup_value(*def, closed, g.v.rational_value(), Approach::TwoSided);
                if (pv && pv->is_finite()) return Ext::finite(pv->value);
            }
            return checked_call(e.name(), std::move(closed));
        }
        Ext a = subst(args[0]);
        switch (a.k) {
            case EK::Undefined: return Ext::undefined();
            case EK::Indet: return Ext::indet();
            case EK::Bounded: return def->bounded ? Ext::bounded() : Ext::indet();
            case EK::PosInf:
            case EK::NegInf: {
                auto iv = lookup_value_inf(*def, a.k == EK::PosInf);
                if (iv) {
                    if (iv->is_finite()) return Ext::finite(iv->value);
                    if (iv->kind == ValueKind::PosInf) return Ext::inf(1);
                    if (iv->kind == ValueKind::NegInf) return Ext::inf(-1);
                    return def->bounded ? Ext::bounded() : Ext::undefined();
                }
                return def->bounded ? Ext::bounded() : Ext::indet();
            }
            case EK::Finite: break;
        }
        if (a.v.is_rational()) {
            const BigRational c = a.v.rational_value();
            auto two = lookup_value(*def, {a.v}, c, Approach::TwoSided);
            if (!two && def->point_values.count(c)) {
                // only a directional entry exists: resolve the approach side
                std::optional<int> side = sign_near(args[0] - a.v);
                if (!side) return Ext::indet();
                auto dv = lookup_value(*def, {a.v}, c,
                                       *side > 0 ? Approach::FromRight : Approach::FromLeft);
                if (!dv) return Ext::indet();
                two = dv;
            }
            if (two) {
                if (two->is_finite()) return Ext::finite(two->value);
                if (two->kind == ValueKind::PosInf) return Ext::inf(1);
                if (two->kind == ValueKind::NegInf) return Ext::inf(-1);
                return Ext::undefined();
            }
        }
        return checked_call(e.name(), {a.v});
    }

    Ext subst(const Expr& e) const {
        switch (e.kind()) {
            case ExprKind::Rational:
            case ExprKind::Const: return Ext::finite(e);
            case ExprKind::Symbol:
                if (e.name() == var) return Ext::finite(Expr::integer(0));
                return Ext::finite(e);
            case ExprKind::Sum: return subst_sum(e);
            case ExprKind::Product: return subst_product(e);
            case ExprKind::Power: return subst_power(e);
            case ExprKind::Call: return subst_call(e);
            case ExprKind::Integral: {
                if (e.name() != var && e.integrand().uses(var)) return Ext::indet();
                Ext u = subst(e.upper_limit());
                if (u.k == EK::Undefined) return Ext::undefined();
                if (u.k != EK::Finite) return Ext::indet();
                return Ext::finite(Expr::integral(e.integrand(), e.name(), u.v));
            }
            case ExprKind::ProductOver:
                return e.uses(var) ? Ext::indet() : Ext::finite(e);
        }
        return Ext::indet();
    }

    // exact limit when e is a rational function of var (params allowed)
    std::optional<LimitValue> rational_rung(const Expr& e) const {
        TermForm tf;
        TermContext ctx(var);
        try {
            tf = to_term_form(e, ctx);
        } catch (const FpsError&) {
            return std::nullopt;
        }
        if (tf.empty()) return LimitValue::finite(Expr::integer(0));
        if (tf.size() != 1 || !tf[0].kernels.empty()) return std::nullopt;
        const RatFun& R = tf[0].coeff;
        const MultiPoly& num = R.numerator();
        const MultiPoly& den = R.denominator();
        if (num.is_zero()) return LimitValue::finite(Expr::integer(0));
        int vn = num.valuation(var), vd = den.valuation(var);
        MultiPoly p0 = num.coeff_of(var, vn);
        MultiPoly q0 = den.coeff_of(var, vd);
        if (vn > vd) return LimitValue::finite(Expr::integer(0));
        Expr ratio = ctx.to_expr(p0) / ctx.to_expr(q0);
        if (vn == vd) return LimitValue::finite(ratio);
        int d = vd - vn;
        std::optional<int> s = try_sign(ratio);
        if (!s || *s == 0) return std::nullopt;
        int sign = *s;
        if (!right && d % 2 == 1) sign = -sign;
        return sign > 0 ? LimitValue::pos_inf() : LimitValue::neg_inf();
    }

    // view e as a quotient N/D worth treating with L'Hopital
    std::optional<std::pair<Expr, Expr>> as_quotient(const Expr& e) const {
        auto neg_power = [](const Expr& f) {
            return f.kind() == ExprKind::Power && f.exponent().is_rational() &&
                   f.exponent().rational_value().sign() < 0;
        };
        if (neg_power(e)) return std::pair<Expr, Expr>{Expr::integer(1), Expr::pow(e.base(), -e.exponent())};
        if (e.kind() == ExprKind::Product) {
            ExprVec nums, dens;
            for (const Expr& f : e.operands()) {
                if (neg_power(f))
                    dens.push_back(Expr::pow(f.base(), -f.exponent()));
                else
                    nums.push_back(f);
            }
            if (dens.empty()) return std::nullopt;
            return std::pair<Expr, Expr>{Expr::product(std::move(nums)),
                                         Expr::product(std::move(dens))};
        }
        if (e.kind() == ExprKind::Sum) {
            // combine the term form over a common polynomial denominator
            TermForm tf;
            TermContext ctx(var);
            try {
                tf = to_term_form(e, ctx);
            } catch (const FpsError&) {
                return std::nullopt;
            }
            MultiPoly lcm(BigRational(1));
            for (const Term& t : tf) {
                const MultiPoly& d = t.coeff.denominator();
                lcm = poly_divexact(lcm * d, poly_gcd(lcm, d));
            }
            if (lcm.is_constant()) return std::nullopt;
            ExprVec terms;
            for (const Term& t : tf) {
                MultiPoly scaled =
                    t.coeff.numerator() * poly_divexact(lcm, t.coeff.denominator());
                ExprVec fs{ctx.to_expr(scaled)};
                for (const KernelFactor& kf : t.kernels)
                    fs.push_back(Expr::pow(kf.base, Expr::integer(kf.power)));
                terms.push_back(Expr::product(std::move(fs)));
            }
            return std::pair<Expr, Expr>{Expr::sum(std::move(terms)), ctx.to_expr(lcm)};
        }
        return std::nullopt;
    }

    // cancel common power factors of N and D (valid on a punctured neighborhood)
    bool cancel_common(Expr& N, Expr& D) const {
        auto factorize = [](const Expr& e, std::map<Expr, BigRational>& m) {
            ExprVec fs = e.kind() == ExprKind::Product ? e.operands() : ExprVec{e};
            for (const Expr& f : fs) {
                if (f.kind() == ExprKind::Power && f.exponent().is_rational())
                    m[f.base()] += f.exponent().rational_value();
                else
                    m[f] += BigRational(1);
            }
        };
        std::map<Expr, BigRational> fn, fd;
        factorize(N, fn);
        factorize(D, fd);
        bool changed = false;
        for (auto& [base, en] : fn) {
            if (base.is_rational()) continue;
            auto it = fd.find(base);
            if (it == fd.end()) continue;
            BigRational m = en < it->second ? en : it->second;
            if (m.is_zero()) continue;
            en -= m;
            it->second -= m;
            changed = true;
        }
        if (!changed) return false;
        auto rebuild = [](const std::map<Expr, BigRational>& m) {
            ExprVec fs;
            for (const auto& [base, exp] : m) {
                if (exp.is_zero()) continue;
                fs.push_back(Expr::pow(base, Expr::rational(exp)));
            }
            return Expr::product(std::move(fs));
        };
        N = rebuild(fn);
        D = rebuild(fd);
        return true;
    }

    // first j <= cap with subst(d^j e / dx^j) finite nonzero; the pair is
    // (j, value); aborts with nullopt when a substitution is indecisive,
    // non-finite, or of unknown sign
    std::optional<std::pair<int, Expr>> first_seed(Expr e, int cap) const {
        for (int j = 0; j <= cap; ++j) {
            if (j > 0) {
                try {
                    e = differentiate(e, var, *cat);
                } catch (const FpsError&) {
                    return std::nullopt;
                }
            }
            Ext v = subst(e);
            if (v.k != EK::Finite) return std::nullopt;
            if (is_zero_val(v)) continue;
            if (!v.v.is_rational() && !try_sign(v.v)) return std::nullopt;
            return std::pair<int, Expr>{j, v.v};
        }
        return std::nullopt;
    }

    // compare leading Taylor monomials of a 0/0 quotient; sound because it
    // is l'Hopital iterated against a pure power, so the recursion budget
    // is not spent re-deriving x^d
    std::optional<LimitValue> leading_monomial(const Expr& N, const Expr& D) const {
        const int cap = 16;
        auto n = first_seed(N, cap);
        if (!n) return std::nullopt;
        auto d = first_seed(D, cap);
        if (!d) return std::nullopt;
        if (n->first > d->first) return LimitValue::finite(Expr::integer(0));
        Expr ratio = (n->second * Expr::rational(BigRational(factorial_int(d->first)))) /
                     (d->second * Expr::rational(BigRational(factorial_int(n->first))));
        if (n->first == d->first) return LimitValue::finite(ratio);
        std::optional<int> s = try_sign(ratio);
        if (!s || *s == 0) return std::nullopt;
        int sign = *s;
        if (!right && (d->first - n->first) % 2 == 1) sign = -sign;
        return sign > 0 ? LimitValue::pos_inf() : LimitValue::neg_inf();
    }

    // product of x^r, ln(x)^m, and constants
    std::optional<LimitValue> powerlog_rung(const Expr& e) const {
        ExprVec fs = e.kind() == ExprKind::Product ? e.operands() : ExprVec{e};
        BigRational r(0);
        long m = 0;
        ExprVec consts;
        Expr x = Expr::symbol(var);
        auto is_lnx = [&](const Expr& f) {
            return f.kind() == ExprKind::Call && f.name() == "ln" && f.operands().size() == 1 &&
                   Expr::compare(f.operands()[0], x) == 0;
        };
        for (const Expr& f : fs) {
            if (!f.uses(var)) {
                consts.push_back(f);
                continue;
            }
            if (Expr::compare(f, x) == 0) {
                r += BigRational(1);
                continue;
            }
            if (is_lnx(f)) {
                m += 1;
                continue;
            }
            if (f.kind() == ExprKind::Power && f.exponent().is_rational()) {
                BigRational q = f.exponent().rational_value();
                if (Expr::compare(f.base(), x) == 0) {
                    r += q;
                    continue;
                }
                if (is_lnx(f.base()) && q.is_integer()) {
                    m += q.to_long();
                    continue;
                }
            }
            return std::nullopt;
        }
        if (!right && (m != 0 || !r.is_integer())) return LimitValue::undefined();
        Expr cv = Expr::product(std::move(consts));
        if (r.sign() > 0) return LimitValue::finite(Expr::integer(0));
        if (r.is_zero() && m == 0) return LimitValue::finite(cv);
        if (r.is_zero() && m < 0) return LimitValue::finite(Expr::integer(0));
        // divergent: fix the overall sign
        std::optional<int> s = cv.is_one() ? std::optional<int>(1) : try_sign(cv);
        if (!s || *s == 0) return std::nullopt;
        int sign = *s;
        if (m % 2 != 0) sign = -sign;  // ln x -> -infinity on the right
        if (!right && mpz_odd_p(r.num().get_mpz_t())) sign = -sign;
        return sign > 0 ? LimitValue::pos_inf() : LimitValue::neg_inf();
    }

    // sums on the logarithmic scale, like arcsech(x) + ln(x): summands c*f(u)
    // whose exp is a registered algebraic form exponentiate exactly, the
    // product often has a plain finite limit, and the original limit is its log
    std::optional<LimitValue> explog_rung(const Expr& e, int depth) const {
        if (e.kind() != ExprKind::Sum || depth >= 8) return std::nullopt;
        ExprVec factors, consts;
        for (const Expr& t : e.operands()) {
            if (!t.uses(var)) {
                consts.push_back(t);
                continue;
            }
            BigRational c(1);
            Expr f = t;
            if (t.kind() == ExprKind::Product) {
                const ExprVec& fs = t.operands();
                if (fs.size() != 2 || fs[0].kind() != ExprKind::Rational) return std::nullopt;
                c = fs[0].rational_value();
                f = fs[1];
            }
            if (f.kind() != ExprKind::Call || f.operands().size() != 1) return std::nullopt;
            const FunctionDef* def = cat->find(f.name());
            if (!def || !def->exp_form) return std::nullopt;
            Expr alg = instantiate(*def->exp_form, f.operands());
            factors.push_back(Expr::pow(alg, Expr::rational(c)));
        }
        if (factors.empty()) return std::nullopt;
        LimitValue w = ladder(Expr::product(std::move(factors)), depth + 1);
        if (w.kind == LimitKind::PosInf) return LimitValue::pos_inf();
        if (w.kind != LimitKind::Finite) return std::nullopt;
        // each factor is the exp of a real value, so the product stays
        // positive and a zero limit is approached from above
        if (w.value.is_zero()) return LimitValue::neg_inf();
        std::optional<int> s =
            w.value.is_rational() ? std::optional<int>(w.value.rational_value().sign())
                                  : try_sign(w.value);
        if (!s || *s <= 0) return std::nullopt;
        if (!w.value.is_one()) consts.push_back(Expr::call("ln", {w.value}));
        return LimitValue::finite(Expr::sum(std::move(consts)));
    }

    LimitValue from_ext(const Ext& x) const {
        switch (x.k) {
            case EK::Finite: return LimitValue::finite(x.v);
            case EK::PosInf: return LimitValue::pos_inf();
            case EK::NegInf: return LimitValue::neg_inf();
            case EK::Bounded:
            case EK::Undefined: return LimitValue::undefined();
            case EK::Indet: return LimitValue::undecided();
        }
        return LimitValue::undecided();
    }

    LimitValue ladder(const Expr& e, int depth) const {
        Ext v = subst(e);
        if (v.k != EK::Indet) return from_ext(v);
        if (auto r = rational_rung(e)) return *r;
        if (auto q = as_quotient(e)) {
            Expr N = q->first, D = q->second;
            if (cancel_common(N, D)) {
                Expr e2 = N / D;
                if (Expr::compare(e2, e) != 0) {
                    Ext v2 = subst(e2);
                    if (v2.k != EK::Indet) return from_ext(v2);
                    if (auto r2 = rational_rung(e2)) return *r2;
                }
            }
            Ext n0 = subst(N), d0 = subst(D);
            bool zz = is_zero_val(n0) && is_zero_val(d0);
            bool ii = n0.is_inf() && d0.is_inf();
            if (zz) {
                if (auto lm = leading_monomial(N, D)) return *lm;
            }
            if (depth < 8) {
                if (zz || ii) {
                    try {
                        Expr Np = differentiate(N, var, *cat);
                        Expr Dp = differentiate(D, var, *cat);
                        if (!Dp.is_zero()) {
                            LimitValue l = ladder(Np / Dp, depth + 1);
                            if (l.kind != LimitKind::Undecided) return l;
                        }
                    } catch (const FpsError&) {
                        // underivable quotient: fall through
                    }
                }
            }
        }
        if (auto el = explog_rung(e, depth)) return *el;
        if (auto pl = powerlog_rung(e)) return *pl;
        return LimitValue::undecided();
    }
};

}  // namespace

LimitValue limit_at_zero(const Expr& e, const std::string& var, Dir dir, const Catalog& cat) {
    if (dir == Dir::TwoSided) {
        LimitValue r = limit_at_zero(e, var, Dir::Right, cat);
        LimitValue l = limit_at_zero(e, var, Dir::Left, cat);
        if (r.kind == LimitKind::Undecided || l.kind == LimitKind::Undecided)
            return LimitValue::undecided();
        if (r.kind != l.kind) return LimitValue::undefined();
        if (r.kind == LimitKind::Finite && Expr::compare(r.value, l.value) != 0)
            return LimitValue::undefined();
        return r;
    }
    Limiter lm{var, dir == Dir::Right, &cat};
    return lm.ladder(e, 0);
}

LimitValue taylor_seed(const Expr& f, long k, const std::string& var, Dir dir,
                       const Catalog& cat) {
    Expr g = f;
    try {
        for (long i = 0; i < k; ++i) g = differentiate(g, var, cat);
    } catch (const FpsError&) {
        return LimitValue::undecided();
    }
    Expr scaled = g * Expr::rational(BigRational(mpz_class(1), factorial_int(k)));
    return limit_at_zero(scaled, var, dir, cat);
}

}  // namespace fps
