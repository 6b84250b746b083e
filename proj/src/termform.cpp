#include "fps/termform.hpp"

#include <algorithm>

namespace fps {

int compare(const KernelSet& a, const KernelSet& b) {
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    for (size_t i = 0; i < a.size(); ++i) {
        if (int c = Expr::compare(a[i].base, b[i].base)) return c;
        if (a[i].power != b[i].power) return a[i].power < b[i].power ? -1 : 1;
    }
    return 0;
}

bool operator==(const KernelSet& a, const KernelSet& b) { return compare(a, b) == 0; }
bool operator<(const KernelSet& a, const KernelSet& b) { return compare(a, b) < 0; }

std::string kernel_set_to_string(const KernelSet& k) {
    if (k.empty()) return "1";
    ExprVec fs;
    for (const KernelFactor& f : k)
        fs.push_back(Expr::pow(f.base, Expr::integer(f.power)));
    return Expr::product(std::move(fs)).to_string();
}

std::string TermContext::intern(const Expr& atom) {
    auto it = names_.find(atom);
    if (it != names_.end()) return it->second;
    std::string name;
    if (atom.kind() == ExprKind::Symbol || atom.kind() == ExprKind::Const) {
        name = atom.name();
    } else {
        name = "#c" + std::to_string(next_++);
    }
    names_.emplace(atom, name);
    atoms_.emplace(name, atom);
    return name;
}

Expr TermContext::to_expr(const MultiPoly& p) const {
    ExprVec terms;
    for (const auto& [exps, c] : p.terms()) {
        ExprVec fs{Expr::rational(c)};
        for (size_t i = 0; i < exps.size(); ++i) {
            if (exps[i] == 0) continue;
            const std::string& v = p.vars()[i];
            Expr atom;
            if (v == var_) {
                atom = Expr::symbol(v);
            } else {
                auto it = atoms_.find(v);
                atom = it != atoms_.end() ? it->second : Expr::symbol(v);
            }
            fs.push_back(Expr::pow(atom, Expr::integer(exps[i])));
        }
        terms.push_back(Expr::product(std::move(fs)));
    }
    return Expr::sum(std::move(terms));
}

Expr TermContext::to_expr(const RatFun& r) const {
    Expr num = to_expr(r.numerator());
    if (r.is_polynomial()) return num;
    return num / to_expr(r.denominator());
}

Expr expand(const Expr& e) {
    switch (e.kind()) {
        case ExprKind::Sum: {
            ExprVec ts;
            for (const Expr& t : e.operands()) ts.push_back(expand(t));
            return Expr::sum(std::move(ts));
        }
        case ExprKind::Product: {
            // distribute expanded factors over sums
            ExprVec acc{Expr::integer(1)};
            for (const Expr& f : e.operands()) {
                Expr g = expand(f);
                ExprVec parts =
                    g.kind() == ExprKind::Sum ? g.operands() : ExprVec{g};
                ExprVec next;
                next.reserve(acc.size() * parts.size());
                for (const Expr& a : acc)
                    for (const Expr& p : parts) next.push_back(a * p);
                acc = std::move(next);
            }
            return Expr::sum(std::move(acc));
        }
        case ExprKind::Power: {
            Expr b = expand(e.base());
            const Expr& x = e.exponent();
            if (b.kind() == ExprKind::Sum && x.is_rational() &&
                x.rational_value().is_integer()) {
                long n = x.rational_value().to_long();
                if (n >= 2 && n <= 64) {
                    // distribute term-by-term; acc * b as whole expressions
                    // would re-fold into b^n and recurse forever
                    Expr acc = b;
                    for (long i = 1; i < n; ++i) {
                        ExprVec as = acc.kind() == ExprKind::Sum
                                         ? acc.operands()
                                         : ExprVec{acc};
                        ExprVec out;
                        out.reserve(as.size() * b.operands().size());
                        for (const Expr& u : as)
                            for (const Expr& v : b.operands())
                                out.push_back(u * v);
                        acc = Expr::sum(std::move(out));
                    }
                    return acc;
                }
            }
            return Expr::pow(b, x);
        }
        default: return e;
    }
}

namespace {

// rational function of var with coefficients in Q(params, atoms)?
bool is_rational_in(const Expr& e, const std::string& var) {
    if (!e.uses(var)) return true;
    switch (e.kind()) {
        case ExprKind::Symbol: return true;
        case ExprKind::Sum:
        case ExprKind::Product: {
            for (const Expr& k : e.operands())
                if (!is_rational_in(k, var)) return false;
            return true;
        }
        case ExprKind::Power:
            return e.exponent().is_rational() &&
                   e.exponent().rational_value().is_integer() &&
                   is_rational_in(e.base(), var);
        default: return false;
    }
}

RatFun expr_to_ratfun(const Expr& e, TermContext& ctx) {
    switch (e.kind()) {
        case ExprKind::Rational: return RatFun(e.rational_value());
        case ExprKind::Symbol:
        case ExprKind::Const:
            return RatFun(MultiPoly::variable(ctx.intern(e)));
        case ExprKind::Sum: {
            RatFun r;
            for (const Expr& t : e.operands()) r += expr_to_ratfun(t, ctx);
            return r;
        }
        case ExprKind::Product: {
            RatFun r(1);
            for (const Expr& f : e.operands()) r *= expr_to_ratfun(f, ctx);
            return r;
        }
        case ExprKind::Power: {
            const Expr& x = e.exponent();
            if (x.is_rational() && x.rational_value().is_integer())
                return expr_to_ratfun(e.base(), ctx).pow(x.rational_value().to_long());
            // variable-free fractional or symbolic power: opaque atom; a
            // fractional power interns its principal root so p/q powers of
            // the same base share one atom
            if (x.is_rational()) {
                const BigRational& q = x.rational_value();
                Expr root = Expr::pow(e.base(), Expr::rational(BigRational(1, 1) / BigRational(q.den())));
                return RatFun(MultiPoly::variable(ctx.intern(root)))
                    .pow(q.num().get_si());
            }
            return RatFun(MultiPoly::variable(ctx.intern(e)));
        }
        default:
            return RatFun(MultiPoly::variable(ctx.intern(e)));
    }
}

// splits a canonical exponent into rational part + rest
void split_rational_part(const Expr& x, BigRational& r, Expr& rest) {
    if (x.is_rational()) {
        r = x.rational_value();
        rest = Expr::integer(0);
        return;
    }
    if (x.kind() == ExprKind::Sum && x.operands()[0].is_rational()) {
        const ExprVec& ts = x.operands();
        r = ts[0].rational_value();
        rest = Expr::sum(ExprVec(ts.begin() + 1, ts.end()));
        return;
    }
    r = BigRational(0);
    rest = x;
}

void push_kernel(KernelSet& ks, const Expr& base, long power) {
    if (power == 0) return;
    ks.push_back({base, power});
}

// classifies one power factor whose base uses var non-rationally or whose
// exponent is fractional/symbolic
void classify_power(const Expr& f, RatFun& coeff, KernelSet& ks, TermContext& ctx) {
    const Expr& b = f.base();
    BigRational r;
    Expr s;
    split_rational_part(f.exponent(), r, s);
    if (!s.is_zero()) push_kernel(ks, Expr::pow(b, s), 1);
    if (r.is_zero()) return;
    if (is_rational_in(b, ctx.var())) {
        // fold the integer part into the rational coefficient
        BigRational n(r.floor());
        BigRational frac = r - n;
        if (!n.is_zero()) coeff *= expr_to_ratfun(b, ctx).pow(n.to_long());
        if (!frac.is_zero())
            push_kernel(ks, Expr::pow(b, Expr::rational(frac)), 1);
    } else if (r.is_integer()) {
        push_kernel(ks, b, r.to_long());
    } else {
        Expr root =
            Expr::pow(b, Expr::rational(BigRational(1) / BigRational(r.den())));
        push_kernel(ks, root, r.num().get_si());
    }
}

void classify_factor(const Expr& f, RatFun& coeff, KernelSet& ks, TermContext& ctx) {
    if (!f.uses(ctx.var()) || is_rational_in(f, ctx.var())) {
        coeff *= expr_to_ratfun(f, ctx);
        return;
    }
    if (f.kind() == ExprKind::Power) {
        classify_power(f, coeff, ks, ctx);
        return;
    }
    push_kernel(ks, f, 1);
}

void normalize_kernels(KernelSet& ks) {
    std::sort(ks.begin(), ks.end(), [](const KernelFactor& a, const KernelFactor& b) {
        return a.base < b.base;
    });
    KernelSet out;
    for (const KernelFactor& k : ks) {
        if (!out.empty() && out.back().base == k.base) {
            out.back().power += k.power;
        } else {
            out.push_back(k);
        }
    }
    out.erase(std::remove_if(out.begin(), out.end(),
                             [](const KernelFactor& k) { return k.power == 0; }),
              out.end());
    ks = std::move(out);
}

}  // namespace

TermForm to_term_form(const Expr& e, TermContext& ctx, const Catalog& cat) {
    Expr ex = expand(family_reduce(e, cat));
    ExprVec terms = ex.kind() == ExprKind::Sum ? ex.operands() : ExprVec{ex};
    std::map<KernelSet, RatFun> merged;
    for (const Expr& t : terms) {
        if (t.is_zero()) continue;
        RatFun coeff(1);
        KernelSet ks;
        if (t.kind() == ExprKind::Product) {
            for (const Expr& f : t.operands()) classify_factor(f, coeff, ks, ctx);
        } else {
            classify_factor(t, coeff, ks, ctx);
        }
        normalize_kernels(ks);
        auto it = merged.find(ks);
        if (it == merged.end()) {
            merged.emplace(std::move(ks), std::move(coeff));
        } else {
            it->second += coeff;
        }
    }
    TermForm out;
    for (auto& [ks, coeff] : merged) {
        if (coeff.is_zero()) continue;
        out.push_back({std::move(coeff), ks});
    }
    return out;
}

Expr term_to_expr(const Term& t, const TermContext& ctx) {
    ExprVec fs{ctx.to_expr(t.coeff)};
    for (const KernelFactor& k : t.kernels)
        fs.push_back(Expr::pow(k.base, Expr::integer(k.power)));
    return Expr::product(std::move(fs));
}

Expr term_form_to_expr(const TermForm& tf, const TermContext& ctx) {
    ExprVec ts;
    for (const Term& t : tf) ts.push_back(term_to_expr(t, ctx));
    return Expr::sum(std::move(ts));
}

std::optional<RatFun> rationally_dependent(const Expr& t1, const Expr& t2,
                                           TermContext& ctx) {
    TermForm a = to_term_form(t1, ctx);
    TermForm b = to_term_form(t2, ctx);
    if (b.empty()) return std::nullopt;
    if (a.empty()) return RatFun(0);
    if (a.size() != b.size()) return std::nullopt;
    std::optional<RatFun> ratio;
    for (size_t i = 0; i < a.size(); ++i) {
        if (!(a[i].kernels == b[i].kernels)) return std::nullopt;
        RatFun r = a[i].coeff / b[i].coeff;
        if (!ratio) {
            ratio = r;
        } else if (!(*ratio - r).is_zero()) {
            return std::nullopt;
        }
    }
    return ratio;
}

namespace {

Expr replace_node(const Expr& e, const Expr& target, const Expr& repl) {
    if (e == target) return repl;
    switch (e.kind()) {
        case ExprKind::Sum:
        case ExprKind::Product:
        case ExprKind::Call: {
            ExprVec kids;
            bool changed = false;
            for (const Expr& k : e.operands()) {
                kids.push_back(replace_node(k, target, repl));
                changed = changed || kids.back() != k;
            }
            if (!changed) return e;
            if (e.kind() == ExprKind::Sum) return Expr::sum(std::move(kids));
            if (e.kind() == ExprKind::Product) return Expr::product(std::move(kids));
            return Expr::call(e.name(), std::move(kids));
        }
        case ExprKind::Power:
            return Expr::pow(replace_node(e.base(), target, repl),
                             replace_node(e.exponent(), target, repl));
        case ExprKind::Integral:
            return Expr::integral(replace_node(e.integrand(), target, repl), e.name(),
                                  replace_node(e.upper_limit(), target, repl));
        default: return e;
    }
}

struct FamilyCall {
    Expr node;
    const FunctionDef* def;
    Expr base;       // index argument minus its integer shift
    long shift;
    ExprVec rest;    // arguments after the index
};

void collect_family_calls(const Expr& e, const Catalog& cat, std::vector<FamilyCall>& out) {
    switch (e.kind()) {
        case ExprKind::Call: {
            for (const Expr& a : e.operands()) collect_family_calls(a, cat, out);
            const FunctionDef* def = cat.find(e.name());
            if (def && def->arity >= 2 && !e.operands().empty()) {
                ShiftedBase sb = split_integer_shift(e.operands()[0]);
                ExprVec rest(e.operands().begin() + 1, e.operands().end());
                out.push_back({e, def, sb.base, sb.shift, std::move(rest)});
            }
            return;
        }
        case ExprKind::Sum:
        case ExprKind::Product:
            for (const Expr& k : e.operands()) collect_family_calls(k, cat, out);
            return;
        case ExprKind::Power:
            collect_family_calls(e.base(), cat, out);
            collect_family_calls(e.exponent(), cat, out);
            return;
        case ExprKind::Integral:
            collect_family_calls(e.integrand(), cat, out);
            collect_family_calls(e.upper_limit(), cat, out);
            return;
        default: return;
    }
}

// F(nu) as given by the recurrence instantiated at index nu
Expr recurrence_down(const FamilyCall& c, const Expr& nu) {
    ExprVec terms;
    for (size_t i = 0; i < c.def->recurrence.size(); ++i) {
        ExprVec args{nu};
        for (const Expr& r : c.rest) args.push_back(r);
        Expr ri = instantiate(c.def->recurrence[i], args);
        ExprVec call_args{nu - Expr::integer(static_cast<long>(i) + 1)};
        for (const Expr& r : c.rest) call_args.push_back(r);
        terms.push_back(ri * Expr::call(c.def->name, std::move(call_args)));
    }
    return Expr::sum(std::move(terms));
}

// F(nu) solved from the recurrence instance at nu + m
Expr recurrence_up(const FamilyCall& c, const Expr& nu) {
    long m = static_cast<long>(c.def->recurrence.size());
    Expr top = nu + Expr::integer(m);
    ExprVec args{top};
    for (const Expr& r : c.rest) args.push_back(r);
    ExprVec call_args{top};
    for (const Expr& r : c.rest) call_args.push_back(r);
    Expr lhs = Expr::call(c.def->name, call_args);
    ExprVec terms{lhs};
    for (long i = 1; i < m; ++i) {
        Expr ri = instantiate(c.def->recurrence[i - 1], args);
        ExprVec ca{top - Expr::integer(i)};
        for (const Expr& r : c.rest) ca.push_back(r);
        terms.push_back(-(ri * Expr::call(c.def->name, std::move(ca))));
    }
    Expr rm = instantiate(c.def->recurrence[m - 1], args);
    return Expr::sum(std::move(terms)) / rm;
}

}  // namespace

Expr family_reduce(const Expr& e, const Catalog& cat) {
    Expr cur = e;
    for (int iter = 0; iter < 400; ++iter) {
        std::vector<FamilyCall> calls;
        collect_family_calls(cur, cat, calls);
        const FamilyCall* pick = nullptr;
        for (const FamilyCall& c : calls) {
            long m = static_cast<long>(c.def->recurrence.size());
            if (m == 0) {
                // calls of the same family at different shifts with no
                // recurrence registered cannot be reduced
                for (const FamilyCall& o : calls) {
                    if (&o != &c && o.def == c.def && o.base == c.base &&
                        o.shift != c.shift)
                        throw FpsError("expr", "missing-recurrence", c.def->name);
                }
                continue;
            }
            if (c.shift >= 0 || c.shift < -m) {
                pick = &c;
                break;
            }
        }
        if (!pick) return cur;
        Expr nu = pick->base + Expr::integer(pick->shift);
        Expr repl = pick->shift >= 0 ? recurrence_down(*pick, nu)
                                     : recurrence_up(*pick, nu);
        cur = replace_node(cur, pick->node, repl);
    }
    throw FpsError("expr", "family-reduction-diverged", e.to_string());
}

}  // namespace fps
