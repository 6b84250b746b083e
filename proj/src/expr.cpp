#include "fps/expr.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace fps {

struct Expr::Node {
    ExprKind kind;
    BigRational rat;  // Rational
    std::string name; // Const, Symbol, Call; Integral bound variable
    ExprVec kids;     // Sum/Product/Call operands; Power {base, exp}; Integral {integrand, upper}
};

Expr Expr::make(Node n) { return Expr(std::make_shared<const Node>(std::move(n))); }

Expr::Expr() : Expr(rational(BigRational(0))) {}

Expr Expr::rational(const BigRational& q) {
    Node n;
    n.kind = ExprKind::Rational;
    n.rat = q;
    return make(std::move(n));
}

Expr Expr::constant(const std::string& name) {
    Node n;
    n.kind = ExprKind::Const;
    n.name = name;
    return make(std::move(n));
}

Expr Expr::symbol(const std::string& name) {
    Node n;
    n.kind = ExprKind::Symbol;
    n.name = name;
    return make(std::move(n));
}

ExprKind Expr::kind() const { return p_->kind; }
const BigRational& Expr::rational_value() const { return p_->rat; }
const std::string& Expr::name() const { return p_->name; }
const ExprVec& Expr::operands() const { return p_->kids; }
const Expr& Expr::base() const { return p_->kids[0]; }
const Expr& Expr::exponent() const { return p_->kids[1]; }
const Expr& Expr::integrand() const { return p_->kids[0]; }
const Expr& Expr::upper_limit() const { return p_->kids[1]; }
const Expr& Expr::body() const { return p_->kids[0]; }

bool Expr::is_zero() const { return is_rational() && p_->rat.is_zero(); }
bool Expr::is_one() const { return is_rational() && p_->rat.is_one(); }
bool Expr::is_symbol(const std::string& name) const {
    return kind() == ExprKind::Symbol && p_->name == name;
}

static int kind_rank(ExprKind k) {
    switch (k) {
        case ExprKind::Rational: return 0;
        case ExprKind::Const: return 1;
        case ExprKind::Symbol: return 2;
        case ExprKind::Sum: return 3;
        case ExprKind::Product: return 4;
        case ExprKind::Power: return 5;
        case ExprKind::Call: return 6;
        case ExprKind::Integral: return 7;
        case ExprKind::ProductOver: return 8;
    }
    return 9;
}

// Compares by (base, exponent) view so that x < x^2 < y; bases of canonical
// powers are never powers themselves, which keeps the recursion well founded.
int Expr::compare(const Expr& a, const Expr& b) {
    if (a.p_ == b.p_) return 0;
    bool ap = a.kind() == ExprKind::Power, bp = b.kind() == ExprKind::Power;
    if (ap || bp) {
        const Expr& ab = ap ? a.base() : a;
        const Expr& bb = bp ? b.base() : b;
        if (int c = compare(ab, bb)) return c;
        Expr one = Expr::integer(1);
        const Expr& ae = ap ? a.exponent() : one;
        const Expr& be = bp ? b.exponent() : one;
        return compare(ae, be);
    }
    int ra = kind_rank(a.kind()), rb = kind_rank(b.kind());
    if (ra != rb) return ra < rb ? -1 : 1;
    switch (a.kind()) {
        case ExprKind::Rational: {
            if (a.p_->rat == b.p_->rat) return 0;
            return a.p_->rat < b.p_->rat ? -1 : 1;
        }
        case ExprKind::Const:
        case ExprKind::Symbol:
            return a.p_->name.compare(b.p_->name);
        case ExprKind::Call:
        case ExprKind::Integral:
        case ExprKind::ProductOver: {
            if (int c = a.p_->name.compare(b.p_->name)) return c;
            break;
        }
        default: break;
    }
    const ExprVec& ka = a.p_->kids;
    const ExprVec& kb = b.p_->kids;
    if (ka.size() != kb.size()) return ka.size() < kb.size() ? -1 : 1;
    for (size_t i = 0; i < ka.size(); ++i)
        if (int c = compare(ka[i], kb[i])) return c;
    return 0;
}

// Splits a canonical term into rational coefficient and the rest; the pure
// constant bucket gets rest == 1.
static void split_coeff(const Expr& t, BigRational& coeff, Expr& rest) {
    if (t.kind() == ExprKind::Rational) {
        coeff = t.rational_value();
        rest = Expr::integer(1);
        return;
    }
    if (t.kind() == ExprKind::Product && t.operands()[0].kind() == ExprKind::Rational) {
        const ExprVec& f = t.operands();
        coeff = f[0].rational_value();
        if (f.size() == 2) {
            rest = f[1];
        } else {
            rest = Expr::product(ExprVec(f.begin() + 1, f.end()));
        }
        return;
    }
    coeff = BigRational(1);
    rest = t;
}

Expr Expr::sum(ExprVec terms) {
    // flatten, then collect coefficients of identical non-rational parts
    std::map<Expr, BigRational> buckets;
    std::vector<Expr> order;
    auto add = [&](const Expr& t) {
        BigRational c;
        Expr rest;
        split_coeff(t, c, rest);
        auto it = buckets.find(rest);
        if (it == buckets.end()) {
            buckets.emplace(rest, c);
        } else {
            it->second += c;
        }
    };
    for (const Expr& t : terms) {
        if (t.kind() == ExprKind::Sum) {
            for (const Expr& s : t.operands()) add(s);
        } else {
            add(t);
        }
    }
    ExprVec out;
    BigRational constant(0);
    for (const auto& [rest, c] : buckets) {
        if (c.is_zero()) continue;
        if (rest.is_one()) {
            constant = c;
            continue;
        }
        if (c.is_one()) {
            out.push_back(rest);
        } else {
            ExprVec f{rational(c)};
            if (rest.kind() == ExprKind::Product) {
                for (const Expr& g : rest.operands()) f.push_back(g);
            } else {
                f.push_back(rest);
            }
            Node n;
            n.kind = ExprKind::Product;
            n.kids = std::move(f);
            out.push_back(make(std::move(n)));
        }
    }
    if (!constant.is_zero()) out.insert(out.begin(), rational(constant));
    if (out.empty()) return rational(BigRational(0));
    if (out.size() == 1) return out[0];
    Node n;
    n.kind = ExprKind::Sum;
    n.kids = std::move(out);
    return make(std::move(n));
}

Expr Expr::product(ExprVec factors) {
    BigRational coeff(1);
    std::map<Expr, ExprVec> expsums;  // base -> exponents to add
    std::vector<Expr> pending;
    for (const Expr& f : factors) pending.push_back(f);
    while (!pending.empty()) {
        Expr f = pending.back();
        pending.pop_back();
        switch (f.kind()) {
            case ExprKind::Rational: coeff *= f.rational_value(); break;
            case ExprKind::Product:
                for (const Expr& g : f.operands()) pending.push_back(g);
                break;
            case ExprKind::Power:
                expsums[f.base()].push_back(f.exponent());
                break;
            default: expsums[f].push_back(integer(1)); break;
        }
    }
    if (coeff.is_zero()) return rational(BigRational(0));
    ExprVec out;
    for (const auto& [base, exps] : expsums) {
        Expr rebuilt = pow(base, sum(exps));
        switch (rebuilt.kind()) {
            case ExprKind::Rational: coeff *= rebuilt.rational_value(); break;
            case ExprKind::Product:
                // e.g. pow(I, 3) = -I; one level deep by construction
                for (const Expr& g : rebuilt.operands()) {
                    if (g.kind() == ExprKind::Rational) {
                        coeff *= g.rational_value();
                    } else {
                        out.push_back(g);
                    }
                }
                break;
            default:
                if (!rebuilt.is_one()) out.push_back(rebuilt);
                break;
        }
        if (coeff.is_zero()) return rational(BigRational(0));
    }
    std::sort(out.begin(), out.end());
    if (out.empty()) return rational(coeff);
    if (out.size() == 1 && coeff.is_one()) return out[0];
    if (out.size() == 1 && out[0].kind() == ExprKind::Sum) {
        // rational coefficients distribute over a sole sum factor, keeping
        // c*(a+b) and c*a + c*b on one canonical form
        ExprVec terms;
        for (const Expr& t : out[0].operands())
            terms.push_back(product({rational(coeff), t}));
        return sum(std::move(terms));
    }
    if (!coeff.is_one()) out.insert(out.begin(), rational(coeff));
    Node n;
    n.kind = ExprKind::Product;
    n.kids = std::move(out);
    return make(std::move(n));
}

Expr Expr::pow(const Expr& b, const Expr& e) {
    if (e.is_zero()) return integer(1);  // includes formal 0^0 = 1
    if (e.is_one()) return b;
    if (b.is_one()) return integer(1);
    if (b.is_zero()) {
        if (e.is_rational()) {
            if (e.rational_value().sign() > 0) return integer(0);
            throw std::domain_error("0 raised to a nonpositive power");
        }
        // 0^k stays formal
    }
    if (b.is_rational() && e.is_rational()) {
        const BigRational& q = e.rational_value();
        if (q.is_integer()) return rational(b.rational_value().pow(q.to_long()));
        BigRational root;
        long den = q.den().get_si();
        if (den > 1 && BigRational::nth_root_exact(b.rational_value(), den, &root))
            return rational(root.pow(q.num().get_si()));
    }
    if (b.kind() == ExprKind::Const && b.name() == "I" && e.is_rational() &&
        e.rational_value().is_integer()) {
        long r = mpz_class(e.rational_value().num() % 4).get_si();
        if (r < 0) r += 4;
        switch (r) {
            case 0: return integer(1);
            case 1: return b;
            case 2: return integer(-1);
            default: return product({integer(-1), b});
        }
    }
    if (b.kind() == ExprKind::Power) {
        // formal Puiseux convention: exponents always combine
        return pow(b.base(), product({b.exponent(), e}));
    }
    if (b.kind() == ExprKind::Product) {
        ExprVec parts;
        for (const Expr& f : b.operands()) parts.push_back(pow(f, e));
        return product(std::move(parts));
    }
    Node n;
    n.kind = ExprKind::Power;
    n.kids = {b, e};
    return make(std::move(n));
}

Expr Expr::call(const std::string& fn, ExprVec args) {
    Node n;
    n.kind = ExprKind::Call;
    n.name = fn;
    n.kids = std::move(args);
    return make(std::move(n));
}

Expr Expr::integral(const Expr& integrand, const std::string& var, const Expr& upper) {
    Node n;
    n.kind = ExprKind::Integral;
    n.name = var;
    n.kids = {integrand, upper};
    return make(std::move(n));
}

Expr Expr::product_over(const Expr& body, const std::string& var, const Expr& upper) {
    if (upper.is_rational() && upper.rational_value().is_integer()) {
        const BigRational& u = upper.rational_value();
        if (u.sign() < 0) return integer(1);
        if (u <= BigRational(64)) {
            ExprVec fs;
            for (long j = 0; j <= u.to_long(); ++j)
                fs.push_back(body.subst(var, integer(j)));
            return product(std::move(fs));
        }
    }
    if (!body.uses(var)) return pow(body, upper + integer(1));
    Node n;
    n.kind = ExprKind::ProductOver;
    n.name = var;
    n.kids = {body, upper};
    return make(std::move(n));
}

bool Expr::uses(const std::string& var) const {
    switch (kind()) {
        case ExprKind::Rational:
        case ExprKind::Const: return false;
        case ExprKind::Symbol: return p_->name == var;
        case ExprKind::Integral:
        case ExprKind::ProductOver:
            if (upper_limit().uses(var)) return true;
            return p_->name != var && integrand().uses(var);
        default:
            for (const Expr& k : p_->kids)
                if (k.uses(var)) return true;
            return false;
    }
}

Expr Expr::subst(const std::string& sym, const Expr& repl) const {
    switch (kind()) {
        case ExprKind::Rational:
        case ExprKind::Const: return *this;
        case ExprKind::Symbol: return p_->name == sym ? repl : *this;
        case ExprKind::Sum:
        case ExprKind::Product:
        case ExprKind::Call: {
            ExprVec kids;
            kids.reserve(p_->kids.size());
            bool changed = false;
            for (const Expr& k : p_->kids) {
                kids.push_back(k.subst(sym, repl));
                changed = changed || kids.back().p_ != k.p_;
            }
            if (!changed) return *this;
            if (kind() == ExprKind::Sum) return sum(std::move(kids));
            if (kind() == ExprKind::Product) return product(std::move(kids));
            return call(p_->name, std::move(kids));
        }
        case ExprKind::Power:
            return pow(base().subst(sym, repl), exponent().subst(sym, repl));
        case ExprKind::Integral:
        case ExprKind::ProductOver: {
            Expr up = upper_limit().subst(sym, repl);
            Expr in = p_->name == sym ? integrand() : integrand().subst(sym, repl);
            if (kind() == ExprKind::Integral) return integral(in, p_->name, up);
            return product_over(in, p_->name, up);
        }
    }
    return *this;
}

Expr operator-(const Expr& a, const Expr& b) {
    return Expr::sum({a, Expr::product({Expr::integer(-1), b})});
}

Expr operator/(const Expr& a, const Expr& b) {
    return Expr::product({a, Expr::pow(b, Expr::integer(-1))});
}

Expr Expr::operator-() const { return product({integer(-1), *this}); }

namespace {

// rendering precedence: sum lowest, then product, power, atom
enum Prec { PSum = 1, PProd = 2, PPow = 3, PAtom = 4 };

void render(const Expr& e, std::ostream& os, int parent_prec);

bool is_atomic_for_factorial(const Expr& e) {
    return e.kind() == ExprKind::Symbol ||
           (e.is_rational() && e.rational_value().is_integer() &&
            e.rational_value().sign() >= 0);
}

// Splits a product's factors into numerator and denominator parts so that
// negative rational exponents render with '/'.
void render_product(const Expr& e, std::ostream& os, int parent_prec) {
    BigRational coeff(1);
    ExprVec num, den;
    for (const Expr& f : e.operands()) {
        if (f.kind() == ExprKind::Rational) {
            coeff = f.rational_value();
        } else if (f.kind() == ExprKind::Power && f.exponent().is_rational() &&
                   f.exponent().rational_value().sign() < 0) {
            den.push_back(Expr::pow(f.base(), -f.exponent()));
        } else {
            num.push_back(f);
        }
    }
    bool neg = coeff.sign() < 0;
    BigRational acoeff = neg ? -coeff : coeff;
    bool need_parens = parent_prec > PProd || (neg && parent_prec == PProd);
    if (need_parens) os << '(';
    if (neg) os << '-';
    std::ostringstream nums, dens;
    bool first = true;
    if (acoeff.num() != 1 || num.empty()) {
        nums << acoeff.num().get_str();
        first = false;
    }
    for (const Expr& f : num) {
        if (!first) nums << '*';
        render(f, nums, PProd);
        first = false;
    }
    first = true;
    std::size_t den_count = den.size() + (acoeff.den() != 1 ? 1 : 0);
    if (acoeff.den() != 1) {
        dens << acoeff.den().get_str();
        first = false;
    }
    for (const Expr& f : den) {
        if (!first) dens << '*';
        render(f, dens, den_count > 1 ? PSum : PPow);
        first = false;
    }
    os << nums.str();
    if (den_count > 0) {
        os << '/';
        if (den_count > 1) os << '(';
        os << dens.str();
        if (den_count > 1) os << ')';
    }
    if (need_parens) os << ')';
}

void render(const Expr& e, std::ostream& os, int parent_prec) {
    switch (e.kind()) {
        case ExprKind::Rational: {
            const BigRational& q = e.rational_value();
            bool need = (q.sign() < 0 && parent_prec >= PProd) ||
                        (q.den() != 1 && parent_prec >= PPow);
            if (need) os << '(';
            os << q.to_string();
            if (need) os << ')';
            return;
        }
        case ExprKind::Const:
        case ExprKind::Symbol: os << e.name(); return;
        case ExprKind::Sum: {
            bool need = parent_prec > PSum;
            if (need) os << '(';
            bool first = true;
            // display order: reverse of the canonical operand order, so
            // polynomials read descending with the constant last
            ExprVec ordered(e.operands().rbegin(), e.operands().rend());
            for (const Expr& t : ordered) {
                BigRational c(1);
                Expr rest;
                split_coeff(t, c, rest);
                if (!first) os << (c.sign() < 0 ? " - " : " + ");
                if (first && c.sign() < 0) os << '-';
                BigRational ac = c.sign() < 0 ? -c : c;
                if (rest.is_one()) {
                    os << ac.to_string();
                } else if (ac.is_one()) {
                    render(rest, os, PSum + 1);
                } else {
                    ExprVec f{Expr::rational(ac)};
                    if (rest.kind() == ExprKind::Product) {
                        for (const Expr& g : rest.operands()) f.push_back(g);
                    } else {
                        f.push_back(rest);
                    }
                    render_product(Expr::product(std::move(f)), os, PSum + 1);
                }
                first = false;
            }
            if (need) os << ')';
            return;
        }
        case ExprKind::Product: render_product(e, os, parent_prec); return;
        case ExprKind::Power: {
            const Expr& x = e.exponent();
            if (x.is_rational() && x.rational_value().is_integer() &&
                x.rational_value().sign() < 0) {
                // bare reciprocal: 1/x, 1/x^2, 1/(x + 1)
                bool need = parent_prec > PProd;
                if (need) os << '(';
                os << "1/";
                Expr flipped = Expr::pow(e.base(), Expr::rational(-x.rational_value()));
                render(flipped, os, PPow + 1);
                if (need) os << ')';
                return;
            }
            bool need = parent_prec > PPow;
            if (need) os << '(';
            render(e.base(), os, PPow + 1);
            os << '^';
            if (x.is_rational() && x.rational_value().is_integer() &&
                x.rational_value().sign() > 0) {
                os << x.rational_value().to_string();
            } else if (x.kind() == ExprKind::Symbol || x.kind() == ExprKind::Const) {
                os << x.name();
            } else {
                os << '(';
                render(x, os, PSum);
                os << ')';
            }
            if (need) os << ')';
            return;
        }
        case ExprKind::Call: {
            if (e.name() == "factorial" && e.operands().size() == 1) {
                const Expr& a = e.operands()[0];
                if (is_atomic_for_factorial(a)) {
                    render(a, os, PAtom);
                } else {
                    os << '(';
                    render(a, os, PSum);
                    os << ')';
                }
                os << '!';
                return;
            }
            os << e.name() << '(';
            bool first = true;
            for (const Expr& a : e.operands()) {
                if (!first) os << ", ";
                render(a, os, PSum);
                first = false;
            }
            os << ')';
            return;
        }
        case ExprKind::Integral: {
            os << "Int(";
            render(e.integrand(), os, PSum);
            os << ", " << e.name() << " = 0..";
            render(e.upper_limit(), os, PSum);
            os << ')';
            return;
        }
        case ExprKind::ProductOver: {
            os << "Product(";
            render(e.body(), os, PSum);
            os << ", " << e.name() << " = 0..";
            render(e.upper_limit(), os, PSum);
            os << ')';
            return;
        }
    }
}

}  // namespace

std::string Expr::to_string() const {
    std::ostringstream os;
    render(*this, os, PSum);
    return os.str();
}

ShiftedBase split_integer_shift(const Expr& e) {
    if (e.is_rational() && e.rational_value().is_integer())
        return {Expr::integer(0), e.rational_value().to_long()};
    if (e.kind() == ExprKind::Sum) {
        const ExprVec& ts = e.operands();
        if (ts[0].is_rational() && ts[0].rational_value().is_integer()) {
            long shift = ts[0].rational_value().to_long();
            Expr base = Expr::sum(ExprVec(ts.begin() + 1, ts.end()));
            return {base, shift};
        }
    }
    return {e, 0};
}

}  // namespace fps
