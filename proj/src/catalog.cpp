#include "fps/catalog.hpp"

namespace fps {

namespace {

Expr ph(int i) { return Expr::symbol(placeholder(i)); }

Expr half_pi_times(const Expr& e) {
    return Expr::product({Expr::rational(BigRational(1, 2)), Expr::constant("Pi"), e});
}

FunctionDef unary(const std::string& name, Expr partial) {
    FunctionDef d;
    d.name = name;
    d.arity = 1;
    d.partials = {std::move(partial)};
    return d;
}

void value_at(FunctionDef& d, long point, SpecialValue v) {
    d.point_values[BigRational(point)].two_sided = std::move(v);
}

}  // namespace

Catalog::Catalog() {
    Expr u = ph(1);
    Expr one = Expr::integer(1);
    Expr pi = Expr::constant("Pi");

    {
        FunctionDef d = unary("exp", Expr::call("exp", {u}));
        value_at(d, 0, SpecialValue::finite(one));
        d.at_pos_inf = SpecialValue::pos_inf();
        d.at_neg_inf = SpecialValue::finite(Expr::integer(0));
        register_function(d);
    }
    {
        FunctionDef d = unary("ln", Expr::pow(u, Expr::integer(-1)));
        value_at(d, 1, SpecialValue::finite(Expr::integer(0)));
        d.point_values[BigRational(0)].from_right = SpecialValue::neg_inf();
        d.point_values[BigRational(0)].from_left = SpecialValue::undefined();
        d.at_pos_inf = SpecialValue::pos_inf();
        d.at_neg_inf = SpecialValue::undefined();
        d.exp_form = u;
        register_function(d);
    }
    {
        FunctionDef d = unary("sin", Expr::call("cos", {u}));
        value_at(d, 0, SpecialValue::finite(Expr::integer(0)));
        d.bounded = true;
        d.at_pos_inf = SpecialValue::undefined();
        d.at_neg_inf = SpecialValue::undefined();
        register_function(d);
    }
    {
        FunctionDef d = unary("cos", -Expr::call("sin", {u}));
        value_at(d, 0, SpecialValue::finite(one));
        d.bounded = true;
        d.at_pos_inf = SpecialValue::undefined();
        d.at_neg_inf = SpecialValue::undefined();
        register_function(d);
    }
    {
        FunctionDef d =
            unary("tan", one + Expr::pow(Expr::call("tan", {u}), Expr::integer(2)));
        value_at(d, 0, SpecialValue::finite(Expr::integer(0)));
        register_function(d);
    }
    {
        // 1/sqrt(1 - u^2)
        Expr dr = Expr::pow(one - Expr::pow(u, Expr::integer(2)),
                            Expr::rational(BigRational(-1, 2)));
        FunctionDef d = unary("arcsin", dr);
        value_at(d, 0, SpecialValue::finite(Expr::integer(0)));
        value_at(d, 1, SpecialValue::finite(half_pi_times(one)));
        value_at(d, -1, SpecialValue::finite(-half_pi_times(one)));
        register_function(d);

        FunctionDef dc = unary("arccos", -dr);
        value_at(dc, 0, SpecialValue::finite(half_pi_times(one)));
        value_at(dc, 1, SpecialValue::finite(Expr::integer(0)));
        value_at(dc, -1, SpecialValue::finite(pi));
        register_function(dc);
    }
    {
        FunctionDef d = unary(
            "arctan", Expr::pow(one + Expr::pow(u, Expr::integer(2)), Expr::integer(-1)));
        value_at(d, 0, SpecialValue::finite(Expr::integer(0)));
        value_at(d, 1, SpecialValue::finite(Expr::product(
                           {Expr::rational(BigRational(1, 4)), pi})));
        d.bounded = true;
        d.at_pos_inf = SpecialValue::finite(half_pi_times(one));
        d.at_neg_inf = SpecialValue::finite(-half_pi_times(one));
        register_function(d);
    }
    {
        FunctionDef d = unary("sinh", Expr::call("cosh", {u}));
        value_at(d, 0, SpecialValue::finite(Expr::integer(0)));
        d.at_pos_inf = SpecialValue::pos_inf();
        d.at_neg_inf = SpecialValue::neg_inf();
        register_function(d);
    }
    {
        FunctionDef d = unary("cosh", Expr::call("sinh", {u}));
        value_at(d, 0, SpecialValue::finite(one));
        d.at_pos_inf = SpecialValue::pos_inf();
        d.at_neg_inf = SpecialValue::pos_inf();
        register_function(d);
    }
    {
        // 1/sqrt(u^2 - 1), real for u > 1
        FunctionDef d = unary("arccosh",
                              Expr::pow(Expr::pow(u, Expr::integer(2)) - one,
                                        Expr::rational(BigRational(-1, 2))));
        value_at(d, 1, SpecialValue::finite(Expr::integer(0)));
        d.at_pos_inf = SpecialValue::pos_inf();
        d.exp_form = u + Expr::pow(Expr::pow(u, Expr::integer(2)) - one,
                                   Expr::rational(BigRational(1, 2)));
        register_function(d);
    }
    {
        // -1/(u*sqrt(1 - u^2))
        Expr dr = -Expr::product({Expr::pow(u, Expr::integer(-1)),
                                  Expr::pow(one - Expr::pow(u, Expr::integer(2)),
                                            Expr::rational(BigRational(-1, 2)))});
        FunctionDef d = unary("arcsech", dr);
        value_at(d, 1, SpecialValue::finite(Expr::integer(0)));
        d.point_values[BigRational(0)].from_right = SpecialValue::pos_inf();
        d.exp_form = Expr::pow(u, Expr::integer(-1)) *
                     (one + Expr::pow(one - Expr::pow(u, Expr::integer(2)),
                                      Expr::rational(BigRational(1, 2))));
        register_function(d);
    }
    {
        // 2/sqrt(Pi) * exp(-u^2)
        Expr dr = Expr::product(
            {Expr::integer(2), Expr::pow(pi, Expr::rational(BigRational(-1, 2))),
             Expr::call("exp", {-Expr::pow(u, Expr::integer(2))})});
        FunctionDef d = unary("erf", dr);
        value_at(d, 0, SpecialValue::finite(Expr::integer(0)));
        d.bounded = true;
        d.at_pos_inf = SpecialValue::finite(one);
        d.at_neg_inf = SpecialValue::finite(Expr::integer(-1));
        register_function(d);
    }
    {
        // dilog(u) = Int(ln(t)/(1-t), t = 1..u)
        Expr dr = Expr::product(
            {Expr::call("ln", {u}), Expr::pow(one - u, Expr::integer(-1))});
        FunctionDef d = unary("dilog", dr);
        value_at(d, 1, SpecialValue::finite(Expr::integer(0)));
        value_at(d, 0, SpecialValue::finite(Expr::product(
                           {Expr::rational(BigRational(1, 6)),
                            Expr::pow(pi, Expr::integer(2))})));
        register_function(d);
    }
    {
        FunctionDef d = unary("newAi", Expr::call("newAiPrime", {u}));
        register_function(d);
        FunctionDef dp = unary("newAiPrime", u * Expr::call("newAi", {u}));
        register_function(dp);
    }

    // function families: two arguments (index n, point x)
    Expr n = ph(1);
    Expr x = ph(2);
    {
        FunctionDef d;
        d.name = "Fibonacci";
        d.arity = 2;
        Expr num = (n - one) * x * Expr::call("Fibonacci", {n, x}) +
                   Expr::integer(2) * n * Expr::call("Fibonacci", {n - one, x});
        Expr den = Expr::pow(x, Expr::integer(2)) + Expr::integer(4);
        d.partials = {std::nullopt, num / den};
        d.recurrence = {x, one};
        value_at(d, 0, SpecialValue::finite(Expr::pow(
                           Expr::call("sin", {half_pi_times(n)}), Expr::integer(2))));
        register_function(d);
    }
    {
        FunctionDef d;
        d.name = "ChebyshevT";
        d.arity = 2;
        Expr num = n * (Expr::call("ChebyshevT", {n - one, x}) -
                        x * Expr::call("ChebyshevT", {n, x}));
        Expr den = one - Expr::pow(x, Expr::integer(2));
        d.partials = {std::nullopt, num / den};
        d.recurrence = {Expr::integer(2) * x, Expr::integer(-1)};
        value_at(d, 0, SpecialValue::finite(Expr::call("cos", {half_pi_times(n)})));
        register_function(d);
    }
    {
        FunctionDef d;
        d.name = "HermiteH";
        d.arity = 2;
        d.partials = {std::nullopt,
                      Expr::integer(2) * n * Expr::call("HermiteH", {n - one, x})};
        d.recurrence = {Expr::integer(2) * x, Expr::integer(-2) * (n - one)};
        // cos(n*Pi/2) * n! / (n/2)!; the cosine kills the odd-n branch before
        // the half-integer factorial is ever evaluated
        value_at(d, 0,
                 SpecialValue::finite(Expr::product(
                     {Expr::call("cos", {half_pi_times(n)}), Expr::call("factorial", {n}),
                      Expr::pow(Expr::call("factorial",
                                           {Expr::product({Expr::rational(BigRational(1, 2)), n})}),
                                Expr::integer(-1))})));
        register_function(d);
    }
}

const FunctionDef* Catalog::find(const std::string& name) const {
    auto it = defs_.find(name);
    return it == defs_.end() ? nullptr : &it->second;
}

const FunctionDef& Catalog::at(const std::string& name) const {
    const FunctionDef* d = find(name);
    if (!d) throw FpsError("expr", "unknown-function", name);
    return *d;
}

void Catalog::register_function(FunctionDef def) {
    defs_[def.name] = std::move(def);
}

bool Catalog::is_family(const std::string& name) const {
    const FunctionDef* d = find(name);
    return d && d->is_family();
}

Catalog& default_catalog() {
    static Catalog cat;
    return cat;
}

Expr instantiate(const Expr& rule_template, const ExprVec& args) {
    Expr e = rule_template;
    for (size_t i = 0; i < args.size(); ++i)
        e = e.subst(placeholder(static_cast<int>(i) + 1), args[i]);
    return e;
}

std::optional<SpecialValue> lookup_value(const FunctionDef& def, const ExprVec& args,
                                         const BigRational& point, Approach approach) {
    auto it = def.point_values.find(point);
    if (it == def.point_values.end()) return std::nullopt;
    const FunctionDef::DirectionalValue& dv = it->second;
    std::optional<SpecialValue> v;
    switch (approach) {
        case Approach::TwoSided: v = dv.two_sided; break;
        case Approach::FromRight: v = dv.from_right ? dv.from_right : dv.two_sided; break;
        case Approach::FromLeft: v = dv.from_left ? dv.from_left : dv.two_sided; break;
    }
    if (!v) return std::nullopt;
    if (v->is_finite()) return SpecialValue::finite(instantiate(v->value, args));
    return v;
}

std::optional<SpecialValue> lookup_value_inf(const FunctionDef& def, bool positive) {
    return positive ? def.at_pos_inf : def.at_neg_inf;
}

Expr differentiate(const Expr& e, const std::string& var, const Catalog& cat) {
    switch (e.kind()) {
        case ExprKind::Rational:
        case ExprKind::Const: return Expr::integer(0);
        case ExprKind::Symbol: return Expr::integer(e.name() == var ? 1 : 0);
        case ExprKind::Sum: {
            ExprVec parts;
            for (const Expr& t : e.operands()) parts.push_back(differentiate(t, var, cat));
            return Expr::sum(std::move(parts));
        }
        case ExprKind::Product: {
            const ExprVec& fs = e.operands();
            ExprVec parts;
            for (size_t i = 0; i < fs.size(); ++i) {
                Expr di = differentiate(fs[i], var, cat);
                if (di.is_zero()) continue;
                ExprVec term{di};
                for (size_t j = 0; j < fs.size(); ++j)
                    if (j != i) term.push_back(fs[j]);
                parts.push_back(Expr::product(std::move(term)));
            }
            return Expr::sum(std::move(parts));
        }
        case ExprKind::Power: {
            const Expr& b = e.base();
            const Expr& x = e.exponent();
            Expr db = differentiate(b, var, cat);
            Expr dx = differentiate(x, var, cat);
            ExprVec parts;
            if (!db.is_zero())
                parts.push_back(
                    Expr::product({x, Expr::pow(b, x - Expr::integer(1)), db}));
            if (!dx.is_zero())
                parts.push_back(Expr::product({e, dx, Expr::call("ln", {b})}));
            return Expr::sum(std::move(parts));
        }
        case ExprKind::Call: {
            const FunctionDef& def = cat.at(e.name());
            const ExprVec& args = e.operands();
            if (static_cast<int>(args.size()) != def.arity)
                throw FpsError("expr", "arity-mismatch",
                               e.name() + " expects " + std::to_string(def.arity) +
                                   " arguments");
            ExprVec parts;
            for (size_t i = 0; i < args.size(); ++i) {
                Expr di = differentiate(args[i], var, cat);
                if (di.is_zero()) continue;
                if (!def.partials[i])
                    throw FpsError("expr", "unsupported-derivative",
                                   e.name() + " in argument " + std::to_string(i + 1));
                parts.push_back(Expr::product({instantiate(*def.partials[i], args), di}));
            }
            return Expr::sum(std::move(parts));
        }
        case ExprKind::Integral: {
            Expr du = differentiate(e.upper_limit(), var, cat);
            if (du.is_zero()) return Expr::integer(0);
            if (e.name() != var && e.integrand().uses(var))
                throw FpsError("expr", "unsupported-derivative",
                               "integrand depends on the outer variable");
            Expr at_upper = e.integrand().subst(e.name(), e.upper_limit());
            return Expr::product({at_upper, du});
        }
        case ExprKind::ProductOver:
            if (!e.uses(var)) return Expr::integer(0);
            throw FpsError("expr", "unsupported-derivative", "bound product");
    }
    return Expr::integer(0);
}

}  // namespace fps
