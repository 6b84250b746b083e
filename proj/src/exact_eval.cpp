#include "fps/exact_eval.hpp"

#include <optional>

#include "fps/error.hpp"
#include "fps/rational.hpp"

namespace fps {

namespace {

[[noreturn]] void fail(const std::string& code, const std::string& detail) {
    throw FpsError("series-model", code, detail);
}

std::optional<Expr> fold_call(const std::string& fn, const ExprVec& args) {
    if (fn == "factorial" && args.size() == 1 && args[0].is_rational()) {
        const BigRational& q = args[0].rational_value();
        if (!q.is_integer() || q.sign() < 0)
            fail("invalid-formula", "factorial of " + q.to_string());
        return Expr::rational(BigRational(factorial_int((unsigned long)q.to_long())));
    }
    if (fn == "pochhammer" && args.size() == 2 && args[0].is_rational() &&
        args[1].is_rational()) {
        const BigRational& count = args[1].rational_value();
        if (!count.is_integer() || count.sign() < 0)
            fail("invalid-formula", "pochhammer count " + count.to_string());
        return Expr::rational(
            pochhammer(args[0].rational_value(), (unsigned long)count.to_long()));
    }
    if (fn == "binomial" && args.size() == 2 && args[0].is_rational() &&
        args[1].is_rational()) {
        const BigRational& kq = args[1].rational_value();
        if (!kq.is_integer()) fail("invalid-formula", "binomial count " + kq.to_string());
        long k = kq.to_long();
        if (k < 0) return Expr::integer(0);
        // top(top-1)...(top-k+1)/k!, exact for any rational top
        BigRational top = args[0].rational_value();
        BigRational rising = pochhammer(top - BigRational(k - 1), (unsigned long)k);
        return Expr::rational(rising / BigRational(factorial_int((unsigned long)k)));
    }
    return std::nullopt;
}

}  // namespace

Expr fold_formula(const Expr& e) {
    switch (e.kind()) {
        case ExprKind::Sum:
        case ExprKind::Product: {
            ExprVec kids;
            kids.reserve(e.operands().size());
            for (const Expr& k : e.operands()) kids.push_back(fold_formula(k));
            return e.kind() == ExprKind::Sum ? Expr::sum(std::move(kids))
                                             : Expr::product(std::move(kids));
        }
        case ExprKind::Power:
            return Expr::pow(fold_formula(e.base()), fold_formula(e.exponent()));
        case ExprKind::Call: {
            ExprVec kids;
            kids.reserve(e.operands().size());
            for (const Expr& k : e.operands()) kids.push_back(fold_formula(k));
            if (auto v = fold_call(e.name(), kids)) return *v;
            return Expr::call(e.name(), std::move(kids));
        }
        case ExprKind::ProductOver: {
            Expr up = fold_formula(e.upper_limit());
            if (up.is_rational() && up.rational_value().is_integer()) {
                // the constructor folds small bounds itself; big ones loop here
                const BigRational& u = up.rational_value();
                if (u.sign() < 0) return Expr::integer(1);
                Expr acc = Expr::integer(1);
                for (long j = 0; j <= u.to_long(); ++j)
                    acc = acc * fold_formula(e.body().subst(e.name(), Expr::integer(j)));
                return acc;
            }
            return Expr::product_over(fold_formula(e.body()), e.name(), up);
        }
        default: return e;
    }
}

Expr eval_formula(const Expr& formula, const std::string& index, long k) {
    return fold_formula(formula.subst(index, Expr::integer(k)));
}

}  // namespace fps
