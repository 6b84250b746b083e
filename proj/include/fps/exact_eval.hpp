#pragma once

#include "fps/expr.hpp"

namespace fps {

// Folds the inert combinatorial nodes (factorial, pochhammer, binomial, bound
// products) whose arguments are concrete rationals into exact values. Other
// calls pass through untouched, so symbolic prefactors like exp(Pi/2) survive.
// Throws FpsError when a factorial or pochhammer argument is out of domain.
Expr fold_formula(const Expr& e);

// Exact value of a coefficient formula at integer index k.
Expr eval_formula(const Expr& formula, const std::string& index, long k);

}  // namespace fps
