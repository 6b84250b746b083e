#pragma once

#include <gmpxx.h>

#include <map>
#include <string>

#include "fps/expr.hpp"

namespace fps {

// Floating value with a rigorous absolute error bound: |true - v| <= err.
// Bounds are conservative; callers that need a tighter answer re-evaluate at
// a higher precision instead of trusting the last bits.
struct NumVal {
    mpf_class v;
    mpf_class err;
};

NumVal num_from_rational(const BigRational& q, long prec_bits);
NumVal num_pi(long prec_bits);

// Evaluates a closed expression over the reals. Symbols resolve through env;
// an unbound symbol is an error. Supported calls: the catalog functions with
// real series or point behaviour, factorial/binomial/pochhammer on integer
// arguments, the polynomial families at concrete indices, and inert integrals
// (by adaptive quadrature).
// errors: "free-parameter", "nonreal", "domain", "unsupported-function",
// "precision" (interval too wide to decide a branch; retry at higher prec_bits)
NumVal num_eval(const Expr& e, const std::map<std::string, NumVal>& env, long prec_bits);

// Sign of a variable-free real expression, escalating precision 128..1024
// bits until the interval separates from zero. Returns 0 only when the value
// keeps collapsing into an error bound below 2^-400, which we take as an
// exact cancellation. Throws "sign-undecided" otherwise.
int robust_sign(const Expr& e);

}  // namespace fps
