#pragma once

#include "fps/catalog.hpp"
#include "fps/expr.hpp"
#include "fps/ratfun.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fps {

// One kernel factor: a canonicalized non-rational base (sin(x), exp(x),
// (1-x^2)^(1/2), x^a, ...) with an integer multiplicity.
struct KernelFactor {
    Expr base;
    long power = 1;
};

// Sorted by base, no repeated bases, no zero powers.
using KernelSet = std::vector<KernelFactor>;

int compare(const KernelSet& a, const KernelSet& b);
bool operator==(const KernelSet& a, const KernelSet& b);
bool operator<(const KernelSet& a, const KernelSet& b);
std::string kernel_set_to_string(const KernelSet& k);

// coeff * product of kernels, coeff in Q(params, atoms)(var)
struct Term {
    RatFun coeff;
    KernelSet kernels;
};

using TermForm = std::vector<Term>;

// Interns variable-free non-rational atoms (Pi, I, ln(2), 2^k, ...) as fresh
// symbol names so RatFun can treat them as transcendental parameters. Plain
// parameter symbols intern under their own name.
class TermContext {
public:
    explicit TermContext(std::string var) : var_(std::move(var)) {}

    const std::string& var() const { return var_; }
    std::string intern(const Expr& atom);
    Expr to_expr(const MultiPoly& p) const;
    Expr to_expr(const RatFun& r) const;

private:
    std::string var_;
    std::map<Expr, std::string> names_;
    std::map<std::string, Expr> atoms_;
    int next_ = 0;
};

// Distributes products over sums and expands small positive integer powers of
// sums; leaves function arguments untouched.
Expr expand(const Expr& e);

// Full decomposition into rationally-collected kernel terms. Terms with equal
// kernel sets are merged; the zero expression gives an empty form.
TermForm to_term_form(const Expr& e, TermContext& ctx, const Catalog& cat = default_catalog());

Expr term_to_expr(const Term& t, const TermContext& ctx);
Expr term_form_to_expr(const TermForm& tf, const TermContext& ctx);

// Exact quotient t1/t2 in Q(params)(var) if the kernels cancel completely;
// nullopt reports rational independence (also for identically zero t2).
std::optional<RatFun> rationally_dependent(const Expr& t1, const Expr& t2,
                                           TermContext& ctx);

// Rewrites every family application F(base + s, ...) via the registered
// recurrence until only the shifts base-1 .. base-m remain.
Expr family_reduce(const Expr& e, const Catalog& cat = default_catalog());

}  // namespace fps
