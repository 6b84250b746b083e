#pragma once

#include "fps/error.hpp"
#include "fps/expr.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fps {

enum class ValueKind { Finite, PosInf, NegInf, Undefined };

// A function value at a special point: finite (with an exact Expr), a signed
// infinity, or provably undefined (e.g. sin at infinity).
struct SpecialValue {
    ValueKind kind = ValueKind::Undefined;
    Expr value;

    static SpecialValue finite(Expr e) { return {ValueKind::Finite, std::move(e)}; }
    static SpecialValue pos_inf() { return {ValueKind::PosInf, Expr()}; }
    static SpecialValue neg_inf() { return {ValueKind::NegInf, Expr()}; }
    static SpecialValue undefined() { return {ValueKind::Undefined, Expr()}; }
    bool is_finite() const { return kind == ValueKind::Finite; }
};

enum class Approach { TwoSided, FromRight, FromLeft };

// Rule templates reference arguments by placeholder: @1 is the first argument
// and so on. For families the first argument is the symbolic index.
struct FunctionDef {
    std::string name;
    int arity = 1;

    // partial derivative per argument; absent = differentiation unsupported
    // in that slot (e.g. the index of a family)
    std::vector<std::optional<Expr>> partials;

    struct DirectionalValue {
        std::optional<SpecialValue> two_sided, from_right, from_left;
    };
    // values when the last argument approaches a rational point / infinity;
    // templates may reference the remaining arguments
    std::map<BigRational, DirectionalValue> point_values;
    std::optional<SpecialValue> at_pos_inf, at_neg_inf;

    // family recurrence F(@1, ...) = sum_i recurrence[i] * F(@1 - 1 - i, ...)
    std::vector<Expr> recurrence;
    bool is_family() const { return !recurrence.empty(); }

    // defined on all of R with image inside a fixed bounded set; lets limits
    // conclude f(divergent or oscillating argument) stays bounded
    bool bounded = false;

    // template for exp(f(@1)) when that is an explicit algebraic expression,
    // e.g. exp(arccosh(u)) = u + sqrt(u^2 - 1); lets limits trade a divergent
    // log-scale sum for a product with a finite limit
    std::optional<Expr> exp_form;
};

class Catalog {
public:
    Catalog();  // populated with the built-ins

    const FunctionDef* find(const std::string& name) const;
    const FunctionDef& at(const std::string& name) const;  // throws FpsError
    void register_function(FunctionDef def);                // last wins
    bool is_family(const std::string& name) const;

private:
    std::map<std::string, FunctionDef> defs_;
};

// Shared mutable instance; runtime registration must precede concurrent use.
Catalog& default_catalog();

// Substitutes @1..@n placeholders with the given arguments.
Expr instantiate(const Expr& rule_template, const ExprVec& args);

// Value of def(args) as the last argument approaches `point` / an infinity.
// nullopt means the catalog has no entry (not the same as Undefined).
std::optional<SpecialValue> lookup_value(const FunctionDef& def, const ExprVec& args,
                                         const BigRational& point, Approach approach);
std::optional<SpecialValue> lookup_value_inf(const FunctionDef& def, bool positive);

// d e / d var with chain rule through catalog partials. Throws FpsError
// (stage "expr") when a needed partial is not registered.
Expr differentiate(const Expr& e, const std::string& var,
                   const Catalog& cat = default_catalog());

}  // namespace fps
