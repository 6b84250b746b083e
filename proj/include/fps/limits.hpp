#pragma once

#include "fps/catalog.hpp"
#include "fps/expr.hpp"

namespace fps {

enum class LimitKind { Finite, PosInf, NegInf, Undefined, Undecided };

// Finite values are catalog-closed exact expressions free of the limit
// variable. Undefined asserts the limit does not exist (oscillation, domain
// exit); Undecided means this engine could not tell, which callers surface
// as a structured error instead of guessing.
struct LimitValue {
    LimitKind kind = LimitKind::Undecided;
    Expr value;  // Finite only

    static LimitValue finite(Expr e) { return {LimitKind::Finite, std::move(e)}; }
    static LimitValue pos_inf() { return {LimitKind::PosInf, Expr()}; }
    static LimitValue neg_inf() { return {LimitKind::NegInf, Expr()}; }
    static LimitValue undefined() { return {LimitKind::Undefined, Expr()}; }
    static LimitValue undecided() { return {LimitKind::Undecided, Expr()}; }

    bool is_finite() const { return kind == LimitKind::Finite; }
    bool is_infinite() const { return kind == LimitKind::PosInf || kind == LimitKind::NegInf; }
    bool is_zero() const { return is_finite() && value.is_zero(); }
    std::string to_string() const;
};

enum class Dir { Right, Left, TwoSided };

// Limit of e as var tends to 0 from the given side. Strategy ladder:
// substitution over extended values, exact rational valuation analysis,
// quotient rebuilding with kernel cancellation, L'Hopital (depth <= 8),
// and power-log domination; anything past that is Undecided.
LimitValue limit_at_zero(const Expr& e, const std::string& var, Dir dir,
                         const Catalog& cat = default_catalog());

// lim f^(k)/k! at 0: the k-th Taylor coefficient when it is finite.
LimitValue taylor_seed(const Expr& f, long k, const std::string& var, Dir dir,
                       const Catalog& cat = default_catalog());

}  // namespace fps
