#pragma once

#include "fps/rational.hpp"

#include <memory>
#include <string>
#include <vector>

namespace fps {

enum class ExprKind { Rational, Const, Symbol, Sum, Product, Power, Call, Integral, ProductOver };

class Expr;
using ExprVec = std::vector<Expr>;

// Immutable expression handle with canonical construction: sums and products
// are flattened, rational constants folded, like terms/factors collected, and
// operands sorted by a total order. Two structurally equal builds of the same
// expression always produce identical trees.
class Expr {
public:
    Expr();  // the rational 0

    static Expr rational(const BigRational& q);
    static Expr integer(long n) { return rational(BigRational(n)); }
    static Expr constant(const std::string& name);  // "Pi", "I"
    static Expr symbol(const std::string& name);
    static Expr sum(ExprVec terms);
    static Expr product(ExprVec factors);
    static Expr pow(const Expr& base, const Expr& exponent);
    static Expr call(const std::string& fn, ExprVec args);
    // Inert integral of `integrand` in `var` from 0 to `upper`.
    static Expr integral(const Expr& integrand, const std::string& var, const Expr& upper);
    // Product of `body` over var = 0..upper inclusive. Folds to an explicit
    // product for small integer bounds; an integer upper below 0 is empty (1).
    static Expr product_over(const Expr& body, const std::string& var, const Expr& upper);

    ExprKind kind() const;
    const BigRational& rational_value() const;  // pre: Rational
    const std::string& name() const;  // Const, Symbol, Call; Integral/ProductOver bound var
    const ExprVec& operands() const;            // Sum, Product, Call args
    const Expr& base() const;                   // Power
    const Expr& exponent() const;               // Power
    const Expr& integrand() const;              // Integral
    const Expr& upper_limit() const;            // Integral, ProductOver
    const Expr& body() const;                   // ProductOver

    bool is_rational() const { return kind() == ExprKind::Rational; }
    bool is_zero() const;
    bool is_one() const;
    bool is_symbol(const std::string& name) const;
    // Does `var` occur free? (bound integration variables don't count)
    bool uses(const std::string& var) const;

    static int compare(const Expr& a, const Expr& b);
    friend bool operator==(const Expr& a, const Expr& b) { return compare(a, b) == 0; }
    friend bool operator!=(const Expr& a, const Expr& b) { return compare(a, b) != 0; }
    friend bool operator<(const Expr& a, const Expr& b) { return compare(a, b) < 0; }

    // Substitutes every free occurrence of the symbol and re-canonicalizes.
    Expr subst(const std::string& symbol, const Expr& replacement) const;

    std::string to_string() const;

    // Convenience arithmetic (canonicalizing constructors underneath).
    friend Expr operator+(const Expr& a, const Expr& b) { return sum({a, b}); }
    friend Expr operator-(const Expr& a, const Expr& b);
    friend Expr operator*(const Expr& a, const Expr& b) { return product({a, b}); }
    friend Expr operator/(const Expr& a, const Expr& b);
    Expr operator-() const;

private:
    struct Node;
    std::shared_ptr<const Node> p_;
    explicit Expr(std::shared_ptr<const Node> p) : p_(std::move(p)) {}
    static Expr make(Node n);
};

// If e = base + (integer shift), returns {base, shift}; the base may be 0.
// Used for family index arguments like n-2.
struct ShiftedBase {
    Expr base;
    long shift;
};
ShiftedBase split_integer_shift(const Expr& e);

// Placeholder symbols used in catalog rule templates: @1 is the first
// argument, @2 the second, and so on.
inline const char* const kPlaceholderPrefix = "@";
inline std::string placeholder(int i) { return "@" + std::to_string(i); }

}  // namespace fps
