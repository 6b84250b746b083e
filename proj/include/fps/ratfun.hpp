#pragma once

#include "fps/multipoly.hpp"

namespace fps {

// Rational function num/den over Q in any set of variables, kept normalized:
// gcd(num, den) = 1, den primitive with positive lex-leading coefficient
// (rational content of the denominator is folded into the numerator).
class RatFun {
public:
    RatFun() : num_(), den_(BigRational(1)) {}
    explicit RatFun(const BigRational& c) : num_(c), den_(BigRational(1)) {}
    explicit RatFun(long c) : num_(BigRational(c)), den_(BigRational(1)) {}
    explicit RatFun(MultiPoly p) : num_(std::move(p)), den_(BigRational(1)) {}
    RatFun(MultiPoly num, MultiPoly den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }

    static RatFun variable(const std::string& name) { return RatFun(MultiPoly::variable(name)); }

    const MultiPoly& numerator() const { return num_; }
    const MultiPoly& denominator() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
    BigRational constant_value() const { return num_.constant_value() / den_.constant_value(); }
    bool is_polynomial() const { return den_.is_constant(); }
    bool uses(const std::string& var) const { return num_.uses(var) || den_.uses(var); }

    RatFun operator-() const;
    RatFun& operator+=(const RatFun& o) { *this = *this + o; return *this; }
    RatFun& operator-=(const RatFun& o) { *this = *this - o; return *this; }
    RatFun& operator*=(const RatFun& o) { *this = *this * o; return *this; }
    RatFun& operator/=(const RatFun& o) { *this = *this / o; return *this; }
    friend RatFun operator+(const RatFun& a, const RatFun& b);
    friend RatFun operator-(const RatFun& a, const RatFun& b);
    friend RatFun operator*(const RatFun& a, const RatFun& b);
    friend RatFun operator/(const RatFun& a, const RatFun& b);
    RatFun inverse() const;
    RatFun pow(long e) const;

    friend bool operator==(const RatFun& a, const RatFun& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
    friend bool operator!=(const RatFun& a, const RatFun& b) { return !(a == b); }

    RatFun derivative(const std::string& var) const;
    // Partial evaluation; throws std::domain_error if the denominator vanishes.
    RatFun eval_var(const std::string& var, const BigRational& value) const;
    RatFun subst_poly(const std::string& var, const MultiPoly& replacement) const;

    std::string to_string() const;

private:
    MultiPoly num_, den_;
    void normalize();
};

std::ostream& operator<<(std::ostream& os, const RatFun& r);

// Affine solution set of a linear system over the RatFun field:
// { particular + sum_i t_i * directions[i] }. free_columns names which
// unknowns the parameters t_i correspond to (non-pivot columns in order).
struct AffineSolutionSpace {
    std::vector<RatFun> particular;
    std::vector<std::vector<RatFun>> directions;
    std::vector<size_t> free_columns;
    bool unique() const { return directions.empty(); }
};

// Solves A*x = rhs by fraction-free-ish Gaussian elimination over the field;
// returns nullopt when inconsistent. Pivots are chosen in column order, so
// free parameters land on the latest columns the system allows.
std::optional<AffineSolutionSpace> solve_linear(const std::vector<std::vector<RatFun>>& A,
                                                const std::vector<RatFun>& rhs);

}  // namespace fps
