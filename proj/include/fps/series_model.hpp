#pragma once

#include "fps/de_to_re.hpp"
#include "fps/expr.hpp"
#include "fps/limits.hpp"
#include "fps/numeval.hpp"
#include "fps/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fps {

// One infinite summand: sum over k >= 0 of coeff(k) * x^((m*k + r)/n + s).
// The exponent map is stored structurally so it inverts exactly; r is reduced
// into [0, m) and s absorbs the Laurent/Puiseux shift (fractional s allowed).
struct PowerSum {
    Expr coeff;
    std::string index = "k";
    long m = 1;  // symmetry step, >= 1
    long n = 1;  // Puiseux root denominator, >= 1
    long r = 0;  // residue class, in [0, m)
    BigRational s;

    BigRational exponent_at(long k) const;
    // the k >= 0 with exponent_at(k) == e, if the map hits e
    std::optional<long> index_of(const BigRational& e) const;
    // coeff * var^(exponent map) with the map spelled out symbolically
    Expr summand(const std::string& var) const;
};

struct ExplicitTerm {
    BigRational exponent;
    Expr coeff;
};

// coeff * x^exponent * ln(x)
struct LogTerm {
    BigRational exponent;
    Expr coeff;
};

struct ExpansionPoint {
    enum class Kind { Finite, PosInf, NegInf };
    Kind kind = Kind::Finite;
    BigRational value;  // Finite only

    static ExpansionPoint finite(BigRational v) {
        return {Kind::Finite, std::move(v)};
    }
    static ExpansionPoint pos_inf() { return {Kind::PosInf, BigRational(0)}; }
    static ExpansionPoint neg_inf() { return {Kind::NegInf, BigRational(0)}; }
    std::string to_string() const;
};

// how far around the expansion point the closed form is claimed to hold
enum class Validity { Full, OneSided, Asymptotic };

struct FPSResult {
    std::string var = "x";
    std::vector<PowerSum> sums;
    std::vector<ExplicitTerm> terms;
    std::vector<LogTerm> logs;
    Expr constant;  // defaults to 0
    ExpansionPoint point;
    Dir direction = Dir::TwoSided;
    Validity validity = Validity::Full;

    bool is_zero() const;
};

// Exact coefficient of x^exponent: the constant at exponent 0, explicit
// terms, and every sum whose exponent map hits it. Log terms are not power
// coefficients and do not contribute. Unrepresented exponents give 0.
Expr eval_coefficient(const FPSResult& r, const BigRational& exponent);

// Exact forward iteration of a recurrence. Seeds are a_0..a_{len-1}; each
// later a_i comes from the relation instance isolating it, with a_j = 0 for
// j < 0. When that instance's original leading coefficient vanishes the
// stream stops and blocked_index() reports the original relation index.
class CoefficientStream {
public:
    CoefficientStream(RE re, std::vector<BigRational> seeds);
    std::optional<BigRational> next();
    std::optional<long> blocked_index() const { return blocked_; }

private:
    RE re_;
    std::vector<BigRational> hist_;
    long next_ = 0;
    std::optional<long> blocked_;
};

// The first N indices of every sum plus the whole finite part, evaluated at
// x0 with interval arithmetic at roughly `digits` decimal digits. x0 is first
// recentred on the expansion point (shifted, or inverted for points at
// infinity); a side violating `direction` is a domain error.
NumVal partial_sum(const FPSResult& r, long N, const BigRational& x0, long digits);

enum class RenderFormat { Text, Structured };

// Text mode writes Sum(summand, k=0..infinity) pieces joined by signs; the
// structured mode emits the documented JSON schema with prefix-grammar
// coefficient strings. Both are deterministic for a given result.
std::string render(const FPSResult& r, RenderFormat format);

}  // namespace fps
