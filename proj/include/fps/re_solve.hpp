#pragma once

#include "fps/catalog.hpp"
#include "fps/de_to_re.hpp"
#include "fps/limits.hpp"
#include "fps/series_model.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fps {

// two-term recurrence Q(k)*a(k+m) = P(k)*a(k), asserted for every integer k
// outside `except`. Exceptional instances record where cancelled content,
// k-dependent parameter substitutions, or reduction to lowest terms made the
// relation vacuous; index bound computations treat them as extra Q roots.
struct HypergeomRE {
    std::string index = "k";
    MultiPoly P, Q;
    long m = 1;
    std::vector<long> except;

    std::string to_string() const;
};

// collapses a recurrence with exactly one or two nonzero coefficient rows;
// rows must be free of parameters. Single-row recurrences come back with
// P = 0 (pure annihilation). nullopt when there are more rows than that.
std::optional<HypergeomRE> detect_hypergeometric(const RE& re);

// picks two rows of a parameter-carrying recurrence to keep, solves for
// parameter values in Q(k) that make every other row vanish identically,
// and accepts the tuned relation only after it checks out against series
// coefficients of f computed independently. Extreme row pair first, then
// ascending span. nullopt when no pair survives.
std::optional<HypergeomRE> tune_two_term(const RE& re, const std::vector<std::string>& params,
                                         const Expr& f, const std::string& var,
                                         const Catalog& cat = default_catalog());

// rescales the index so every rational root of P and Q becomes an integer;
// n is the exponent-grid refinement factor (1 when nothing to do)
struct PuiseuxStep {
    HypergeomRE re;
    long n = 1;
};
PuiseuxStep puiseux_normalize(const HypergeomRE& re);

// shifts the index so the smallest admissible nonzero position lands at 0.
// Verifies lim x^(1-shift)*g = 0 on the way (a nonzero value means an
// essential singularity); zero_series marks the no-admissible-index case
// where the expansion is identically zero.
struct LaurentStep {
    HypergeomRE re;
    long shift = 0;
    bool zero_series = false;
};
LaurentStep laurent_normalize(const HypergeomRE& re, const Expr& g, const std::string& var,
                              Dir dir, const Catalog& cat = default_catalog());

// recurrence-side transformations applied on the way to a solution, enough
// to replay how the result's exponent lattice was reached
struct Transform {
    enum class Kind {
        ArgPower,    // solved h(x) = f(x^n); param = n
        PowerShift,  // solved x^(-s)*g; param = s
        Derivative,  // logarithmic case: solved (x^(-k0)*g)' and integrated back; param = k0
    };
    Kind kind;
    BigRational param;
};
using TransformTrace = std::vector<Transform>;

struct SolveOutcome {
    FPSResult result;
    TransformTrace trace;
};

// full hypergeometric-type solve of one recurrence for f at 0: detect or
// tune a two-term relation, normalize the index grid and offset, compute
// seed coefficients as derivative limits, and assemble closed-form
// coefficient formulas per residue class. nullopt when the recurrence is not
// (tunably) two-term. Throws FpsError stage "re-solve" with codes
// essential-singularity, limit-undecided, nested-log, log-recursion-limit.
std::optional<FPSResult> solve_re(const RE& re, const Expr& f, const std::string& var, Dir dir,
                                  const Catalog& cat = default_catalog(),
                                  const std::vector<std::string>& params = {});
std::optional<SolveOutcome> solve_re_traced(const RE& re, const Expr& f, const std::string& var,
                                            Dir dir, const Catalog& cat = default_catalog(),
                                            const std::vector<std::string>& params = {});

}  // namespace fps
