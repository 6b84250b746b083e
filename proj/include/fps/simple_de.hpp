#pragma once

#include <string>
#include <variant>
#include <vector>

#include "fps/catalog.hpp"
#include "fps/expr.hpp"
#include "fps/multipoly.hpp"
#include "fps/termform.hpp"

namespace fps {

// homogeneous linear ODE  sum_j coeffs[j] * f^(j) = 0  with polynomial
// coefficients, coprime and sign-normalized; ctx resolves interned atoms
struct SimpleDE {
    std::string var;
    std::vector<MultiPoly> coeffs;  // coeffs[j] multiplies f^(j); back() != 0
    TermContext ctx{""};

    long order() const { return static_cast<long>(coeffs.size()) - 1; }
    Expr coeff_expr(size_t j) const { return ctx.to_expr(coeffs[j]); }
    std::string to_string() const;
};

// DE shape with coefficients affine in the named free parameters; every
// constant instantiation of the parameters annihilates f
struct ParametricDE {
    SimpleDE shape;
    std::vector<std::string> params;
};

struct DeNotFound {};

using DeSearch = std::variant<DeNotFound, SimpleDE, ParametricDE>;

DeSearch find_simple_de(const Expr& f, const std::string& var, long k,
                        const Catalog& cat = default_catalog());

// first success over k = 1..kmax
DeSearch find_lowest_de(const Expr& f, const std::string& var, long kmax,
                        const Catalog& cat = default_catalog());

}  // namespace fps
