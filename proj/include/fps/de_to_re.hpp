#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fps/multipoly.hpp"
#include "fps/simple_de.hpp"

namespace fps {

// coefficient recurrence sum_j coeffs[j](k) * a(k+j) = 0 with the smallest
// offset normalized to 0. shift is the original offset of j = 0, and removed
// holds parameter-free content factors cancelled after normalization, so the
// statement produced by the substitution rule stays recoverable:
//   original coefficient at offset t = original_coeff(t), t in [shift, shift+span]
struct RE {
    std::string index;
    std::vector<MultiPoly> coeffs;  // front() and back() not identically zero
    long shift = 0;
    std::vector<MultiPoly> removed;  // in normalized index coordinates
    TermContext ctx{""};

    long span() const { return static_cast<long>(coeffs.size()) - 1; }
    MultiPoly original_coeff(long offset) const;
    std::string to_string() const;  // renders the original un-normalized form
};

// substitution x^l f^(j) -> (k+1-l)_j * a(k+j-l), collected per offset j-l;
// no normalization, no cancellation
std::map<long, MultiPoly> convert_raw(const SimpleDE& de, const std::string& index);

// (k+1-l)_j expanded as a polynomial in the index
MultiPoly pochhammer_poly(const std::string& index, long l, long j);

RE convert_de_to_re(const SimpleDE& de, const std::string& index = "k");

struct ReValidity {
    bool holds_all_k;           // false once content was cancelled
    std::optional<long> k_max;  // largest integer root of the original leading coefficient
};

// validity bound for forward iteration: coefficients are determined by the
// recurrence for indices above every integer root of the leading coefficient
ReValidity re_holds_for_all_k(const RE& re);

}  // namespace fps
