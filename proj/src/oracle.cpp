#include "fps/oracle.hpp"

#include <functional>
#include <numeric>

namespace fps {

namespace {

// internal: the expression needs a finer exponent grid; the driver retries
struct GridRetry {
    long factor;
};

[[noreturn]] void fail(const std::string& code, const std::string& detail) {
    throw FpsError("oracle", code, detail);
}

}  // namespace

SeriesTrunc::SeriesTrunc(long grid, long first_unknown) : grid_(grid), fu_(first_unknown) {}

SeriesTrunc SeriesTrunc::constant(const BigRational& c, long grid, long first_unknown) {
    SeriesTrunc s(grid, first_unknown);
    if (!c.is_zero() && first_unknown > 0) s.c_[0] = c;
    return s;
}

SeriesTrunc SeriesTrunc::variable(long grid, long first_unknown) {
    SeriesTrunc s(grid, first_unknown);
    if (grid < first_unknown) s.c_[grid] = BigRational(1);
    return s;
}

long SeriesTrunc::valuation() const { return c_.empty() ? fu_ : c_.begin()->first; }

BigRational SeriesTrunc::coeff(long j) const {
    if (j >= fu_) fail("beyond-truncation", "index " + std::to_string(j));
    auto it = c_.find(j);
    return it == c_.end() ? BigRational(0) : it->second;
}

BigRational SeriesTrunc::coeff_at(const BigRational& exponent) const {
    BigRational j = exponent * BigRational(grid_);
    if (!j.is_integer()) return BigRational(0);
    return coeff(j.to_long());
}

void SeriesTrunc::set(long j, const BigRational& c) {
    if (c.is_zero()) {
        c_.erase(j);
    } else if (j < fu_) {
        c_[j] = c;
    }
}

SeriesTrunc SeriesTrunc::operator-() const {
    SeriesTrunc r(grid_, fu_);
    for (const auto& [j, c] : c_) r.c_[j] = -c;
    return r;
}

SeriesTrunc operator+(const SeriesTrunc& a, const SeriesTrunc& b) {
    SeriesTrunc r(a.grid_, std::min(a.fu_, b.fu_));
    for (const auto& [j, c] : a.c_)
        if (j < r.fu_) r.c_[j] = c;
    for (const auto& [j, c] : b.c_) {
        if (j >= r.fu_) continue;
        auto [it, fresh] = r.c_.emplace(j, c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) r.c_.erase(it);
        }
    }
    return r;
}

SeriesTrunc operator-(const SeriesTrunc& a, const SeriesTrunc& b) { return a + (-b); }

SeriesTrunc SeriesTrunc::scaled(const BigRational& c) const {
    if (c.is_zero()) return SeriesTrunc(grid_, fu_);
    SeriesTrunc r(grid_, fu_);
    for (const auto& [j, q] : c_) r.c_[j] = q * c;
    return r;
}

SeriesTrunc operator*(const SeriesTrunc& a, const SeriesTrunc& b) {
    // truncation: unknown tail of one factor meets the valuation of the other
    long fu = std::min(a.fu_ + b.valuation(), b.fu_ + a.valuation());
    SeriesTrunc r(a.grid_, fu);
    for (const auto& [i, ca] : a.c_)
        for (const auto& [j, cb] : b.c_) {
            if (i + j >= fu) continue;
            BigRational& slot = r.c_[i + j];
            slot += ca * cb;
        }
    for (auto it = r.c_.begin(); it != r.c_.end();)
        it = it->second.is_zero() ? r.c_.erase(it) : std::next(it);
    return r;
}

SeriesTrunc SeriesTrunc::inverse() const {
    if (c_.empty()) fail("division-by-zero", "inverse of zero series");
    long v = valuation();
    long n = fu_ - v;  // known unit coefficients
    // u = x^(-v) * this; invert the unit by the standard recurrence
    std::vector<BigRational> u(n);
    for (const auto& [j, c] : c_) u[j - v] = c;
    std::vector<BigRational> w(n);
    w[0] = u[0].inverse();
    for (long i = 1; i < n; ++i) {
        BigRational s(0);
        for (long j = 1; j <= i; ++j) s += u[j] * w[i - j];
        w[i] = -s * w[0];
    }
    SeriesTrunc r(grid_, fu_ - 2 * v);
    for (long i = 0; i < n; ++i)
        if (!w[i].is_zero() && -v + i < r.fu_) r.c_[-v + i] = w[i];
    return r;
}

SeriesTrunc operator/(const SeriesTrunc& a, const SeriesTrunc& b) { return a * b.inverse(); }

SeriesTrunc SeriesTrunc::pow_rational(const BigRational& e) const {
    if (e.is_zero()) return constant(BigRational(1), grid_, fu_);
    if (c_.empty()) {
        if (e.sign() > 0) return *this;
        fail("division-by-zero", "negative power of zero series");
    }
    long v = valuation();
    // leading exponent v*e must land on the grid
    BigRational lead = BigRational(v) * e;
    if (!lead.is_integer()) {
        long g = std::gcd(std::abs(v) * std::abs(e.num().get_si()), e.den().get_si());
        throw GridRetry{e.den().get_si() / g};
    }
    BigRational c0 = coeff(v);
    BigRational cpow;
    if (e.is_integer()) {
        cpow = c0.pow(e.to_long());
    } else {
        BigRational root;
        if (!BigRational::nth_root_exact(c0, e.den().get_si(), &root))
            fail("nonrational-value",
                 "leading coefficient " + c0.to_string() + " has no exact root");
        cpow = root.pow(e.num().get_si());
    }
    // w = unit tail: this = c0 x^v (1 + w)
    long n = fu_ - v;
    SeriesTrunc w(grid_, n);
    for (const auto& [j, c] : c_)
        if (j != v && j - v < n) w.c_[j - v] = c / c0;
    // (1 + w)^e by the binomial series
    SeriesTrunc acc = constant(BigRational(1), grid_, n);
    SeriesTrunc wp = constant(BigRational(1), grid_, n);
    long wv = w.is_zero() ? n : w.valuation();
    BigRational binom(1);
    for (long k = 1; wv * k < n; ++k) {
        binom *= (e - BigRational(k - 1)) / BigRational(k);
        wp = wp * w;
        acc = acc + wp.scaled(binom);
    }
    acc.fu_ = n;
    SeriesTrunc r(grid_, lead.to_long() + n);
    for (const auto& [j, c] : acc.c_) {
        BigRational cc = c * cpow;
        if (!cc.is_zero()) r.c_[lead.to_long() + j] = cc;
    }
    return r;
}

SeriesTrunc SeriesTrunc::differentiate() const {
    SeriesTrunc r(grid_, fu_ - grid_);
    for (const auto& [j, c] : c_) {
        if (j == 0 || j - grid_ >= r.fu_) continue;
        r.c_[j - grid_] = c * BigRational(j, grid_);
    }
    return r;
}

SeriesTrunc SeriesTrunc::integrate() const {
    SeriesTrunc r(grid_, fu_ + grid_);
    for (const auto& [j, c] : c_) {
        if (j == -grid_) fail("log-term", "integral of x^(-1)");
        r.c_[j + grid_] = c * BigRational(grid_, j + grid_);
    }
    return r;
}

SeriesTrunc SeriesTrunc::refine(long factor) const {
    if (factor == 1) return *this;
    SeriesTrunc r(grid_ * factor, fu_ * factor);
    for (const auto& [j, c] : c_) r.c_[j * factor] = c;
    return r;
}

namespace {

using Table = std::function<BigRational(long)>;

// f(g) for f = sum a_k u^k given by an unbounded table; g must have positive
// valuation. Evaluated by Horner from the highest contributing power.
SeriesTrunc apply_table(const Table& a, const SeriesTrunc& g, const std::string& fname) {
    long v = g.valuation();
    if (g.is_zero()) v = g.first_unknown();
    if (v <= 0) {
        // a nonzero constant term has no rational series for these functions
        fail(v < 0 ? "essential-singularity" : "composition-valuation",
             fname + " of a series with valuation " + std::to_string(v) + "/" +
                 std::to_string(g.grid()));
    }
    long fu = g.first_unknown();
    long K = fu / v + 1;
    SeriesTrunc acc = SeriesTrunc::constant(a(K), g.grid(), fu);
    for (long k = K - 1; k >= 0; --k) {
        acc = acc * g;
        BigRational ak = a(k);
        if (!ak.is_zero()) acc = acc + SeriesTrunc::constant(ak, g.grid(), fu);
    }
    return acc;
}

BigRational alternating(long j) { return j % 2 == 0 ? BigRational(1) : BigRational(-1); }

SeriesTrunc call_series(const std::string& fn, const SeriesTrunc& g, const ExprVec& args,
                        std::function<SeriesTrunc(const Expr&)> recurse) {
    if (fn == "exp")
        return apply_table([](long j) { return BigRational(1) / BigRational(factorial_int(j)); }, g, fn);
    if (fn == "sin")
        return apply_table(
            [](long j) {
                return j % 2 == 1 ? alternating((j - 1) / 2) / BigRational(factorial_int(j))
                                  : BigRational(0);
            },
            g, fn);
    if (fn == "cos")
        return apply_table(
            [](long j) {
                return j % 2 == 0 ? alternating(j / 2) / BigRational(factorial_int(j)) : BigRational(0);
            },
            g, fn);
    if (fn == "sinh")
        return apply_table(
            [](long j) {
                return j % 2 == 1 ? BigRational(1) / BigRational(factorial_int(j)) : BigRational(0);
            },
            g, fn);
    if (fn == "cosh")
        return apply_table(
            [](long j) {
                return j % 2 == 0 ? BigRational(1) / BigRational(factorial_int(j)) : BigRational(0);
            },
            g, fn);
    if (fn == "tan") return call_series("sin", g, args, recurse) / call_series("cos", g, args, recurse);
    if (fn == "arctan")
        return apply_table(
            [](long j) {
                return j % 2 == 1 ? alternating((j - 1) / 2) / BigRational(j)
                                  : BigRational(0);
            },
            g, fn);
    if (fn == "arcsin")
        return apply_table(
            [](long j) {
                if (j % 2 == 0) return BigRational(0);
                long m = (j - 1) / 2;
                return BigRational(factorial_int(2 * m)) /
                       (BigRational(4).pow(m) * BigRational(factorial_int(m)) *
                        BigRational(factorial_int(m)) * BigRational(j));
            },
            g, fn);
    if (fn == "ln") {
        // requires g(0) = 1; series of ln(1 + (g-1))
        SeriesTrunc u = g - SeriesTrunc::constant(BigRational(1), g.grid(), g.first_unknown());
        if (!u.is_zero() && u.valuation() <= 0)
            fail("composition-valuation", "ln of a series not starting at 1");
        return apply_table(
            [](long j) { return j == 0 ? BigRational(0) : alternating(j + 1) / BigRational(j); },
            u, fn);
    }
    if (fn == "dilog") {
        // dilog(u) = Int(ln t/(1-t), t=1..u): series in z = 1-u
        SeriesTrunc z = SeriesTrunc::constant(BigRational(1), g.grid(), g.first_unknown()) - g;
        if (!z.is_zero() && z.valuation() <= 0)
            fail("composition-valuation", "dilog of a series not starting at 1");
        return apply_table(
            [](long j) {
                return j == 0 ? BigRational(0) : BigRational(1) / BigRational(j * j);
            },
            z, fn);
    }
    if (fn == "Fibonacci" || fn == "ChebyshevT" || fn == "HermiteH") {
        if (args.size() != 2 || !args[0].is_rational() ||
            !args[0].rational_value().is_integer())
            fail("free-parameter", fn + " needs a concrete integer index");
        long n = args[0].rational_value().to_long();
        if (n < 0) fail("free-parameter", fn + " index must be nonnegative");
        long grid = g.grid(), fu = g.first_unknown();
        auto c = [&](const BigRational& q) { return SeriesTrunc::constant(q, grid, fu); };
        SeriesTrunc f0 = c(BigRational(fn == "Fibonacci" ? 0 : 1));
        SeriesTrunc f1 = fn == "Fibonacci" ? c(BigRational(1))
                         : fn == "ChebyshevT" ? g
                                              : c(BigRational(2)) * g;
        if (n == 0) return f0;
        SeriesTrunc prev = f0, cur = f1;
        for (long k = 2; k <= n; ++k) {
            SeriesTrunc next(grid, fu);
            if (fn == "Fibonacci") {
                next = g * cur + prev;
            } else if (fn == "ChebyshevT") {
                next = c(BigRational(2)) * g * cur - prev;
            } else {
                next = c(BigRational(2)) * g * cur - c(BigRational(2 * (k - 1))) * prev;
            }
            prev = cur;
            cur = next;
        }
        return cur;
    }
    if (fn == "arccos" || fn == "arccosh" || fn == "arcsech" || fn == "erf" ||
        fn == "newAi" || fn == "newAiPrime")
        fail("nonrational-value", fn + " has no rational coefficient series at 0");
    (void)recurse;
    fail("unknown-function", fn);
}

struct Builder {
    std::string var;
    long grid;
    long fu;

    SeriesTrunc eval(const Expr& e) {
        switch (e.kind()) {
            case ExprKind::Rational: return SeriesTrunc::constant(e.rational_value(), grid, fu);
            case ExprKind::Const: fail("nonrational-value", e.name());
            case ExprKind::Symbol:
                if (e.name() == var) return SeriesTrunc::variable(grid, fu);
                fail("free-parameter", e.name());
            case ExprKind::Sum: {
                SeriesTrunc r(grid, fu);
                for (const Expr& t : e.operands()) r = r + eval(t);
                return r;
            }
            case ExprKind::Product: {
                SeriesTrunc r = SeriesTrunc::constant(BigRational(1), grid, fu);
                for (const Expr& f : e.operands()) r = r * eval(f);
                return r;
            }
            case ExprKind::Power: {
                if (!e.exponent().is_rational())
                    fail("free-parameter", "symbolic exponent " + e.exponent().to_string());
                return eval(e.base()).pow_rational(e.exponent().rational_value());
            }
            case ExprKind::Call: {
                ExprVec args = e.operands();
                SeriesTrunc g = eval(args.back());
                return call_series(e.name(), g, args,
                                   [this](const Expr& x) { return eval(x); });
            }
            case ExprKind::Integral: {
                Builder inner{e.name(), grid, fu};
                SeriesTrunc h = inner.eval(e.integrand());
                SeriesTrunc H = h.integrate();
                SeriesTrunc up = eval(e.upper_limit());
                // H has no constant term, so H(upper) - H(0) = H(upper)
                long v = up.is_zero() ? up.first_unknown() : up.valuation();
                if (v <= 0)
                    fail(v < 0 ? "essential-singularity" : "composition-valuation",
                         "integral bound with valuation " + std::to_string(v));
                // term-by-term composition; exponents of H may be fractional
                SeriesTrunc acc(grid, H.first_unknown() * v / grid);
                for (const auto& [j, c] : H.coeffs())
                    acc = acc + up.pow_rational(BigRational(j, grid)).scaled(c);
                return acc;
            }
            case ExprKind::ProductOver:
                fail("unknown-function", "bound product in a series input");
        }
        fail("unknown-function", "unreachable");
    }
};

void scan_grid(const Expr& e, long& grid) {
    switch (e.kind()) {
        case ExprKind::Power: {
            if (e.exponent().is_rational()) {
                long d = e.exponent().rational_value().den().get_si();
                grid = std::lcm(grid, d);
            }
            scan_grid(e.base(), grid);
            if (!e.exponent().is_rational()) scan_grid(e.exponent(), grid);
            return;
        }
        case ExprKind::Sum:
        case ExprKind::Product:
        case ExprKind::Call:
            for (const Expr& k : e.operands()) scan_grid(k, grid);
            return;
        case ExprKind::Integral:
            scan_grid(e.integrand(), grid);
            scan_grid(e.upper_limit(), grid);
            return;
        default: return;
    }
}

}  // namespace

SeriesTrunc truncated_series(const Expr& f, const std::string& var, long order) {
    long grid = 1;
    scan_grid(f, grid);
    // divisions and compositions consume working precision, so grow a slack
    // margin until the result covers the requested order
    long slack = 0;
    for (int attempt = 0; attempt < 16; ++attempt) {
        try {
            long need = order * grid + 1;
            Builder b{var, grid, need + slack};
            SeriesTrunc r = b.eval(f);
            if (r.first_unknown() >= need) return r;
            slack = 2 * slack + (need - r.first_unknown()) + grid;
        } catch (const GridRetry& g) {
            grid *= std::max(2L, g.factor);
        }
    }
    fail("composition-valuation", "no common exponent grid found");
}

}  // namespace fps
