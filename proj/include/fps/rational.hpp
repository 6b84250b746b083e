#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>

namespace fps {

// Arbitrary-precision rational, always canonical: num/den coprime, den > 0.
// Thin strong type over GMP's mpq_class; the wrapper exists so the invariant
// holds by construction everywhere above this layer.
class BigRational {
public:
    BigRational() : v_(0) {}
    BigRational(long n) : v_(n) {}                     // NOLINT: implicit on purpose
    BigRational(long n, long d) : v_(n, d) {
        if (d == 0) throw std::domain_error("BigRational: zero denominator");
        v_.canonicalize();
    }
    BigRational(const mpz_class& n, const mpz_class& d) : v_(n, d) {
        if (d == 0) throw std::domain_error("BigRational: zero denominator");
        v_.canonicalize();
    }
    explicit BigRational(const mpz_class& n) : v_(n) {}
    explicit BigRational(mpq_class q) : v_(std::move(q)) { v_.canonicalize(); }

    // Parses "p" or "p/q".
    static BigRational from_string(const std::string& s) {
        mpq_class q;
        if (q.set_str(s, 10) != 0) throw std::invalid_argument("BigRational: bad literal '" + s + "'");
        q.canonicalize();
        return BigRational(std::move(q));
    }

    const mpz_class& num() const { return v_.get_num(); }
    const mpz_class& den() const { return v_.get_den(); }

    bool is_zero() const { return v_ == 0; }
    bool is_one() const { return v_ == 1; }
    bool is_integer() const { return v_.get_den() == 1; }
    int sign() const { return sgn(v_); }

    // Floor as integer; exact value if is_integer().
    mpz_class floor() const {
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), v_.get_num().get_mpz_t(), v_.get_den().get_mpz_t());
        return q;
    }
    long to_long() const {
        if (!is_integer() || !v_.get_num().fits_slong_p())
            throw std::domain_error("BigRational: not a machine integer");
        return v_.get_num().get_si();
    }

    BigRational operator-() const { return BigRational(mpq_class(-v_)); }
    BigRational& operator+=(const BigRational& o) { v_ += o.v_; return *this; }
    BigRational& operator-=(const BigRational& o) { v_ -= o.v_; return *this; }
    BigRational& operator*=(const BigRational& o) { v_ *= o.v_; return *this; }
    BigRational& operator/=(const BigRational& o) {
        if (o.is_zero()) throw std::domain_error("BigRational: division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend BigRational operator+(BigRational a, const BigRational& b) { return a += b; }
    friend BigRational operator-(BigRational a, const BigRational& b) { return a -= b; }
    friend BigRational operator*(BigRational a, const BigRational& b) { return a *= b; }
    friend BigRational operator/(BigRational a, const BigRational& b) { return a /= b; }

    friend bool operator==(const BigRational& a, const BigRational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const BigRational& a, const BigRational& b) { return a.v_ != b.v_; }
    friend bool operator<(const BigRational& a, const BigRational& b) { return a.v_ < b.v_; }
    friend bool operator<=(const BigRational& a, const BigRational& b) { return a.v_ <= b.v_; }
    friend bool operator>(const BigRational& a, const BigRational& b) { return a.v_ > b.v_; }
    friend bool operator>=(const BigRational& a, const BigRational& b) { return a.v_ >= b.v_; }

    BigRational inverse() const {
        if (is_zero()) throw std::domain_error("BigRational: inverse of zero");
        return BigRational(mpq_class(1) / v_);
    }

    BigRational pow(long e) const {
        if (e == 0) return BigRational(1);
        const BigRational base = e < 0 ? inverse() : *this;
        unsigned long n = e < 0 ? -(unsigned long)e : (unsigned long)e;
        mpz_class pn, pd;
        mpz_pow_ui(pn.get_mpz_t(), base.num().get_mpz_t(), n);
        mpz_pow_ui(pd.get_mpz_t(), base.den().get_mpz_t(), n);
        return BigRational(pn, pd);
    }

    BigRational abs() const { return sign() < 0 ? -*this : *this; }

    // Exact q-th root if it exists (e.g. (4/9)^(1/2) = 2/3).
    static bool nth_root_exact(const BigRational& a, unsigned long q, BigRational* out) {
        if (a.sign() < 0) return false;
        mpz_class rn, rd;
        if (!mpz_root(rn.get_mpz_t(), a.num().get_mpz_t(), q)) return false;
        if (!mpz_root(rd.get_mpz_t(), a.den().get_mpz_t(), q)) return false;
        if (out) *out = BigRational(rn, rd);
        return true;
    }

    std::string to_string() const { return v_.get_str(); }
    double to_double() const { return v_.get_d(); }
    const mpq_class& raw() const { return v_; }

private:
    mpq_class v_;
};

std::ostream& operator<<(std::ostream& os, const BigRational& q);

inline mpz_class factorial_int(unsigned long n) {
    mpz_class r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

inline mpz_class binomial_int(unsigned long n, unsigned long k) {
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

// Rising factorial (a)_n = a (a+1) ... (a+n-1); (a)_0 = 1. Exact for any rational a.
inline BigRational pochhammer(const BigRational& a, unsigned long n) {
    BigRational r(1);
    BigRational t = a;
    for (unsigned long i = 0; i < n; ++i) {
        r *= t;
        t += BigRational(1);
    }
    return r;
}

}  // namespace fps
