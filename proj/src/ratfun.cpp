#include "fps/ratfun.hpp"

#include <ostream>
#include <stdexcept>

namespace fps {

void RatFun::normalize() {
    if (den_.is_zero()) throw std::domain_error("RatFun: zero denominator");
    if (num_.is_zero()) {
        den_ = MultiPoly(BigRational(1));
        return;
    }
    if (!den_.is_constant()) {
        MultiPoly g = poly_gcd(num_, den_);
        if (!g.is_constant()) {
            num_ = poly_divexact(num_, g);
            den_ = poly_divexact(den_, g);
        }
    }
    BigRational c = den_.rational_content();
    if (!c.is_one()) {
        den_ *= c.inverse();
        num_ *= c.inverse();
    }
}

RatFun RatFun::operator-() const {
    RatFun r = *this;
    r.num_ = -r.num_;
    return r;
}

RatFun operator+(const RatFun& a, const RatFun& b) {
    return RatFun(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RatFun operator-(const RatFun& a, const RatFun& b) {
    return RatFun(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}

RatFun operator*(const RatFun& a, const RatFun& b) { return RatFun(a.num_ * b.num_, a.den_ * b.den_); }

RatFun operator/(const RatFun& a, const RatFun& b) {
    if (b.is_zero()) throw std::domain_error("RatFun: division by zero");
    return RatFun(a.num_ * b.den_, a.den_ * b.num_);
}

RatFun RatFun::inverse() const {
    if (is_zero()) throw std::domain_error("RatFun: inverse of zero");
    return RatFun(den_, num_);
}

RatFun RatFun::pow(long e) const {
    if (e == 0) return RatFun(BigRational(1));
    RatFun base = e < 0 ? inverse() : *this;
    unsigned long n = e < 0 ? -(unsigned long)e : (unsigned long)e;
    return RatFun(base.num_.pow(unsigned(n)), base.den_.pow(unsigned(n)));
}

RatFun RatFun::derivative(const std::string& var) const {
    // (n/d)' = (n'd - nd')/d^2; normalization cancels what it can.
    return RatFun(num_.derivative(var) * den_ - num_ * den_.derivative(var), den_ * den_);
}

RatFun RatFun::eval_var(const std::string& var, const BigRational& value) const {
    return RatFun(num_.eval_var(var, value), den_.eval_var(var, value));
}

RatFun RatFun::subst_poly(const std::string& var, const MultiPoly& replacement) const {
    return RatFun(num_.subst_poly(var, replacement), den_.subst_poly(var, replacement));
}

std::string RatFun::to_string() const {
    if (den_.is_constant() && den_.constant_value().is_one()) return num_.to_string();
    std::string n = num_.to_string(), d = den_.to_string();
    if (num_.term_count() > 1) n = "(" + n + ")";
    if (den_.term_count() > 1) d = "(" + d + ")";
    return n + "/" + d;
}

std::ostream& operator<<(std::ostream& os, const RatFun& r) { return os << r.to_string(); }

std::optional<AffineSolutionSpace> solve_linear(const std::vector<std::vector<RatFun>>& A,
                                                const std::vector<RatFun>& rhs) {
    const size_t rows = A.size();
    const size_t cols = rows ? A[0].size() : 0;
    std::vector<std::vector<RatFun>> m(rows, std::vector<RatFun>(cols + 1));
    for (size_t i = 0; i < rows; ++i) {
        if (A[i].size() != cols) throw std::invalid_argument("solve_linear: ragged matrix");
        for (size_t j = 0; j < cols; ++j) m[i][j] = A[i][j];
        m[i][cols] = rhs.at(i);
    }

    std::vector<long> pivot_row_of_col(cols, -1);
    size_t rank = 0;
    for (size_t col = 0; col < cols && rank < rows; ++col) {
        size_t sel = rank;
        while (sel < rows && m[sel][col].is_zero()) ++sel;
        if (sel == rows) continue;
        std::swap(m[sel], m[rank]);
        RatFun inv = m[rank][col].inverse();
        for (size_t j = col; j <= cols; ++j) m[rank][j] = m[rank][j] * inv;
        for (size_t i = 0; i < rows; ++i) {
            if (i == rank || m[i][col].is_zero()) continue;
            RatFun f = m[i][col];
            for (size_t j = col; j <= cols; ++j) m[i][j] = m[i][j] - f * m[rank][j];
        }
        pivot_row_of_col[col] = long(rank);
        ++rank;
    }
    for (size_t i = rank; i < rows; ++i)
        if (!m[i][cols].is_zero()) return std::nullopt;

    AffineSolutionSpace out;
    out.particular.assign(cols, RatFun());
    for (size_t col = 0; col < cols; ++col)
        if (pivot_row_of_col[col] >= 0) out.particular[col] = m[size_t(pivot_row_of_col[col])][cols];
    for (size_t col = 0; col < cols; ++col) {
        if (pivot_row_of_col[col] >= 0) continue;
        out.free_columns.push_back(col);
        std::vector<RatFun> dir(cols, RatFun());
        dir[col] = RatFun(BigRational(1));
        for (size_t c2 = 0; c2 < cols; ++c2)
            if (pivot_row_of_col[c2] >= 0) dir[c2] = -m[size_t(pivot_row_of_col[c2])][col];
        out.directions.push_back(std::move(dir));
    }
    return out;
}

}  // namespace fps
