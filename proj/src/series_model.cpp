#include "fps/series_model.hpp"

#include <algorithm>
#include <sstream>

#include "fps/error.hpp"
#include "fps/exact_eval.hpp"

namespace fps {

namespace {

[[noreturn]] void fail(const std::string& code, const std::string& detail) {
    throw FpsError("series-model", code, detail);
}

}  // namespace

BigRational PowerSum::exponent_at(long k) const {
    return BigRational(m * k + r, n) + s;
}

std::optional<long> PowerSum::index_of(const BigRational& e) const {
    // (m k + r)/n + s = e  =>  k = (n (e - s) - r)/m
    BigRational k = ((e - s) * BigRational(n) - BigRational(r)) / BigRational(m);
    if (!k.is_integer() || k.sign() < 0 || !k.num().fits_slong_p()) return std::nullopt;
    return k.to_long();
}

Expr PowerSum::summand(const std::string& var) const {
    Expr k = Expr::symbol(index);
    Expr map = (Expr::integer(m) * k + Expr::integer(r)) / Expr::integer(n) +
               Expr::rational(s);
    return coeff * Expr::pow(Expr::symbol(var), map);
}

std::string ExpansionPoint::to_string() const {
    switch (kind) {
        case Kind::Finite: return value.to_string();
        case Kind::PosInf: return "infinity";
        case Kind::NegInf: return "-infinity";
    }
    return "";
}

bool FPSResult::is_zero() const {
    return sums.empty() && terms.empty() && logs.empty() && constant.is_zero();
}

Expr eval_coefficient(const FPSResult& r, const BigRational& exponent) {
    ExprVec parts;
    if (exponent.is_zero() && !r.constant.is_zero()) parts.push_back(r.constant);
    for (const ExplicitTerm& t : r.terms)
        if (t.exponent == exponent) parts.push_back(t.coeff);
    for (const PowerSum& s : r.sums)
        if (auto k = s.index_of(exponent))
            parts.push_back(eval_formula(s.coeff, s.index, *k));
    return Expr::sum(std::move(parts));
}

CoefficientStream::CoefficientStream(RE re, std::vector<BigRational> seeds)
    : re_(std::move(re)), hist_(std::move(seeds)) {
    auto pure = [&](const MultiPoly& p) {
        return p.is_constant() || p.sole_variable() == std::optional<std::string>(re_.index);
    };
    for (const MultiPoly& c : re_.coeffs)
        if (!pure(c)) fail("free-parameter", "recurrence coefficient " + c.to_string());
    for (const MultiPoly& c : re_.removed)
        if (!pure(c)) fail("free-parameter", "cancelled factor " + c.to_string());
}

std::optional<BigRational> CoefficientStream::next() {
    if (blocked_) return std::nullopt;
    long i = next_;
    if (i < (long)hist_.size()) {
        ++next_;
        return hist_[i];
    }
    long span = re_.span();
    long kn = i - span;  // normalized index of the relation isolating a_i
    auto at = [&](const MultiPoly& p) {
        MultiPoly v = p.eval_var(re_.index, BigRational(kn));
        return v.is_zero() ? BigRational(0) : v.constant_value();
    };
    // the instance only determines a_i when its original leading coefficient,
    // cancelled content included, is nonzero there
    BigRational lead = at(re_.coeffs.back());
    for (const MultiPoly& rm : re_.removed) lead *= at(rm);
    if (lead.is_zero()) {
        blocked_ = kn - re_.shift;
        return std::nullopt;
    }
    BigRational acc(0);
    for (long j = 0; j < span; ++j) {
        long idx = kn + j;
        if (idx < 0) continue;  // coefficients below the series start are 0
        acc += at(re_.coeffs[j]) * hist_[idx];
    }
    BigRational val = -acc / at(re_.coeffs.back());
    hist_.push_back(val);
    ++next_;
    return val;
}

NumVal partial_sum(const FPSResult& r, long N, const BigRational& x0, long digits) {
    BigRational t0;
    switch (r.point.kind) {
        case ExpansionPoint::Kind::Finite: t0 = x0 - r.point.value; break;
        case ExpansionPoint::Kind::PosInf:
            if (x0.sign() <= 0) fail("domain", "expansion at +infinity needs x > 0");
            t0 = x0.inverse();
            break;
        case ExpansionPoint::Kind::NegInf:
            if (x0.sign() >= 0) fail("domain", "expansion at -infinity needs x < 0");
            t0 = x0.inverse();
            break;
    }
    if (t0.is_zero()) fail("domain", "evaluation at the expansion point");
    if (r.direction == Dir::Right && t0.sign() < 0)
        fail("domain", "expansion valid on the right side only");
    if (r.direction == Dir::Left && t0.sign() > 0)
        fail("domain", "expansion valid on the left side only");

    Expr tv = Expr::rational(t0);
    ExprVec parts;
    if (!r.constant.is_zero()) parts.push_back(r.constant);
    for (const ExplicitTerm& t : r.terms)
        parts.push_back(t.coeff * Expr::pow(tv, Expr::rational(t.exponent)));
    for (const LogTerm& lt : r.logs)
        parts.push_back(lt.coeff * Expr::pow(tv, Expr::rational(lt.exponent)) *
                        Expr::call("ln", {tv}));
    for (const PowerSum& s : r.sums)
        for (long k = 0; k < N; ++k)
            parts.push_back(eval_formula(s.coeff, s.index, k) *
                            Expr::pow(tv, Expr::rational(s.exponent_at(k))));
    long prec = (long)(digits * 3.33) + 48;
    return num_eval(Expr::sum(std::move(parts)), {}, prec);
}

namespace {

// Expr::to_string spaces its operators; the linear series syntax does not
std::string compact(const Expr& e) {
    std::string s = e.to_string();
    s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
    return s;
}

void join_signed(std::string& out, const std::string& part) {
    if (out.empty()) {
        out = part;
        return;
    }
    if (!part.empty() && part[0] == '-')
        out += " - " + part.substr(1);
    else
        out += " + " + part;
}

std::string render_text(const FPSResult& r) {
    Expr x = Expr::symbol(r.var);
    std::string out;
    if (!r.constant.is_zero()) join_signed(out, compact(r.constant));
    std::vector<LogTerm> logs = r.logs;
    std::stable_sort(logs.begin(), logs.end(),
                     [](const LogTerm& a, const LogTerm& b) { return a.exponent < b.exponent; });
    for (const LogTerm& lt : logs)
        join_signed(out, compact(lt.coeff * Expr::pow(x, Expr::rational(lt.exponent)) *
                                 Expr::call("ln", {x})));
    std::vector<ExplicitTerm> terms = r.terms;
    std::stable_sort(terms.begin(), terms.end(), [](const ExplicitTerm& a, const ExplicitTerm& b) {
        return a.exponent < b.exponent;
    });
    for (const ExplicitTerm& t : terms)
        join_signed(out, compact(t.coeff * Expr::pow(x, Expr::rational(t.exponent))));
    for (const PowerSum& s : r.sums)
        join_signed(out, "Sum(" + compact(s.summand(r.var)) + ", " + s.index +
                             "=0..infinity)");
    return out.empty() ? "0" : out;
}

// prefix grammar: rationals and names literally, otherwise
// (+ ...), (* ...), (^ b e), (fn args...), (product var body upper),
// (integral var body upper)
void prefix(const Expr& e, std::ostream& os) {
    switch (e.kind()) {
        case ExprKind::Rational: os << e.rational_value().to_string(); return;
        case ExprKind::Const:
        case ExprKind::Symbol: os << e.name(); return;
        case ExprKind::Sum:
        case ExprKind::Product: {
            os << (e.kind() == ExprKind::Sum ? "(+" : "(*");
            for (const Expr& k : e.operands()) {
                os << ' ';
                prefix(k, os);
            }
            os << ')';
            return;
        }
        case ExprKind::Power:
            os << "(^ ";
            prefix(e.base(), os);
            os << ' ';
            prefix(e.exponent(), os);
            os << ')';
            return;
        case ExprKind::Call: {
            os << '(' << e.name();
            for (const Expr& a : e.operands()) {
                os << ' ';
                prefix(a, os);
            }
            os << ')';
            return;
        }
        case ExprKind::Integral:
        case ExprKind::ProductOver:
            os << (e.kind() == ExprKind::Integral ? "(integral " : "(product ");
            os << e.name() << ' ';
            prefix(e.operands()[0], os);
            os << ' ';
            prefix(e.upper_limit(), os);
            os << ')';
            return;
    }
}

std::string prefix_str(const Expr& e) {
    std::ostringstream os;
    prefix(e, os);
    return os.str();
}

void emit_component(std::ostream& os, bool& first, const std::string& kind, long m, long n,
                    long r, const BigRational& s, const Expr& coeff) {
    if (!first) os << ',';
    first = false;
    os << "{\"kind\":\"" << kind << "\",\"exponent_map\":{\"m\":" << m << ",\"n\":" << n
       << ",\"r\":" << r << ",\"s\":\"" << s.to_string() << "\"},\"coefficient\":\""
       << prefix_str(coeff) << "\"}";
}

std::string render_structured(const FPSResult& r) {
    std::ostringstream os;
    os << "{\"point\":\"" << r.point.to_string() << "\",\"direction\":\"";
    switch (r.direction) {
        case Dir::TwoSided: os << "two-sided"; break;
        case Dir::Right: os << "right"; break;
        case Dir::Left: os << "left"; break;
    }
    os << "\",\"components\":[";
    bool first = true;
    if (!r.constant.is_zero())
        emit_component(os, first, "const", 0, 1, 0, BigRational(0), r.constant);
    std::vector<LogTerm> logs = r.logs;
    std::stable_sort(logs.begin(), logs.end(),
                     [](const LogTerm& a, const LogTerm& b) { return a.exponent < b.exponent; });
    for (const LogTerm& lt : logs)
        emit_component(os, first, "log", 0, 1, 0, lt.exponent, lt.coeff);
    std::vector<ExplicitTerm> terms = r.terms;
    std::stable_sort(terms.begin(), terms.end(), [](const ExplicitTerm& a, const ExplicitTerm& b) {
        return a.exponent < b.exponent;
    });
    for (const ExplicitTerm& t : terms)
        emit_component(os, first, "term", 0, 1, 0, t.exponent, t.coeff);
    for (const PowerSum& s : r.sums)
        emit_component(os, first, "sum", s.m, s.n, s.r, s.s, s.coeff);
    os << "]}";
    return os.str();
}

}  // namespace

std::string render(const FPSResult& r, RenderFormat format) {
    return format == RenderFormat::Text ? render_text(r) : render_structured(r);
}

}  // namespace fps
