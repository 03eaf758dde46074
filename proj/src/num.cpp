#include "otp/num.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <ostream>

#include "otp/errors.hpp"

namespace otp {

Num Num::inexact(double d) {
    if (!std::isfinite(d)) throw DomainError("non-finite value");
    Num n;
    n.exact_ = false;
    n.d_ = d;
    n.q_ = 0;
    return n;
}

Num Num::ratio(long num, long den) {
    if (den == 0) throw DomainError("zero denominator");
    mpq_class q(num, den);
    q.canonicalize();
    return Num(std::move(q));
}

const mpq_class& Num::exact_value() const {
    if (!exact_) throw InternalError("exact_value() on an inexact Num");
    return q_;
}

namespace {

bool all_digits(const std::string& s, std::size_t from, std::size_t to) {
    if (from >= to) return false;
    for (std::size_t i = from; i < to; ++i)
        if (s[i] < '0' || s[i] > '9') return false;
    return true;
}

mpz_class parse_integer(const std::string& s, const std::string& context) {
    std::size_t start = 0;
    if (!s.empty() && (s[0] == '+' || s[0] == '-')) start = 1;
    if (!all_digits(s, start, s.size()))
        throw ParseError("bad numeric literal '" + context + "'");
    // mpz_set_str takes a leading '-' but not a '+'.
    if (s[0] == '+') return mpz_class(s.substr(1), 10);
    return mpz_class(s, 10);
}

}  // namespace

Num Num::parse(const std::string& text) {
    if (text.empty()) throw ParseError("empty numeric literal");

    if (auto slash = text.find('/'); slash != std::string::npos) {
        mpz_class num = parse_integer(text.substr(0, slash), text);
        mpz_class den = parse_integer(text.substr(slash + 1), text);
        if (den == 0) throw ParseError("zero denominator in '" + text + "'");
        mpq_class q(num, den);
        q.canonicalize();
        return Num(std::move(q));
    }

    std::size_t pos = 0;
    bool negative = false;
    if (text[pos] == '+' || text[pos] == '-') {
        negative = text[pos] == '-';
        ++pos;
    }
    std::string digits;
    long frac_len = 0;
    std::size_t int_start = pos;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
    if (pos == int_start) throw ParseError("bad numeric literal '" + text + "'");
    digits = text.substr(int_start, pos - int_start);
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        std::size_t frac_start = pos;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
        if (pos == frac_start) throw ParseError("bad numeric literal '" + text + "'");
        digits += text.substr(frac_start, pos - frac_start);
        frac_len = static_cast<long>(pos - frac_start);
    }
    long exp10 = 0;
    if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
        ++pos;
        bool exp_neg = false;
        if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
            exp_neg = text[pos] == '-';
            ++pos;
        }
        std::size_t exp_start = pos;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
        if (pos == exp_start || pos - exp_start > 6)
            throw ParseError("bad numeric literal '" + text + "'");
        exp10 = std::strtol(text.c_str() + exp_start, nullptr, 10);
        if (exp_neg) exp10 = -exp10;
    }
    if (pos != text.size()) throw ParseError("bad numeric literal '" + text + "'");

    mpz_class mantissa(digits, 10);
    if (negative) mantissa = -mantissa;
    long shift = exp10 - frac_len;
    mpq_class q(mantissa);
    if (shift != 0) {
        mpz_class p10;
        mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(shift)));
        if (shift > 0)
            q *= mpq_class(p10);
        else
            q /= mpq_class(p10);
    }
    q.canonicalize();
    return Num(std::move(q));
}

std::string Num::str() const {
    if (!exact_) {
        char buf[64];
        auto res = std::to_chars(buf, buf + sizeof(buf), d_);
        return std::string(buf, res.ptr);
    }
    const mpz_class& num = q_.get_num();
    const mpz_class& den = q_.get_den();
    if (den == 1) return num.get_str();

    mpz_class without_twos, rest;
    mpz_class two(2), five(5);
    unsigned long twos =
        mpz_remove(without_twos.get_mpz_t(), den.get_mpz_t(), two.get_mpz_t());
    unsigned long fives =
        mpz_remove(rest.get_mpz_t(), without_twos.get_mpz_t(), five.get_mpz_t());
    if (rest != 1) return num.get_str() + "/" + den.get_str();

    unsigned long scale = twos > fives ? twos : fives;
    mpz_class p10;
    mpz_ui_pow_ui(p10.get_mpz_t(), 10, scale);
    mpz_class digits = ::abs(num) * (p10 / den);
    mpz_class ip = digits / p10;
    mpz_class fp = digits % p10;
    std::string frac = fp.get_str();
    frac.insert(frac.begin(), scale - frac.size(), '0');
    while (!frac.empty() && frac.back() == '0') frac.pop_back();
    std::string out = sgn(num) < 0 ? "-" : "";
    out += ip.get_str();
    if (!frac.empty()) {
        out += '.';
        out += frac;
    }
    return out;
}

int Num::cmp(const Num& o) const {
    if (exact_ && o.exact_) {
        int c = ::cmp(q_, o.q_);
        return (c > 0) - (c < 0);
    }
    double x = to_double();
    double y = o.to_double();
    return (x > y) - (x < y);
}

int Num::sign() const {
    if (exact_) return sgn(q_);
    return (d_ > 0.0) - (d_ < 0.0);
}

Num Num::abs() const {
    if (exact_) return Num(mpq_class(::abs(q_)));
    return Num::inexact(std::fabs(d_));
}

Num& Num::operator+=(const Num& o) {
    if (exact_ && o.exact_) {
        q_ += o.q_;
    } else {
        d_ = to_double() + o.to_double();
        exact_ = false;
        q_ = 0;
    }
    return *this;
}

Num& Num::operator-=(const Num& o) {
    if (exact_ && o.exact_) {
        q_ -= o.q_;
    } else {
        d_ = to_double() - o.to_double();
        exact_ = false;
        q_ = 0;
    }
    return *this;
}

Num& Num::operator*=(const Num& o) {
    if (exact_ && o.exact_) {
        q_ *= o.q_;
    } else {
        d_ = to_double() * o.to_double();
        exact_ = false;
        q_ = 0;
    }
    return *this;
}

Num& Num::operator/=(const Num& o) {
    if (o.sign() == 0) throw DomainError("division by zero");
    if (exact_ && o.exact_) {
        q_ /= o.q_;
    } else {
        d_ = to_double() / o.to_double();
        exact_ = false;
        q_ = 0;
    }
    return *this;
}

Num Num::operator-() const {
    if (exact_) return Num(mpq_class(-q_));
    return Num::inexact(-d_);
}

Num min(const Num& a, const Num& b) { return a.cmp(b) <= 0 ? a : b; }
Num max(const Num& a, const Num& b) { return a.cmp(b) >= 0 ? a : b; }

Num pow(const Num& base, unsigned long exp) {
    if (!base.is_exact())
        return Num::inexact(std::pow(base.to_double(), static_cast<double>(exp)));
    const mpq_class& q = base.exact_value();
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), q.get_num().get_mpz_t(), exp);
    mpz_pow_ui(den.get_mpz_t(), q.get_den().get_mpz_t(), exp);
    return Num(mpq_class(num, den));
}

Num sqrt_inexact(const Num& v) {
    if (v.sign() < 0) throw DomainError("sqrt of a negative value");
    return Num::inexact(std::sqrt(v.to_double()));
}

namespace {

double tol_scale(const Num& a, const Num& b) {
    double base = 1.0;
    double x = std::fabs(a.to_double());
    double y = std::fabs(b.to_double());
    if (x > base) base = x;
    if (y > base) base = y;
    return base;
}

}  // namespace

bool approx_le(const Num& a, const Num& b, double rel_tol) {
    if (a.is_exact() && b.is_exact()) return a <= b;
    return a.to_double() <= b.to_double() + rel_tol * tol_scale(a, b);
}

bool approx_eq(const Num& a, const Num& b, double rel_tol) {
    if (a.is_exact() && b.is_exact()) return a == b;
    return std::fabs(a.to_double() - b.to_double()) <= rel_tol * tol_scale(a, b);
}

std::ostream& operator<<(std::ostream& os, const Num& v) { return os << v.str(); }

}  // namespace otp
