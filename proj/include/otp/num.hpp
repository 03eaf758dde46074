#pragma once

#include <gmpxx.h>

#include <string>

namespace otp {

// Relative tolerance applied wherever an inexact value reaches a comparison.
inline constexpr double kRelTol = 1e-9;

// Scalar used for every coordinate, distance and cost in the workbench.
//
// A Num is either an exact rational (GMP mpq) or a plain double. Arithmetic
// stays exact as long as every operand is exact; one inexact operand makes
// the result inexact. Euclidean plane distances are the single inexact
// source in this project, so line and matrix pipelines run fully exact and
// their checks are equalities, not tolerances.
class Num {
  public:
    Num() : q_(0) {}
    Num(int v) : q_(v) {}
    Num(long v) : q_(v) {}
    Num(const mpq_class& q) : q_(q) {}
    Num(mpq_class&& q) : q_(std::move(q)) {}
    Num(const mpz_class& z) : q_(z) {}

    static Num inexact(double d);
    static Num ratio(long num, long den);

    // Accepts "123", "-4.25", "6.1e-3" and the fraction form "p/q".
    // Always yields an exact value. Throws ParseError on anything else.
    static Num parse(const std::string& text);

    bool is_exact() const { return exact_; }
    double to_double() const { return exact_ ? q_.get_d() : d_; }
    const mpq_class& exact_value() const;

    // Canonical text form. Exact values print as a minimal decimal when the
    // denominator is 2^a*5^b and as "p/q" otherwise; inexact values print as
    // the shortest round-tripping double.
    std::string str() const;

    int cmp(const Num& o) const;
    int sign() const;
    bool is_zero() const { return sign() == 0; }
    Num abs() const;

    Num& operator+=(const Num& o);
    Num& operator-=(const Num& o);
    Num& operator*=(const Num& o);
    Num& operator/=(const Num& o);
    Num operator-() const;

    friend Num operator+(Num a, const Num& b) { return a += b; }
    friend Num operator-(Num a, const Num& b) { return a -= b; }
    friend Num operator*(Num a, const Num& b) { return a *= b; }
    friend Num operator/(Num a, const Num& b) { return a /= b; }

    friend bool operator==(const Num& a, const Num& b) { return a.cmp(b) == 0; }
    friend bool operator!=(const Num& a, const Num& b) { return a.cmp(b) != 0; }
    friend bool operator<(const Num& a, const Num& b) { return a.cmp(b) < 0; }
    friend bool operator<=(const Num& a, const Num& b) { return a.cmp(b) <= 0; }
    friend bool operator>(const Num& a, const Num& b) { return a.cmp(b) > 0; }
    friend bool operator>=(const Num& a, const Num& b) { return a.cmp(b) >= 0; }

  private:
    mpq_class q_;      // meaningful iff exact_
    double d_ = 0.0;   // meaningful iff !exact_
    bool exact_ = true;
};

Num min(const Num& a, const Num& b);
Num max(const Num& a, const Num& b);
Num pow(const Num& base, unsigned long exp);

// Inexact by definition; used only for plane distances.
Num sqrt_inexact(const Num& v);

// a <= b, resp. a == b, exactly when both sides are exact; otherwise within
// rel_tol scaled by max(1, |a|, |b|).
bool approx_le(const Num& a, const Num& b, double rel_tol = kRelTol);
bool approx_eq(const Num& a, const Num& b, double rel_tol = kRelTol);

std::ostream& operator<<(std::ostream& os, const Num& v);

}  // namespace otp
