#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>

namespace treewave {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

struct IncompatibleScalars : std::domain_error {
    using std::domain_error::domain_error;
};

struct NotInvertible : std::domain_error {
    using std::domain_error::domain_error;
};

/// Element of Q[s_p, s_q] / (s_p^2 - p, s_q^2 - q), stored as
/// a + b*sqrt(p) + c*sqrt(q) + d*sqrt(pq) with rational components.
/// Values with different (p, q) tags never mix.
class QuadExt {
public:
    QuadExt(long p, long q) : p_(p), q_(q) { check_tag(); }
    QuadExt(long p, long q, Rational a, Rational b, Rational c, Rational d)
        : p_(p), q_(q), c_{std::move(a), std::move(b), std::move(c), std::move(d)} {
        check_tag();
    }

    static QuadExt from_rational(long p, long q, Rational a) {
        return QuadExt(p, q, std::move(a), 0, 0, 0);
    }
    static QuadExt sqrt_p(long p, long q) { return QuadExt(p, q, 0, 1, 0, 0); }
    static QuadExt sqrt_q(long p, long q) { return QuadExt(p, q, 0, 0, 1, 0); }
    static QuadExt sqrt_pq(long p, long q) { return QuadExt(p, q, 0, 0, 0, 1); }

    long p() const { return p_; }
    long q() const { return q_; }
    const Rational& a() const { return c_[0]; }
    const Rational& b() const { return c_[1]; }
    const Rational& c() const { return c_[2]; }
    const Rational& d() const { return c_[3]; }

    bool is_zero() const {
        return c_[0] == 0 && c_[1] == 0 && c_[2] == 0 && c_[3] == 0;
    }
    bool is_rational() const { return c_[1] == 0 && c_[2] == 0 && c_[3] == 0; }

    QuadExt operator-() const { return QuadExt(p_, q_, -c_[0], -c_[1], -c_[2], -c_[3]); }

    QuadExt operator+(const QuadExt& o) const {
        require_same_tag(o);
        return QuadExt(p_, q_, c_[0] + o.c_[0], c_[1] + o.c_[1], c_[2] + o.c_[2],
                       c_[3] + o.c_[3]);
    }
    QuadExt operator-(const QuadExt& o) const { return *this + (-o); }

    QuadExt operator*(const QuadExt& o) const {
        require_same_tag(o);
        const Rational &a1 = c_[0], &b1 = c_[1], &c1 = c_[2], &d1 = c_[3];
        const Rational &a2 = o.c_[0], &b2 = o.c_[1], &c2 = o.c_[2], &d2 = o.c_[3];
        Rational a = a1 * a2 + p_ * (b1 * b2) + q_ * (c1 * c2) + (p_ * q_) * (d1 * d2);
        Rational b = a1 * b2 + b1 * a2 + q_ * (c1 * d2 + d1 * c2);
        Rational c = a1 * c2 + c1 * a2 + p_ * (b1 * d2 + d1 * b2);
        Rational d = a1 * d2 + d1 * a2 + b1 * c2 + c1 * b2;
        return QuadExt(p_, q_, std::move(a), std::move(b), std::move(c), std::move(d));
    }

    bool operator==(const QuadExt& o) const {
        if (p_ != o.p_ || q_ != o.q_) return is_rational() && o.is_rational() && c_[0] == o.c_[0];
        return c_ == o.c_;
    }
    bool operator!=(const QuadExt& o) const { return !(*this == o); }

    /// Flip the sign of sqrt(p): (a, b, c, d) -> (a, -b, c, -d).
    QuadExt conj_p() const { return QuadExt(p_, q_, c_[0], -c_[1], c_[2], -c_[3]); }
    /// Flip the sign of sqrt(q): (a, b, c, d) -> (a, b, -c, -d).
    QuadExt conj_q() const { return QuadExt(p_, q_, c_[0], c_[1], -c_[2], -c_[3]); }

    /// Multiplicative inverse via repeated conjugation. The product with the
    /// three conjugates is rational; when it vanishes the element is a zero
    /// divisor (possible when p or q is a perfect square) and we throw.
    QuadExt inv() const;

    double to_double() const;

    std::string str() const;

private:
    long p_, q_;
    std::array<Rational, 4> c_{};

    void check_tag() const {
        if (p_ < 1 || q_ < 1) throw std::domain_error("QuadExt: p, q must be positive");
    }
    void require_same_tag(const QuadExt& o) const {
        if (p_ != o.p_ || q_ != o.q_)
            throw IncompatibleScalars("QuadExt: (p,q) tags differ: (" + std::to_string(p_) +
                                      "," + std::to_string(q_) + ") vs (" +
                                      std::to_string(o.p_) + "," + std::to_string(o.q_) + ")");
    }
};

/// Tagged union Rational | QuadExt | double with one-way promotion
/// Rational -> QuadExt -> double.
class Scalar {
public:
    enum class Kind { Rat, Quad, F64 };

    Scalar() : v_(Rational(0)) {}
    Scalar(int n) : v_(Rational(n)) {}
    Scalar(long n) : v_(Rational(n)) {}
    Scalar(long long n) : v_(Rational(n)) {}
    Scalar(Rational r) : v_(std::move(r)) {}
    Scalar(QuadExt x) : v_(std::move(x)) {}
    explicit Scalar(double x) : v_(x) {}

    static Scalar ratio(long num, long den) { return Scalar(Rational(num, den)); }

    Kind kind() const { return static_cast<Kind>(v_.index()); }
    bool is_exact() const { return kind() != Kind::F64; }
    bool is_zero() const;

    const Rational& rat() const { return std::get<Rational>(v_); }
    const QuadExt& quad() const { return std::get<QuadExt>(v_); }
    double f64() const { return std::get<double>(v_); }

    double to_double() const;

    Scalar operator+(const Scalar& o) const;
    Scalar operator-(const Scalar& o) const;
    Scalar operator*(const Scalar& o) const;
    Scalar operator/(const Scalar& o) const;
    Scalar operator-() const;
    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

    bool operator==(const Scalar& o) const;
    bool operator!=(const Scalar& o) const { return !(*this == o); }

    /// Multiplicative inverse; throws NotInvertible on zero or zero divisors.
    Scalar inv() const;
    Scalar pow(long e) const;

    std::string str() const;

private:
    std::variant<Rational, QuadExt, double> v_;
};

inline Scalar operator*(long n, const Scalar& s) { return Scalar(n) * s; }

/// sqrt(n) as a Scalar with tag (1, n); exact for use in the regular-tree ring Q(sqrt q).
inline Scalar sqrt_scalar(long n) {
    if (n == 1) return Scalar(1);
    return Scalar(QuadExt::sqrt_q(1, n));
}

/// sqrt(p), sqrt(q), sqrt(pq) in the two-generator ring with tag (p, q).
/// A perfect square of 1 collapses to the rational 1 so the degenerate
/// rings (p = 1 or q = 1) stay free of zero divisors in practice.
inline Scalar sqrt_p_scalar(long p, long q) {
    return p == 1 ? Scalar(1) : Scalar(QuadExt::sqrt_p(p, q));
}
inline Scalar sqrt_q_scalar(long p, long q) {
    return q == 1 ? Scalar(1) : Scalar(QuadExt::sqrt_q(p, q));
}
inline Scalar sqrt_pq_scalar(long p, long q) {
    if (p == 1) return sqrt_q_scalar(p, q);
    if (q == 1) return sqrt_p_scalar(p, q);
    return Scalar(QuadExt::sqrt_pq(p, q));
}

}  // namespace treewave
