#include "treewave/exact.hpp"

#include <cmath>
#include <sstream>

namespace treewave {

QuadExt QuadExt::inv() const {
    if (is_zero()) throw NotInvertible("QuadExt: inverse of zero");
    // n1 = x * conj_p(x) lies in the subring generated by sqrt(q);
    // norm = n1 * conj_q(n1) is then purely rational.
    QuadExt n1 = *this * conj_p();
    QuadExt norm = n1 * n1.conj_q();
    if (!norm.is_rational())
        throw std::logic_error("QuadExt::inv: conjugation norm not rational");
    if (norm.a() == 0) throw NotInvertible("QuadExt: zero divisor, no inverse");
    QuadExt res = conj_p() * n1.conj_q();
    Rational s = Rational(1) / norm.a();
    return QuadExt(p_, q_, res.a() * s, res.b() * s, res.c() * s, res.d() * s);
}

double QuadExt::to_double() const {
    double sp = std::sqrt(static_cast<double>(p_));
    double sq = std::sqrt(static_cast<double>(q_));
    return static_cast<double>(c_[0]) + static_cast<double>(c_[1]) * sp +
           static_cast<double>(c_[2]) * sq + static_cast<double>(c_[3]) * sp * sq;
}

namespace {

std::string rat_str(const Rational& r) {
    std::ostringstream os;
    os << r;
    return os.str();
}

void append_term(std::string& out, const Rational& r, const std::string& radical) {
    if (r == 0) return;
    if (!out.empty() && r > 0) out += "+";
    if (radical.empty()) {
        out += rat_str(r);
        return;
    }
    if (r == 1) {
        out += radical;
    } else if (r == -1) {
        out += "-" + radical;
    } else {
        out += rat_str(r) + radical;
    }
}

}  // namespace

std::string QuadExt::str() const {
    std::string out;
    append_term(out, c_[0], "");
    append_term(out, c_[1], "√" + std::to_string(p_));
    append_term(out, c_[2], "√" + std::to_string(q_));
    append_term(out, c_[3], "√" + std::to_string(p_ * q_));
    if (out.empty()) out = "0";
    return out;
}

bool Scalar::is_zero() const {
    switch (kind()) {
        case Kind::Rat: return rat() == 0;
        case Kind::Quad: return quad().is_zero();
        case Kind::F64: return f64() == 0.0;
    }
    return false;
}

double Scalar::to_double() const {
    switch (kind()) {
        case Kind::Rat: return static_cast<double>(rat());
        case Kind::Quad: return quad().to_double();
        case Kind::F64: return f64();
    }
    return 0.0;
}

namespace {

QuadExt embed(const Rational& r, long p, long q) {
    return QuadExt::from_rational(p, q, r);
}

template <typename RatOp, typename QuadOp, typename F64Op>
Scalar binop(const Scalar& x, const Scalar& y, RatOp rop, QuadOp qop, F64Op fop) {
    using K = Scalar::Kind;
    K kx = x.kind(), ky = y.kind();
    if (kx == K::F64 || ky == K::F64) return Scalar(fop(x.to_double(), y.to_double()));
    if (kx == K::Rat && ky == K::Rat) return Scalar(rop(x.rat(), y.rat()));
    if (kx == K::Quad && ky == K::Quad) return Scalar(qop(x.quad(), y.quad()));
    if (kx == K::Rat) {
        const QuadExt& b = y.quad();
        return Scalar(qop(embed(x.rat(), b.p(), b.q()), b));
    }
    const QuadExt& a = x.quad();
    return Scalar(qop(a, embed(y.rat(), a.p(), a.q())));
}

}  // namespace

Scalar Scalar::operator+(const Scalar& o) const {
    return binop(
        *this, o, [](const Rational& a, const Rational& b) { return a + b; },
        [](const QuadExt& a, const QuadExt& b) { return a + b; },
        [](double a, double b) { return a + b; });
}

Scalar Scalar::operator-(const Scalar& o) const {
    return binop(
        *this, o, [](const Rational& a, const Rational& b) { return a - b; },
        [](const QuadExt& a, const QuadExt& b) { return a - b; },
        [](double a, double b) { return a - b; });
}

Scalar Scalar::operator*(const Scalar& o) const {
    return binop(
        *this, o, [](const Rational& a, const Rational& b) { return a * b; },
        [](const QuadExt& a, const QuadExt& b) { return a * b; },
        [](double a, double b) { return a * b; });
}

Scalar Scalar::operator/(const Scalar& o) const { return *this * o.inv(); }

Scalar Scalar::operator-() const {
    switch (kind()) {
        case Kind::Rat: return Scalar(-rat());
        case Kind::Quad: return Scalar(-quad());
        case Kind::F64: return Scalar(-f64());
    }
    return Scalar();
}

bool Scalar::operator==(const Scalar& o) const {
    using K = Kind;
    K kx = kind(), ky = o.kind();
    if (kx == K::F64 || ky == K::F64) return to_double() == o.to_double();
    if (kx == K::Rat && ky == K::Rat) return rat() == o.rat();
    if (kx == K::Quad && ky == K::Quad) return quad() == o.quad();
    const QuadExt& qe = (kx == K::Quad) ? quad() : o.quad();
    const Rational& r = (kx == K::Rat) ? rat() : o.rat();
    return qe.is_rational() && qe.a() == r;
}

Scalar Scalar::inv() const {
    switch (kind()) {
        case Kind::Rat:
            if (rat() == 0) throw NotInvertible("Scalar: inverse of zero");
            return Scalar(Rational(1) / rat());
        case Kind::Quad: return Scalar(quad().inv());
        case Kind::F64:
            if (f64() == 0.0) throw NotInvertible("Scalar: inverse of zero");
            return Scalar(1.0 / f64());
    }
    return Scalar();
}

Scalar Scalar::pow(long e) const {
    if (e < 0) return inv().pow(-e);
    Scalar base = *this, acc(1);
    unsigned long k = static_cast<unsigned long>(e);
    while (k) {
        if (k & 1) acc = acc * base;
        base = base * base;
        k >>= 1;
    }
    return acc;
}

std::string Scalar::str() const {
    switch (kind()) {
        case Kind::Rat: return rat_str(rat());
        case Kind::Quad: return quad().str();
        case Kind::F64: {
            char buf[64];
            snprintf(buf, sizeof buf, "%.17g", f64());
            return buf;
        }
    }
    return "0";
}

}  // namespace treewave
