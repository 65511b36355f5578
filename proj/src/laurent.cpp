#include "treewave/laurent.hpp"

#include <sstream>

namespace treewave {

LaurentPoly LaurentPoly::operator+(const LaurentPoly& o) const {
    LaurentPoly r = *this;
    for (const auto& [k, v] : o.c_) r.add_to(k, v);
    return r;
}

LaurentPoly LaurentPoly::operator-(const LaurentPoly& o) const {
    LaurentPoly r = *this;
    for (const auto& [k, v] : o.c_) r.add_to(k, -v);
    return r;
}

LaurentPoly LaurentPoly::operator*(const LaurentPoly& o) const {
    LaurentPoly r;
    for (const auto& [i, a] : c_)
        for (const auto& [j, b] : o.c_) r.add_to(i + j, a * b);
    return r;
}

LaurentPoly LaurentPoly::operator*(const Scalar& s) const {
    LaurentPoly r;
    if (s.is_zero()) return r;
    for (const auto& [k, v] : c_) r.set(k, v * s);
    return r;
}

LaurentPoly LaurentPoly::operator-() const {
    LaurentPoly r;
    for (const auto& [k, v] : c_) r.set(k, -v);
    return r;
}

bool LaurentPoly::operator==(const LaurentPoly& o) const {
    if (c_.size() != o.c_.size()) return false;
    auto it = c_.begin(), jt = o.c_.begin();
    for (; it != c_.end(); ++it, ++jt)
        if (it->first != jt->first || !(it->second == jt->second)) return false;
    return true;
}

LaurentPoly LaurentPoly::w0() const {
    LaurentPoly r;
    for (const auto& [k, v] : c_) r.set(-k, v);
    return r;
}

LaurentPoly LaurentPoly::shifted(long k) const {
    LaurentPoly r;
    for (const auto& [i, v] : c_) r.set(i + k, v);
    return r;
}

std::complex<double> LaurentPoly::eval(std::complex<double> xi) const {
    std::complex<double> acc(0.0, 0.0);
    for (const auto& [k, v] : c_) acc += v.to_double() * std::pow(xi, static_cast<double>(k));
    return acc;
}

Scalar LaurentPoly::eval_scalar(const Scalar& x) const {
    Scalar acc(0);
    for (const auto& [k, v] : c_) acc += v * x.pow(k);
    return acc;
}

std::string LaurentPoly::str() const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
        if (!first) os << " + ";
        os << "(" << it->second.str() << ")";
        if (it->first != 0) os << "x^" << it->first;
        first = false;
    }
    return os.str();
}

LaurentPoly div_x_minus_xinv(const LaurentPoly& f) {
    LaurentPoly q;
    if (f.is_zero()) return q;
    const long top = f.max_deg(), bot = f.min_deg();
    // (x - x^-1) q = f  <=>  q_{k-1} = f_k + q_{k+1}, from the top down.
    for (long k = top; k >= bot; --k) {
        Scalar v = f.coeff(k) + q.coeff(k + 1);
        q.set(k - 1, v);
    }
    // Below the bottom the recurrence is 2-periodic; exactness forces both
    // residues to vanish.
    if (!q.coeff(bot - 1).is_zero() || !q.coeff(bot).is_zero())
        throw std::domain_error("div_x_minus_xinv: nonzero remainder for " + f.str());
    return q;
}

SymLaurentPoly pairing(const LaurentPoly& f, const LaurentPoly& g) {
    LaurentPoly fg = f * g;
    return SymLaurentPoly(div_x_minus_xinv(fg - fg.w0()));
}

SymLaurentPoly gram_det(const LaurentPoly& h1, const LaurentPoly& h2) {
    SymLaurentPoly g11 = pairing(h1, h1), g12 = pairing(h1, h2), g22 = pairing(h2, h2);
    return g11 * g22 - g12 * g12;
}

std::pair<SymLaurentPoly, SymLaurentPoly> sym_antisym_split(const LaurentPoly& f) {
    // f = even + odd * (x - x^-1) exactly.
    LaurentPoly w = f.w0();
    SymLaurentPoly even((f + w) * Scalar(Rational(1, 2)));
    SymLaurentPoly odd(div_x_minus_xinv(f - w) * Scalar(Rational(1, 2)));
    return {even, odd};
}

std::pair<LaurentPoly, LaurentPoly> dual_basis(const LaurentPoly& h1, const LaurentPoly& h2) {
    SymLaurentPoly g11 = pairing(h1, h1), g12 = pairing(h1, h2), g22 = pairing(h2, h2);
    SymLaurentPoly det = g11 * g22 - g12 * g12;
    if (!det.is_constant() || det.is_zero())
        throw NotAFreeBasis("dual_basis: Gram determinant is not a nonzero constant: " +
                            det.poly().str());
    Scalar inv_det = det.constant_value().inv();
    // [m1, m2]^T = G^-1 [h1, h2]^T
    LaurentPoly m1 = (g22.poly() * h1 - g12.poly() * h2) * inv_det;
    LaurentPoly m2 = (g11.poly() * h2 - g12.poly() * h1) * inv_det;
    return {m1, m2};
}

BasisPair make_basis(const LaurentPoly& h1, const LaurentPoly& h2) {
    auto [m1, m2] = dual_basis(h1, h2);
    return BasisPair{h1, h2, m1, m2};
}

BasisPair standard_basis() {
    LaurentPoly one = LaurentPoly::constant(Scalar(1));
    LaurentPoly half_diff;  // (x - x^-1)/2
    half_diff.set(1, Scalar(Rational(1, 2)));
    half_diff.set(-1, Scalar(Rational(-1, 2)));
    return BasisPair{one, half_diff, half_diff, one};
}

std::pair<SymLaurentPoly, SymLaurentPoly> decompose(const LaurentPoly& c,
                                                    const BasisPair& basis) {
    return {pairing(basis.m1, c), pairing(basis.m2, c)};
}

Poly Poly::operator+(const Poly& o) const {
    std::vector<Scalar> r(std::max(c_.size(), o.c_.size()), Scalar(0));
    for (size_t i = 0; i < r.size(); ++i) r[i] = coeff(i) + o.coeff(i);
    return Poly(std::move(r));
}

Poly Poly::operator-(const Poly& o) const {
    std::vector<Scalar> r(std::max(c_.size(), o.c_.size()), Scalar(0));
    for (size_t i = 0; i < r.size(); ++i) r[i] = coeff(i) - o.coeff(i);
    return Poly(std::move(r));
}

Poly Poly::operator*(const Poly& o) const {
    if (is_zero() || o.is_zero()) return Poly();
    std::vector<Scalar> r(c_.size() + o.c_.size() - 1, Scalar(0));
    for (size_t i = 0; i < c_.size(); ++i)
        for (size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
    return Poly(std::move(r));
}

Poly Poly::operator*(const Scalar& s) const {
    std::vector<Scalar> r = c_;
    for (auto& v : r) v = v * s;
    return Poly(std::move(r));
}

Scalar Poly::eval(const Scalar& z) const {
    Scalar acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
    return acc;
}

double Poly::eval(double z) const {
    double acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + it->to_double();
    return acc;
}

std::complex<double> Poly::eval(std::complex<double> z) const {
    std::complex<double> acc(0.0, 0.0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + it->to_double();
    return acc;
}

std::string Poly::str() const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    for (long k = degree(); k >= 0; --k) {
        if (c_[k].is_zero()) continue;
        if (k != degree()) os << " + ";
        os << "(" << c_[k].str() << ")";
        if (k > 0) os << "z^" << k;
    }
    return os.str();
}

Poly sym_to_poly(const SymLaurentPoly& f) {
    // f = c_0 + sum_{k>=1} c_k (x^k + x^-k) and x^k + x^-k = 2 T_k(z),
    // with T_k generated exactly by the three-term recurrence.
    long top = f.is_zero() ? 0 : f.max_deg();
    Poly acc = Poly::constant(f.coeff(0));
    Poly t_prev = Poly::constant(Scalar(1));                // T_0
    Poly t_cur(std::vector<Scalar>{Scalar(0), Scalar(1)});  // T_1
    const Poly two_z(std::vector<Scalar>{Scalar(0), Scalar(2)});
    for (long k = 1; k <= top; ++k) {
        Scalar ck = f.coeff(k);
        if (!ck.is_zero()) acc = acc + t_cur * (Scalar(2) * ck);
        Poly t_next = two_z * t_cur - t_prev;
        t_prev = t_cur;
        t_cur = t_next;
    }
    return acc;
}

SymLaurentPoly poly_to_sym(const Poly& f) {
    LaurentPoly z;
    z.set(1, Scalar(Rational(1, 2)));
    z.set(-1, Scalar(Rational(1, 2)));
    LaurentPoly acc, zpow = LaurentPoly::constant(Scalar(1));
    for (long k = 0; k <= f.degree(); ++k) {
        acc += zpow * f.coeff(k);
        if (k < f.degree()) zpow = zpow * z;
    }
    return SymLaurentPoly(acc);
}

}  // namespace treewave
