#pragma once

#include <complex>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "treewave/exact.hpp"

namespace treewave {

struct NotAFreeBasis : std::domain_error {
    using std::domain_error::domain_error;
};

/// Finitely supported element of C[x, x^-1]; no zero coefficients stored.
class LaurentPoly {
public:
    LaurentPoly() = default;

    static LaurentPoly constant(Scalar v) { return monomial(0, std::move(v)); }
    static LaurentPoly monomial(long k, Scalar v = Scalar(1)) {
        LaurentPoly f;
        f.set(k, std::move(v));
        return f;
    }

    Scalar coeff(long k) const {
        auto it = c_.find(k);
        return it == c_.end() ? Scalar(0) : it->second;
    }
    void set(long k, Scalar v) {
        if (v.is_zero())
            c_.erase(k);
        else
            c_[k] = std::move(v);
    }
    void add_to(long k, const Scalar& v) { set(k, coeff(k) + v); }

    bool is_zero() const { return c_.empty(); }
    long min_deg() const { return c_.empty() ? 0 : c_.begin()->first; }
    long max_deg() const { return c_.empty() ? 0 : c_.rbegin()->first; }

    const std::map<long, Scalar>& coeffs() const { return c_; }

    LaurentPoly operator+(const LaurentPoly& o) const;
    LaurentPoly operator-(const LaurentPoly& o) const;
    LaurentPoly operator*(const LaurentPoly& o) const;
    LaurentPoly operator*(const Scalar& s) const;
    LaurentPoly operator-() const;
    LaurentPoly& operator+=(const LaurentPoly& o) { return *this = *this + o; }
    LaurentPoly& operator-=(const LaurentPoly& o) { return *this = *this - o; }

    bool operator==(const LaurentPoly& o) const;
    bool operator!=(const LaurentPoly& o) const { return !(*this == o); }

    /// The involution w0: x -> x^-1.
    LaurentPoly w0() const;

    bool is_symmetric() const { return *this == w0(); }
    bool is_antisymmetric() const { return *this == -w0(); }

    /// Shift by x^k.
    LaurentPoly shifted(long k) const;

    std::complex<double> eval(std::complex<double> xi) const;
    Scalar eval_scalar(const Scalar& x) const;

    std::string str() const;

private:
    std::map<long, Scalar> c_;
};

inline LaurentPoly operator*(const Scalar& s, const LaurentPoly& f) { return f * s; }

/// Exact synthetic division by x - x^-1, top degree down.
/// Throws std::domain_error if a nonzero remainder appears.
LaurentPoly div_x_minus_xinv(const LaurentPoly& f);

/// Laurent polynomial fixed by w0; the wrapper checks the invariant once.
class SymLaurentPoly {
public:
    SymLaurentPoly() = default;
    explicit SymLaurentPoly(LaurentPoly p) : p_(std::move(p)) {
        if (!p_.is_symmetric())
            throw std::domain_error("SymLaurentPoly: not w0-invariant: " + p_.str());
    }

    const LaurentPoly& poly() const { return p_; }
    operator const LaurentPoly&() const { return p_; }

    Scalar coeff(long k) const { return p_.coeff(k); }
    bool is_zero() const { return p_.is_zero(); }
    long max_deg() const { return p_.max_deg(); }

    bool is_constant() const { return p_.is_zero() || (p_.min_deg() == 0 && p_.max_deg() == 0); }
    Scalar constant_value() const { return p_.coeff(0); }

    SymLaurentPoly operator+(const SymLaurentPoly& o) const {
        return SymLaurentPoly(p_ + o.p_);
    }
    SymLaurentPoly operator-(const SymLaurentPoly& o) const {
        return SymLaurentPoly(p_ - o.p_);
    }
    SymLaurentPoly operator*(const SymLaurentPoly& o) const {
        return SymLaurentPoly(p_ * o.p_);
    }
    SymLaurentPoly operator*(const Scalar& s) const { return SymLaurentPoly(p_ * s); }

    bool operator==(const SymLaurentPoly& o) const { return p_ == o.p_; }

private:
    LaurentPoly p_;
};

/// (f, g) := (fg - w0(fg)) / (x - x^-1); bilinear over the symmetric subring.
SymLaurentPoly pairing(const LaurentPoly& f, const LaurentPoly& g);

/// det [[ (h1,h1), (h1,h2) ], [ (h2,h1), (h2,h2) ]].
SymLaurentPoly gram_det(const LaurentPoly& h1, const LaurentPoly& h2);

/// (f + w0 f)/2 and (f - w0 f)/(x - x^-1); f = first + second * (x - x^-1).
std::pair<SymLaurentPoly, SymLaurentPoly> sym_antisym_split(const LaurentPoly& f);

/// Free basis of C[x,x^-1] over C[x+x^-1] together with its dual basis:
/// pairing(m_i, h_j) = delta_ij.
struct BasisPair {
    LaurentPoly h1, h2, m1, m2;
};

/// Throws NotAFreeBasis unless gram_det(h1, h2) is a nonzero constant.
std::pair<LaurentPoly, LaurentPoly> dual_basis(const LaurentPoly& h1, const LaurentPoly& h2);

BasisPair make_basis(const LaurentPoly& h1, const LaurentPoly& h2);

/// h1 = 1, h2 = (x - x^-1)/2; dual m1 = (x - x^-1)/2, m2 = 1.
BasisPair standard_basis();

/// Coefficients (a1, a2) with c = a1 h1 + a2 h2, a_i symmetric.
std::pair<SymLaurentPoly, SymLaurentPoly> decompose(const LaurentPoly& c, const BasisPair& basis);

/// Dense polynomial in the Chebyshev variable z = (x + x^-1)/2.
class Poly {
public:
    Poly() = default;
    explicit Poly(std::vector<Scalar> coeffs) : c_(std::move(coeffs)) { trim(); }
    static Poly constant(Scalar v) { return Poly(std::vector<Scalar>{std::move(v)}); }

    long degree() const { return static_cast<long>(c_.size()) - 1; }  // -1 for zero
    bool is_zero() const { return c_.empty(); }
    Scalar coeff(long k) const {
        return (k < 0 || k >= static_cast<long>(c_.size())) ? Scalar(0) : c_[k];
    }
    const std::vector<Scalar>& coeffs() const { return c_; }

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly operator*(const Scalar& s) const;
    bool operator==(const Poly& o) const { return c_ == o.c_; }
    bool operator!=(const Poly& o) const { return !(*this == o); }

    Scalar eval(const Scalar& z) const;
    double eval(double z) const;
    std::complex<double> eval(std::complex<double> z) const;

    std::string str() const;

private:
    std::vector<Scalar> c_;
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }
};

/// Rewrite a symmetric Laurent polynomial as a polynomial in z = (x+x^-1)/2.
Poly sym_to_poly(const SymLaurentPoly& f);

/// Substitute z = (x + x^-1)/2 back into a z-polynomial.
SymLaurentPoly poly_to_sym(const Poly& f);

}  // namespace treewave
