#include "treewave/chebyshev.hpp"

#include <cmath>

namespace treewave::cheb {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

ChebFamily::ChebFamily(LaurentPoly h, FamilyKind kind, std::optional<HFactors> factors, long p,
                       long q)
    : h_(std::move(h)), kind_(kind), factors_(factors), p_(p), q_(q) {}

ChebFamily::ChebFamily(const ChebFamily& o)
    : h_(o.h_), kind_(o.kind_), factors_(o.factors_), p_(o.p_), q_(o.q_) {
    std::lock_guard<std::mutex> lk(o.mu_);
    cache_ = o.cache_;
}

Poly ChebFamily::cheb(long t) const {
    if (t < 0) return cheb_of(h_, t);
    std::lock_guard<std::mutex> lk(mu_);
    while (static_cast<long>(cache_.size()) <= t)
        cache_.push_back(cheb_of(h_, static_cast<long>(cache_.size())));
    return cache_[static_cast<size_t>(t)];
}

Poly cheb_of(const LaurentPoly& h, long t) {
    LaurentPoly num = h.shifted(t);
    num -= num.w0();
    return sym_to_poly(SymLaurentPoly(div_x_minus_xinv(num)));
}

Poly cheb_recurrence_step(const Poly& a_t, const Poly& a_tm1) {
    Poly two_z(std::vector<Scalar>{Scalar(0), Scalar(2)});
    return two_z * a_t - a_tm1;
}

ChebFamily special_family(FamilyKind kind, long p, long q) {
    Scalar half(Rational(1, 2));
    switch (kind) {
        case FamilyKind::T: {
            LaurentPoly h;
            h.set(1, half);
            h.set(-1, -half);
            // (x - x^-1)/2 = (1/2)(1 - x^-1)(1 + x^-1) x
            return ChebFamily(h, kind, HFactors{1.0, 1.0});
        }
        case FamilyKind::U:
            // measure-wise |h| = |x| = 1 on S^1: both factor slots empty
            return ChebFamily(LaurentPoly::constant(Scalar(1)), kind, HFactors{0.0, 0.0});
        case FamilyKind::V: {
            LaurentPoly h = LaurentPoly::monomial(1) - LaurentPoly::constant(Scalar(1));
            return ChebFamily(h, kind, HFactors{1.0, 0.0});
        }
        case FamilyKind::W: {
            LaurentPoly h = LaurentPoly::monomial(1) + LaurentPoly::constant(Scalar(1));
            return ChebFamily(h, kind, HFactors{0.0, 1.0});
        }
        case FamilyKind::F: {
            if (q < 1) throw std::domain_error("special_family: F needs q >= 1");
            LaurentPoly h = LaurentPoly::monomial(1);
            h.set(-1, Scalar(Rational(-1, q)));
            double s = 1.0 / std::sqrt(static_cast<double>(q));
            return ChebFamily(h, kind, HFactors{s, s}, 1, q);
        }
        case FamilyKind::H: {
            if (p < 1 || q < 1) throw std::domain_error("special_family: H needs p, q >= 1");
            // h = x + (b_inv - a_inv) - q^-1 x^-1 with a = sqrt(pq), b = sqrt(q/p)
            LaurentPoly h = LaurentPoly::monomial(1);
            Scalar mid = (sqrt_pq_scalar(p, q) * Scalar(Rational(p - 1, p * q)));
            h.add_to(0, mid);  // (p-1)/sqrt(pq)
            h.set(-1, Scalar(Rational(-1, q)));
            double a_inv = 1.0 / std::sqrt(static_cast<double>(p) * q);
            double b_inv = std::sqrt(static_cast<double>(p) / q);
            return ChebFamily(h, kind, HFactors{a_inv, b_inv}, p, q);
        }
        case FamilyKind::R: {
            if (p < 1 || q < 1) throw std::domain_error("special_family: R needs p, q >= 1");
            Scalar b_inv = sqrt_pq_scalar(p, q) * Scalar(Rational(1, q));  // sqrt(p/q)
            LaurentPoly h = LaurentPoly::monomial(1) + LaurentPoly::constant(b_inv);
            return ChebFamily(h, kind, HFactors{0.0, std::sqrt(double(p) / double(q))}, p, q);
        }
        default:
            throw std::domain_error("special_family: parametrized kind needs mp_family");
    }
}

ChebFamily mp_family(const Scalar& b_inv) {
    LaurentPoly h = LaurentPoly::monomial(1) + LaurentPoly::constant(b_inv);
    return ChebFamily(h, FamilyKind::MP, HFactors{0.0, b_inv.to_double()});
}

SpectralMeasure::SpectralMeasure(LaurentPoly h, double weight, std::vector<Atom> atoms,
                                 std::string label)
    : h_(std::move(h)), weight_(weight), atoms_(std::move(atoms)), label_(std::move(label)) {}

double SpectralMeasure::density_theta(double theta) const {
    std::complex<double> xi = std::polar(1.0, theta);
    double s = std::sin(theta);
    double hh = std::norm(h_.eval(xi));
    return weight_ * 4.0 * s * s / hh;
}

double SpectralMeasure::density_z(double z) const {
    double theta = std::acos(z);
    return density_theta(theta) / std::sqrt(1.0 - z * z);
}

double SpectralMeasure::total_mass(int nodes) const {
    double acc = 0.0;
    for (int j = 0; j < nodes; ++j) {
        double theta = 2.0 * kPi * (j + 0.5) / nodes;
        acc += density_theta(theta);
    }
    acc *= 2.0 * kPi / nodes;
    for (const Atom& a : atoms_) acc += a.mass;
    return acc;
}

SpectralMeasure ortho_measure(const ChebFamily& fam) {
    std::vector<Atom> atoms;
    if (fam.factors()) {
        double a_inv = fam.factors()->a_inv, b_inv = fam.factors()->b_inv;
        if (b_inv > 1.0) {
            double b = 1.0 / b_inv;
            double mass = 4.0 * kPi * (1.0 - b * b) /
                          ((1.0 + a_inv * b_inv) * (1.0 + a_inv * b));
            atoms.push_back(Atom{-b, -(b + b_inv) / 2.0, mass});
        }
    } else {
        // No factorization supplied: reject h with a zero on S^1 away from +-1.
        for (int j = 1; j < 512; ++j) {
            double theta = kPi * j / 512.0;
            std::complex<double> xi = std::polar(1.0, theta);
            double s = std::sin(theta);
            if (std::abs(fam.h().eval(xi)) < 1e-9 && std::abs(s) > 1e-3)
                throw UnsupportedMeasure("ortho_measure: h vanishes on S^1 away from +-1");
        }
    }
    return SpectralMeasure(fam.h(), 1.0, std::move(atoms), "ortho");
}

ZMeasure pushforward_to_z(const SpectralMeasure& mu) {
    ZMeasure out;
    out.density = [mu](double z) { return mu.density_z(z); };
    out.atoms = mu.atoms();
    return out;
}

double quad_inner(const Poly& f, const Poly& g, const SpectralMeasure& mu, int nodes) {
    if (nodes < 64) throw std::domain_error("quad_inner: need at least 64 nodes");
    double acc = 0.0;
    for (int j = 0; j < nodes; ++j) {
        double theta = 2.0 * kPi * (j + 0.5) / nodes;
        double z = std::cos(theta);
        acc += f.eval(z) * g.eval(z) * mu.density_theta(theta);
    }
    acc *= 2.0 * kPi / nodes;
    for (const Atom& a : mu.atoms()) acc += a.mass * f.eval(a.z) * g.eval(a.z);
    return acc;
}

double closed_density_z(FamilyKind kind, double z, long p, long q, double b_inv) {
    double s = std::sqrt(1.0 - z * z);
    switch (kind) {
        case FamilyKind::T: return 4.0 / s;
        case FamilyKind::U: return 4.0 * s;
        case FamilyKind::V: return 2.0 * std::sqrt((1.0 + z) / (1.0 - z));
        case FamilyKind::W: return 2.0 * std::sqrt((1.0 - z) / (1.0 + z));
        case FamilyKind::F: {
            double qq = static_cast<double>(q);
            return 4.0 * qq * qq * s / ((qq + 1) * (qq + 1) - 4.0 * qq * z * z);
        }
        case FamilyKind::MP:
        case FamilyKind::R:
            return 4.0 * s / ((1.0 + b_inv * b_inv) + 2.0 * b_inv * z);
        case FamilyKind::H: {
            double pq = static_cast<double>(p) / q;
            double ipq = 1.0 / (static_cast<double>(p) * q);
            return 4.0 * s /
                   (((1.0 + pq) + 2.0 * std::sqrt(pq) * z) *
                    ((1.0 + ipq) - 2.0 * std::sqrt(ipq) * z));
        }
        default: throw std::domain_error("closed_density_z: no closed form");
    }
}

}  // namespace treewave::cheb
