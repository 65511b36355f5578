#pragma once

#include <functional>
#include <mutex>
#include <optional>
#include <vector>

#include "treewave/laurent.hpp"

namespace treewave::cheb {

struct UnsupportedMeasure : std::domain_error {
    using std::domain_error::domain_error;
};

enum class FamilyKind { T, U, V, W, F, H, R, MP, Generic };

/// Factored shape h = scale * (1 - a_inv x^-1)(1 + b_inv x^-1) x, enough to
/// locate the orthogonality-measure case without root finding. b_inv > 1
/// puts us in the atom case.
struct HFactors {
    double a_inv = 0.0;
    double b_inv = 0.0;
};

/// Generalized Chebyshev family: Ch_t((x+x^-1)/2) (x - x^-1) = h(x) x^t - h(x^-1) x^-t.
class ChebFamily {
public:
    explicit ChebFamily(LaurentPoly h, FamilyKind kind = FamilyKind::Generic,
                        std::optional<HFactors> factors = std::nullopt, long p = 1, long q = 1);
    ChebFamily(const ChebFamily& o);

    const LaurentPoly& h() const { return h_; }
    FamilyKind kind() const { return kind_; }
    long p() const { return p_; }
    long q() const { return q_; }
    const std::optional<HFactors>& factors() const { return factors_; }

    /// Ch_t for t >= 0, from the defining identity; cached, grow-only.
    Poly cheb(long t) const;

private:
    LaurentPoly h_;
    FamilyKind kind_;
    std::optional<HFactors> factors_;
    long p_, q_;
    mutable std::vector<Poly> cache_;
    mutable std::mutex mu_;
};

/// Uncached Ch_t^h for any t in Z.
Poly cheb_of(const LaurentPoly& h, long t);

/// A_{t+1} = 2 z A_t - A_{t-1}.
Poly cheb_recurrence_step(const Poly& a_t, const Poly& a_tm1);

/// T, U, V, W and the tree families F(q), H(p,q), R(p,q).
/// Note cheb(t) of the U family is the classical U_{t-1}.
ChebFamily special_family(FamilyKind kind, long p = 0, long q = 0);

/// h = x + b_inv (Marchenko-Pastur scale); R(p,q) is the case b_inv = sqrt(p/q).
ChebFamily mp_family(const Scalar& b_inv);

struct Atom {
    double xi;    // location in the xi-plane (inside or outside S^1)
    double z;     // image (xi + xi^-1)/2
    double mass;
};

/// Absolutely continuous density on S^1 (in theta coordinates, where it is
/// smooth) plus finitely many atoms off the circle.
class SpectralMeasure {
public:
    SpectralMeasure(LaurentPoly h, double weight, std::vector<Atom> atoms,
                    std::string label);

    /// weight * 4 sin^2(theta) / |h(e^{i theta})|^2.
    double density_theta(double theta) const;
    /// Pushforward density on (-1, 1): density_theta(arccos z) / sqrt(1 - z^2).
    double density_z(double z) const;

    const std::vector<Atom>& atoms() const { return atoms_; }
    double weight() const { return weight_; }
    const std::string& label() const { return label_; }

    /// Total mass: full-circle theta integral plus atoms (midpoint grid).
    double total_mass(int nodes = 4096) const;

private:
    LaurentPoly h_;
    double weight_;
    std::vector<Atom> atoms_;
    std::string label_;
};

/// Orthogonality measure of Thm-style case (1)/(2), selected from the
/// family's explicit factorization. Throws UnsupportedMeasure when h has a
/// non-structural zero on S^1.
SpectralMeasure ortho_measure(const ChebFamily& fam);

/// Measure on [-1, 1] obtained by pushing a circle measure through
/// z = (xi + xi^-1)/2 (upper-half-circle convention).
struct ZMeasure {
    std::function<double(double)> density;
    std::vector<Atom> atoms;
};

ZMeasure pushforward_to_z(const SpectralMeasure& mu);

/// Periodic-trapezoid quadrature of <f, g>_mu in theta, atoms added exactly.
/// Node count should be a power of two, >= 64.
double quad_inner(const Poly& f, const Poly& g, const SpectralMeasure& mu, int nodes = 4096);

/// Closed z-densities for the named laws, for cross-checks of density_z.
double closed_density_z(FamilyKind kind, double z, long p = 0, long q = 0, double b_inv = 0.0);

}  // namespace treewave::cheb
