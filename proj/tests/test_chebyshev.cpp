#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "treewave/chebyshev.hpp"

using namespace treewave;
using namespace treewave::cheb;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

Poly classical_T(long t) { return special_family(FamilyKind::T).cheb(t); }
Poly classical_U(long t) { return special_family(FamilyKind::U).cheb(t + 1); }

}  // namespace

TEST_CASE("first families") {
    // T_2 = 2z^2 - 1
    CHECK(classical_T(2) == Poly(std::vector<Scalar>{Scalar(-1), Scalar(0), Scalar(2)}));
    // U family: cheb(t) = U_{t-1}, degree t-1
    ChebFamily fu = special_family(FamilyKind::U);
    for (long t = 1; t <= 8; ++t) CHECK(fu.cheb(t).degree() == t - 1);
    CHECK(fu.cheb(0).is_zero());
    CHECK(classical_U(2) == Poly(std::vector<Scalar>{Scalar(-1), Scalar(0), Scalar(4)}));

    // V_1 = 2z - 1, W_1 = 2z + 1
    CHECK(special_family(FamilyKind::V).cheb(1) ==
          Poly(std::vector<Scalar>{Scalar(-1), Scalar(2)}));
    CHECK(special_family(FamilyKind::W).cheb(1) ==
          Poly(std::vector<Scalar>{Scalar(1), Scalar(2)}));
}

TEST_CASE("recurrence step matches direct construction") {
    CHECK(cheb_recurrence_step(classical_T(1), classical_T(0)) == classical_T(2));
    CHECK(cheb_recurrence_step(classical_U(1), classical_U(0)) == classical_U(2));

    for (FamilyKind k : {FamilyKind::T, FamilyKind::U, FamilyKind::V, FamilyKind::W}) {
        ChebFamily fam = special_family(k);
        for (long t = 1; t <= 12; ++t)
            CHECK(cheb_recurrence_step(fam.cheb(t), fam.cheb(t - 1)) == fam.cheb(t + 1));
    }
    ChebFamily fh = special_family(FamilyKind::H, 2, 3);
    for (long t = 1; t <= 8; ++t)
        CHECK(cheb_recurrence_step(fh.cheb(t), fh.cheb(t - 1)) == fh.cheb(t + 1));
}

TEST_CASE("defining identity holds exactly for all special families") {
    std::vector<ChebFamily> fams;
    for (FamilyKind k : {FamilyKind::T, FamilyKind::U, FamilyKind::V, FamilyKind::W})
        fams.push_back(special_family(k));
    for (long q : {2L, 3L, 4L}) fams.push_back(special_family(FamilyKind::F, 1, q));
    fams.push_back(special_family(FamilyKind::H, 2, 3));
    fams.push_back(special_family(FamilyKind::H, 3, 2));
    fams.push_back(special_family(FamilyKind::R, 2, 3));
    fams.push_back(mp_family(Scalar(Rational(1, 2))));

    for (const ChebFamily& fam : fams) {
        for (long t = 0; t <= 40; t += (t < 12 ? 1 : 7)) {
            LaurentPoly num = fam.h().shifted(t);
            num -= num.w0();
            LaurentPoly diff = LaurentPoly::monomial(1) - LaurentPoly::monomial(-1);
            CHECK(poly_to_sym(fam.cheb(t)).poly() * diff == num);
        }
    }
}

TEST_CASE("linear relations among families") {
    // F_t = U_t - q^-1 U_{t-2}
    for (long q : {2L, 3L, 4L}) {
        ChebFamily ff = special_family(FamilyKind::F, 1, q);
        for (long t = 2; t <= 10; ++t)
            CHECK(ff.cheb(t) == classical_U(t) - classical_U(t - 2) * Scalar(Rational(1, q)));
    }
    // T_t = (U_t - U_{t-2})/2
    for (long t = 2; t <= 10; ++t)
        CHECK(classical_T(t) == (classical_U(t) - classical_U(t - 2)) * Scalar(Rational(1, 2)));
    // H_1 = 2z + (p-1)/sqrt(pq)
    ChebFamily fh = special_family(FamilyKind::H, 2, 3);
    Poly h1 = fh.cheb(1);
    CHECK(h1.coeff(1) == Scalar(2));
    CHECK(h1.coeff(0) == sqrt_pq_scalar(2, 3) * Scalar(Rational(1, 6)));
}

TEST_CASE("measures: closed z-forms match the generic density") {
    struct Case {
        ChebFamily fam;
        FamilyKind kind;
        long p, q;
        double b_inv;
    };
    std::vector<Case> cases;
    cases.push_back({special_family(FamilyKind::T), FamilyKind::T, 0, 0, 0});
    cases.push_back({special_family(FamilyKind::U), FamilyKind::U, 0, 0, 0});
    cases.push_back({special_family(FamilyKind::V), FamilyKind::V, 0, 0, 0});
    cases.push_back({special_family(FamilyKind::W), FamilyKind::W, 0, 0, 0});
    cases.push_back({special_family(FamilyKind::F, 1, 3), FamilyKind::F, 1, 3, 0});
    cases.push_back({special_family(FamilyKind::H, 2, 3), FamilyKind::H, 2, 3, 0});
    cases.push_back({mp_family(Scalar(Rational(1, 2))), FamilyKind::MP, 0, 0, 0.5});
    cases.push_back({mp_family(Scalar(2)), FamilyKind::MP, 0, 0, 2.0});

    for (const Case& c : cases) {
        SpectralMeasure mu = ortho_measure(c.fam);
        for (int i = 1; i < 24; ++i) {
            double z = -1.0 + 2.0 * i / 24.0;
            if (std::abs(z) > 0.999) continue;
            double want = closed_density_z(c.kind, z, c.p, c.q, c.b_inv);
            CHECK(std::abs(mu.density_z(z) - want) < 1e-10 * std::max(1.0, std::abs(want)));
        }
    }
}

TEST_CASE("pushforward and atoms") {
    // T: 4 dtheta -> 4/sqrt(1-z^2)
    SpectralMeasure mt = ortho_measure(special_family(FamilyKind::T));
    CHECK(std::abs(mt.density_theta(0.7) - 4.0) < 1e-12);
    ZMeasure zt = pushforward_to_z(mt);
    CHECK(std::abs(zt.density(0.3) - 4.0 / std::sqrt(1 - 0.09)) < 1e-10);

    // semicircle
    SpectralMeasure muu = ortho_measure(special_family(FamilyKind::U));
    CHECK(std::abs(muu.density_z(0.2) - 4.0 * std::sqrt(1 - 0.04)) < 1e-10);

    // MP with b_inv = 2: atom at z = -(b + b^-1)/2 = -5/4 with mass 4пи(1 - b^2) = 3 pi.
    SpectralMeasure mp = ortho_measure(mp_family(Scalar(2)));
    REQUIRE(mp.atoms().size() == 1);
    CHECK(std::abs(mp.atoms()[0].z + 1.25) < 1e-12);
    CHECK(std::abs(mp.atoms()[0].xi + 0.5) < 1e-12);
    CHECK(std::abs(mp.atoms()[0].mass - 3.0 * kPi) < 1e-12);

    // MP with b_inv = 1/2: case (1), no atom
    CHECK(ortho_measure(mp_family(Scalar(Rational(1, 2)))).atoms().empty());

    // biregular: atom iff p > q, at z = -(p+q)/(2 sqrt(pq))
    SpectralMeasure mh = ortho_measure(special_family(FamilyKind::H, 3, 2));
    REQUIRE(mh.atoms().size() == 1);
    CHECK(std::abs(mh.atoms()[0].z + 5.0 / (2.0 * std::sqrt(6.0))) < 1e-12);
    double want_mass = 4.0 * kPi * (1.0 - 2.0 / 3.0) / ((1.0 + 1.0 / 2.0) * (1.0 + 1.0 / 3.0));
    CHECK(std::abs(mh.atoms()[0].mass - want_mass) < 1e-12);
    CHECK(ortho_measure(special_family(FamilyKind::H, 2, 3)).atoms().empty());
}

TEST_CASE("orthogonality by quadrature") {
    std::vector<ChebFamily> fams;
    for (FamilyKind k : {FamilyKind::T, FamilyKind::U, FamilyKind::V, FamilyKind::W})
        fams.push_back(special_family(k));
    fams.push_back(special_family(FamilyKind::F, 1, 3));
    fams.push_back(special_family(FamilyKind::H, 2, 3));
    fams.push_back(special_family(FamilyKind::H, 3, 2));
    fams.push_back(mp_family(Scalar(2)));

    for (const ChebFamily& fam : fams) {
        SpectralMeasure mu = ortho_measure(fam);
        for (long k = 0; k <= 6; ++k)
            for (long n = k + 1; n <= 6; ++n)
                CHECK(std::abs(quad_inner(fam.cheb(k), fam.cheb(n), mu, 1024)) < 1e-8);
        CHECK(quad_inner(fam.cheb(1), fam.cheb(1), mu, 1024) > 0.0);
    }
}

TEST_CASE("atom is what makes the MP case orthogonal") {
    ChebFamily fam = mp_family(Scalar(2));
    SpectralMeasure with_atom = ortho_measure(fam);
    SpectralMeasure without(fam.h(), 1.0, {}, "no-atom");

    double b = 0.5;
    // residue value for <f_1, f_3> with a^-1 = 0: -4 pi (1 - b^-2) (-b)^{n+k+1} b,
    // cross-checked below against the contour integral and the atom side.
    double want = -4.0 * kPi * (1.0 - 4.0) * std::pow(-b, 5) * b;
    double got = quad_inner(fam.cheb(1), fam.cheb(3), without, 4096);
    CHECK(std::abs(got - want) < 1e-8);
    // f_k at the atom is (1 - b^-2)(-b)^{k+1}/(b^-1 - b); the atom mass makes
    // the two contributions cancel exactly.
    double fk = [&](long k) { return (1 - 4.0) * std::pow(-b, k + 1) / (1 / b - b); }(1);
    double fn = (1 - 4.0) * std::pow(-b, 4) / (1 / b - b);
    CHECK(std::abs(fam.cheb(1).eval(-(b + 1 / b) / 2) - fk) < 1e-12);
    CHECK(std::abs(got + with_atom.atoms()[0].mass * fk * fn) < 1e-8);
    CHECK(std::abs(quad_inner(fam.cheb(1), fam.cheb(3), with_atom, 4096)) < 1e-8);
}

TEST_CASE("Kesten-McKay at q = 1 degenerates to the arcsine law") {
    SpectralMeasure km = ortho_measure(special_family(FamilyKind::F, 1, 1));
    SpectralMeasure arc = ortho_measure(special_family(FamilyKind::T));
    // densities agree up to the h-scaling constant; compare scale-free
    double r_km = km.density_z(0.0), r_arc = arc.density_z(0.0);
    for (int i = 0; i < 64; ++i) {
        double z = -0.95 + 1.9 * i / 63.0;
        CHECK(std::abs(km.density_z(z) / r_km - arc.density_z(z) / r_arc) < 1e-12);
    }
}

TEST_CASE("unsupported measures rejected") {
    // x + x^-1 vanishes at xi = +-i on the circle
    LaurentPoly bad = LaurentPoly::monomial(1) + LaurentPoly::monomial(-1);
    CHECK_THROWS_AS(ortho_measure(ChebFamily(bad)), UnsupportedMeasure);
    CHECK_THROWS_AS(quad_inner(Poly::constant(Scalar(1)), Poly::constant(Scalar(1)),
                               ortho_measure(special_family(FamilyKind::T)), 32),
                    std::domain_error);
}
