#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "treewave/flatwave.hpp"

using namespace treewave;
using namespace treewave::flat;

namespace {

std::mt19937_64 rng(4243);

ZFunction rand_data(int span, int max_terms = 5) {
    std::uniform_int_distribution<long> site(-span, span);
    std::uniform_int_distribution<int> num(-6, 6), den(1, 4), terms(0, max_terms);
    ZFunction f;
    int n = terms(rng);
    for (int i = 0; i < n; ++i) f.add_to(site(rng), Scalar(Rational(num(rng), den(rng))));
    return f;
}

ZFunction delta(long n) { return LaurentPoly::monomial(n); }

}  // namespace

TEST_CASE("standard solutions match eqn_soln_std") {
    BasisPair sb = standard_basis();

    // f = delta_0, g = 0, t = 3: value 1/2 at n = +-3.
    WaveGrid grid = solve(sb, delta(0), ZFunction(), -5, 5);
    CHECK(grid.value(3, 3) == Scalar(Rational(1, 2)));
    CHECK(grid.value(-3, 3) == Scalar(Rational(1, 2)));
    for (long n = -2; n <= 2; ++n) CHECK(grid.value(n, 3).is_zero());

    // f = 0, g = delta_0, t = 2: value 1 at n = +-1.
    WaveGrid grid2 = solve(sb, ZFunction(), delta(0), -5, 5);
    CHECK(grid2.value(1, 2) == Scalar(1));
    CHECK(grid2.value(-1, 2) == Scalar(1));
    CHECK(grid2.value(0, 2).is_zero());
    CHECK(grid2.value(2, 2).is_zero());

    // zero data
    WaveGrid grid3 = solve(sb, ZFunction(), ZFunction(), -3, 3);
    for (long t = -3; t <= 3; ++t) CHECK(grid3.slice(t).is_zero());
}

TEST_CASE("wave residual vanishes exactly and initial functionals hold") {
    BasisPair sb = standard_basis();
    BasisPair ox = make_basis(LaurentPoly::constant(Scalar(1)), LaurentPoly::monomial(1));
    for (int i = 0; i < 40; ++i) {
        ZFunction g1 = rand_data(6), g2 = rand_data(6);
        for (const BasisPair& bp : {sb, ox}) {
            WaveGrid grid = solve(bp, g1, g2, -8, 8);
            CHECK(grid.residual_is_zero());
            CHECK(initial_functional(grid, bp.h1) == g1);
            CHECK(initial_functional(grid, bp.h2) == g2);
        }
    }
}

TEST_CASE("fundamental solutions and time symmetry") {
    BasisPair sb = standard_basis();
    for (long t = 1; t <= 10; ++t) CHECK(fundamental_solution(sb.m1, t, t) == Scalar(Rational(1, 2)));
    for (long n = -4; n <= 4; ++n) CHECK(fundamental_solution(sb.m2, n, 0).is_zero());
    // (x^3 - x^-3)/(x - x^-1) = x^2 + 1 + x^-2: coefficient at x^1 is 0.
    CHECK(fundamental_solution(sb.m2, 1, 3).is_zero());
    CHECK(fundamental_solution(sb.m2, 2, 3) == Scalar(1));

    for (long t = 0; t <= 12; ++t)
        for (long n = -12; n <= 12; ++n) {
            CHECK(fundamental_solution(sb.m1, n, -t) == fundamental_solution(sb.m1, n, t));
            CHECK(fundamental_solution(sb.m2, n, -t) == -fundamental_solution(sb.m2, n, t));
        }
}

TEST_CASE("finite speed of propagation") {
    BasisPair sb = standard_basis();
    for (int trial = 0; trial < 10; ++trial) {
        ZFunction f = rand_data(3), g = rand_data(4);
        long r = 3;
        WaveGrid grid = solve(sb, f, g, -30, 30);
        for (long t = -30; t <= 30; ++t) {
            const LaurentPoly& u = grid.slice(t);
            if (u.is_zero()) continue;
            CHECK(u.max_deg() <= r + std::labs(t));
            CHECK(u.min_deg() >= -(r + std::labs(t)));
        }
    }
}

TEST_CASE("propagator matrix") {
    BasisPair sb = standard_basis();
    Propagator u = propagator_matrix(sb);

    LaurentPoly z;  // (x + x^-1)/2
    z.set(1, Scalar(Rational(1, 2)));
    z.set(-1, Scalar(Rational(1, 2)));
    CHECK(u.a.poly() == z);
    CHECK(u.b.poly() == LaurentPoly::constant(Scalar(1)));
    CHECK(u.c.poly() == z * z - LaurentPoly::constant(Scalar(1)));
    CHECK(u.d.poly() == z);

    // Diagonal of U^t is T_t(z); off-diagonal (1,2) entry is U_{t-1}(z).
    for (long t : {2L, 3L, 5L, 8L}) {
        Propagator ut = u.pow(t);
        LaurentPoly tt;  // (x^t + x^-t)/2
        tt.set(t, Scalar(Rational(1, 2)));
        tt.set(-t, Scalar(Rational(1, 2)));
        CHECK(ut.a.poly() == tt);
        CHECK(ut.d.poly() == tt);
        LaurentPoly ut1 = div_x_minus_xinv(LaurentPoly::monomial(t) - LaurentPoly::monomial(-t));
        CHECK(ut.b.poly() == ut1);
    }

    // Propagator consistency with solve for another basis: time step of the
    // h-functional vector matches the matrix action.
    BasisPair ox = make_basis(LaurentPoly::constant(Scalar(1)), LaurentPoly::monomial(1));
    Propagator uox = propagator_matrix(ox);
    ZFunction g1 = rand_data(3), g2 = rand_data(3);
    WaveGrid grid = solve(ox, g1, g2, -6, 6);
    for (long t = -4; t <= 4; ++t) {
        // v_i(t) = [y^t](u h_i(y^-1)) = sum_j h_i coeff j * u(., t + j)
        auto functional_at = [&](const LaurentPoly& h, long tt) {
            ZFunction out;
            for (const auto& [j, cj] : h.coeffs()) out += grid.slice(tt + j) * cj;
            return out;
        };
        ZFunction v1_next = functional_at(ox.h1, t + 1), v2_next = functional_at(ox.h2, t + 1);
        ZFunction v1 = functional_at(ox.h1, t), v2 = functional_at(ox.h2, t);
        CHECK(v1_next == v1 * uox.a.poly() + v2 * uox.b.poly());
        CHECK(v2_next == v1 * uox.c.poly() + v2 * uox.d.poly());
    }
}

TEST_CASE("d'Alembert decomposition") {
    BasisPair sb = standard_basis();

    // f = delta_0, g = 0: both movers are delta_0 / 2.
    Dalembert d = dalembert_decompose(delta(0), ZFunction());
    CHECK(d.w_inf.eval(0) == Scalar(Rational(1, 2)));
    CHECK(d.w_minus_inf.eval(0) == Scalar(Rational(1, 2)));
    CHECK(d.w_inf.eval(3).is_zero());
    CHECK(d.w_inf.eval(-4).is_zero());

    // zero data -> zero movers
    Dalembert dz = dalembert_decompose(ZFunction(), ZFunction());
    for (long k = -8; k <= 8; ++k) CHECK(dz.eval(k, 0).is_zero());

    // exact recombination on random data, both pure-g and mixed
    for (int i = 0; i < 30; ++i) {
        ZFunction f = rand_data(5), g = rand_data(5);
        WaveGrid grid = solve(sb, f, g, -15, 15);
        Dalembert dd = dalembert_decompose(grid);
        for (long t = -15; t <= 15; ++t)
            for (long n = -22; n <= 22; ++n) CHECK(dd.eval(n, t) == grid.value(n, t));
    }
}

TEST_CASE("d'Alembert ambiguity is exactly parity constants") {
    BasisPair sb = standard_basis();
    ZFunction f = rand_data(4), g = rand_data(4);
    WaveGrid grid = solve(sb, f, g, -10, 10);
    Dalembert d = dalembert_decompose(grid);

    // n - t and n + t share parity, so opposite parity constants cancel in
    // the recombination.
    Scalar ce(Rational(3, 7)), co(Rational(-2, 5));
    Dalembert shifted{d.w_inf.plus_parity_constant(ce, co),
                      d.w_minus_inf.plus_parity_constant(-ce, -co)};
    for (long t = -10; t <= 10; ++t)
        for (long n = -15; n <= 15; ++n) CHECK(shifted.eval(n, t) == grid.value(n, t));
}

TEST_CASE("energy conservation and left/right form") {
    BasisPair sb = standard_basis();

    // f = delta_0, g = 0 -> E = 1/2
    WaveGrid g1 = solve(sb, delta(0), ZFunction(), -7, 7);
    CHECK(energy(g1, 0) == Scalar(Rational(1, 2)));
    CHECK(energy(g1, 5) == Scalar(Rational(1, 2)));

    WaveGrid g0 = solve(sb, ZFunction(), ZFunction(), -7, 7);
    CHECK(energy(g0, 0).is_zero());

    for (int i = 0; i < 50; ++i) {
        ZFunction f = rand_data(5), g = rand_data(5);
        WaveGrid grid = solve(sb, f, g, -7, 7);
        Scalar e0 = energy(grid, 0);
        CHECK(energy(grid, 5) == e0);
        CHECK(energy(grid, -6) == e0);
        CHECK(energy_lr(dalembert_decompose(grid)) == e0);
    }
}

TEST_CASE("spectral solve") {
    using cd = std::complex<double>;
    cd xi(0.6, 0.8);  // on S^1, generic

    SpectralSolution s = spectral_solve(xi, cd(2, 0), xi + 1.0 / xi);
    CHECK(std::abs(s.g_inf - 1.0) < 1e-12);
    CHECK(std::abs(s.g_minus_inf - 1.0) < 1e-12);

    SpectralSolution s2 = spectral_solve(xi, cd(1, 0), xi);
    CHECK(std::abs(s2.g_inf - 1.0) < 1e-12);
    CHECK(std::abs(s2.g_minus_inf) < 1e-12);

    CHECK_THROWS_AS(spectral_solve(cd(1, 0), cd(1, 0), cd(0, 0)), DegenerateSpectralParameter);
    CHECK_THROWS_AS(spectral_solve(cd(-1, 0), cd(1, 0), cd(0, 0)), DegenerateSpectralParameter);

    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int i = 0; i < 40; ++i) {
        double th = 3.0 * unif(rng) + 0.2;
        cd xi_r = std::polar(1.0, th);
        if (std::abs(xi_r - 1.0) < 0.05 || std::abs(xi_r + 1.0) < 0.05) continue;
        cd a(unif(rng), unif(rng)), b(unif(rng), unif(rng));
        SpectralSolution sol = spectral_solve(xi_r, a, b);
        for (long t = -20; t <= 20; ++t) {
            cd lhs = sol.eval(t + 1, xi_r) + sol.eval(t - 1, xi_r);
            cd rhs = (xi_r + 1.0 / xi_r) * sol.eval(t, xi_r);
            CHECK(std::abs(lhs - rhs) < 1e-10);
        }
    }
}
