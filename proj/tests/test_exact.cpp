#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "treewave/exact.hpp"

using namespace treewave;

namespace {

std::mt19937_64 rng(20240517);

Rational rand_rat() {
    std::uniform_int_distribution<int> num(-9, 9), den(1, 9);
    return Rational(num(rng), den(rng));
}

QuadExt rand_quad(long p, long q) {
    return QuadExt(p, q, rand_rat(), rand_rat(), rand_rat(), rand_rat());
}

}  // namespace

TEST_CASE("defining relations") {
    Scalar s2 = sqrt_scalar(2);
    CHECK(s2 * s2 == Scalar(2));

    Scalar sp = sqrt_p_scalar(2, 3), sq = sqrt_q_scalar(2, 3);
    Scalar prod = sp * sq;
    CHECK(prod.kind() == Scalar::Kind::Quad);
    CHECK(prod.quad().d() == 1);
    CHECK(prod.quad().a() == 0);
    CHECK(prod == sqrt_pq_scalar(2, 3));

    // (1 + sqrt 2)(1 - sqrt 2) = -1
    Scalar x = Scalar(1) + s2, y = Scalar(1) - s2;
    CHECK(x * y == Scalar(-1));
    CHECK(std::abs((x * y).to_double() + 1.0) < 1e-12);
}

TEST_CASE("inverses") {
    Scalar s2 = sqrt_scalar(2);
    CHECK(s2.inv() == Scalar(Rational(1, 2)) * s2);
    CHECK(Scalar(1).inv() == Scalar(1));

    // inv(2 + sqrt 3) = 2 - sqrt 3
    Scalar s3 = sqrt_scalar(3);
    Scalar x = Scalar(2) + s3;
    CHECK(x.inv() == Scalar(2) - s3);
    CHECK(std::abs(x.inv().to_double() - 1.0 / x.to_double()) < 1e-12);
}

TEST_CASE("inverse round trip on random invertible samples") {
    int done = 0;
    while (done < 1000) {
        QuadExt x = rand_quad(2, 3);
        if (x.is_zero()) continue;
        Scalar s(x);
        Scalar y = s.inv();
        CHECK(s * y == Scalar(1));
        ++done;
    }
}

TEST_CASE("zero divisors in a square-parameter ring are reported") {
    // In Q[s]/(s^2 - 4), s - 2 is a zero divisor.
    QuadExt z(4, 3, -2, 1, 0, 0);
    CHECK((z * z.conj_p()).is_zero());
    CHECK_THROWS_AS(Scalar(z).inv(), NotInvertible);
}

TEST_CASE("ring axioms, exact") {
    for (int i = 0; i < 300; ++i) {
        Scalar a(rand_quad(2, 5)), b(rand_quad(2, 5)), c(rand_quad(2, 5));
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a * b == b * a);
        CHECK(a + b == b + a);
    }
}

TEST_CASE("to_double is a ring homomorphism up to rounding") {
    CHECK(Scalar(Rational(1, 2)).to_double() == 0.5);
    CHECK(std::abs(sqrt_scalar(2).to_double() - 1.4142135623730951) < 1e-15);
    for (int i = 0; i < 300; ++i) {
        Scalar a(rand_quad(3, 7)), b(rand_quad(3, 7));
        double lhs = (a * b).to_double();
        double rhs = a.to_double() * b.to_double();
        double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
        CHECK(std::abs(lhs - rhs) / scale < 1e-10);
        lhs = (a + b).to_double();
        rhs = a.to_double() + b.to_double();
        scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
        CHECK(std::abs(lhs - rhs) / scale < 1e-10);
    }
}

TEST_CASE("promotion ladder") {
    Scalar r = Scalar(Rational(1, 3));
    Scalar q = sqrt_q_scalar(2, 3);
    Scalar f(0.25);

    CHECK((r + q).kind() == Scalar::Kind::Quad);
    CHECK((q + r).kind() == Scalar::Kind::Quad);
    CHECK((r + f).kind() == Scalar::Kind::F64);
    CHECK((q * f).kind() == Scalar::Kind::F64);
    CHECK((f + f).kind() == Scalar::Kind::F64);

    // Rational embedded in a quad ring compares equal to its plain form.
    CHECK(Scalar(QuadExt::from_rational(2, 3, Rational(1, 3))) == r);
}

TEST_CASE("incompatible tags rejected") {
    Scalar a = sqrt_q_scalar(2, 3);
    Scalar b = sqrt_q_scalar(2, 5);
    CHECK_THROWS_AS((void)(a + b), IncompatibleScalars);
    CHECK_THROWS_AS((void)(a * b), IncompatibleScalars);
}

TEST_CASE("powers") {
    Scalar sq = sqrt_scalar(3);
    CHECK(sq.pow(4) == Scalar(9));
    CHECK(sq.pow(-2) == Scalar(Rational(1, 3)));
    CHECK(sq.pow(0) == Scalar(1));
    // q^(t/2) stays exact for large t
    Scalar big = sqrt_scalar(3).pow(80);
    CHECK(big == Scalar(Rational(BigInt("12157665459056928801"), 1)));
}
