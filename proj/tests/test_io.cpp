#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "treewave/io.hpp"

using namespace treewave;
using namespace treewave::io;

TEST_CASE("scalar JSON round trip is exact") {
    std::mt19937_64 rng(64223);
    std::uniform_int_distribution<long long> big(-1000000000LL, 1000000000LL);
    std::uniform_int_distribution<int> den(1, 97);

    for (int i = 0; i < 200; ++i) {
        Scalar r(Rational(big(rng), den(rng)));
        CHECK(scalar_from_json(scalar_to_json(r)) == r);

        Scalar q(QuadExt(2, 3, Rational(big(rng), den(rng)), Rational(big(rng), den(rng)),
                         Rational(big(rng), den(rng)), Rational(big(rng), den(rng))));
        CHECK(scalar_from_json(scalar_to_json(q)) == q);
    }
    // big integers survive
    Scalar big_pow = sqrt_scalar(3).pow(80);
    CHECK(scalar_from_json(scalar_to_json(big_pow)) == big_pow);

    Scalar f(0.1 + 0.2);
    CHECK(scalar_from_json(scalar_to_json(f)) == f);
}

TEST_CASE("scalar strings") {
    CHECK(scalar_to_string(Scalar(Rational(1, 2))) == "1/2");
    CHECK(scalar_to_string(Scalar(-3)) == "-3");
    CHECK(scalar_to_string(sqrt_scalar(2)) == "√2");
    Scalar mixed = Scalar(Rational(1, 2)) + sqrt_pq_scalar(2, 3) * Scalar(Rational(-1, 6));
    CHECK(scalar_to_string(mixed) == "1/2-1/6√6");

    // parse back: same value
    CHECK(scalar_from_string("1/2") == Scalar(Rational(1, 2)));
    CHECK(scalar_from_string("√2") == sqrt_scalar(2));
    Scalar re = scalar_from_string(scalar_to_string(mixed));
    CHECK(std::abs(re.to_double() - mixed.to_double()) < 1e-15);
    // two-radical form keeps its tag
    Scalar two = Scalar(1) + sqrt_p_scalar(2, 3) + sqrt_q_scalar(2, 3) * Scalar(2);
    CHECK(scalar_from_string(scalar_to_string(two)) == two);

    CHECK(scalar_from_string("0.25").kind() == Scalar::Kind::F64);
    CHECK(scalar_from_string("-1+2√5") == Scalar(-1) + Scalar(2) * sqrt_scalar(5));
}

TEST_CASE("laurent and zfunction JSON") {
    LaurentPoly f;
    f.set(-2, Scalar(Rational(1, 3)));
    f.set(0, Scalar(5));
    f.set(7, sqrt_scalar(2));
    CHECK(laurent_from_json(laurent_to_json(f)) == f);

    LaurentPoly z = zfunction_from_json(nlohmann::json::parse(R"({"0": 1, "-3": "1/2"})"));
    CHECK(z.coeff(0) == Scalar(1));
    CHECK(z.coeff(-3) == Scalar(Rational(1, 2)));
    CHECK(zfunction_from_json(zfunction_to_json(z)) == z);
}

TEST_CASE("certificate JSON carries all step booleans") {
    deloc::Certificate cert;
    cert.graph_hash = 42;
    cert.lower_bound = 7;
    cert.eig_ok = cert.k_lambda_ok = cert.k_min_ok = cert.hyp_ok = cert.norm_ok = true;
    nlohmann::json j = certificate_to_json(cert);
    CHECK(j["valid"] == true);
    CHECK(j["lower_bound"] == 7);
    for (const char* step :
         {"eigenpair", "kernel_value_at_lambda", "kernel_min", "hypothesis", "norm_bound"})
        CHECK(j["steps"][step] == true);
}
