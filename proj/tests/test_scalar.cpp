#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "nilforge/quadext.hpp"
#include "nilforge/rational.hpp"

using namespace nilforge;

namespace {

Rational random_rational(std::mt19937_64& rng) {
    std::uniform_int_distribution<long> num(-20, 20);
    std::uniform_int_distribution<long> den(1, 12);
    return Rational(num(rng), den(rng));
}

QuadExt random_quad(std::mt19937_64& rng, long d) {
    return QuadExt(random_rational(rng), random_rational(rng), d);
}

}  // namespace

TEST_CASE("rational arithmetic is exact and normalized") {
    CHECK(Rational(1, 2) + Rational(1, 3) == Rational(5, 6));
    CHECK(Rational(-1, 3) * Rational(3) == Rational(-1));
    CHECK_THROWS_AS(Rational(1) / Rational(0), ArithmeticError);
    CHECK_THROWS_AS(Rational(1, 0), ArithmeticError);

    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(-2, -4) == Rational(1, 2));
    CHECK(Rational(0, 5).str() == "0");
    CHECK(Rational(3, -6).str() == "-1/2");
    CHECK(Rational(7).str() == "7");
    CHECK(Rational::parse("-22/7") == Rational(-22, 7));
}

TEST_CASE("rational field axioms on randomized inputs") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
        Rational a = random_rational(rng), b = random_rational(rng), c = random_rational(rng);
        CHECK((a + b) + c == a + (b + c));
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a + (-a) == Rational(0));
        if (!a.is_zero()) CHECK(a * a.inverse() == Rational(1));
    }
}

TEST_CASE("quadratic extension arithmetic") {
    QuadExt half_plus(Rational(1, 2), Rational(1, 2), 3);   // (1+sqrt 3)/2
    QuadExt half_minus(Rational(1, 2), Rational(-1, 2), 3); // (1-sqrt 3)/2
    CHECK(half_plus * half_minus == QuadExt(Rational(-1, 2)));

    QuadExt two_over_sqrt3(Rational(0), Rational(2, 3), 3);
    CHECK(two_over_sqrt3 * QuadExt::sqrt_of(3) == QuadExt(Rational(2)));

    std::mt19937_64 rng(11);
    for (int i = 0; i < 50; ++i) {
        Rational a = random_rational(rng), b = random_rational(rng);
        QuadExt x(a, b, 3), conj(a, -b, 3);
        CHECK(x + conj == QuadExt(a + a));
    }

    CHECK_THROWS_AS(QuadExt::sqrt_of(3) + QuadExt::sqrt_of(5), ArithmeticError);
    CHECK_THROWS_AS(QuadExt::sqrt_of(12), ArithmeticError);  // not squarefree
    CHECK_THROWS_AS(QuadExt(Rational(1), Rational(1), 3) / QuadExt(Rational(0)), ArithmeticError);
}

TEST_CASE("quadratic extension field axioms on randomized inputs") {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 200; ++i) {
        QuadExt a = random_quad(rng, 3), b = random_quad(rng, 3), c = random_quad(rng, 3);
        CHECK((a + b) + c == a + (b + c));
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a + (-a) == QuadExt());
        if (!a.is_zero()) CHECK(a * a.inverse() == QuadExt(Rational(1)));
    }
}

TEST_CASE("rational embedding into the extension agrees with rational arithmetic") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 100; ++i) {
        Rational a = random_rational(rng), b = random_rational(rng);
        QuadExt qa(a), qb(b);
        CHECK(qa + qb == QuadExt(a + b));
        CHECK(qa * qb == QuadExt(a * b));
        if (!b.is_zero()) CHECK(qa / qb == QuadExt(a / b));
        // embedded values stay radicand-free and compatible with sqrt(3) values
        CHECK((qa + QuadExt::sqrt_of(3)).radicand() == 3);
    }
}

TEST_CASE("zero values normalize their radicand away") {
    QuadExt x(Rational(2), Rational(5), 3);
    QuadExt y = x - x;
    CHECK(y.is_zero());
    CHECK(y.radicand() == 0);
    CHECK(QuadExt(Rational(1), Rational(0), 3).radicand() == 0);
}
