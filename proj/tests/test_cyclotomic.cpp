#include <random>
#include <vector>

#include <catch_amalgamated.hpp>

#include "curveaut/cyclotomic.hpp"

using namespace curveaut;

namespace {

Cyclo random_element(const FieldPtr& f, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> num(-3, 3);
    std::uniform_int_distribution<int> den(1, 4);
    std::vector<Rational> coords;
    for (unsigned i = 0; i < f->degree(); ++i) {
        coords.emplace_back(num(rng), den(rng));
    }
    return Cyclo::from_coords(f, coords);
}

std::vector<Int> poly_mul(const std::vector<Int>& a, const std::vector<Int>& b) {
    std::vector<Int> out(a.size() + b.size() - 1, Int(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

} // namespace

TEST_CASE("cyclotomic polynomials: base cases and frozen values") {
    CHECK(cyclotomic_polynomial(1) == std::vector<Int>{-1, 1});
    CHECK(cyclotomic_polynomial(2) == std::vector<Int>{1, 1});
    CHECK(cyclotomic_polynomial(5) == std::vector<Int>{1, 1, 1, 1, 1});
    // degree phi(60) = 16
    CHECK(cyclotomic_polynomial(60) ==
          std::vector<Int>{1, 0, 1, 0, 0, 0, -1, 0, -1, 0, -1, 0, 0, 0, 1, 0, 1});
    CHECK(euler_phi(60) == 16);
}

TEST_CASE("product of cyclotomic polynomials over divisors is x^n - 1") {
    for (unsigned n = 1; n <= 60; ++n) {
        std::vector<Int> prod{Int(1)};
        for (unsigned d = 1; d <= n; ++d) {
            if (n % d == 0) prod = poly_mul(prod, cyclotomic_polynomial(d));
        }
        std::vector<Int> expect(n + 1, Int(0));
        expect[0] = -1;
        expect[n] = 1;
        CHECK(prod == expect);
    }
}

TEST_CASE("field arithmetic in Q(zeta5)") {
    FieldPtr f = CyclotomicField::get(5);
    const Cyclo z = Cyclo::root_of_unity(f, 1);
    const Cyclo one = Cyclo::one(f);

    SECTION("zeta5 * zeta5^4 = 1") {
        CHECK(z * Cyclo::root_of_unity(f, 4) == one);
    }
    SECTION("the Gauss sum squares to 5") {
        const Cyclo g = Cyclo::sqrt_five(f);
        CHECK(g * g == Cyclo::integer(f, 5));
        const Cyclo gm = Cyclo::sqrt_five(f, -1);
        CHECK(gm * gm == Cyclo::integer(f, 5));
        CHECK(gm == -g);
    }
    SECTION("inverse contract") {
        const Cyclo a = one + z;
        CHECK(a.inverse() * a == one);
    }
    SECTION("zeta5^4 in the power basis") {
        const Cyclo z4 = Cyclo::root_of_unity(f, 4);
        const std::vector<Rational> expect{Rational(-1), Rational(-1), Rational(-1), Rational(-1)};
        CHECK(z4.coords() == expect);
    }
    SECTION("inverting zero fails") {
        CHECK_THROWS_AS(Cyclo::zero(f).inverse(), SingularError);
    }
    SECTION("field mismatch is an error, not a coercion") {
        FieldPtr g = CyclotomicField::get(7);
        CHECK_THROWS_AS(z + Cyclo::one(g), FieldMismatchError);
        CHECK_THROWS_AS(z * Cyclo::one(g), FieldMismatchError);
    }
}

TEST_CASE("zeta_30^15 is -1") {
    FieldPtr f = CyclotomicField::get(30);
    const Cyclo m = Cyclo::root_of_unity(f, 15);
    CHECK(m == -Cyclo::one(f));
    CHECK(m * m == Cyclo::one(f));
    CHECK_FALSE(m == Cyclo::one(f));
}

TEST_CASE("ring axioms hold exactly on random elements") {
    std::mt19937_64 rng(20240917);
    for (unsigned n : {5u, 12u, 30u, 60u}) {
        FieldPtr f = CyclotomicField::get(n);
        for (int t = 0; t < 25; ++t) {
            const Cyclo a = random_element(f, rng);
            const Cyclo b = random_element(f, rng);
            const Cyclo c = random_element(f, rng);
            CHECK((a + b) + c == a + (b + c));
            CHECK(a * (b + c) == a * b + a * c);
            CHECK(a * b == b * a);
            if (!a.is_zero()) CHECK(a * a.inverse() == Cyclo::one(f));
        }
    }
}

TEST_CASE("embeddings") {
    FieldPtr f5 = CyclotomicField::get(5);
    FieldPtr f30 = CyclotomicField::get(30);
    FieldPtr f60 = CyclotomicField::get(60);

    SECTION("zeta5 lands on zeta30^6") {
        CHECK(Cyclo::root_of_unity(f5, 1).embed(f30) == Cyclo::root_of_unity(f30, 6));
    }
    SECTION("rational constants are fixed") {
        const Cyclo c = Cyclo::rational(f5, Rational(7, 3));
        CHECK(c.embed(f30).is_rational());
        CHECK(c.embed(f30).rational_value() == Rational(7, 3));
    }
    SECTION("embedding is a ring homomorphism: sqrt(5)^2 stays 5") {
        const Cyclo g = Cyclo::sqrt_five(f5).embed(f60);
        CHECK(g * g == Cyclo::integer(f60, 5));
    }
    SECTION("transitivity through an intermediate field") {
        std::mt19937_64 rng(7);
        for (int t = 0; t < 10; ++t) {
            const Cyclo a = random_element(f5, rng);
            CHECK(a.embed(f30).embed(f60) == a.embed(f60));
        }
    }
    SECTION("injectivity on random pairs") {
        std::mt19937_64 rng(11);
        for (int t = 0; t < 25; ++t) {
            const Cyclo a = random_element(f5, rng);
            const Cyclo b = random_element(f5, rng);
            CHECK((a.embed(f60) == b.embed(f60)) == (a == b));
        }
    }
    SECTION("non-divisible conductors are rejected") {
        FieldPtr f7 = CyclotomicField::get(7);
        CHECK_THROWS_AS(Cyclo::one(f5).embed(f7), BadArgumentError);
    }
    SECTION("homomorphism on random pairs") {
        std::mt19937_64 rng(13);
        for (int t = 0; t < 10; ++t) {
            const Cyclo a = random_element(f30, rng);
            const Cyclo b = random_element(f30, rng);
            CHECK((a * b).embed(f60) == a.embed(f60) * b.embed(f60));
            CHECK((a + b).embed(f60) == a.embed(f60) + b.embed(f60));
        }
    }
}

TEST_CASE("primitive roots have exact order n") {
    for (unsigned n = 1; n <= 60; ++n) {
        FieldPtr f = CyclotomicField::get(n);
        const Cyclo z = Cyclo::root_of_unity(f, 1);
        Cyclo p = Cyclo::one(f);
        for (unsigned k = 1; k < n; ++k) {
            p = p * z;
            CHECK_FALSE(p == Cyclo::one(f));
        }
        CHECK(p * z == Cyclo::one(f));
    }
}

TEST_CASE("conductor cap") {
    CHECK_THROWS_AS(CyclotomicField::get(121), ConductorCapError);
    CHECK_THROWS_AS(CyclotomicField::get(121, 120), ConductorCapError);
    CHECK_NOTHROW(CyclotomicField::get(121, 200));
    CHECK_THROWS_AS(CyclotomicField::get(0), BadArgumentError);
}

TEST_CASE("JSON round trip is bit-exact") {
    std::mt19937_64 rng(42);
    for (unsigned n : {1u, 5u, 30u, 60u}) {
        FieldPtr f = CyclotomicField::get(n);
        for (int t = 0; t < 20; ++t) {
            const Cyclo a = random_element(f, rng);
            const nlohmann::json j = to_json(a);
            CHECK(j.at("coords").size() == f->degree());
            const Cyclo back = cyclo_from_json(j);
            CHECK(back == a);
            CHECK(back.key() == a.key());
            CHECK(to_json(back) == j);
        }
    }
}
